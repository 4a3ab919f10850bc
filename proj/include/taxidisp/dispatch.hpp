#pragma once

#include <string_view>
#include <vector>

#include "taxidisp/assignment_solver.hpp"
#include "taxidisp/economics.hpp"
#include "taxidisp/fleet.hpp"

namespace taxidisp {

enum class TaxiClass { Available, Dispatched, Occupied };

TaxiClass classify(TaxiPhase phase);

struct TaxiSnapshot {
  TaxiId id = kNoTaxi;
  TaxiClass cls = TaxiClass::Available;
  Point position;  // interpolated at DispatchContext::now
};

/// Everything a strategy may look at when it runs.
///
/// `customers` holds the assigned and unassigned customers; each Dispatched
/// taxi and each Assigned customer appears in exactly one pair of `current`.
struct DispatchContext {
  double now = 0.0;
  std::vector<TaxiSnapshot> taxis;
  std::vector<Customer> customers;
  Assignment current;
  TariffScheme tariff;
  bool dest_known = false;
  bool allow_displacement = true;
};

enum class ObjectiveKind { MinDist, MaxRev, Combined };

struct Objective {
  ObjectiveKind kind = ObjectiveKind::MinDist;
  // Meters per euro; used by Combined only.
  double gamma = 1.0 / 0.00085;
};

enum class Strategy { Fcfs, Ntnr, FullAuction, MinDist, MaxRev, Combined };

Strategy parse_strategy(std::string_view name);
const char* to_string(Strategy s);
bool is_compensated(Strategy s);
ObjectiveKind objective_kind(Strategy s);

/// Longest-waiting customer first, each to the nearest free taxi.
Assignment fcfs(const DispatchContext& ctx);

/// FCFS while free taxis suffice; otherwise closest (taxi, customer) pairs
/// first until the free taxis run out.
Assignment ntnr(const DispatchContext& ctx);

/// Distance-optimal matching of all available and dispatched taxis to all
/// assigned and unassigned customers.
Assignment fa(const DispatchContext& ctx);

/// A weight matrix together with the ids its rows and columns stand for.
struct ObjectiveMatrix {
  WeightMatrix weights;
  std::vector<TaxiId> row_taxis;
  std::vector<CustomerId> col_customers;
};

/// Matrix for the reassignment step. Rows are the taxis holding a pair in
/// `baseline`; columns are the assigned and unassigned customers (only the
/// baseline's customers when displacement is disabled).
ObjectiveMatrix build_objective_matrix(const DispatchContext& ctx, const Objective& obj,
                                       const Assignment& baseline);

struct Reassignment {
  TaxiId taxi = kNoTaxi;
  CustomerId old_customer = kNoCustomer;
  CustomerId new_customer = kNoCustomer;
  ServiceQuote old_quote;
  ServiceQuote new_quote;
  double compensation = 0.0;
};

struct CompensatedOutcome {
  Assignment assignment;
  MediatorLedger ledger;
  bool accepted = true;
  // False when the optimum equals the baseline; nothing was staged then.
  bool proposed = false;
  Assignment baseline;
  std::vector<Reassignment> reassignments;
  // Sum of payments received minus compensations given for the proposal.
  double mediator_delta = 0.0;
};

/// NTNR for the free taxis, then an optimal reshuffle among the busy ones
/// paid for by compensations, kept only if the mediator balance stays
/// non-negative.
CompensatedOutcome compensated_dispatch(const DispatchContext& ctx, const Objective& obj,
                                        const MediatorLedger& ledger);

/// Sum of pickup distances of `a` measured from the snapshot positions.
double total_pickup_distance(const DispatchContext& ctx, const Assignment& a);

}  // namespace taxidisp
