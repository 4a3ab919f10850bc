#pragma once

#include <optional>
#include <vector>

#include "taxidisp/dispatch.hpp"
#include "taxidisp/economics.hpp"
#include "taxidisp/fleet.hpp"
#include "taxidisp/scenario.hpp"

namespace taxidisp {

enum class EventKind {
  Request,
  Dispatch,
  Reassign,
  Recall,
  Unassign,
  ArriveAtCustomer,
  PickupComplete,
  ArriveAtDestination,
  DropoffComplete,
};

const char* to_string(EventKind kind);

struct EventRecord {
  double time = 0.0;
  EventKind kind = EventKind::Request;
  TaxiId taxi = kNoTaxi;
  CustomerId customer = kNoCustomer;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct CustomerRecord {
  CustomerId id = kNoCustomer;
  double request_time = 0.0;
  std::optional<double> pickup_time;
  TaxiId taxi = kNoTaxi;  // taxi that picked the customer up
  int reassigned_count = 0;
};

/// One row per tick on which the strategy ran. Counts are cumulative.
struct LedgerRow {
  double tick = 0.0;
  double committed = 0.0;
  int accepted = 0;
  int rejected = 0;
};

/// A taxi-level change from a committed compensated proposal.
struct CommittedReassignment {
  double time = 0.0;
  Reassignment change;
  double old_revenue = 0.0;
  double effective_revenue = 0.0;  // revenue of the new service plus compensation
};

struct RunMetrics {
  double avg_wait_min = 0.0;
  std::vector<double> waits;  // seconds, per served customer in id order
  std::vector<double> taxi_revenue;  // fares + compensations - operating cost
  double mediator_revenue = 0.0;
  int served_count = 0;
  int reassignment_count = 0;  // taxis moved to another customer
  int rejection_count = 0;     // proposals refused by the ledger
  int accepted_proposals = 0;
  int dispatch_count = 0;      // Available -> Dispatched transitions
  int recall_count = 0;
  int strategy_invocations = 0;
  double total_payments = 0.0;      // paid by customers
  double total_operating_cost = 0.0;
  double total_compensation = 0.0;  // paid to taxis (net)
  double end_time = 0.0;
  // True if, before every dispatch decision, waiting customers never
  // outnumbered free taxis.
  bool free_taxis_sufficed = true;
};

struct RunResult {
  RunMetrics metrics;
  std::vector<CustomerRecord> customers;
  std::vector<LedgerRow> ledger;
  std::vector<EventRecord> events;
  std::vector<CommittedReassignment> committed;
  // Committed ledger balance after every tick.
  std::vector<double> balance_per_tick;
};

struct RunOptions {
  bool record_events = true;
  bool check_invariants = true;
  // Simulated seconds allowed past the horizon for the queue to drain.
  double max_drain = 14.0 * 86400.0;
};

/// Generates the fleet and demand from `cfg.seed` and runs to completion:
/// 5-second dispatch ticks through the horizon, then on until every
/// customer has been picked up. Throws SimulationLogicError if the state
/// ever becomes inconsistent.
RunResult run(const ScenarioConfig& cfg, const RunOptions& options = {});

/// Runs a hand-built scenario. `customers` must have dense ids in request
/// time order; the fleet gets ids in the order of `taxi_positions`.
RunResult run_scenario(const ScenarioConfig& cfg, const std::vector<Point>& taxi_positions,
                       std::vector<Customer> customers, const RunOptions& options = {});

/// Initial taxi positions for `cfg.seed`.
std::vector<Point> initial_fleet(const ScenarioConfig& cfg);

/// Requests for `cfg.seed`; independent of the strategy.
std::vector<Customer> generate_customers(const ScenarioConfig& cfg);

/// Seconds from request to the taxi's arrival at the pickup point.
/// Throws SimulationLogicError if the customer has not been picked up.
double record_wait(const Customer& cust);

}  // namespace taxidisp
