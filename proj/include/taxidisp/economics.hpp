#pragma once

#include "taxidisp/fleet.hpp"

namespace taxidisp {

/// Payment and cost scheme. All rates are per meter.
struct TariffScheme {
  double fixed_cost = 2.4;     // euros per trip
  double fare = 1.05e-3;       // euros per meter carried
  double op_cost = 0.2e-3;     // euros per meter driven
  double est_trip = 4750.0;    // meters; trip length assumed when destinations are unknown

  /// Net income per meter of paid driving.
  double margin() const { return fare - op_cost; }

  /// Throws ConfigError unless fare > op_cost > 0 and est_trip > 0.
  void validate() const;
};

/// Distances for one taxi serving one customer, seen from the taxi's
/// position at the decision instant.
struct ServiceQuote {
  double pickup_dist = 0.0;
  double trip_dist = 0.0;
  double total_dist = 0.0;

  static ServiceQuote of(double pickup, double trip) { return {pickup, trip, pickup + trip}; }
};

/// Absolute tolerance for monetary comparisons against zero.
inline constexpr double kMoneyEpsilon = 1e-9;

/// fixed_cost + fare * trip - op_cost * (pickup + trip).
double revenue(const TariffScheme& tariff, const ServiceQuote& q);

/// Payment to the taxi (negative: paid by the taxi) when it swaps the
/// customer quoted by `old_q` for the one quoted by `new_q`. Afterwards the
/// taxi earns exactly its old revenue when the new service is not longer,
/// and its old revenue plus margin() per extra meter when it is.
double compensation(const TariffScheme& tariff, const ServiceQuote& old_q,
                    const ServiceQuote& new_q);

/// Quote for serving `cust` from `taxi_pos`. The trip length is the true
/// origin-destination distance when `dest_known`, otherwise tariff.est_trip.
ServiceQuote quote(const TariffScheme& tariff, Point taxi_pos, const Customer& cust,
                   bool dest_known);

/// Mediator balance with staged, all-or-nothing updates.
struct MediatorLedger {
  double committed = 0.0;
  double tentative_delta = 0.0;

  /// Records a compensation payment `c` against the pending proposal.
  MediatorLedger staged(double c) const { return {committed, tentative_delta - c}; }

  /// Applies the pending delta if the balance stays non-negative (within
  /// kMoneyEpsilon); otherwise drops it. Returns whether it was applied.
  bool commit_or_rollback();
};

MediatorLedger ledger_stage(const MediatorLedger& ledger, double c);

struct LedgerDecision {
  MediatorLedger ledger;
  bool accepted = false;
};

LedgerDecision ledger_commit_or_rollback(const MediatorLedger& ledger);

}  // namespace taxidisp
