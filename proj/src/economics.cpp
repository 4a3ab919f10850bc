#include "taxidisp/economics.hpp"

#include <fmt/format.h>

#include "taxidisp/spatial.hpp"

namespace taxidisp {

void TariffScheme::validate() const {
  if (!(op_cost > 0.0)) throw ConfigError(fmt::format("op_cost must be positive, got {}", op_cost));
  if (!(fare > op_cost)) {
    throw ConfigError(fmt::format("fare ({}) must exceed op_cost ({})", fare, op_cost));
  }
  if (!(est_trip > 0.0)) throw ConfigError(fmt::format("est_trip must be positive, got {}", est_trip));
  if (!(fixed_cost >= 0.0)) throw ConfigError("fixed_cost must be non-negative");
}

double revenue(const TariffScheme& tariff, const ServiceQuote& q) {
  return tariff.fixed_cost + tariff.fare * q.trip_dist - tariff.op_cost * q.total_dist;
}

double compensation(const TariffScheme& tariff, const ServiceQuote& old_q,
                    const ServiceQuote& new_q) {
  const double base = revenue(tariff, old_q) - revenue(tariff, new_q);
  if (old_q.total_dist >= new_q.total_dist) return base;
  return base + (new_q.total_dist - old_q.total_dist) * tariff.margin();
}

ServiceQuote quote(const TariffScheme& tariff, Point taxi_pos, const Customer& cust,
                   bool dest_known) {
  const double pickup = distance(taxi_pos, cust.origin);
  const double trip = dest_known ? distance(cust.origin, cust.destination) : tariff.est_trip;
  return ServiceQuote::of(pickup, trip);
}

bool MediatorLedger::commit_or_rollback() {
  const bool ok = committed + tentative_delta >= -kMoneyEpsilon;
  if (ok) committed += tentative_delta;
  tentative_delta = 0.0;
  return ok;
}

MediatorLedger ledger_stage(const MediatorLedger& ledger, double c) { return ledger.staged(c); }

LedgerDecision ledger_commit_or_rollback(const MediatorLedger& ledger) {
  LedgerDecision d{ledger, false};
  d.accepted = d.ledger.commit_or_rollback();
  return d;
}

}  // namespace taxidisp
