#include "taxidisp/verify.hpp"

#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "taxidisp/assignment_solver.hpp"
#include "taxidisp/experiment.hpp"
#include "taxidisp/rng.hpp"
#include "taxidisp/simulation.hpp"
#include "taxidisp/spatial.hpp"

namespace taxidisp {

DispatchContext swap_improvable_context(Point offset) {
  auto at = [&](double x, double y) { return Point{offset.x + x, offset.y + y}; };
  DispatchContext ctx;
  ctx.now = 60.0;
  ctx.taxis = {
      {0, TaxiClass::Dispatched, at(1650.0, 0.0)},
      {1, TaxiClass::Available, at(-1600.0, 1200.0)},
  };
  Customer c0;
  c0.id = 0;
  c0.request_time = 0.0;
  c0.origin = at(0.0, 0.0);
  c0.destination = at(2000.0, 3000.0);
  c0.phase = CustomerPhase::Assigned;
  c0.taxi = 0;
  Customer c1;
  c1.id = 1;
  c1.request_time = 60.0;
  c1.origin = at(750.0, 1200.0);
  c1.destination = at(-2000.0, -1000.0);
  ctx.customers = {c0, c1};
  ctx.current.add(0, 0);
  return ctx;
}

namespace {

CheckResult check(std::string name, const std::function<std::string()>& body) {
  CheckResult r{std::move(name), false, {}};
  try {
    r.detail = body();
    r.passed = r.detail.empty();
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  return r;
}

std::string solver_oracle() {
  Rng rng(20240601);
  const std::pair<int, int> shapes[] = {{3, 3}, {5, 5}, {5, 8}, {8, 5}, {6, 6}};
  for (const auto& [rows, cols] : shapes) {
    for (int trial = 0; trial < 60; ++trial) {
      const bool integral = trial % 2 == 0;
      const Sense sense = trial % 3 == 0 ? Sense::Maximize : Sense::Minimize;
      WeightMatrix w(rows, cols, sense);
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          w(r, c) = integral ? std::floor(rng.uniform(0.0, 101.0)) : rng.uniform01();
        }
      }
      const Matching a = solve(w);
      const Matching b = brute_force(w);
      const double tol = integral ? 0.0 : 1e-9 * std::max(1.0, std::abs(b.total));
      if (std::abs(a.total - b.total) > tol) {
        return fmt::format("{}x{} trial {}: solve {} vs oracle {}", rows, cols, trial, a.total,
                           b.total);
      }
      if (integral && a.pairs != b.pairs) {
        return fmt::format("{}x{} trial {}: tie-break differs from oracle", rows, cols, trial);
      }
    }
  }
  return {};
}

std::string swap_example() {
  const DispatchContext ctx = swap_improvable_context();
  auto km = [&](const Assignment& a) { return total_pickup_distance(ctx, a) / 1000.0; };
  if (km(fcfs(ctx)) != 4.0) return fmt::format("fcfs total {} km", km(fcfs(ctx)));
  if (km(ntnr(ctx)) != 4.0) return fmt::format("ntnr total {} km", km(ntnr(ctx)));
  if (km(fa(ctx)) != 3.5) return fmt::format("fa total {} km", km(fa(ctx)));
  for (ObjectiveKind kind : {ObjectiveKind::MinDist, ObjectiveKind::MaxRev, ObjectiveKind::Combined}) {
    const CompensatedOutcome out = compensated_dispatch(ctx, Objective{kind}, MediatorLedger{});
    if (!out.accepted || km(out.assignment) != 3.5) {
      return fmt::format("compensated objective {} gave {} km (accepted={})",
                         static_cast<int>(kind), km(out.assignment), out.accepted);
    }
  }
  return {};
}

std::string rationality() {
  Rng rng(7);
  const TariffScheme tariff;
  for (int i = 0; i < 20000; ++i) {
    const ServiceQuote a = ServiceQuote::of(rng.uniform(0, 9000), rng.uniform(0, 9000));
    const ServiceQuote b = ServiceQuote::of(rng.uniform(0, 9000), rng.uniform(0, 9000));
    const double c = compensation(tariff, a, b);
    const double effective = revenue(tariff, b) + c;
    const double floor = revenue(tariff, a);
    if (effective < floor - kMoneyEpsilon) {
      return fmt::format("effective revenue {} below old revenue {}", effective, floor);
    }
  }
  return {};
}

std::string small_run() {
  ScenarioConfig cfg = desk_scale_config();
  cfg.demand.horizon = 900.0;
  const RunResult a = run(cfg);
  const RunResult b = run(cfg);
  if (customers_csv(a) != customers_csv(b) || ledger_csv(a) != ledger_csv(b)) {
    return "two runs with the same seed differ";
  }
  const RunMetrics& m = a.metrics;
  double taxis = 0.0;
  for (double r : m.taxi_revenue) taxis += r;
  const double gap = m.total_payments - (taxis + m.total_operating_cost + m.mediator_revenue);
  if (std::abs(gap) > 1e-6) return fmt::format("money not conserved, gap {}", gap);
  for (const auto& rec : a.committed) {
    if (rec.effective_revenue < rec.old_revenue - kMoneyEpsilon) {
      return fmt::format("taxi {} lost revenue in a reassignment", rec.change.taxi);
    }
  }
  return {};
}

}  // namespace

std::vector<CheckResult> run_self_checks() {
  return {
      check("solver matches exhaustive oracle", solver_oracle),
      check("swap example totals", swap_example),
      check("compensation never lowers revenue", rationality),
      check("desk run deterministic and money-conserving", small_run),
  };
}

}  // namespace taxidisp
