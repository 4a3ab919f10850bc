#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "taxidisp/dispatch.hpp"
#include "taxidisp/rng.hpp"
#include "taxidisp/spatial.hpp"
#include "taxidisp/verify.hpp"

using namespace taxidisp;

namespace {

Customer waiting(CustomerId id, double t, Point origin, Point dest = {0, 0}) {
  Customer c;
  c.id = id;
  c.request_time = t;
  c.origin = origin;
  c.destination = dest;
  return c;
}

// A context with `n_disp` dispatched taxis (each holding an assigned
// customer), `n_avail` available and `n_occ` occupied taxis, and
// `n_wait` unassigned customers, all placed uniformly at random.
DispatchContext random_context(Rng& rng, int n_avail, int n_disp, int n_occ, int n_wait,
                               bool dest_known) {
  const AreaSpec area;
  DispatchContext ctx;
  ctx.dest_known = dest_known;
  TaxiId tid = 0;
  CustomerId cid = 0;
  for (int i = 0; i < n_disp; ++i) {
    ctx.taxis.push_back({tid, TaxiClass::Dispatched, gen_uniform_point(rng, area)});
    Customer c = waiting(cid, rng.uniform(0, 100), gen_uniform_point(rng, area),
                         gen_uniform_point(rng, area));
    c.phase = CustomerPhase::Assigned;
    c.taxi = tid;
    c.dest_known = dest_known;
    ctx.customers.push_back(c);
    ctx.current.add(tid, cid);
    ++tid;
    ++cid;
  }
  for (int i = 0; i < n_avail; ++i) {
    ctx.taxis.push_back({tid++, TaxiClass::Available, gen_uniform_point(rng, area)});
  }
  for (int i = 0; i < n_occ; ++i) {
    ctx.taxis.push_back({tid++, TaxiClass::Occupied, gen_uniform_point(rng, area)});
  }
  for (int i = 0; i < n_wait; ++i) {
    Customer c = waiting(cid++, rng.uniform(0, 100), gen_uniform_point(rng, area),
                         gen_uniform_point(rng, area));
    c.dest_known = dest_known;
    ctx.customers.push_back(c);
  }
  return ctx;
}

}  // namespace

TEST_CASE("swap example: FCFS and NTNR keep the inferior pairing") {
  const DispatchContext ctx = swap_improvable_context();
  const Assignment expected{{0, 0}, {1, 1}};
  CHECK(fcfs(ctx) == expected);
  CHECK(ntnr(ctx) == expected);
  CHECK(total_pickup_distance(ctx, expected) == 4000.0);
}

TEST_CASE("swap example: FA swaps") {
  const DispatchContext ctx = swap_improvable_context();
  const Assignment a = fa(ctx);
  CHECK(a == Assignment{{0, 1}, {1, 0}});
  CHECK(total_pickup_distance(ctx, a) == 3500.0);
}

TEST_CASE("swap example: compensated MinDist pays for itself") {
  const DispatchContext ctx = swap_improvable_context();
  const CompensatedOutcome out = compensated_dispatch(ctx, {ObjectiveKind::MinDist}, {});
  CHECK(out.baseline == Assignment{{0, 0}, {1, 1}});
  CHECK(out.assignment == Assignment{{0, 1}, {1, 0}});
  CHECK(out.proposed);
  CHECK(out.accepted);
  REQUIRE(out.reassignments.size() == 2);
  // Both routes shrink, so each taxi pays op_cost per meter saved.
  CHECK(out.reassignments[0].compensation == doctest::Approx(-0.2e-3 * 150).epsilon(1e-12));
  CHECK(out.reassignments[1].compensation == doctest::Approx(-0.2e-3 * 350).epsilon(1e-12));
  CHECK(out.mediator_delta == doctest::Approx(0.2e-3 * (4000 - 3500)).epsilon(1e-12));
  CHECK(out.ledger.committed == doctest::Approx(0.10).epsilon(1e-12));
  CHECK(out.ledger.tentative_delta == 0.0);
}

TEST_CASE("swap example: every objective reaches 3.5 km") {
  const DispatchContext ctx = swap_improvable_context();
  for (auto kind : {ObjectiveKind::MinDist, ObjectiveKind::MaxRev, ObjectiveKind::Combined}) {
    const CompensatedOutcome out = compensated_dispatch(ctx, {kind}, {});
    CHECK(out.accepted);
    CHECK(total_pickup_distance(ctx, out.assignment) == 3500.0);
  }
}

TEST_CASE("FCFS picks the nearest taxi") {
  DispatchContext ctx;
  ctx.taxis = {{0, TaxiClass::Available, {5000, 0}},
               {1, TaxiClass::Available, {2000, 0}},
               {2, TaxiClass::Available, {7000, 0}}};
  ctx.customers = {waiting(0, 0, {0, 0})};
  CHECK(fcfs(ctx) == Assignment{{1, 0}});
}

TEST_CASE("FCFS serves the oldest request first") {
  DispatchContext ctx;
  ctx.taxis = {{0, TaxiClass::Available, {0, 0}}};
  ctx.customers = {waiting(0, 10, {100, 0}), waiting(1, 5, {3000, 0})};
  CHECK(fcfs(ctx) == Assignment{{0, 1}});
}

TEST_CASE("FCFS ties go to the lowest taxi id") {
  DispatchContext ctx;
  ctx.taxis = {{3, TaxiClass::Available, {0, 100}}, {1, TaxiClass::Available, {0, -100}}};
  ctx.customers = {waiting(0, 0, {0, 0})};
  CHECK(fcfs(ctx) == Assignment{{1, 0}});
}

TEST_CASE("no waiting customers or no free taxis leave the assignment unchanged") {
  Rng rng(1);
  DispatchContext ctx = random_context(rng, 3, 2, 1, 0, false);
  CHECK(fcfs(ctx) == ctx.current);
  CHECK(ntnr(ctx) == ctx.current);
  ctx = random_context(rng, 0, 2, 3, 4, false);
  CHECK(fcfs(ctx) == ctx.current);
  CHECK(ntnr(ctx) == ctx.current);
}

TEST_CASE("NTNR under scarcity serves the closest request") {
  DispatchContext ctx;
  ctx.taxis = {{0, TaxiClass::Available, {0, 0}}};
  ctx.customers = {waiting(0, 0, {3000, 0}), waiting(1, 60, {1000, 0})};
  CHECK(ntnr(ctx) == Assignment{{0, 1}});
  CHECK(fcfs(ctx) == Assignment{{0, 0}});
}

TEST_CASE("NTNR equals FCFS when free taxis suffice") {
  Rng rng(2);
  for (int i = 0; i < 300; ++i) {
    const int avail = 1 + i % 9;
    const int wait = static_cast<int>(rng.uniform(0, avail + 1));
    const DispatchContext ctx = random_context(rng, avail, i % 4, i % 3, wait, false);
    CHECK(ntnr(ctx) == fcfs(ctx));
  }
}

TEST_CASE("NTNR under scarcity uses every free taxi once") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const int avail = 1 + i % 5;
    const DispatchContext ctx = random_context(rng, avail, i % 3, 2, avail + 1 + i % 4, false);
    const Assignment a = ntnr(ctx);
    CHECK(a.size() == ctx.current.size() + static_cast<std::size_t>(avail));
    for (const auto& [t, c] : ctx.current) CHECK(a.contains(t, c));
  }
}

TEST_CASE("FA on trivial inputs") {
  DispatchContext ctx;
  ctx.taxis = {{0, TaxiClass::Available, {10, 10}}};
  ctx.customers = {waiting(0, 0, {20, 20})};
  CHECK(fa(ctx) == Assignment{{0, 0}});

  DispatchContext opt = swap_improvable_context();
  opt.current = fa(opt);
  for (auto& c : opt.customers) {
    c.phase = CustomerPhase::Assigned;
    c.taxi = *opt.current.taxi_of(c.id);
  }
  opt.taxis[1].cls = TaxiClass::Dispatched;
  CHECK(fa(opt) == opt.current);
}

TEST_CASE("FA never does worse than NTNR on matched pickup distance at equal size") {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const int avail = 1 + i % 6;
    const int disp = i % 4;
    // As many customers as non-occupied taxis, so both match everyone.
    const DispatchContext ctx = random_context(rng, avail, disp, 1, avail, false);
    const Assignment f = fa(ctx);
    const Assignment n = ntnr(ctx);
    REQUIRE(f.size() == n.size());
    CHECK(total_pickup_distance(ctx, f) <= total_pickup_distance(ctx, n) + 1e-6);
  }
}

TEST_CASE("compensated dispatch on an empty context") {
  DispatchContext ctx;
  ctx.taxis = {{0, TaxiClass::Available, {0, 0}}, {1, TaxiClass::Occupied, {5, 5}}};
  const MediatorLedger ledger{3.0, 0.0};
  const CompensatedOutcome out = compensated_dispatch(ctx, {ObjectiveKind::Combined}, ledger);
  CHECK(out.accepted);
  CHECK_FALSE(out.proposed);
  CHECK(out.assignment.empty());
  CHECK(out.ledger.committed == 3.0);
}

TEST_CASE("compensated dispatch with no improvement proposes nothing") {
  DispatchContext ctx;
  ctx.taxis = {{0, TaxiClass::Dispatched, {0, 0}}, {1, TaxiClass::Available, {5000, 0}}};
  Customer near = waiting(0, 0, {100, 0});
  near.phase = CustomerPhase::Assigned;
  near.taxi = 0;
  ctx.customers = {near, waiting(1, 10, {5100, 0})};
  ctx.current.add(0, 0);
  const CompensatedOutcome out = compensated_dispatch(ctx, {ObjectiveKind::MinDist}, {1.0, 0.0});
  CHECK_FALSE(out.proposed);
  CHECK(out.accepted);
  CHECK(out.reassignments.empty());
  CHECK(out.assignment == Assignment{{0, 0}, {1, 1}});
  CHECK(out.ledger.committed == 1.0);
}

TEST_CASE("compensated dispatch properties on random contexts") {
  Rng rng(5);
  int rejected = 0;
  int accepted_changes = 0;
  for (int i = 0; i < 400; ++i) {
    const bool known = i % 2 == 0;
    DispatchContext ctx = random_context(rng, 1 + i % 4, 2 + i % 5, 1, i % 7, known);
    ctx.allow_displacement = i % 5 != 0;
    const ObjectiveKind kind = static_cast<ObjectiveKind>(i % 3);
    const MediatorLedger start{i % 4 == 0 ? 0.0 : rng.uniform(0, 2), 0.0};
    const CompensatedOutcome out = compensated_dispatch(ctx, {kind}, start);

    CHECK(out.ledger.tentative_delta == 0.0);
    CHECK(out.ledger.committed >= -kMoneyEpsilon);
    CHECK(out.assignment.size() == out.baseline.size());
    for (const auto& [t, c] : out.baseline) CHECK(out.assignment.customer_of(t).has_value());
    if (!ctx.allow_displacement) {
      std::set<CustomerId> before;
      std::set<CustomerId> after;
      for (const auto& [t, c] : out.baseline) before.insert(c);
      for (const auto& [t, c] : out.assignment) after.insert(c);
      CHECK(before == after);
    }
    if (!out.accepted) {
      ++rejected;
      CHECK(out.assignment == out.baseline);
      CHECK(out.ledger.committed == start.committed);
    } else if (out.proposed) {
      ++accepted_changes;
      CHECK(out.ledger.committed == doctest::Approx(start.committed + out.mediator_delta));
    }
    if (kind == ObjectiveKind::MaxRev) CHECK(out.accepted);
    for (const Reassignment& r : out.reassignments) {
      CHECK(revenue(ctx.tariff, r.new_quote) + r.compensation >=
            revenue(ctx.tariff, r.old_quote) - kMoneyEpsilon);
    }
  }
  CHECK(rejected > 0);
  CHECK(accepted_changes > 0);
}

TEST_CASE("objective matrix entries") {
  Rng rng(6);
  const DispatchContext ctx = random_context(rng, 2, 4, 0, 3, true);
  const Assignment base = ntnr(ctx);
  const ObjectiveMatrix maxrev = build_objective_matrix(ctx, {ObjectiveKind::MaxRev}, base);
  CHECK(maxrev.weights.sense() == Sense::Maximize);
  REQUIRE(maxrev.row_taxis.size() == base.size());
  CHECK(maxrev.col_customers.size() == ctx.customers.size());
  for (std::size_t r = 0; r < maxrev.row_taxis.size(); ++r) {
    const CustomerId own = *base.customer_of(maxrev.row_taxis[r]);
    for (std::size_t c = 0; c < maxrev.col_customers.size(); ++c) {
      if (maxrev.col_customers[c] == own) CHECK(maxrev.weights(r, c) == 0.0);
    }
  }
  const ObjectiveMatrix dist = build_objective_matrix(ctx, {ObjectiveKind::MinDist}, base);
  for (std::size_t r = 0; r < dist.row_taxis.size(); ++r) {
    const Point pos = ctx.taxis[static_cast<std::size_t>(dist.row_taxis[r])].position;
    for (std::size_t c = 0; c < dist.col_customers.size(); ++c) {
      const Point o = ctx.customers[static_cast<std::size_t>(dist.col_customers[c])].origin;
      CHECK(dist.weights(r, c) == distance(pos, o));
    }
  }
  CHECK_THROWS_AS(build_objective_matrix(ctx, {ObjectiveKind::Combined, 0.0}, base), ConfigError);
}

TEST_CASE("MaxRev optimum is never negative") {
  Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    const DispatchContext ctx = random_context(rng, i % 3, 1 + i % 6, 0, i % 5, i % 2 == 0);
    const Assignment base = ntnr(ctx);
    if (base.empty()) continue;
    const ObjectiveMatrix m = build_objective_matrix(ctx, {ObjectiveKind::MaxRev}, base);
    CHECK(solve(m.weights).total >= -kMoneyEpsilon);
  }
}

TEST_CASE("strategy names") {
  for (Strategy s : {Strategy::Fcfs, Strategy::Ntnr, Strategy::FullAuction, Strategy::MinDist,
                     Strategy::MaxRev, Strategy::Combined}) {
    CHECK(parse_strategy(to_string(s)) == s);
  }
  CHECK_THROWS_AS(parse_strategy("auction"), ConfigError);
  CHECK(is_compensated(Strategy::Combined));
  CHECK_FALSE(is_compensated(Strategy::FullAuction));
  CHECK(objective_kind(Strategy::MaxRev) == ObjectiveKind::MaxRev);
}
