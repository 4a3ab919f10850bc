#include "taxidisp/dispatch.hpp"

#include <algorithm>
#include <tuple>
#include <unordered_map>

#include <fmt/format.h>

#include "taxidisp/spatial.hpp"

namespace taxidisp {

TaxiClass classify(TaxiPhase phase) {
  switch (phase) {
    case TaxiPhase::Available: return TaxiClass::Available;
    case TaxiPhase::Dispatched: return TaxiClass::Dispatched;
    default: return TaxiClass::Occupied;
  }
}

Strategy parse_strategy(std::string_view name) {
  if (name == "fcfs") return Strategy::Fcfs;
  if (name == "ntnr") return Strategy::Ntnr;
  if (name == "fa") return Strategy::FullAuction;
  if (name == "mindist") return Strategy::MinDist;
  if (name == "maxrev") return Strategy::MaxRev;
  if (name == "combined") return Strategy::Combined;
  throw ConfigError(fmt::format(
      "unknown strategy '{}' (expected fcfs|ntnr|fa|mindist|maxrev|combined)", name));
}

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Fcfs: return "fcfs";
    case Strategy::Ntnr: return "ntnr";
    case Strategy::FullAuction: return "fa";
    case Strategy::MinDist: return "mindist";
    case Strategy::MaxRev: return "maxrev";
    case Strategy::Combined: return "combined";
  }
  return "?";
}

bool is_compensated(Strategy s) {
  return s == Strategy::MinDist || s == Strategy::MaxRev || s == Strategy::Combined;
}

ObjectiveKind objective_kind(Strategy s) {
  switch (s) {
    case Strategy::MaxRev: return ObjectiveKind::MaxRev;
    case Strategy::Combined: return ObjectiveKind::Combined;
    default: return ObjectiveKind::MinDist;
  }
}

namespace {

struct Lookup {
  std::unordered_map<TaxiId, const TaxiSnapshot*> taxi;
  std::unordered_map<CustomerId, const Customer*> customer;

  explicit Lookup(const DispatchContext& ctx) {
    taxi.reserve(ctx.taxis.size());
    customer.reserve(ctx.customers.size());
    for (const auto& t : ctx.taxis) taxi.emplace(t.id, &t);
    for (const auto& c : ctx.customers) customer.emplace(c.id, &c);
  }

  const TaxiSnapshot& taxi_at(TaxiId id) const {
    auto it = taxi.find(id);
    if (it == taxi.end()) throw SimulationLogicError(fmt::format("unknown taxi {}", id));
    return *it->second;
  }
  const Customer& customer_at(CustomerId id) const {
    auto it = customer.find(id);
    if (it == customer.end()) throw SimulationLogicError(fmt::format("unknown customer {}", id));
    return *it->second;
  }
};

// Free taxis, ascending id.
std::vector<const TaxiSnapshot*> free_taxis(const DispatchContext& ctx) {
  std::vector<const TaxiSnapshot*> out;
  for (const auto& t : ctx.taxis) {
    if (t.cls == TaxiClass::Available && !ctx.current.customer_of(t.id)) out.push_back(&t);
  }
  std::sort(out.begin(), out.end(),
            [](const TaxiSnapshot* a, const TaxiSnapshot* b) { return a->id < b->id; });
  return out;
}

// Waiting customers, oldest request first, ties by id.
std::vector<const Customer*> waiting_customers(const DispatchContext& ctx) {
  std::vector<const Customer*> out;
  for (const auto& c : ctx.customers) {
    if (c.phase == CustomerPhase::Unassigned && !ctx.current.taxi_of(c.id)) out.push_back(&c);
  }
  std::sort(out.begin(), out.end(), [](const Customer* a, const Customer* b) {
    return std::tie(a->request_time, a->id) < std::tie(b->request_time, b->id);
  });
  return out;
}

Assignment fcfs_on(const DispatchContext& ctx, std::vector<const TaxiSnapshot*> pool,
                   const std::vector<const Customer*>& waiting) {
  Assignment out = ctx.current;
  for (const Customer* c : waiting) {
    if (pool.empty()) break;
    std::size_t best = 0;
    double best_d = distance(pool[0]->position, c->origin);
    for (std::size_t i = 1; i < pool.size(); ++i) {
      const double d = distance(pool[i]->position, c->origin);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    out.add(pool[best]->id, c->id);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

std::vector<const Customer*> sorted_by_id(std::vector<const Customer*> v) {
  std::sort(v.begin(), v.end(), [](const Customer* a, const Customer* b) { return a->id < b->id; });
  return v;
}

}  // namespace

Assignment fcfs(const DispatchContext& ctx) {
  return fcfs_on(ctx, free_taxis(ctx), waiting_customers(ctx));
}

Assignment ntnr(const DispatchContext& ctx) {
  auto pool = free_taxis(ctx);
  auto waiting = waiting_customers(ctx);
  if (waiting.size() <= pool.size()) return fcfs_on(ctx, std::move(pool), waiting);

  struct Candidate {
    double d;
    TaxiId taxi;
    CustomerId customer;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(pool.size() * waiting.size());
  for (const TaxiSnapshot* t : pool) {
    for (const Customer* c : waiting) {
      candidates.push_back({distance(t->position, c->origin), t->id, c->id});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.d, a.taxi, a.customer) < std::tie(b.d, b.taxi, b.customer);
  });

  Assignment out = ctx.current;
  std::size_t remaining = pool.size();
  for (const Candidate& cand : candidates) {
    if (remaining == 0) break;
    if (out.customer_of(cand.taxi) || out.taxi_of(cand.customer)) continue;
    out.add(cand.taxi, cand.customer);
    --remaining;
  }
  return out;
}

Assignment fa(const DispatchContext& ctx) {
  std::vector<const TaxiSnapshot*> rows;
  for (const auto& t : ctx.taxis) {
    if (t.cls != TaxiClass::Occupied) rows.push_back(&t);
  }
  std::sort(rows.begin(), rows.end(),
            [](const TaxiSnapshot* a, const TaxiSnapshot* b) { return a->id < b->id; });
  std::vector<const Customer*> cols;
  for (const auto& c : ctx.customers) cols.push_back(&c);
  cols = sorted_by_id(std::move(cols));

  WeightMatrix w(rows.size(), cols.size(), Sense::Minimize);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      w(r, c) = distance(rows[r]->position, cols[c]->origin);
    }
  }
  const Matching m = solve(w);
  Assignment out;
  for (const auto& [r, c] : m.pairs) out.add(rows[r]->id, cols[c]->id);
  return out;
}

ObjectiveMatrix build_objective_matrix(const DispatchContext& ctx, const Objective& obj,
                                       const Assignment& baseline) {
  if (obj.kind == ObjectiveKind::Combined && !(obj.gamma > 0.0)) {
    throw ConfigError(fmt::format("gamma must be positive, got {}", obj.gamma));
  }
  const Lookup look(ctx);
  ObjectiveMatrix out;
  for (const auto& [taxi, customer] : baseline) out.row_taxis.push_back(taxi);

  std::vector<const Customer*> cols;
  if (ctx.allow_displacement) {
    for (const auto& c : ctx.customers) cols.push_back(&c);
  } else {
    for (const auto& [taxi, customer] : baseline) cols.push_back(&look.customer_at(customer));
  }
  cols = sorted_by_id(std::move(cols));
  for (const Customer* c : cols) out.col_customers.push_back(c->id);

  const Sense sense = obj.kind == ObjectiveKind::MaxRev ? Sense::Maximize : Sense::Minimize;
  out.weights = WeightMatrix(out.row_taxis.size(), cols.size(), sense);
  for (std::size_t r = 0; r < out.row_taxis.size(); ++r) {
    const TaxiId taxi = out.row_taxis[r];
    const Point pos = look.taxi_at(taxi).position;
    const CustomerId own = *baseline.customer_of(taxi);
    const ServiceQuote old_q = quote(ctx.tariff, pos, look.customer_at(own), ctx.dest_known);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const ServiceQuote new_q = quote(ctx.tariff, pos, *cols[c], ctx.dest_known);
      const double comp = cols[c]->id == own ? 0.0 : compensation(ctx.tariff, old_q, new_q);
      double w = 0.0;
      switch (obj.kind) {
        case ObjectiveKind::MinDist: w = new_q.pickup_dist; break;
        case ObjectiveKind::MaxRev: w = -comp; break;
        case ObjectiveKind::Combined: w = new_q.pickup_dist + obj.gamma * comp; break;
      }
      out.weights(r, c) = w;
    }
  }
  return out;
}

CompensatedOutcome compensated_dispatch(const DispatchContext& ctx, const Objective& obj,
                                        const MediatorLedger& ledger) {
  CompensatedOutcome out;
  out.ledger = ledger;
  out.baseline = ntnr(ctx);
  out.assignment = out.baseline;
  if (out.baseline.empty()) return out;

  const ObjectiveMatrix om = build_objective_matrix(ctx, obj, out.baseline);
  const Matching m = solve(om.weights);
  if (m.pairs.size() != om.row_taxis.size()) {
    throw SimulationLogicError("reassignment left a busy taxi without a customer");
  }

  const Lookup look(ctx);
  Assignment proposal;
  for (const auto& [r, c] : m.pairs) {
    const TaxiId taxi = om.row_taxis[r];
    const CustomerId j = om.col_customers[c];
    proposal.add(taxi, j);
    const CustomerId k = *out.baseline.customer_of(taxi);
    if (j == k) continue;
    const Point pos = look.taxi_at(taxi).position;
    Reassignment re;
    re.taxi = taxi;
    re.old_customer = k;
    re.new_customer = j;
    re.old_quote = quote(ctx.tariff, pos, look.customer_at(k), ctx.dest_known);
    re.new_quote = quote(ctx.tariff, pos, look.customer_at(j), ctx.dest_known);
    re.compensation = compensation(ctx.tariff, re.old_quote, re.new_quote);
    out.ledger = out.ledger.staged(re.compensation);
    out.mediator_delta -= re.compensation;
    out.reassignments.push_back(re);
  }
  if (out.reassignments.empty()) return out;

  out.proposed = true;
  out.accepted = out.ledger.commit_or_rollback();
  if (out.accepted) out.assignment = std::move(proposal);
  return out;
}

double total_pickup_distance(const DispatchContext& ctx, const Assignment& a) {
  const Lookup look(ctx);
  double total = 0.0;
  for (const auto& [taxi, customer] : a) {
    total += distance(look.taxi_at(taxi).position, look.customer_at(customer).origin);
  }
  return total;
}

}  // namespace taxidisp
