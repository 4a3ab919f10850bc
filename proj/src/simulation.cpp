#include "taxidisp/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>

#include <fmt/format.h>

#include "taxidisp/spatial.hpp"

namespace taxidisp {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Request: return "request";
    case EventKind::Dispatch: return "dispatch";
    case EventKind::Reassign: return "reassign";
    case EventKind::Recall: return "recall";
    case EventKind::Unassign: return "unassign";
    case EventKind::ArriveAtCustomer: return "arrive_customer";
    case EventKind::PickupComplete: return "pickup_complete";
    case EventKind::ArriveAtDestination: return "arrive_destination";
    case EventKind::DropoffComplete: return "dropoff_complete";
  }
  return "?";
}

double record_wait(const Customer& cust) {
  if (!cust.pickup_time) {
    throw SimulationLogicError(fmt::format("customer {} has no pickup time", cust.id));
  }
  return *cust.pickup_time - cust.request_time;
}

std::vector<Point> initial_fleet(const ScenarioConfig& cfg) {
  Rng rng = Rng::stream(cfg.seed, kFleetStream);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(std::max(cfg.n_taxis, 0)));
  for (int i = 0; i < cfg.n_taxis; ++i) out.push_back(gen_uniform_point(rng, cfg.area));
  return out;
}

std::vector<Customer> generate_customers(const ScenarioConfig& cfg) {
  Rng rng = Rng::stream(cfg.seed, kDemandStream);
  return gen_demand(rng, cfg.demand, cfg.area, cfg.center, cfg.dest_known);
}

namespace {

class Simulator {
 public:
  Simulator(const ScenarioConfig& cfg, const std::vector<Point>& fleet,
            std::vector<Customer> customers, const RunOptions& opts)
      : cfg_(cfg), opts_(opts), speed_(cfg.speed_mps()), customers_(std::move(customers)) {
    cfg_.validate();
    for (std::size_t i = 0; i < fleet.size(); ++i) {
      taxis_.push_back(Taxi::available_at(static_cast<TaxiId>(i), fleet[i]));
    }
    version_.assign(taxis_.size(), 0);
    fares_.assign(taxis_.size(), 0.0);
    compensation_.assign(taxis_.size(), 0.0);
    driven_.assign(taxis_.size(), 0.0);
    records_.resize(customers_.size());
    for (std::size_t i = 0; i < customers_.size(); ++i) {
      Customer& c = customers_[i];
      if (c.id != static_cast<CustomerId>(i)) {
        throw ConfigError(fmt::format("customer ids must be dense, found {} at {}", c.id, i));
      }
      if (i > 0 && c.request_time < customers_[i - 1].request_time) {
        throw ConfigError("customers must be sorted by request time");
      }
      c.phase = CustomerPhase::Unassigned;
      c.taxi = kNoTaxi;
      c.pickup_time.reset();
      records_[i].id = c.id;
      records_[i].request_time = c.request_time;
    }
  }

  RunResult run() {
    const double horizon = cfg_.demand.horizon;
    const double limit = horizon + opts_.max_drain;
    for (long long k = 0;; ++k) {
      const double clock = static_cast<double>(k) * cfg_.tick;
      if (clock > limit) {
        throw SimulationLogicError(fmt::format(
            "queue did not drain: {} of {} customers served at t={}", served_,
            customers_.size(), clock));
      }
      advance(clock);
      note_supply();
      if (world_changed_) {
        world_changed_ = false;
        decide(clock);
      }
      if (opts_.check_invariants) check(clock);
      result_.balance_per_tick.push_back(ledger_.committed);
      if (clock >= horizon && served_ == customers_.size()) {
        result_.metrics.end_time = clock;
        break;
      }
    }
    finish();
    return std::move(result_);
  }

 private:
  struct Scheduled {
    double time;
    TaxiId taxi;
    std::uint64_t version;
    bool operator>(const Scheduled& o) const {
      return time != o.time ? time > o.time : taxi > o.taxi;
    }
  };

  void log(double t, EventKind kind, TaxiId taxi, CustomerId customer) {
    if (opts_.record_events) result_.events.push_back({t, kind, taxi, customer});
  }

  Point position(const Taxi& t, double now) const {
    if (!t.motion) return t.stationary;
    return position_at(t.motion->origin, t.motion->target, t.motion->depart, speed_, now);
  }

  double arrival_time(const Motion& m) const {
    return m.depart + travel_time(distance(m.origin, m.target), speed_);
  }

  void schedule(TaxiId id) {
    const Taxi& t = taxis_[id];
    const std::uint64_t v = ++version_[id];
    switch (t.phase) {
      case TaxiPhase::Available: return;
      case TaxiPhase::Dispatched:
      case TaxiPhase::OccupiedDriving: queue_.push({arrival_time(*t.motion), id, v}); return;
      case TaxiPhase::PickupDwell:
      case TaxiPhase::DropoffDwell: queue_.push({t.until, id, v}); return;
    }
  }

  void transition(TaxiId id, const TransitionEvent& e, double now) {
    taxis_[id] = apply_transition(taxis_[id], e, now, cfg_.dwell);
  }

  // Processes taxi events and customer requests up to `clock` in time order.
  void advance(double clock) {
    for (;;) {
      while (!queue_.empty() && queue_.top().version != version_[queue_.top().taxi]) queue_.pop();
      const bool taxi_due = !queue_.empty() && queue_.top().time <= clock;
      const bool request_due = next_request_ < customers_.size() &&
                               customers_[next_request_].request_time <= clock;
      if (!taxi_due && !request_due) return;
      if (request_due && (!taxi_due || customers_[next_request_].request_time <= queue_.top().time)) {
        const Customer& c = customers_[next_request_++];
        pending_.push_back(c.id);
        log(c.request_time, EventKind::Request, kNoTaxi, c.id);
        world_changed_ = true;
        continue;
      }
      const Scheduled ev = queue_.top();
      queue_.pop();
      handle(ev.taxi, ev.time);
    }
  }

  void handle(TaxiId id, double t) {
    Taxi& taxi = taxis_[id];
    switch (taxi.phase) {
      case TaxiPhase::Dispatched: {
        driven_[id] += distance(taxi.motion->origin, taxi.motion->target);
        const CustomerId cid = taxi.customer;
        transition(id, transition::ArriveAtCustomer{}, t);
        Customer& c = customers_[cid];
        c.phase = CustomerPhase::InService;
        c.pickup_time = t;
        records_[cid].pickup_time = t;
        records_[cid].taxi = id;
        assignment_.remove_taxi(id);
        pending_.erase(std::lower_bound(pending_.begin(), pending_.end(), cid));
        log(t, EventKind::ArriveAtCustomer, id, cid);
        break;
      }
      case TaxiPhase::PickupDwell: {
        const CustomerId cid = taxi.customer;
        transition(id, transition::PickupComplete{customers_[cid].destination}, t);
        log(t, EventKind::PickupComplete, id, cid);
        break;
      }
      case TaxiPhase::OccupiedDriving: {
        const CustomerId cid = taxi.customer;
        const double trip = distance(taxi.motion->origin, taxi.motion->target);
        driven_[id] += trip;
        const double payment = cfg_.tariff.fixed_cost + cfg_.tariff.fare * trip;
        fares_[id] += payment;
        result_.metrics.total_payments += payment;
        customers_[cid].phase = CustomerPhase::Served;
        ++served_;
        transition(id, transition::ArriveAtDestination{}, t);
        log(t, EventKind::ArriveAtDestination, id, cid);
        break;
      }
      case TaxiPhase::DropoffDwell:
        transition(id, transition::DropoffComplete{}, t);
        log(t, EventKind::DropoffComplete, id, kNoCustomer);
        world_changed_ = true;
        break;
      case TaxiPhase::Available:
        throw SimulationLogicError(fmt::format("event for idle taxi {}", id));
    }
    schedule(id);
  }

  void note_supply() {
    std::size_t waiting = 0;
    for (CustomerId id : pending_) {
      if (customers_[id].phase == CustomerPhase::Unassigned) ++waiting;
    }
    if (waiting == 0) return;
    std::size_t free = 0;
    for (const Taxi& t : taxis_) {
      if (t.phase == TaxiPhase::Available) ++free;
    }
    if (waiting > free) result_.metrics.free_taxis_sufficed = false;
  }

  DispatchContext context(double clock) const {
    DispatchContext ctx;
    ctx.now = clock;
    ctx.taxis.reserve(taxis_.size());
    for (const Taxi& t : taxis_) ctx.taxis.push_back({t.id, classify(t.phase), position(t, clock)});
    ctx.customers.reserve(pending_.size());
    for (CustomerId id : pending_) ctx.customers.push_back(customers_[id]);
    ctx.current = assignment_;
    ctx.tariff = cfg_.tariff;
    ctx.dest_known = cfg_.dest_known;
    ctx.allow_displacement = cfg_.allow_displacement;
    return ctx;
  }

  void decide(double clock) {
    RunMetrics& m = result_.metrics;
    ++m.strategy_invocations;
    const DispatchContext ctx = context(clock);
    Assignment next;
    switch (cfg_.strategy) {
      case Strategy::Fcfs: next = fcfs(ctx); break;
      case Strategy::Ntnr: next = ntnr(ctx); break;
      case Strategy::FullAuction: next = fa(ctx); break;
      case Strategy::MinDist:
      case Strategy::MaxRev:
      case Strategy::Combined: {
        const Objective obj{objective_kind(cfg_.strategy), cfg_.gamma};
        CompensatedOutcome out = compensated_dispatch(ctx, obj, ledger_);
        ledger_ = out.ledger;
        if (out.proposed) {
          if (out.accepted) {
            ++accepted_;
            for (const Reassignment& r : out.reassignments) {
              compensation_[r.taxi] += r.compensation;
              m.total_compensation += r.compensation;
              CommittedReassignment rec;
              rec.time = clock;
              rec.change = r;
              rec.old_revenue = revenue(cfg_.tariff, r.old_quote);
              rec.effective_revenue = revenue(cfg_.tariff, r.new_quote) + r.compensation;
              result_.committed.push_back(rec);
            }
          } else {
            ++rejected_;
          }
        }
        next = std::move(out.assignment);
        break;
      }
    }
    apply(next, clock);
    result_.ledger.push_back({clock, ledger_.committed, accepted_, rejected_});
  }

  void apply(const Assignment& next, double clock) {
    RunMetrics& m = result_.metrics;
    for (const auto& [tid, cid] : assignment_) {
      const auto nc = next.customer_of(tid);
      if (nc && *nc == cid) continue;
      const Taxi& taxi = taxis_[tid];
      const Point here = position(taxi, clock);
      driven_[tid] += distance(taxi.motion->origin, here);
      if (!nc) {
        transition(tid, transition::Recall{here}, clock);
        ++m.recall_count;
        log(clock, EventKind::Recall, tid, cid);
      } else {
        transition(tid, transition::Reassign{*nc, customers_[*nc].origin, here}, clock);
        ++m.reassignment_count;
        log(clock, EventKind::Reassign, tid, *nc);
      }
      schedule(tid);
    }
    for (const auto& [tid, cid] : next) {
      if (assignment_.customer_of(tid)) continue;
      transition(tid, transition::Dispatch{cid, customers_[cid].origin}, clock);
      ++m.dispatch_count;
      log(clock, EventKind::Dispatch, tid, cid);
      schedule(tid);
    }
    for (const auto& [tid, cid] : assignment_) {
      const auto nt = next.taxi_of(cid);
      if (nt && *nt == tid) continue;
      ++records_[cid].reassigned_count;
      if (!nt) {
        customers_[cid].phase = CustomerPhase::Unassigned;
        customers_[cid].taxi = kNoTaxi;
        log(clock, EventKind::Unassign, kNoTaxi, cid);
      }
    }
    for (const auto& [tid, cid] : next) {
      customers_[cid].phase = CustomerPhase::Assigned;
      customers_[cid].taxi = tid;
    }
    assignment_ = next;
  }

  void check(double clock) const {
    auto fail = [clock](const std::string& what) {
      throw SimulationLogicError(fmt::format("t={}: {}", clock, what));
    };
    std::size_t dispatched = 0;
    for (const Taxi& t : taxis_) {
      const auto paired = assignment_.customer_of(t.id);
      const bool moving = t.phase == TaxiPhase::Dispatched || t.phase == TaxiPhase::OccupiedDriving;
      if (moving != t.motion.has_value()) fail(fmt::format("taxi {} motion/phase mismatch", t.id));
      if (t.phase == TaxiPhase::Dispatched) {
        ++dispatched;
        if (!paired || *paired != t.customer) fail(fmt::format("taxi {} not paired", t.id));
        const Customer& c = customers_[t.customer];
        if (c.phase != CustomerPhase::Assigned || c.taxi != t.id) {
          fail(fmt::format("customer {} does not know taxi {}", c.id, t.id));
        }
      } else if (paired) {
        fail(fmt::format("taxi {} in phase {} holds a pair", t.id, to_string(t.phase)));
      }
    }
    if (dispatched != assignment_.size()) fail("assignment size differs from dispatched count");
    for (CustomerId id : pending_) {
      const Customer& c = customers_[id];
      const auto paired = assignment_.taxi_of(id);
      if (c.phase == CustomerPhase::Assigned) {
        if (!paired || *paired != c.taxi) fail(fmt::format("customer {} pair mismatch", id));
      } else if (c.phase == CustomerPhase::Unassigned) {
        if (paired) fail(fmt::format("unassigned customer {} holds a pair", id));
      } else {
        fail(fmt::format("customer {} pending in phase {}", id, to_string(c.phase)));
      }
    }
    if (ledger_.committed < -kMoneyEpsilon) fail("mediator balance negative");
  }

  void finish() {
    RunMetrics& m = result_.metrics;
    double sum = 0.0;
    for (const Customer& c : customers_) {
      if (!c.pickup_time) continue;
      const double w = record_wait(c);
      m.waits.push_back(w);
      sum += w;
    }
    m.served_count = static_cast<int>(m.waits.size());
    m.avg_wait_min = m.waits.empty() ? 0.0 : sum / static_cast<double>(m.waits.size()) / 60.0;
    m.taxi_revenue.resize(taxis_.size());
    for (std::size_t i = 0; i < taxis_.size(); ++i) {
      const double op = cfg_.tariff.op_cost * driven_[i];
      m.total_operating_cost += op;
      m.taxi_revenue[i] = fares_[i] + compensation_[i] - op;
    }
    m.mediator_revenue = ledger_.committed;
    m.rejection_count = rejected_;
    m.accepted_proposals = accepted_;
    result_.customers = records_;
  }

  ScenarioConfig cfg_;
  RunOptions opts_;
  double speed_;
  std::vector<Taxi> taxis_;
  std::vector<std::uint64_t> version_;
  std::vector<double> fares_, compensation_, driven_;
  std::vector<Customer> customers_;
  std::vector<CustomerRecord> records_;
  std::vector<CustomerId> pending_;  // requested, not yet picked up; ascending
  std::size_t next_request_ = 0;
  std::size_t served_ = 0;
  Assignment assignment_;
  MediatorLedger ledger_;
  std::priority_queue<Scheduled, std::vector<Scheduled>, std::greater<>> queue_;
  bool world_changed_ = false;
  int accepted_ = 0;
  int rejected_ = 0;
  RunResult result_;
};

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg, const std::vector<Point>& taxi_positions,
                       std::vector<Customer> customers, const RunOptions& options) {
  Simulator sim(cfg, taxi_positions, std::move(customers), options);
  return sim.run();
}

RunResult run(const ScenarioConfig& cfg, const RunOptions& options) {
  cfg.validate();
  return run_scenario(cfg, initial_fleet(cfg), generate_customers(cfg), options);
}

}  // namespace taxidisp
