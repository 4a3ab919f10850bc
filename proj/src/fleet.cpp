#include "taxidisp/fleet.hpp"

#include <fmt/format.h>

namespace taxidisp {

const char* to_string(TaxiPhase phase) {
  switch (phase) {
    case TaxiPhase::Available: return "Available";
    case TaxiPhase::Dispatched: return "Dispatched";
    case TaxiPhase::PickupDwell: return "PickupDwell";
    case TaxiPhase::OccupiedDriving: return "OccupiedDriving";
    case TaxiPhase::DropoffDwell: return "DropoffDwell";
  }
  return "?";
}

const char* to_string(CustomerPhase phase) {
  switch (phase) {
    case CustomerPhase::Unassigned: return "Unassigned";
    case CustomerPhase::Assigned: return "Assigned";
    case CustomerPhase::InService: return "InService";
    case CustomerPhase::Served: return "Served";
  }
  return "?";
}

Taxi Taxi::available_at(TaxiId id, Point where) {
  Taxi t;
  t.id = id;
  t.stationary = where;
  return t;
}

namespace {

[[noreturn]] void illegal(const Taxi& taxi, const char* event) {
  throw SimulationLogicError(fmt::format("taxi {}: illegal transition '{}' from {}",
                                         taxi.id, event, to_string(taxi.phase)));
}

struct TransitionVisitor {
  Taxi taxi;
  double now;
  const DwellTimes& dwell;

  Taxi operator()(const transition::Dispatch& e) {
    if (taxi.phase != TaxiPhase::Available) illegal(taxi, "dispatch");
    taxi.phase = TaxiPhase::Dispatched;
    taxi.customer = e.customer;
    taxi.motion = Motion{taxi.stationary, e.pickup, now};
    return taxi;
  }

  Taxi operator()(const transition::Reassign& e) {
    if (taxi.phase != TaxiPhase::Dispatched) illegal(taxi, "reassign");
    if (e.customer == taxi.customer) illegal(taxi, "reassign to same customer");
    taxi.customer = e.customer;
    taxi.motion = Motion{e.from, e.pickup, now};
    return taxi;
  }

  Taxi operator()(const transition::Recall& e) {
    if (taxi.phase != TaxiPhase::Dispatched) illegal(taxi, "recall");
    taxi.phase = TaxiPhase::Available;
    taxi.customer = kNoCustomer;
    taxi.motion.reset();
    taxi.stationary = e.at;
    return taxi;
  }

  Taxi operator()(const transition::ArriveAtCustomer&) {
    if (taxi.phase != TaxiPhase::Dispatched) illegal(taxi, "arrive-at-customer");
    taxi.phase = TaxiPhase::PickupDwell;
    taxi.stationary = taxi.motion->target;
    taxi.motion.reset();
    taxi.until = now + dwell.pickup;
    return taxi;
  }

  Taxi operator()(const transition::PickupComplete& e) {
    if (taxi.phase != TaxiPhase::PickupDwell) illegal(taxi, "pickup-complete");
    taxi.phase = TaxiPhase::OccupiedDriving;
    taxi.motion = Motion{taxi.stationary, e.destination, now};
    return taxi;
  }

  Taxi operator()(const transition::ArriveAtDestination&) {
    if (taxi.phase != TaxiPhase::OccupiedDriving) illegal(taxi, "arrive-at-destination");
    taxi.phase = TaxiPhase::DropoffDwell;
    taxi.customer = kNoCustomer;
    taxi.stationary = taxi.motion->target;
    taxi.motion.reset();
    taxi.until = now + dwell.dropoff;
    return taxi;
  }

  Taxi operator()(const transition::DropoffComplete&) {
    if (taxi.phase != TaxiPhase::DropoffDwell) illegal(taxi, "dropoff-complete");
    taxi.phase = TaxiPhase::Available;
    return taxi;
  }
};

}  // namespace

Taxi apply_transition(const Taxi& taxi, const TransitionEvent& event, double now,
                      const DwellTimes& dwell) {
  return std::visit(TransitionVisitor{taxi, now, dwell}, event);
}

FleetPartition partition_taxis(std::span<const Taxi> fleet) {
  FleetPartition out;
  for (const Taxi& t : fleet) {
    switch (t.phase) {
      case TaxiPhase::Available: out.available.push_back(t.id); break;
      case TaxiPhase::Dispatched: out.dispatched.push_back(t.id); break;
      default: out.occupied.push_back(t.id); break;
    }
  }
  return out;
}

Assignment::Assignment(std::initializer_list<Pair> pairs) {
  for (const auto& [t, c] : pairs) add(t, c);
}

void Assignment::add(TaxiId taxi, CustomerId customer) {
  if (by_taxi_.contains(taxi)) {
    throw std::invalid_argument(fmt::format("taxi {} already assigned", taxi));
  }
  if (by_customer_.contains(customer)) {
    throw std::invalid_argument(fmt::format("customer {} already assigned", customer));
  }
  by_taxi_.emplace(taxi, customer);
  by_customer_.emplace(customer, taxi);
}

void Assignment::remove_taxi(TaxiId taxi) {
  auto it = by_taxi_.find(taxi);
  if (it == by_taxi_.end()) return;
  by_customer_.erase(it->second);
  by_taxi_.erase(it);
}

std::optional<CustomerId> Assignment::customer_of(TaxiId taxi) const {
  auto it = by_taxi_.find(taxi);
  if (it == by_taxi_.end()) return std::nullopt;
  return it->second;
}

std::optional<TaxiId> Assignment::taxi_of(CustomerId customer) const {
  auto it = by_customer_.find(customer);
  if (it == by_customer_.end()) return std::nullopt;
  return it->second;
}

bool Assignment::contains(TaxiId taxi, CustomerId customer) const {
  auto it = by_taxi_.find(taxi);
  return it != by_taxi_.end() && it->second == customer;
}

std::vector<Assignment::Pair> Assignment::pairs() const {
  return {by_taxi_.begin(), by_taxi_.end()};
}

}  // namespace taxidisp
