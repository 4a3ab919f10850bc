#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "taxidisp/fleet.hpp"

using namespace taxidisp;

namespace {

Taxi dispatched(TaxiId id, CustomerId c, double t = 0.0) {
  return apply_transition(Taxi::available_at(id, {0, 0}), transition::Dispatch{c, {100, 0}}, t);
}

}  // namespace

TEST_CASE("partition_taxis maps phases to classes") {
  std::vector<Taxi> fleet = {Taxi::available_at(0, {0, 0}), dispatched(1, 7),
                             Taxi::available_at(2, {0, 0})};
  fleet[2] = dispatched(2, 2);
  fleet[2] = apply_transition(fleet[2], transition::ArriveAtCustomer{}, 10);
  fleet[2] = apply_transition(fleet[2], transition::PickupComplete{{500, 500}}, 40);
  REQUIRE(fleet[2].phase == TaxiPhase::OccupiedDriving);

  const FleetPartition p = partition_taxis(fleet);
  CHECK(p.available == std::vector<TaxiId>{0});
  CHECK(p.dispatched == std::vector<TaxiId>{1});
  CHECK(p.occupied == std::vector<TaxiId>{2});
}

TEST_CASE("partition_taxis on empty and all-available fleets") {
  const FleetPartition empty = partition_taxis({});
  CHECK(empty.available.empty());
  CHECK(empty.dispatched.empty());
  CHECK(empty.occupied.empty());

  const std::vector<Taxi> two = {Taxi::available_at(0, {1, 1}), Taxi::available_at(1, {2, 2})};
  const FleetPartition p = partition_taxis(two);
  CHECK(p.available == std::vector<TaxiId>{0, 1});
  CHECK(p.dispatched.empty());
  CHECK(p.occupied.empty());
}

TEST_CASE("dwell phases count as occupied") {
  Taxi t = apply_transition(dispatched(0, 3), transition::ArriveAtCustomer{}, 5);
  CHECK(partition_taxis(std::vector<Taxi>{t}).occupied == std::vector<TaxiId>{0});
}

TEST_CASE("full lifecycle with dwell times") {
  Taxi t = Taxi::available_at(4, {0, 0});
  t = apply_transition(t, transition::Dispatch{5, {0, 1700}}, 100);
  CHECK(t.phase == TaxiPhase::Dispatched);
  CHECK(t.customer == 5);
  REQUIRE(t.motion);
  CHECK(t.motion->target == Point{0, 1700});
  CHECK(t.motion->depart == 100);

  t = apply_transition(t, transition::ArriveAtCustomer{}, 200);
  CHECK(t.phase == TaxiPhase::PickupDwell);
  CHECK(t.customer == 5);
  CHECK(t.until == 230);
  CHECK(t.stationary == Point{0, 1700});
  CHECK_FALSE(t.motion);

  t = apply_transition(t, transition::PickupComplete{{0, 3400}}, 230);
  CHECK(t.phase == TaxiPhase::OccupiedDriving);
  REQUIRE(t.motion);
  CHECK(t.motion->origin == Point{0, 1700});

  t = apply_transition(t, transition::ArriveAtDestination{}, 900);
  CHECK(t.phase == TaxiPhase::DropoffDwell);
  CHECK(t.until == 990);
  CHECK(t.customer == kNoCustomer);
  CHECK(t.stationary == Point{0, 3400});

  t = apply_transition(t, transition::DropoffComplete{}, 990);
  CHECK(t.phase == TaxiPhase::Available);
  CHECK(t.stationary == Point{0, 3400});
}

TEST_CASE("custom dwell times are honored") {
  Taxi t = apply_transition(dispatched(0, 1), transition::ArriveAtCustomer{}, 50, {10, 20});
  CHECK(t.until == 60);
}

TEST_CASE("reassignment keeps the taxi dispatched and restarts motion") {
  Taxi t = dispatched(0, 5, 0);
  t = apply_transition(t, transition::Reassign{6, {0, 900}, {40, 0}}, 20);
  CHECK(t.phase == TaxiPhase::Dispatched);
  CHECK(t.customer == 6);
  REQUIRE(t.motion);
  CHECK(t.motion->origin == Point{40, 0});
  CHECK(t.motion->target == Point{0, 900});
  CHECK(t.motion->depart == 20);
}

TEST_CASE("recall stops a dispatched taxi") {
  Taxi t = apply_transition(dispatched(0, 5), transition::Recall{{30, 0}}, 15);
  CHECK(t.phase == TaxiPhase::Available);
  CHECK(t.customer == kNoCustomer);
  CHECK(t.stationary == Point{30, 0});
  CHECK_FALSE(t.motion);
}

TEST_CASE("illegal transitions throw") {
  const Taxi avail = Taxi::available_at(0, {0, 0});
  CHECK_THROWS_AS(apply_transition(avail, transition::ArriveAtCustomer{}, 0), SimulationLogicError);
  CHECK_THROWS_AS(apply_transition(avail, transition::Reassign{1, {}, {}}, 0), SimulationLogicError);
  CHECK_THROWS_AS(apply_transition(avail, transition::DropoffComplete{}, 0), SimulationLogicError);

  const Taxi disp = dispatched(0, 1);
  CHECK_THROWS_AS(apply_transition(disp, transition::Dispatch{2, {}}, 0), SimulationLogicError);
  CHECK_THROWS_AS(apply_transition(disp, transition::PickupComplete{{}}, 0), SimulationLogicError);
  CHECK_THROWS_AS(apply_transition(disp, transition::Reassign{1, {}, {}}, 0),
                  SimulationLogicError);

  const Taxi dwell = apply_transition(disp, transition::ArriveAtCustomer{}, 0);
  CHECK_THROWS_AS(apply_transition(dwell, transition::Reassign{2, {}, {}}, 0),
                  SimulationLogicError);
  CHECK_THROWS_AS(apply_transition(dwell, transition::Recall{{}}, 0), SimulationLogicError);
}

TEST_CASE("legal transition set is closed") {
  // Every (phase, event) pair either throws or lands in the documented successor.
  const std::vector<TransitionEvent> events = {
      transition::Dispatch{9, {1, 1}}, transition::Reassign{8, {2, 2}, {0, 0}},
      transition::Recall{{0, 0}},      transition::ArriveAtCustomer{},
      transition::PickupComplete{{3, 3}}, transition::ArriveAtDestination{},
      transition::DropoffComplete{}};
  std::vector<Taxi> samples;
  Taxi t = Taxi::available_at(0, {0, 0});
  samples.push_back(t);
  t = apply_transition(t, transition::Dispatch{1, {5, 5}}, 0);
  samples.push_back(t);
  t = apply_transition(t, transition::ArriveAtCustomer{}, 1);
  samples.push_back(t);
  t = apply_transition(t, transition::PickupComplete{{6, 6}}, 2);
  samples.push_back(t);
  t = apply_transition(t, transition::ArriveAtDestination{}, 3);
  samples.push_back(t);

  auto successor = [](TaxiPhase from, std::size_t event) -> std::optional<TaxiPhase> {
    using P = TaxiPhase;
    switch (event) {
      case 0: return from == P::Available ? std::optional(P::Dispatched) : std::nullopt;
      case 1:
      case 2:
        if (from != P::Dispatched) return std::nullopt;
        return event == 1 ? P::Dispatched : P::Available;
      case 3: return from == P::Dispatched ? std::optional(P::PickupDwell) : std::nullopt;
      case 4: return from == P::PickupDwell ? std::optional(P::OccupiedDriving) : std::nullopt;
      case 5: return from == P::OccupiedDriving ? std::optional(P::DropoffDwell) : std::nullopt;
      default: return from == P::DropoffDwell ? std::optional(P::Available) : std::nullopt;
    }
  };
  for (const Taxi& s : samples) {
    for (std::size_t e = 0; e < events.size(); ++e) {
      const auto expected = successor(s.phase, e);
      if (expected) {
        CHECK(apply_transition(s, events[e], 10).phase == *expected);
      } else {
        CHECK_THROWS_AS(apply_transition(s, events[e], 10), SimulationLogicError);
      }
    }
  }
}

TEST_CASE("Assignment is injective") {
  Assignment a;
  a.add(1, 10);
  a.add(2, 20);
  CHECK_THROWS_AS(a.add(1, 30), std::invalid_argument);
  CHECK_THROWS_AS(a.add(3, 20), std::invalid_argument);
  CHECK(a.size() == 2);
  CHECK(a.customer_of(2) == 20);
  CHECK(a.taxi_of(10) == 1);
  CHECK_FALSE(a.taxi_of(30).has_value());
  CHECK(a.contains(1, 10));
  CHECK_FALSE(a.contains(1, 20));

  a.remove_taxi(1);
  CHECK_FALSE(a.taxi_of(10).has_value());
  a.add(3, 10);
  CHECK(a.pairs() == std::vector<Assignment::Pair>{{2, 20}, {3, 10}});
  CHECK(a == Assignment{{3, 10}, {2, 20}});
}
