#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace taxidisp {

using TaxiId = int;
using CustomerId = int;

inline constexpr TaxiId kNoTaxi = -1;
inline constexpr CustomerId kNoCustomer = -1;

/// Planar position in meters.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Thrown when the simulator reaches a state its own rules forbid.
/// Never recoverable: the run that raised it must be discarded.
class SimulationLogicError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Thrown for invalid user-supplied parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Taxi
// ---------------------------------------------------------------------------

enum class TaxiPhase {
  Available,
  Dispatched,
  PickupDwell,
  OccupiedDriving,
  DropoffDwell,
};

const char* to_string(TaxiPhase phase);

/// A straight-line, constant-speed trip segment.
struct Motion {
  Point origin;
  Point target;
  double depart = 0.0;
};

struct Taxi {
  TaxiId id = kNoTaxi;
  TaxiPhase phase = TaxiPhase::Available;
  // Set while Dispatched, PickupDwell and OccupiedDriving.
  CustomerId customer = kNoCustomer;
  // End of the current dwell; meaningful only in the dwell phases.
  double until = 0.0;
  // Where the taxi stands when it has no motion.
  Point stationary;
  // Present exactly in Dispatched and OccupiedDriving.
  std::optional<Motion> motion;

  static Taxi available_at(TaxiId id, Point where);
};

/// Dwell durations applied by the lifecycle transitions, in seconds.
struct DwellTimes {
  double pickup = 30.0;
  double dropoff = 90.0;
};

namespace transition {
/// Available -> Dispatched.
struct Dispatch {
  CustomerId customer;
  Point pickup;
};
/// Dispatched -> Dispatched with a different customer. `from` is the
/// interpolated position at the decision instant.
struct Reassign {
  CustomerId customer;
  Point pickup;
  Point from;
};
/// Dispatched -> Available; the taxi stops where it is.
struct Recall {
  Point at;
};
/// Dispatched -> PickupDwell.
struct ArriveAtCustomer {};
/// PickupDwell -> OccupiedDriving.
struct PickupComplete {
  Point destination;
};
/// OccupiedDriving -> DropoffDwell.
struct ArriveAtDestination {};
/// DropoffDwell -> Available.
struct DropoffComplete {};
}  // namespace transition

using TransitionEvent =
    std::variant<transition::Dispatch, transition::Reassign, transition::Recall,
                 transition::ArriveAtCustomer, transition::PickupComplete,
                 transition::ArriveAtDestination, transition::DropoffComplete>;

/// Returns `taxi` moved to the successor state of `event` at time `now`.
/// Throws SimulationLogicError when the event is illegal in the current phase.
Taxi apply_transition(const Taxi& taxi, const TransitionEvent& event, double now,
                      const DwellTimes& dwell = {});

struct FleetPartition {
  std::vector<TaxiId> available;
  std::vector<TaxiId> dispatched;
  std::vector<TaxiId> occupied;
};

/// Splits the fleet into available, dispatched and occupied ids. Both dwell
/// phases and OccupiedDriving count as occupied. Each list is in fleet order.
FleetPartition partition_taxis(std::span<const Taxi> fleet);

// ---------------------------------------------------------------------------
// Customer
// ---------------------------------------------------------------------------

enum class CustomerPhase {
  Unassigned,
  Assigned,
  InService,
  Served,
};

const char* to_string(CustomerPhase phase);

struct Customer {
  CustomerId id = kNoCustomer;
  double request_time = 0.0;
  Point origin;
  Point destination;
  bool dest_known = false;
  CustomerPhase phase = CustomerPhase::Unassigned;
  TaxiId taxi = kNoTaxi;
  std::optional<double> pickup_time;
};

// ---------------------------------------------------------------------------
// Assignment
// ---------------------------------------------------------------------------

/// Injective set of taxi/customer pairs. Iteration is ordered by taxi id.
class Assignment {
 public:
  using Pair = std::pair<TaxiId, CustomerId>;

  Assignment() = default;
  Assignment(std::initializer_list<Pair> pairs);

  /// Throws std::invalid_argument if either side is already paired.
  void add(TaxiId taxi, CustomerId customer);
  /// Removes the pair holding `taxi`, if any.
  void remove_taxi(TaxiId taxi);

  std::optional<CustomerId> customer_of(TaxiId taxi) const;
  std::optional<TaxiId> taxi_of(CustomerId customer) const;
  bool contains(TaxiId taxi, CustomerId customer) const;

  std::size_t size() const { return by_taxi_.size(); }
  bool empty() const { return by_taxi_.empty(); }
  std::vector<Pair> pairs() const;

  auto begin() const { return by_taxi_.begin(); }
  auto end() const { return by_taxi_.end(); }

  friend bool operator==(const Assignment& a, const Assignment& b) {
    return a.by_taxi_ == b.by_taxi_;
  }

 private:
  std::map<TaxiId, CustomerId> by_taxi_;
  std::map<CustomerId, TaxiId> by_customer_;
};

}  // namespace taxidisp
