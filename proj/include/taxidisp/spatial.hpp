#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "taxidisp/fleet.hpp"
#include "taxidisp/rng.hpp"

namespace taxidisp {

struct AreaSpec {
  double width = 9000.0;
  double height = 9000.0;

  bool contains(Point p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
  }
  Point center() const { return {width / 2.0, height / 2.0}; }
};

enum class TripDistribution { Uniform, Center };

TripDistribution parse_distribution(std::string_view name);
const char* to_string(TripDistribution d);

struct DemandSpec {
  int customers_per_interval = 250;
  double interval = 900.0;
  double horizon = 18000.0;
  TripDistribution distribution = TripDistribution::Uniform;
};

/// Shape of the center-bound / center-leaving trip generator.
struct CenterDistParams {
  double center_sigma = 1000.0;
  double boundary_sigma = 1000.0;
  // Probability that a trip leaves the center.
  double outbound_prob = 0.5;
};

/// Euclidean distance in meters.
double distance(Point a, Point b);

/// Seconds to cover `meters` at `speed` m/s. Throws ConfigError for speed <= 0.
double travel_time(double meters, double speed);

/// Position at time `now` on the segment origin -> target, departed at
/// `depart` with constant `speed`. Throws SimulationLogicError if `now` lies
/// outside the motion window.
Point position_at(Point origin, Point target, double depart, double speed, double now);

Point gen_uniform_point(Rng& rng, const AreaSpec& area);

struct Trip {
  Point origin;
  Point destination;
};

/// A trip between a point near the area center and a point near the
/// boundary; direction chosen with `params.outbound_prob`. Samples falling
/// outside the area are redrawn.
Trip gen_center_trip(Rng& rng, const AreaSpec& area, const CenterDistParams& params);

/// Same as gen_center_trip, also reporting whether the trip left the center.
Trip gen_center_trip(Rng& rng, const AreaSpec& area, const CenterDistParams& params,
                     bool& outbound);

/// `customers_per_interval` requests in every interval of the horizon,
/// sorted by request time, ids 0..n-1 in that order. Requests are
/// Unassigned and carry `dest_known`.
std::vector<Customer> gen_demand(Rng& rng, const DemandSpec& demand, const AreaSpec& area,
                                 const CenterDistParams& params, bool dest_known = false);

}  // namespace taxidisp
