#include "taxidisp/spatial.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace taxidisp {

TripDistribution parse_distribution(std::string_view name) {
  if (name == "uniform") return TripDistribution::Uniform;
  if (name == "center") return TripDistribution::Center;
  throw ConfigError(fmt::format("unknown distribution '{}' (expected uniform|center)", name));
}

const char* to_string(TripDistribution d) {
  return d == TripDistribution::Uniform ? "uniform" : "center";
}

double distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

double travel_time(double meters, double speed) {
  if (!(speed > 0.0)) throw ConfigError(fmt::format("speed must be positive, got {}", speed));
  return meters / speed;
}

Point position_at(Point origin, Point target, double depart, double speed, double now) {
  const double len = distance(origin, target);
  const double duration = travel_time(len, speed);
  // Allow a few ulps of slack around the window ends.
  const double slack = 1e-9 * std::max(1.0, std::abs(depart) + duration);
  if (now < depart - slack || now > depart + duration + slack) {
    throw SimulationLogicError(fmt::format(
        "position_at: time {} outside motion window [{}, {}]", now, depart, depart + duration));
  }
  if (now <= depart || len == 0.0) return origin;
  if (now >= depart + duration) return target;
  const double f = (now - depart) / duration;
  return {origin.x + (target.x - origin.x) * f, origin.y + (target.y - origin.y) * f};
}

Point gen_uniform_point(Rng& rng, const AreaSpec& area) {
  const double x = rng.uniform(0.0, area.width);
  const double y = rng.uniform(0.0, area.height);
  return {x, y};
}

namespace {

Point normal_inside(Rng& rng, const AreaSpec& area, Point mean, double sigma) {
  for (;;) {
    const double x = rng.normal(mean.x, sigma);
    const double y = rng.normal(mean.y, sigma);
    const Point p{x, y};
    if (area.contains(p)) return p;
  }
}

Point uniform_on_boundary(Rng& rng, const AreaSpec& area) {
  const double perimeter = 2.0 * (area.width + area.height);
  double s = rng.uniform(0.0, perimeter);
  if (s < area.width) return {s, 0.0};
  s -= area.width;
  if (s < area.height) return {area.width, s};
  s -= area.height;
  if (s < area.width) return {area.width - s, area.height};
  s -= area.width;
  return {0.0, area.height - s};
}

}  // namespace

Trip gen_center_trip(Rng& rng, const AreaSpec& area, const CenterDistParams& params,
                     bool& outbound) {
  outbound = rng.uniform01() < params.outbound_prob;
  const Point center = normal_inside(rng, area, area.center(), params.center_sigma);
  const Point anchor = uniform_on_boundary(rng, area);
  const Point outside = normal_inside(rng, area, anchor, params.boundary_sigma);
  return outbound ? Trip{center, outside} : Trip{outside, center};
}

Trip gen_center_trip(Rng& rng, const AreaSpec& area, const CenterDistParams& params) {
  bool outbound = false;
  return gen_center_trip(rng, area, params, outbound);
}

std::vector<Customer> gen_demand(Rng& rng, const DemandSpec& demand, const AreaSpec& area,
                                 const CenterDistParams& params, bool dest_known) {
  std::vector<Customer> out;
  if (demand.customers_per_interval <= 0) return out;
  const auto intervals = static_cast<int>(std::ceil(demand.horizon / demand.interval - 1e-9));
  out.reserve(static_cast<std::size_t>(intervals) * demand.customers_per_interval);
  for (int k = 0; k < intervals; ++k) {
    const double start = k * demand.interval;
    const double end = std::min(start + demand.interval, demand.horizon);
    for (int n = 0; n < demand.customers_per_interval; ++n) {
      Customer c;
      c.request_time = start + (end - start) * rng.uniform01();
      if (demand.distribution == TripDistribution::Uniform) {
        c.origin = gen_uniform_point(rng, area);
        c.destination = gen_uniform_point(rng, area);
      } else {
        const Trip trip = gen_center_trip(rng, area, params);
        c.origin = trip.origin;
        c.destination = trip.destination;
      }
      c.dest_known = dest_known;
      out.push_back(c);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Customer& a, const Customer& b) {
    return a.request_time < b.request_time;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<CustomerId>(i);
  return out;
}

}  // namespace taxidisp
