#pragma once

#include <string>
#include <vector>

#include "taxidisp/dispatch.hpp"

namespace taxidisp {

/// Two taxis, two customers, taken at the moment the second customer
/// calls. Taxi 0 left (1800, 0) for customer 0 at the origin and has
/// covered 150 m; taxi 1 waits 2 km away. Current pickup total is 4 km;
/// swapping the customers brings it to 3.5 km. Coordinates are shifted by
/// `offset` to sit inside the default area.
DispatchContext swap_improvable_context(Point offset = {4000.0, 4000.0});

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast self-checks of the solver, the economics and the simulator
/// against independent oracles.
std::vector<CheckResult> run_self_checks();

}  // namespace taxidisp
