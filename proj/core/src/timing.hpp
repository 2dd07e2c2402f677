#pragma once

#include <vector>

#include "atmroute/feasibility.hpp"

namespace atmroute::detail {

// Earliest-service time chain along any node sequence, well formed or not.
// Interior depots are passed through with zero service time.
Timeline earliest_times(const Instance& inst, const std::vector<NodeIndex>& nodes,
                        VehicleIndex h, Minutes departure);

} // namespace atmroute::detail
