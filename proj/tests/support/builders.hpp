#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "atmroute/instance.hpp"
#include "atmroute/plan.hpp"
#include "atmroute/scenario.hpp"

namespace atmtest {

using namespace atmroute;

std::string fixture(const std::string& name);

// Hand-built instances. Nodes sit at planar points; distances are Euclidean
// rounded to the meter unless a matrix is given.
class InstanceBuilder {
public:
  explicit InstanceBuilder(int periods);

  InstanceBuilder& depot(double x, double y);
  InstanceBuilder& atm(Money initial, std::vector<Money> withdrawals, double x, double y,
                       TimeWindow window = {480, 1020}, Minutes service = 10, Money demand = 0);
  InstanceBuilder& vehicle(DepotIndex home, Money capacity = 10'000'000'000, Money cost_per_km = 1'000,
                           double speed_kmh = 60.0);
  InstanceBuilder& depot_window(TimeWindow w);
  InstanceBuilder& max_route_time(Minutes m);
  InstanceBuilder& horizon_km(double km);
  InstanceBuilder& bounds(Money lower, Money upper);
  InstanceBuilder& rate_ppm(std::int64_t ppm);
  InstanceBuilder& distances(std::function<double(NodeIndex, NodeIndex)> km);

  Instance build() const;

private:
  Instance inst_;
  std::vector<Position> points_;
  std::function<double(NodeIndex, NodeIndex)> km_;
};

// Small synthetic instance from the scenario generator with loose limits.
Instance small_scenario(std::uint64_t seed, int atms, int depots, int vehicles_per_depot, int periods);

// Random plan over an instance: random routes (each ATM at most once per
// period) and random deposits, some of them driving balances negative.
Plan random_plan(const Instance& inst, std::mt19937_64& rng);

// Uniform integer in [lo, hi].
std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi);

} // namespace atmtest
