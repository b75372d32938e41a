#pragma once

#include <cstdint>
#include <vector>

#include "polyvem/geometry.hpp"

namespace polyvem {

struct PoissonDiskOptions {
  double radius = 0.1;
  int attempts = 30;
  std::uint64_t seed = 0;
  Point2 lo{0, 0};
  Point2 hi{1, 1};
};

/// Bridson's dart throwing in the box [lo, hi]. Returned samples keep at
/// least `radius` from each other and from the `fixed` points, which also
/// seed the active list. Without fixed points the first sample is uniform.
std::vector<Point2> poisson_disk(const PoissonDiskOptions& opt, const std::vector<Point2>& fixed = {});

}  // namespace polyvem
