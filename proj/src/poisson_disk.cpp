#include "polyvem/poisson_disk.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace polyvem {

std::vector<Point2> poisson_disk(const PoissonDiskOptions& opt, const std::vector<Point2>& fixed) {
  if (!(opt.radius > 0)) throw std::invalid_argument("poisson_disk: radius must be positive");
  const double r = opt.radius, cell = r / std::sqrt(2.0);
  const double w = opt.hi.x - opt.lo.x, hgt = opt.hi.y - opt.lo.y;
  const int gx = std::max(1, static_cast<int>(std::ceil(w / cell)));
  const int gy = std::max(1, static_cast<int>(std::ceil(hgt / cell)));
  std::vector<std::vector<int>> grid(static_cast<std::size_t>(gx) * gy);
  std::vector<Point2> all;

  auto cell_of = [&](Point2 p) {
    int cx = std::clamp(static_cast<int>((p.x - opt.lo.x) / cell), 0, gx - 1);
    int cy = std::clamp(static_cast<int>((p.y - opt.lo.y) / cell), 0, gy - 1);
    return std::make_pair(cx, cy);
  };
  auto far_enough = [&](Point2 p) {
    auto [cx, cy] = cell_of(p);
    for (int y = std::max(0, cy - 2); y <= std::min(gy - 1, cy + 2); ++y)
      for (int x = std::max(0, cx - 2); x <= std::min(gx - 1, cx + 2); ++x)
        for (int i : grid[static_cast<std::size_t>(y) * gx + x])
          if (distance(all[i], p) < r) return false;
    return true;
  };
  auto add = [&](Point2 p) {
    auto [cx, cy] = cell_of(p);
    grid[static_cast<std::size_t>(cy) * gx + cx].push_back(static_cast<int>(all.size()));
    all.push_back(p);
  };

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> active;
  for (Point2 p : fixed) {
    active.push_back(static_cast<int>(all.size()));
    add(p);
  }
  const std::size_t n_fixed = all.size();
  if (active.empty()) {
    active.push_back(0);
    add({opt.lo.x + w * unit(rng), opt.lo.y + hgt * unit(rng)});
  }
  while (!active.empty()) {
    std::size_t pick = static_cast<std::size_t>(unit(rng) * active.size()) % active.size();
    Point2 base = all[active[pick]];
    bool placed = false;
    for (int k = 0; k < opt.attempts; ++k) {
      double rho = r * std::sqrt(1.0 + 3.0 * unit(rng));  // uniform in the annulus [r, 2r]
      double th = 2 * M_PI * unit(rng);
      Point2 c{base.x + rho * std::cos(th), base.y + rho * std::sin(th)};
      if (c.x < opt.lo.x || c.x > opt.hi.x || c.y < opt.lo.y || c.y > opt.hi.y) continue;
      if (!far_enough(c)) continue;
      active.push_back(static_cast<int>(all.size()));
      add(c);
      placed = true;
      break;
    }
    if (!placed) {
      active[pick] = active.back();
      active.pop_back();
    }
  }
  return {all.begin() + static_cast<std::ptrdiff_t>(n_fixed), all.end()};
}

}  // namespace polyvem
