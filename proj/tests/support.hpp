#pragma once

// Shared generators and oracle helpers for the property tests.

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "projlim/intervals.hpp"
#include "projlim/rng.hpp"

namespace testsupport {

using namespace projlim;

// Endpoints drawn from a small grid half the time so that generated sets
// share boundaries (adjacency and exact-touch cases), continuous otherwise.
inline double random_endpoint(RandomSource& rng) {
  if (rng.uniform01() < 0.5) {
    static const double grid[] = {-3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0};
    return grid[rng.next_u64() % 9];
  }
  return -5.0 + 10.0 * rng.uniform01();
}

inline std::vector<Interval> random_raw_intervals(RandomSource& rng, int max_count = 4) {
  const std::size_t k = rng.next_u64() % static_cast<std::size_t>(max_count + 1);
  std::vector<Interval> out;
  for (std::size_t i = 0; i < k; ++i) {
    double a = random_endpoint(rng);
    double b = random_endpoint(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (rng.uniform01() < 0.08) a = -kInf;
    if (rng.uniform01() < 0.08) b = kInf;
    out.push_back({a, b});
  }
  return out;
}

inline QSet random_qset(RandomSource& rng, int max_count = 4) {
  return QSet::from_intervals(random_raw_intervals(rng, max_count));
}

// Probe points covering grid boundaries, their neighborhoods, and noise.
inline std::vector<double> sample_points(RandomSource& rng, std::size_t n) {
  std::vector<double> pts;
  pts.reserve(n + 36);
  for (double g : {-3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0}) {
    pts.push_back(g);
    pts.push_back(g - 1e-9);
    pts.push_back(g + 1e-9);
    pts.push_back(std::nextafter(g, kInf));
  }
  for (std::size_t i = pts.size(); i < n; ++i) pts.push_back(-6.0 + 12.0 * rng.uniform01());
  return pts;
}

// Partition with contiguous interval cells from random distinct cuts.
inline Partition random_cut_partition(RandomSource& rng, int max_cuts = 5) {
  std::set<double> cuts;
  const std::size_t k = 1 + rng.next_u64() % static_cast<std::size_t>(max_cuts);
  for (std::size_t i = 0; i < k; ++i) cuts.insert(random_endpoint(rng));
  return Partition::from_cut_points(std::vector<double>(cuts.begin(), cuts.end()));
}

// Coarsening of `fine` with randomly merged (possibly non-contiguous) cells.
inline Partition random_merge(const Partition& fine, RandomSource& rng) {
  const std::size_t n = fine.size();
  const std::size_t m = 1 + rng.next_u64() % n;
  std::vector<QSet> groups(m);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t g = j < m ? j : rng.next_u64() % m;  // every group non-empty
    groups[g] = set_union(groups[g], fine.cell(j));
  }
  return Partition::from_cells(std::move(groups));
}

inline SimplexPoint random_simplex_point(std::size_t dim, RandomSource& rng) {
  std::vector<double> v(dim);
  double total = 0.0;
  for (double& x : v) {
    x = rng.gamma(1.0);
    total += x;
  }
  for (double& x : v) x /= total;
  return SimplexPoint::from_masses(std::move(v));
}

}  // namespace testsupport
