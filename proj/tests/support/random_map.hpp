// Seeded synthetic maps: a jittered lattice of quadrilateral regions whose
// shared edges are wiggly polylines, with log-uniform densities.
#ifndef CARTO_TEST_RANDOM_MAP_HPP
#define CARTO_TEST_RANDOM_MAP_HPP

#include "carto/geometry.hpp"
#include "carto/topology.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace random_map
{

struct Options {
  int min_regions = 2;
  int max_regions = 20;
  double max_disparity = 1e4;
};

struct Map {
  carto::RegionSet regions;
  std::size_t grid_size = 64;
};

namespace detail
{

using Line = std::vector<carto::Point>;

// Polyline from a to b with m pieces, interior points pushed sideways.
inline Line wiggle(carto::Point a, carto::Point b, int m, double amp, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> off(-amp, amp);
  const carto::Point d = b - a;
  const carto::Point nrm{-d.y, d.x};
  Line l{a};
  for (int k = 1; k < m; ++k) {
    const double t = double(k) / m;
    l.push_back(a + t * d + off(rng) * nrm);
  }
  l.push_back(b);
  return l;
}

inline void append(carto::Ring &ring, const Line &l, bool reversed)
{
  const std::size_t n = l.size();
  for (std::size_t k = 0; k + 1 < n; ++k) ring.push_back(reversed ? l[n - 1 - k] : l[k]);
}

inline Map attempt(std::mt19937_64 &rng, const Options &o)
{
  std::uniform_int_distribution<int> pick_regions(o.min_regions, o.max_regions);
  const int want = pick_regions(rng);
  int cols = 1;
  for (int c = int(std::sqrt(double(want))); c >= 1; --c) {
    if (want % c == 0) {
      cols = c;
      break;
    }
  }
  int rows = want / cols;
  if (rng() & 1) std::swap(cols, rows);

  std::uniform_real_distribution<double> jit(-0.25, 0.25);
  std::vector<carto::Point> lat((cols + 1) * (rows + 1));
  auto at = [&](int i, int j) -> carto::Point & { return lat[j * (cols + 1) + i]; };
  for (int j = 0; j <= rows; ++j) {
    for (int i = 0; i <= cols; ++i) {
      const bool edge_x = i == 0 || i == cols, edge_y = j == 0 || j == rows;
      at(i, j) = {i + (edge_x ? 0.0 : jit(rng)), j + (edge_y ? 0.0 : jit(rng))};
    }
  }
  std::uniform_int_distribution<int> pieces(1, 6);
  std::vector<Line> horiz(cols * (rows + 1)), vert((cols + 1) * rows);
  for (int j = 0; j <= rows; ++j) {
    for (int i = 0; i < cols; ++i) {
      horiz[j * cols + i] = wiggle(at(i, j), at(i + 1, j), pieces(rng), 0.08, rng);
    }
  }
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i <= cols; ++i) {
      vert[j * (cols + 1) + i] = wiggle(at(i, j), at(i, j + 1), pieces(rng), 0.08, rng);
    }
  }

  std::uniform_real_distribution<double> log_rho(0.0, std::log(o.max_disparity));
  std::vector<carto::Region> regions;
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < cols; ++i) {
      carto::Ring ring;
      append(ring, horiz[j * cols + i], false);
      append(ring, vert[j * (cols + 1) + i + 1], false);
      append(ring, horiz[(j + 1) * cols + i], true);
      append(ring, vert[j * (cols + 1) + i], true);
      carto::Region r;
      r.id = "r" + std::to_string(j * cols + i);
      r.polygons.push_back({std::move(ring), {}});
      r.target_value = std::exp(log_rho(rng)) * carto::region_area(r);
      regions.push_back(std::move(r));
    }
  }
  std::uniform_int_distribution<int> grid_pow(6, 7);
  return {carto::RegionSet(std::move(regions)), std::size_t(1) << grid_pow(rng)};
}

}  // namespace detail

// Deterministic for a given seed. Candidates whose wiggles happen to cross
// are redrawn from the same stream.
inline Map generate(std::uint64_t seed, const Options &o = {})
{
  std::mt19937_64 rng(seed);
  while (true) {
    Map m = detail::attempt(rng, o);
    const auto s = carto::intersection_summary(m.regions);
    if (s.overlap == 0 && s.cross_ring == 0 && s.self_points.empty()) return m;
  }
}

}  // namespace random_map

#endif
