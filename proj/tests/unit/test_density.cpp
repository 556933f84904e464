#include "doctest.h"

#include "carto/density.hpp"
#include "carto/errors.hpp"
#include "support/fixtures.hpp"

#include <array>
#include <cmath>
#include <numeric>

using namespace carto;

namespace
{

Region square(const std::string &id, double x0, double y0, double s, double v)
{
  return {id, {{{{x0, y0}, {x0 + s, y0}, {x0 + s, y0 + s}, {x0, y0 + s}}, {}}}, v};
}

// Independent crossing-number test with explicit half-open edge rule.
bool inside_ring(const Ring &ring, Point p)
{
  int crossings = 0;
  for (std::size_t k = 0; k < ring.size(); ++k) {
    const Point a = ring[k], b = ring[(k + 1) % ring.size()];
    const bool up = a.y <= p.y && b.y > p.y;
    const bool down = b.y <= p.y && a.y > p.y;
    if (!up && !down) continue;
    const double t = (p.y - a.y) / (b.y - a.y);
    if (p.x < a.x + t * (b.x - a.x)) ++crossings;
  }
  return crossings % 2 == 1;
}

bool inside_region(const Region &r, Point p)
{
  bool in = false;
  for (const auto &pwh : r.polygons) {
    if (!inside_ring(pwh.outer, p)) continue;
    bool in_hole = false;
    for (const auto &h : pwh.holes) in_hole = in_hole || inside_ring(h, p);
    in = in || !in_hole;
  }
  return in;
}

}  // namespace

TEST_CASE("densities are 1 when targets are proportional to areas")
{
  const RegionSet set({square("a", 0, 0, 1, 2.0), square("b", 1, 0, 2, 8.0)});
  for (const auto &[id, d] : region_densities(set)) {
    CHECK(d == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("two unit regions with values 3 and 1")
{
  const RegionSet set({square("a", 0, 0, 1, 3.0), square("b", 1, 0, 1, 1.0)});
  const auto d = region_densities(set);
  CHECK(d.at("a") == doctest::Approx(1.5));
  CHECK(d.at("b") == doctest::Approx(0.5));
}

TEST_CASE("non-positive values are rejected")
{
  const RegionSet set({square("a", 0, 0, 1, 0.0), square("b", 1, 0, 1, 1.0)});
  CHECK_THROWS_AS(region_densities(set), NonPositiveValue);
  const RegionSet neg({square("a", 0, 0, 1, -2.0)});
  CHECK_THROWS_AS(region_densities(neg), NonPositiveValue);
}

TEST_CASE("Belgium fixture reproduces the published densities")
{
  const auto d = region_densities(fixtures::load("belgium"));
  CHECK(std::round(d.at("WAL") * 1000) / 1000 == doctest::Approx(0.574));
  CHECK(std::round(d.at("BRU") * 100) / 100 == doctest::Approx(19.91));
  const auto rep = density_disparity(d);
  CHECK(rep.min_density == d.at("WAL"));
  CHECK(rep.max_density == d.at("BRU"));
  CHECK(std::round(rep.disparity * 10) / 10 == doctest::Approx(34.7));
  CHECK(rep.group == 1);
}

TEST_CASE("disparity groups follow the 100/1000/10000 thresholds")
{
  CHECK(density_disparity({{"a", 2.0}, {"b", 2.0}}).disparity == 1.0);
  CHECK(density_disparity({{"a", 2.0}, {"b", 2.0}}).group == 1);
  const auto r = density_disparity({{"a", 0.01}, {"b", 150.0}});
  CHECK(r.disparity == doctest::Approx(15000.0));
  CHECK(r.group == 4);

  // Published disparities with their published groups.
  const std::array<std::pair<double, int>, 32> table{{
    {16.6, 1}, {23.3, 1}, {34.7, 1}, {39.6, 1}, {51.0, 1}, {78.8, 1},
    {83.8, 1}, {98.0, 1}, {150.2, 2}, {190.0, 2}, {198.7, 2}, {258.7, 2},
    {414.7, 2}, {472.8, 2}, {564.3, 2}, {946.4, 2}, {1035.5, 3},
    {1557.1, 3}, {1700.9, 3}, {1983.3, 3}, {3565.0, 3}, {4933.0, 3},
    {8000.6, 3}, {8697.6, 3}, {15301.2, 4}, {20274.7, 4}, {20979.3, 4},
    {77171.4, 4}, {137532.1, 4}, {173736.4, 4}, {444839.3, 4},
    {799275.4, 4},
  }};
  for (const auto &[disp, group] : table) CHECK(disparity_group(disp) == group);
}

TEST_CASE("single region filling the canvas rasterizes to uniform 1")
{
  const RegionSet set({square("a", 0, 0, 10, 5.0)});
  RasterizeOptions opt;
  opt.fill = 1.0;
  const auto g = rasterize(set, 16, opt);
  for (const double v : g.values) CHECK(v == doctest::Approx(1.0));
  CHECK(g.mean_density == doctest::Approx(1.0));
}

TEST_CASE("half-canvas regions rasterize to 1.5 / 0.5 with exterior 1")
{
  const auto set = fixtures::load("halves");
  const auto g = rasterize(set, 64);
  for (std::size_t j = 0; j < g.height; ++j) {
    for (std::size_t i = 0; i < g.width; ++i) {
      const Point c = g.transform.to_map({i + 0.5, j + 0.5});
      double want = 1.0;
      if (inside_region(set[0], c)) want = 1.5;
      else if (inside_region(set[1], c)) want = 0.5;
      CHECK(g.at(i, j) == doctest::Approx(want));
    }
  }
}

TEST_CASE("rasterization matches a cell-center point-in-polygon scan")
{
  for (const char *name : {"checker", "belgium", "islands", "strip3"}) {
    const auto set = fixtures::load(name);
    const auto d = region_densities(set);
    const auto g = rasterize(set, 128);
    std::size_t mismatches = 0;
    for (std::size_t j = 0; j < g.height; ++j) {
      for (std::size_t i = 0; i < g.width; ++i) {
        const Point c = g.transform.to_map({i + 0.5, j + 0.5});
        // Lowest id wins ties; ids are scanned in lexicographic order.
        int owner = -1;
        std::string best;
        for (std::size_t r = 0; r < set.size(); ++r) {
          if (inside_region(set[r], c) && (owner < 0 || set[r].id < best)) {
            owner = static_cast<int>(r);
            best = set[r].id;
          }
        }
        if (g.owner[j * g.width + i] != owner) ++mismatches;
        const double want = owner < 0 ? 1.0 : d.at(set[owner].id);
        if (std::abs(g.at(i, j) - want) > 1e-12 * want) ++mismatches;
      }
    }
    CAPTURE(name);
    CHECK(mismatches == 0);
  }
}

TEST_CASE("boundary cell centers go to the lexicographically smallest id")
{
  // On a 4x4 canvas with fill 1 the map [0,4]^2 maps to itself, so the
  // centers of column 1 (x = 1.5) lie exactly on the shared edge.
  const Region b{"b", {{{{0, 0}, {1.5, 0}, {1.5, 4}, {0, 4}}, {}}}, 1.0};
  const Region a{"a", {{{{1.5, 0}, {4, 0}, {4, 4}, {1.5, 4}}, {}}}, 1.0};
  RasterizeOptions opt;
  opt.fill = 1.0;
  const auto g = rasterize(RegionSet({b, a}), 4, opt);
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(g.owner[j * 4 + 0] == 0);
    CHECK(g.owner[j * 4 + 1] == 1);
    CHECK(g.owner[j * 4 + 2] == 1);
    CHECK(g.owner[j * 4 + 3] == 1);
  }
}

TEST_CASE("regions too small for the grid raise GridTooCoarse")
{
  const RegionSet set({square("big", 0, 0, 100, 1.0), square("dot", 100, 0, 0.01, 1.0)});
  CHECK_THROWS_AS(rasterize(set, 16), GridTooCoarse);
  RasterizeOptions opt;
  opt.require_coverage = false;
  CHECK_NOTHROW(rasterize(set, 16, opt));
  CHECK_THROWS_AS(rasterize(set, 12), GridTooCoarse);
}

TEST_CASE("covered mass approaches the target total as the grid refines")
{
  const auto set = fixtures::load("belgium");
  const auto targets = target_areas(set);
  const double target_sum = std::accumulate(targets.begin(), targets.end(), 0.0);
  double prev_err = 1e300;
  for (const std::size_t n : {64u, 128u, 256u, 512u}) {
    const auto g = rasterize(set, n);
    double mass = 0.0;
    for (std::size_t c = 0; c < g.values.size(); ++c) {
      if (g.owner[c] >= 0) mass += g.values[c];
    }
    const double cell_area = 1.0 / (g.transform.scale * g.transform.scale);
    const double err = std::abs(mass * cell_area - target_sum) / target_sum;
    CAPTURE(n);
    CHECK(err < 0.05);
    CHECK(err < prev_err * 1.2);
    prev_err = std::min(prev_err, err);
  }
  CHECK(prev_err < 0.01);
}

TEST_CASE("smoothing: identity, constants, mass and range")
{
  const auto g = rasterize(fixtures::load("checker"), 32);
  const auto same = smooth(g, 0.0);
  CHECK(same.values == g.values);

  DensityGrid flat = g;
  std::fill(flat.values.begin(), flat.values.end(), 2.5);
  for (const double r : {0.5, 1.0, 3.0, 20.0}) {
    for (const double v : smooth(flat, r).values) {
      CHECK(v == doctest::Approx(2.5).epsilon(1e-13));
    }
  }

  const double lo = *std::min_element(g.values.begin(), g.values.end());
  const double hi = *std::max_element(g.values.begin(), g.values.end());
  const double mass = std::accumulate(g.values.begin(), g.values.end(), 0.0);
  for (const double r : {0.7, 1.0, 4.0, 40.0}) {
    const auto s = smooth(g, r);
    const double m = std::accumulate(s.values.begin(), s.values.end(), 0.0);
    CHECK(std::abs(m - mass) <= 1e-6 * mass);
    for (const double v : s.values) {
      CHECK(v > 0.0);
      CHECK(v >= lo * (1 - 1e-14));
      CHECK(v <= hi * (1 + 1e-14));
    }
  }
}

TEST_CASE("smoothing a spike matches direct 2D convolution")
{
  DensityGrid g;
  g.width = g.height = 16;
  g.values.assign(256, 1.0);
  g.at(1, 2) = 100.0;
  g.at(15, 15) = 7.0;
  const double sigma = 1.3;
  const auto s = smooth(g, sigma);

  // Direct convolution with the mirrored grid, weights recomputed here.
  const int r = static_cast<int>(std::ceil(6 * sigma));
  double z = 0.0;
  for (int k = -r; k <= r; ++k) z += std::exp(-0.5 * k * k / (sigma * sigma));
  auto mirror = [](int k, int n) {
    while (k < 0 || k >= n) k = k < 0 ? -1 - k : 2 * n - 1 - k;
    return k;
  };
  for (int j = 0; j < 16; ++j) {
    for (int i = 0; i < 16; ++i) {
      double acc = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const double w = std::exp(-0.5 * (dx * dx + dy * dy) / (sigma * sigma)) / (z * z);
          acc += w * g.at(static_cast<std::size_t>(mirror(i + dx, 16)),
                          static_cast<std::size_t>(mirror(j + dy, 16)));
        }
      }
      CHECK(std::abs(s.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) - acc) < 1e-9);
    }
  }
}
