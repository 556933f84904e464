#include "doctest.h"

#include "carto/errors.hpp"
#include "carto/flow.hpp"
#include "carto/predicates.hpp"
#include "carto/triangulation.hpp"
#include "support/exact.hpp"
#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

using namespace carto;

namespace
{

DensityGrid grid_from(std::size_t n, const std::vector<double> &v)
{
  DensityGrid g;
  g.width = g.height = n;
  g.values = v;
  g.owner.assign(n * n, -1);
  return g;
}

DensityGrid figure3_grid()
{
  return grid_from(4, {1, 6, 11, 8, 3, 9, 5, 17, 14, 18, 18, 15, 20, 23, 12, 10});
}

DensityGrid random_grid(std::size_t n, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n * n);
  const double bx = u(rng) * n, by = u(rng) * n, bx2 = u(rng) * n, by2 = u(rng) * n;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double d1 = std::hypot(i + 0.5 - bx, j + 0.5 - by);
      const double d2 = std::hypot(i + 0.5 - bx2, j + 0.5 - by2);
      v[j * n + i] = 1.0 + 20.0 * std::exp(-d1 * d1 / 3.0) + 5.0 * std::exp(-d2 * d2 / 8.0);
    }
  }
  return grid_from(n, v);
}

Triangulation identity_of(const Quadtree &t)
{
  return build_triangulation(t, leaf_corners(t));
}

double min_angle(const std::array<Point, 3> &p)
{
  double m = 10.0;
  for (int i = 0; i < 3; ++i) {
    const Point a = p[(i + 1) % 3] - p[i];
    const Point b = p[(i + 2) % 3] - p[i];
    const double ang = std::acos((a.x * b.x + a.y * b.y) /
                                 (std::hypot(a.x, a.y) * std::hypot(b.x, b.y)));
    m = std::min(m, ang);
  }
  return m;
}

std::set<std::pair<Point, Point>> point_edges(const Triangulation &tri)
{
  std::set<std::pair<Point, Point>> out;
  for (const auto &t : tri.triangles) {
    for (int i = 0; i < 3; ++i) {
      Point a = t.unprojected[i], b = t.unprojected[(i + 1) % 3];
      if (b < a) std::swap(a, b);
      out.insert({a, b});
    }
  }
  return out;
}

bool contains_closed(const std::array<Point, 3> &u, Point p)
{
  return oracle::orient(u[0], u[1], p) >= 0 && oracle::orient(u[1], u[2], p) >= 0 &&
         oracle::orient(u[2], u[0], p) >= 0;
}

}  // namespace

TEST_CASE("identity triangulations of graded trees")
{
  std::mt19937_64 rng(21);
  const double bound = std::atan(2.0) - std::numbers::pi / 4;
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = trial % 3 == 0 ? 64 : 32;
    const auto tree = grade(build_quadtree(random_grid(n, rng), 10 + 9 * trial));
    const auto tri = identity_of(tree);
    CHECK(tri.rejected_edges.empty());
    oracle::Rational area = 0;
    for (const auto &t : tri.triangles) {
      CHECK(min_angle(t.unprojected) >= bound - 1e-6);
      area += oracle::twice_area({t.unprojected[0], t.unprojected[1], t.unprojected[2]});
    }
    CHECK(area == 2 * oracle::q(double(n)) * oracle::q(double(n)));
    // Leaf edges survive as triangle edges.
    const auto edges = point_edges(tri);
    for (const auto &e : leaf_edges(tree)) CHECK(edges.count(e) == 1);
    // Interior sample points lie in exactly one triangle (no overlaps).
    std::uniform_real_distribution<double> u(0.0, double(n));
    for (int s = 0; s < 100; ++s) {
      const Point p{u(rng), u(rng)};
      int strict = 0, closed = 0;
      for (const auto &t : tri.triangles) {
        const auto &v = t.unprojected;
        const int a = oracle::orient(v[0], v[1], p), b = oracle::orient(v[1], v[2], p),
                  c = oracle::orient(v[2], v[0], p);
        if (a > 0 && b > 0 && c > 0) ++strict;
        if (a >= 0 && b >= 0 && c >= 0) ++closed;
      }
      CHECK(closed >= 1);
      CHECK(strict <= 1);
    }
    // Identity images: projection is the identity.
    for (int s = 0; s < 100; ++s) {
      const Point p{u(rng), u(rng)};
      CHECK(project_point(tri, p) == p);
    }
  }
}

TEST_CASE("figure 4: an edge through a third corner is not inserted")
{
  const auto tree = grade(build_quadtree(figure3_grid(), 7));
  const auto corners = leaf_corners(tree);
  auto images = corners;
  for (auto &p : images) {
    if (p == Point{3, 2}) p = {3, 1.5};
  }
  const auto tri = build_triangulation(tree, images);
  auto idx = [&](Point p) {
    return std::size_t(std::find(corners.begin(), corners.end(), p) - corners.begin());
  };
  const IndexEdge yellow{idx({2, 2}), idx({4, 2})};
  CHECK(std::find(tri.rejected_edges.begin(), tri.rejected_edges.end(), yellow) !=
        tri.rejected_edges.end());
  CHECK(tri.rejected_edges.size() == 1);
  const auto edges = point_edges(tri);
  CHECK(edges.count({{2, 2}, {4, 2}}) == 0);
  // Blue: one diagonal of the upper-right leaf; green: the completion from
  // the midpoint to the opposite corner on the other side of blue.
  const bool d1 = edges.count({{2, 2}, {4, 4}}) == 1;
  const bool d2 = edges.count({{2, 4}, {4, 2}}) == 1;
  CHECK(d1 != d2);
  if (d1) CHECK(edges.count({{3, 2}, {4, 4}}) == 1);
  if (d2) CHECK(edges.count({{2, 4}, {3, 2}}) == 1);
  for (const auto &t : tri.triangles) {
    CHECK(oracle::orient(t.projected[0], t.projected[1], t.projected[2]) > 0);
  }
}

TEST_CASE("sheared cells take the diagonal with the larger minimum angle")
{
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  const auto tree = grade(build_quadtree(grid_from(8, std::vector<double>(64, 1.0)), 64));
  REQUIRE(tree.leaf_count == 64);
  const auto corners = leaf_corners(tree);
  for (int trial = 0; trial < 10; ++trial) {
    auto images = corners;
    for (auto &p : images) {
      if (p.x > 0 && p.x < 8 && p.y > 0 && p.y < 8) p = {p.x + jitter(rng), p.y + jitter(rng)};
    }
    const auto tri = build_triangulation(tree, images);
    const auto edges = point_edges(tri);
    auto image_of = [&](Point p) {
      return images[std::size_t(std::find(corners.begin(), corners.end(), p) - corners.begin())];
    };
    for (int j = 0; j < 8; ++j) {
      for (int i = 0; i < 8; ++i) {
        const Point a{double(i), double(j)}, b{i + 1.0, double(j)};
        const Point c{i + 1.0, j + 1.0}, d{double(i), j + 1.0};
        const Point A = image_of(a), B = image_of(b), C = image_of(c), D = image_of(d);
        const double m_ac = std::min(min_angle({A, B, C}), min_angle({A, C, D}));
        const double m_bd = std::min(min_angle({A, B, D}), min_angle({B, C, D}));
        if (std::abs(m_ac - m_bd) < 1e-9) continue;
        const bool has_ac = edges.count({a, c}) == 1;
        const bool has_bd = edges.count({d, b}) == 1;
        CHECK(has_ac != has_bd);
        CHECK(has_ac == (m_ac > m_bd));
      }
    }
  }
}

TEST_CASE("projected corners from a flow solve")
{
  auto set = fixtures::load("belgium");
  const std::size_t n = 64;
  const auto grid = smooth(rasterize(set, n), 1.0);
  const auto tree = grade(build_quadtree(grid, 64));
  const auto flow = solve_flow(grid);
  std::vector<Point> images;
  for (const auto &p : advect(flow, leaf_corners(tree))) images.push_back(p.image);
  const auto tri = build_triangulation(tree, images);
  double area = 0.0;
  for (const auto &t : tri.triangles) {
    CHECK(orient2d(t.projected[0], t.projected[1], t.projected[2]) > 0);
    area += 0.5 * orient2d_value(t.projected[0], t.projected[1], t.projected[2]);
    // The affine map reproduces each vertex.
    for (int i = 0; i < 3; ++i) {
      const auto &a = t.affine;
      const Point u = t.unprojected[i], d = t.projected[i];
      CHECK(std::abs(a[0] * u.x + a[1] * u.y + a[2] - d.x) <= 1e-12 * n);
      CHECK(std::abs(a[3] * u.x + a[4] * u.y + a[5] - d.y) <= 1e-12 * n);
    }
  }
  CHECK(area == doctest::Approx(double(n * n)).epsilon(1e-9));

  SUBCASE("continuity across shared edges")
  {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // Map each interior edge to its two triangles.
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> owners;
    for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
      const auto &v = tri.triangles[t].v;
      for (int i = 0; i < 3; ++i) {
        auto e = std::minmax(v[i], v[(i + 1) % 3]);
        owners[{e.first, e.second}].push_back(t);
      }
    }
    std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>>> shared;
    for (const auto &kv : owners) {
      if (kv.second.size() == 2) shared.push_back(kv);
    }
    REQUIRE(!shared.empty());
    std::uniform_int_distribution<std::size_t> pick(0, shared.size() - 1);
    for (int s = 0; s < 10000; ++s) {
      const auto &[e, ts] = shared[pick(rng)];
      const Point a = tri.vertices[e.first], b = tri.vertices[e.second];
      const double f = u(rng);
      const Point p = a + f * (b - a);
      const Point i0 = map_in_triangle(tri, ts[0], p);
      const Point i1 = map_in_triangle(tri, ts[1], p);
      CHECK(distance(i0, i1) <= 1e-12 * n);
    }
  }
}

TEST_CASE("locate and project_point")
{
  std::mt19937_64 rng(12);
  const std::size_t n = 32;
  const auto tree = grade(build_quadtree(random_grid(n, rng), 60));
  const auto corners = leaf_corners(tree);
  auto images = corners;
  std::uniform_real_distribution<double> jitter(-0.15, 0.15);
  for (auto &p : images) {
    if (p.x > 0 && p.x < n && p.y > 0 && p.y < n) p = {p.x + jitter(rng), p.y + jitter(rng)};
  }
  const auto tri = build_triangulation(tree, images);

  // Centroids.
  for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
    const auto &u = tri.triangles[t].unprojected;
    const Point c{(u[0].x + u[1].x + u[2].x) / 3, (u[0].y + u[1].y + u[2].y) / 3};
    CHECK(locate(tri, c) == t);
    const auto &d = tri.triangles[t].projected;
    const Point want{(d[0].x + d[1].x + d[2].x) / 3, (d[0].y + d[1].y + d[2].y) / 3};
    CHECK(distance(project_point(tri, c), want) <= 1e-12 * n);
    // Vertices map exactly to their images.
    for (int i = 0; i < 3; ++i) CHECK(project_point(tri, u[i]) == d[i]);
  }

  // Shared-edge midpoints resolve to the lower index.
  for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
    const auto &u = tri.triangles[t].unprojected;
    for (int i = 0; i < 3; ++i) {
      const Point m = 0.5 * (u[i] + u[(i + 1) % 3]);
      std::size_t lowest = tri.triangles.size();
      for (std::size_t s = 0; s < tri.triangles.size() && lowest == tri.triangles.size(); ++s) {
        if (contains_closed(tri.triangles[s].unprojected, m)) lowest = s;
      }
      CHECK(locate(tri, m) == lowest);
    }
  }

  // Random points: barycentric containment for all, lowest index for some.
  std::uniform_real_distribution<double> u(0.0, double(n));
  for (int s = 0; s < 100000; ++s) {
    const Point p{u(rng), u(rng)};
    const std::size_t t = locate(tri, p);
    const auto &v = tri.triangles[t].unprojected;
    const double area = orient2d_value(v[0], v[1], v[2]);
    const double l0 = orient2d_value(p, v[1], v[2]) / area;
    const double l1 = orient2d_value(v[0], p, v[2]) / area;
    const double l2 = orient2d_value(v[0], v[1], p) / area;
    CHECK((l0 >= -1e-12 && l1 >= -1e-12 && l2 >= -1e-12));
    if (s % 100 == 0) {
      for (std::size_t k = 0; k < t; ++k) CHECK(!contains_closed(tri.triangles[k].unprojected, p));
    }
  }
  CHECK_THROWS_AS(locate(tri, {-0.1, 3}), OutsideCanvas);
  CHECK_THROWS_AS(project_point(tri, {3, double(n) + 0.1}), OutsideCanvas);
}

TEST_CASE("folded corners are degenerate")
{
  const auto tree = grade(build_quadtree(grid_from(4, std::vector<double>(16, 1.0)), 16));
  const auto corners = leaf_corners(tree);
  auto images = corners;
  for (auto &p : images) {
    if (p == Point{2, 2}) p = {3.5, 3.5};
  }
  CHECK_THROWS_AS(build_triangulation(tree, images), DegenerateProjection);
  images = corners;
  images.pop_back();
  CHECK_THROWS_AS(build_triangulation(tree, images), StructureMismatch);
}
