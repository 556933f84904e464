#include "carto/triangulation.hpp"

#include "carto/cdt.hpp"
#include "carto/errors.hpp"
#include "carto/predicates.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace carto
{

namespace
{

std::array<double, 6> affine_from(const std::array<Point, 3> &s,
                                  const std::array<Point, 3> &d)
{
  // Solve [x y 1] * coeffs = target for X and Y by Cramer's rule.
  const double det = orient2d_value(s[0], s[1], s[2]);
  auto solve = [&](double t0, double t1, double t2) {
    const double a = (t0 * (s[1].y - s[2].y) + t1 * (s[2].y - s[0].y) +
                      t2 * (s[0].y - s[1].y)) / det;
    const double b = (t0 * (s[2].x - s[1].x) + t1 * (s[0].x - s[2].x) +
                      t2 * (s[1].x - s[0].x)) / det;
    const double c = (t0 * (s[1].x * s[2].y - s[2].x * s[1].y) +
                      t1 * (s[2].x * s[0].y - s[0].x * s[2].y) +
                      t2 * (s[0].x * s[1].y - s[1].x * s[0].y)) / det;
    return std::array<double, 3>{a, b, c};
  };
  const auto x = solve(d[0].x, d[1].x, d[2].x);
  const auto y = solve(d[0].y, d[1].y, d[2].y);
  return {x[0], x[1], x[2], y[0], y[1], y[2]};
}

// True if a lattice corner other than the endpoints lies on segment a-b.
// Corners are integers in canvas units, so only the gcd lattice points of
// the segment need checking.
bool passes_through_corner(Point a, Point b,
                           const std::unordered_set<Point, PointHash> &corners)
{
  const auto dx = static_cast<long long>(b.x - a.x);
  const auto dy = static_cast<long long>(b.y - a.y);
  const long long g = std::gcd(std::llabs(dx), std::llabs(dy));
  for (long long k = 1; k < g; ++k) {
    const Point p{a.x + static_cast<double>(dx / g * k),
                  a.y + static_cast<double>(dy / g * k)};
    if (corners.count(p)) return true;
  }
  return false;
}

void build_locator(Triangulation &tri)
{
  const double n = tri.canvas_size;
  const auto target = static_cast<std::size_t>(
    std::ceil(std::sqrt(static_cast<double>(tri.triangles.size()) / 2.0)));
  std::size_t side = std::bit_ceil(std::max<std::size_t>(1, target));
  side = std::min(side, std::max<std::size_t>(1, static_cast<std::size_t>(n)));
  tri.buckets_per_side = side;
  tri.bucket_size = n / static_cast<double>(side);
  tri.buckets.assign(side * side, {});
  auto cell = [&](double v) {
    const auto c = static_cast<long long>(std::floor(v / tri.bucket_size));
    return static_cast<std::size_t>(std::clamp<long long>(c, 0, static_cast<long long>(side) - 1));
  };
  for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
    const auto &u = tri.triangles[t].unprojected;
    const double x0 = std::min({u[0].x, u[1].x, u[2].x});
    const double x1 = std::max({u[0].x, u[1].x, u[2].x});
    const double y0 = std::min({u[0].y, u[1].y, u[2].y});
    const double y1 = std::max({u[0].y, u[1].y, u[2].y});
    // Closed overlap: a box edge on a bucket boundary joins both buckets.
    std::size_t i0 = cell(x0), i1 = cell(x1), j0 = cell(y0), j1 = cell(y1);
    if (i0 > 0 && x0 == static_cast<double>(i0) * tri.bucket_size) --i0;
    if (j0 > 0 && y0 == static_cast<double>(j0) * tri.bucket_size) --j0;
    for (std::size_t j = j0; j <= j1; ++j) {
      for (std::size_t i = i0; i <= i1; ++i) {
        tri.buckets[j * side + i].push_back(static_cast<std::int32_t>(t));
      }
    }
  }
}

}  // namespace

Triangulation build_triangulation(const Quadtree &tree,
                                  const std::vector<Point> &corner_images)
{
  Triangulation tri;
  tri.canvas_size = tree.root().size;
  tri.vertices = leaf_corners(tree);
  tri.images = corner_images;
  if (tri.images.size() != tri.vertices.size()) {
    throw StructureMismatch("one image per leaf corner is required");
  }
  tri.identity = tri.images == tri.vertices;

  std::unordered_map<Point, std::size_t, PointHash> index;
  for (std::size_t k = 0; k < tri.vertices.size(); ++k) index[tri.vertices[k]] = k;
  const std::unordered_set<Point, PointHash> corner_set(tri.vertices.begin(),
                                                        tri.vertices.end());
  const auto edges = leaf_edges(tree);

  // Triangulate in the projected domain with projected cell edges fixed.
  std::vector<IndexEdge> temp_edges;
  try {
    Cdt temp(tri.images);
    for (const auto &[a, b] : edges) temp.insert_constraint(index.at(a), index.at(b));
    temp_edges = temp.edges();
    for (const auto &t : temp.triangles()) {
      tri.projected_triangles.push_back({static_cast<std::size_t>(t.v[0]),
                                         static_cast<std::size_t>(t.v[1]),
                                         static_cast<std::size_t>(t.v[2])});
    }
  } catch (const DegenerateGeometry &e) {
    throw DegenerateProjection(std::string("projected corners: ") + e.what());
  }

  for (const auto &e : temp_edges) {
    if (passes_through_corner(tri.vertices[e.first], tri.vertices[e.second], corner_set)) {
      tri.rejected_edges.push_back(e);
    } else {
      tri.accepted_edges.push_back(e);
    }
  }

  // Complete in the unprojected domain around the accepted edges.
  std::vector<Cdt::Triangle> final_tris;
  try {
    Cdt t(tri.vertices);
    for (const auto &[a, b] : tri.accepted_edges) t.insert_constraint(a, b);
    final_tris = t.triangles();
  } catch (const DegenerateGeometry &e) {
    throw DegenerateProjection(std::string("unprojected constraints: ") + e.what());
  }

  const double eps_pt = 1e-9 * std::sqrt(2.0) * tri.canvas_size;
  const double eps_area = eps_pt * eps_pt;
  for (const auto &t : final_tris) {
    TriPair p;
    for (int i = 0; i < 3; ++i) {
      p.v[i] = static_cast<std::size_t>(t.v[i]);
      p.unprojected[i] = tri.vertices[p.v[i]];
      p.projected[i] = tri.images[p.v[i]];
    }
    const double area = 0.5 * orient2d_value(p.projected[0], p.projected[1], p.projected[2]);
    if (!(area > eps_area) || orient2d(p.projected[0], p.projected[1], p.projected[2]) <= 0) {
      throw DegenerateProjection("projected triangle with area " + std::to_string(area));
    }
    p.affine = affine_from(p.unprojected, p.projected);
    tri.triangles.push_back(p);
  }
  build_locator(tri);
  return tri;
}

std::size_t locate(const Triangulation &tri, Point p)
{
  const double n = tri.canvas_size;
  if (!(p.x >= 0.0 && p.x <= n && p.y >= 0.0 && p.y <= n)) {
    throw OutsideCanvas("point (" + std::to_string(p.x) + ", " +
                        std::to_string(p.y) + ") is outside the canvas");
  }
  const std::size_t side = tri.buckets_per_side;
  auto cell = [&](double v) {
    const auto c = static_cast<long long>(std::floor(v / tri.bucket_size));
    return static_cast<std::size_t>(std::clamp<long long>(c, 0, static_cast<long long>(side) - 1));
  };
  for (const auto t : tri.buckets[cell(p.y) * side + cell(p.x)]) {
    const auto &u = tri.triangles[t].unprojected;
    if (orient2d(u[0], u[1], p) >= 0 && orient2d(u[1], u[2], p) >= 0 &&
        orient2d(u[2], u[0], p) >= 0) {
      return static_cast<std::size_t>(t);
    }
  }
  throw OutsideCanvas("no triangle contains the point");
}

Point map_in_triangle(const Triangulation &tri, std::size_t t, Point p)
{
  const auto &tp = tri.triangles[t];
  const auto &u = tp.unprojected;
  const auto &d = tp.projected;
  for (int i = 0; i < 3; ++i) {
    if (p == u[i]) return d[i];
  }
  const double area = orient2d_value(u[0], u[1], u[2]);
  const double l0 = orient2d_value(p, u[1], u[2]) / area;
  const double l1 = orient2d_value(u[0], p, u[2]) / area;
  const double l2 = orient2d_value(u[0], u[1], p) / area;
  return {l0 * d[0].x + l1 * d[1].x + l2 * d[2].x,
          l0 * d[0].y + l1 * d[1].y + l2 * d[2].y};
}

Point project_point(const Triangulation &tri, Point p)
{
  const std::size_t t = locate(tri, p);
  if (tri.identity) return p;
  return map_in_triangle(tri, t, p);
}

}  // namespace carto
