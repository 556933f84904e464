#include "carto/densify.hpp"

#include "carto/errors.hpp"
#include "carto/intersections.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace carto
{

namespace
{

struct Hit {
  double t;
  Point at;
  bool vertex;  // exactly a triangle vertex
};

// Points strictly between a and b where the segment meets triangle edges,
// ordered from a to b.
std::vector<Point> crossings(Point p, Point q, const Triangulation &tri, double eps)
{
  const bool flipped = q < p;
  const Point a = flipped ? q : p;
  const Point b = flipped ? p : q;

  const std::size_t side = tri.buckets_per_side;
  auto cell = [&](double v) {
    const auto c = static_cast<long long>(std::floor(v / tri.bucket_size));
    return static_cast<std::size_t>(std::clamp<long long>(c, 0, static_cast<long long>(side) - 1));
  };
  const std::size_t i0 = cell(std::min(a.x, b.x)), i1 = cell(std::max(a.x, b.x));
  const std::size_t j0 = cell(std::min(a.y, b.y)), j1 = cell(std::max(a.y, b.y));
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t j = j0; j <= j1; ++j) {
    for (std::size_t i = i0; i <= i1; ++i) {
      for (const auto t : tri.buckets[j * side + i]) {
        const auto &v = tri.triangles[t].v;
        for (int k = 0; k < 3; ++k) edges.insert(std::minmax(v[k], v[(k + 1) % 3]));
      }
    }
  }

  const Point d = b - a;
  const double len2 = d.x * d.x + d.y * d.y;
  std::vector<Hit> hits;
  for (const auto &[u, w] : edges) {
    const Point c = tri.vertices[u], e = tri.vertices[w];
    const auto contact = intersect_segments({a, b}, {c, e});
    for (int k = 0; k < contact.n; ++k) {
      const Point x = contact.pts[k];
      if (x == a || x == b) continue;
      if (distance(x, a) <= eps || distance(x, b) <= eps) continue;
      const Point r = x - a;
      hits.push_back({(r.x * d.x + r.y * d.y) / len2, x, x == c || x == e});
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Hit &l, const Hit &r) {
    return std::tie(l.t, l.at) < std::tie(r.t, r.at);
  });
  std::vector<Point> out;
  std::vector<bool> is_vertex;
  for (const auto &h : hits) {
    if (!out.empty() && distance(out.back(), h.at) <= eps) {
      // Same crossing seen from several edges; a triangle vertex wins.
      if (h.vertex && !is_vertex.back()) {
        out.back() = h.at;
        is_vertex.back() = true;
      }
      continue;
    }
    out.push_back(h.at);
    is_vertex.push_back(h.vertex);
  }
  if (flipped) std::reverse(out.begin(), out.end());
  return out;
}

double tolerance_of(const RegionSet &set)
{
  return point_tolerance(set.bounding_box());
}

template <typename Split>
DensifiedRegionSet densify_with(const RegionSet &set, Split split)
{
  DensifiedRegionSet out;
  std::vector<Region> regions;
  std::size_t before = 0, after = 0;
  for (const auto &r : set.regions()) {
    Region nr{r.id, {}, r.target_value};
    for (const auto &pwh : r.polygons) {
      PolygonWithHoles np;
      for (std::size_t k = 0; k <= pwh.holes.size(); ++k) {
        const Ring &ring = k == 0 ? pwh.outer : pwh.holes[k - 1];
        Ring nring;
        std::vector<std::uint8_t> flags;
        for (std::size_t i = 0; i < ring.size(); ++i) {
          const Point p = ring[i], q = ring[(i + 1) % ring.size()];
          nring.push_back(p);
          flags.push_back(0);
          for (const auto &x : split(p, q)) {
            nring.push_back(x);
            flags.push_back(1);
          }
        }
        before += ring.size();
        after += nring.size();
        if (k == 0) {
          np.outer = std::move(nring);
        } else {
          np.holes.push_back(std::move(nring));
        }
        out.inserted.push_back(std::move(flags));
      }
      nr.polygons.push_back(std::move(np));
    }
    regions.push_back(std::move(nr));
  }
  out.regions = RegionSet(std::move(regions));
  out.vertex_growth = before == 0 ? 0.0
                                  : static_cast<double>(after) / static_cast<double>(before) - 1.0;
  return out;
}

}  // namespace

DensifiedRegionSet densify(const RegionSet &set, const Triangulation &tri)
{
  const double eps = tolerance_of(set);
  return densify_with(set, [&](Point p, Point q) { return crossings(p, q, tri, eps); });
}

std::vector<Point> densify_polyline(const std::vector<Point> &line,
                                    const Triangulation &tri)
{
  if (line.empty()) return {};
  double xmin = line[0].x, xmax = xmin, ymin = line[0].y, ymax = ymin;
  for (const auto &p : line) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double eps = point_tolerance({{xmin, ymin}, {xmax, ymax}});
  std::vector<Point> out;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    out.push_back(line[i]);
    for (const auto &x : crossings(line[i], line[i + 1], tri, eps)) out.push_back(x);
  }
  out.push_back(line.back());
  return out;
}

RegionSet project_regions(const RegionSet &set, const Triangulation &tri)
{
  RegionSet out = set;
  out.transform([&](Point p) { return project_point(tri, p); });
  return out;
}

RegionSet project_regions(const DensifiedRegionSet &densified, const Triangulation &tri)
{
  return project_regions(densified.regions, tri);
}

DensifiedRegionSet uniform_densify(const RegionSet &set, double max_edge_length)
{
  if (!(max_edge_length > 0.0)) {
    throw DegenerateGeometry("max_edge_length must be positive");
  }
  return densify_with(set, [&](Point p, Point q) {
    const bool flipped = q < p;
    const Point a = flipped ? q : p;
    const Point b = flipped ? p : q;
    const auto parts = static_cast<std::size_t>(std::ceil(distance(a, b) / max_edge_length));
    std::vector<Point> pts;
    for (std::size_t k = 1; k < parts; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(parts);
      pts.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
    if (flipped) std::reverse(pts.begin(), pts.end());
    return pts;
  });
}

RegionSet strip_inserted(const DensifiedRegionSet &densified)
{
  std::vector<Region> regions;
  std::size_t ring = 0;
  auto strip = [&](const Ring &r) {
    Ring out;
    const auto &flags = densified.inserted[ring++];
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!flags[i]) out.push_back(r[i]);
    }
    return out;
  };
  for (const auto &r : densified.regions.regions()) {
    Region nr{r.id, {}, r.target_value};
    for (const auto &pwh : r.polygons) {
      PolygonWithHoles np;
      np.outer = strip(pwh.outer);
      for (const auto &h : pwh.holes) np.holes.push_back(strip(h));
      nr.polygons.push_back(std::move(np));
    }
    regions.push_back(std::move(nr));
  }
  return RegionSet(std::move(regions));
}

}  // namespace carto
