#include "carto/geometry.hpp"

#include "carto/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace carto
{

double distance(Point a, Point b)
{
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::size_t PointHash::operator()(const Point &p) const noexcept
{
  // +0.0 and -0.0 compare equal, so normalise before hashing the bits.
  const double x = p.x == 0.0 ? 0.0 : p.x;
  const double y = p.y == 0.0 ? 0.0 : p.y;
  const std::size_t hx = std::hash<double>{}(x);
  const std::size_t hy = std::hash<double>{}(y);
  return hx ^ (hy + 0x9e3779b97f4a7c15ULL + (hx << 6) + (hx >> 2));
}

double BoundingBox::diagonal() const
{
  return std::hypot(width(), height());
}

RegionSet::RegionSet(std::vector<Region> regions)
    : regions_(std::move(regions))
{
}

const Region &RegionSet::at(const std::string &id) const
{
  return regions_[index_of(id)];
}

std::size_t RegionSet::index_of(const std::string &id) const
{
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (regions_[i].id == id) return i;
  }
  throw RegionMismatch("no region with id '" + id + "'");
}

BoundingBox RegionSet::bounding_box() const
{
  constexpr double inf = std::numeric_limits<double>::infinity();
  BoundingBox bb{{inf, inf}, {-inf, -inf}};
  for (const auto &r : regions_) {
    for (const auto &pwh : r.polygons) {
      for (const auto &p : pwh.outer) {
        bb.min.x = std::min(bb.min.x, p.x);
        bb.min.y = std::min(bb.min.y, p.y);
        bb.max.x = std::max(bb.max.x, p.x);
        bb.max.y = std::max(bb.max.y, p.y);
      }
    }
  }
  if (bb.min.x > bb.max.x) return BoundingBox{};
  return bb;
}

std::size_t RegionSet::n_polygons() const
{
  std::size_t n = 0;
  for (const auto &r : regions_) n += r.polygons.size();
  return n;
}

std::size_t RegionSet::n_rings() const
{
  std::size_t n = 0;
  for (const auto &r : regions_) {
    for (const auto &pwh : r.polygons) n += 1 + pwh.holes.size();
  }
  return n;
}

std::size_t RegionSet::n_vertices() const
{
  std::size_t n = 0;
  for (const auto &r : regions_) {
    for (const auto &pwh : r.polygons) {
      n += pwh.outer.size();
      for (const auto &h : pwh.holes) n += h.size();
    }
  }
  return n;
}

void RegionSet::transform(const std::function<Point(Point)> &f)
{
  for (auto &r : regions_) {
    for (auto &pwh : r.polygons) {
      for (auto &p : pwh.outer) p = f(p);
      for (auto &h : pwh.holes) {
        for (auto &p : h) p = f(p);
      }
    }
  }
}

double signed_area(std::span<const Point> ring)
{
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  // Shoelace relative to the first vertex keeps the terms small.
  const Point o = ring[0];
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Point a = ring[i] - o;
    const Point b = ring[i + 1] - o;
    twice += a.x * b.y - a.y * b.x;
  }
  return 0.5 * twice;
}

bool is_counterclockwise(std::span<const Point> ring)
{
  return signed_area(ring) > 0.0;
}

double polygon_area(const PolygonWithHoles &pwh)
{
  double a = std::abs(signed_area(pwh.outer));
  for (const auto &h : pwh.holes) a -= std::abs(signed_area(h));
  return a;
}

namespace
{

double eps_area_for(const Region &region)
{
  BoundingBox bb{{std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity()},
                 {-std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity()}};
  for (const auto &pwh : region.polygons) {
    for (const auto &p : pwh.outer) {
      bb.min.x = std::min(bb.min.x, p.x);
      bb.min.y = std::min(bb.min.y, p.y);
      bb.max.x = std::max(bb.max.x, p.x);
      bb.max.y = std::max(bb.max.y, p.y);
    }
  }
  const double d = point_tolerance(bb);
  return d * d;
}

}  // namespace

double region_area(const Region &region)
{
  const double eps_area = eps_area_for(region);
  double total = 0.0;
  for (const auto &pwh : region.polygons) {
    const double outer = std::abs(signed_area(pwh.outer));
    if (outer <= eps_area) {
      throw DegenerateGeometry("zero-area outer ring in region '" +
                               region.id + "'");
    }
    total += outer;
    for (const auto &h : pwh.holes) {
      const double ha = std::abs(signed_area(h));
      if (ha <= eps_area) {
        throw DegenerateGeometry("zero-area hole in region '" + region.id +
                                 "'");
      }
      total -= ha;
    }
  }
  if (region.polygons.empty()) {
    throw DegenerateGeometry("region '" + region.id + "' has no polygons");
  }
  return total;
}

double total_area(const RegionSet &set)
{
  double a = 0.0;
  for (const auto &r : set.regions()) a += region_area(r);
  return a;
}

Point region_centroid(const Region &region)
{
  double a_sum = 0.0, cx = 0.0, cy = 0.0;
  auto accumulate = [&](const Ring &ring, double sgn) {
    const std::size_t n = ring.size();
    const Point o = ring[0];
    double a = 0.0, x = 0.0, y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Point p = ring[i] - o;
      const Point q = ring[(i + 1) % n] - o;
      const double cross = p.x * q.y - q.x * p.y;
      a += cross;
      x += (p.x + q.x) * cross;
      y += (p.y + q.y) * cross;
    }
    // Signed area and first moments of this ring, made positive for
    // outers and negative for holes regardless of stored orientation.
    const double s = (a < 0.0 ? -1.0 : 1.0) * sgn;
    a *= 0.5 * s;
    x = x / 6.0 * s + a * o.x;
    y = y / 6.0 * s + a * o.y;
    a_sum += a;
    cx += x;
    cy += y;
  };
  for (const auto &pwh : region.polygons) {
    accumulate(pwh.outer, 1.0);
    for (const auto &h : pwh.holes) accumulate(h, -1.0);
  }
  if (a_sum == 0.0) {
    throw DegenerateGeometry("region '" + region.id + "' has zero area");
  }
  return {cx / a_sum, cy / a_sum};
}

double point_tolerance(const BoundingBox &bbox)
{
  return 1e-9 * bbox.diagonal();
}

void orient_rings(RegionSet &set)
{
  for (auto &r : set.mutable_regions()) {
    for (auto &pwh : r.polygons) {
      if (signed_area(pwh.outer) < 0.0) {
        std::reverse(pwh.outer.begin(), pwh.outer.end());
      }
      for (auto &h : pwh.holes) {
        if (signed_area(h) > 0.0) std::reverse(h.begin(), h.end());
      }
    }
  }
}

Ring clean_ring(const Ring &ring)
{
  Ring out;
  out.reserve(ring.size());
  for (const auto &p : ring) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  if (out.size() < 3) out.clear();
  return out;
}

namespace
{

bool ring_contains(const Ring &ring, Point p)
{
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = ring[i], b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

bool contains(const Region &region, Point p)
{
  bool inside = false;
  for (const auto &pwh : region.polygons) {
    if (ring_contains(pwh.outer, p)) inside = !inside;
    for (const auto &h : pwh.holes) {
      if (ring_contains(h, p)) inside = !inside;
    }
  }
  return inside;
}

}  // namespace carto
