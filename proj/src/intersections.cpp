#include "carto/intersections.hpp"

#include "carto/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace carto
{

namespace
{

bool boxes_disjoint(const Segment &s, const Segment &t)
{
  return std::max(s.a.x, s.b.x) < std::min(t.a.x, t.b.x) ||
         std::max(t.a.x, t.b.x) < std::min(s.a.x, s.b.x) ||
         std::max(s.a.y, s.b.y) < std::min(t.a.y, t.b.y) ||
         std::max(t.a.y, t.b.y) < std::min(s.a.y, s.b.y);
}

// Crossing point of two properly crossing segments. The segments are put
// in a canonical order first so the result does not depend on the order or
// direction in which they are given.
Point proper_crossing(Segment s, Segment t)
{
  if (s.b < s.a) std::swap(s.a, s.b);
  if (t.b < t.a) std::swap(t.a, t.b);
  if (std::pair(t.a, t.b) < std::pair(s.a, s.b)) std::swap(s, t);
  const Point r = s.b - s.a;
  const Point q = t.b - t.a;
  const Point w = t.a - s.a;
  const double denom = r.x * q.y - r.y * q.x;
  double u = (w.x * q.y - w.y * q.x) / denom;
  u = std::clamp(u, 0.0, 1.0);
  Point p{s.a.x + u * r.x, s.a.y + u * r.y};
  p.x = std::clamp(p.x,
                   std::max(std::min(s.a.x, s.b.x), std::min(t.a.x, t.b.x)),
                   std::min(std::max(s.a.x, s.b.x), std::max(t.a.x, t.b.x)));
  p.y = std::clamp(p.y,
                   std::max(std::min(s.a.y, s.b.y), std::min(t.a.y, t.b.y)),
                   std::min(std::max(s.a.y, s.b.y), std::max(t.a.y, t.b.y)));
  return p;
}

}  // namespace

SegmentContact intersect_segments(const Segment &s, const Segment &t)
{
  SegmentContact out;
  if (boxes_disjoint(s, t)) return out;
  const Point a = s.a, b = s.b, c = t.a, d = t.b;
  const int o1 = orient2d(a, b, c);
  const int o2 = orient2d(a, b, d);
  if (o1 == o2 && o1 != 0) return out;
  const int o3 = orient2d(c, d, a);
  const int o4 = orient2d(c, d, b);
  if (o3 == o4 && o3 != 0) return out;

  if (o1 == 0 && o2 == 0) {
    // Collinear: lexicographic order is monotone along the common line.
    const Point s_lo = std::min(a, b), s_hi = std::max(a, b);
    const Point t_lo = std::min(c, d), t_hi = std::max(c, d);
    const Point lo = std::max(s_lo, t_lo);
    const Point hi = std::min(s_hi, t_hi);
    if (hi < lo) return out;
    out.pts[out.n++] = lo;
    if (lo < hi) out.pts[out.n++] = hi;
    return out;
  }
  if (o1 == 0) {
    out.pts[out.n++] = c;
  } else if (o2 == 0) {
    out.pts[out.n++] = d;
  } else if (o3 == 0) {
    out.pts[out.n++] = a;
  } else if (o4 == 0) {
    out.pts[out.n++] = b;
  } else {
    out.pts[out.n++] = proper_crossing(s, t);
  }
  return out;
}

bool is_shared_endpoint(const Segment &s, const Segment &t, Point p)
{
  return (p == s.a || p == s.b) && (p == t.a || p == t.b);
}

namespace
{

std::vector<Crossing> contacts_impl(const std::vector<Segment> &segs,
                                    bool keep_shared)
{
  std::vector<Crossing> out;
  const std::size_t n = segs.size();
  if (n < 2) return out;

  double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
  double xmax = -xmin, ymax = -xmin;
  for (const auto &s : segs) {
    xmin = std::min({xmin, s.a.x, s.b.x});
    xmax = std::max({xmax, s.a.x, s.b.x});
    ymin = std::min({ymin, s.a.y, s.b.y});
    ymax = std::max({ymax, s.a.y, s.b.y});
  }
  const auto side = static_cast<std::size_t>(
    std::clamp(std::ceil(std::sqrt(static_cast<double>(n))), 1.0, 1024.0));
  const double w = std::max(xmax - xmin, 1e-300);
  const double h = std::max(ymax - ymin, 1e-300);
  auto cell_x = [&](double x) {
    const auto c = static_cast<long>((x - xmin) / w * static_cast<double>(side));
    return static_cast<std::size_t>(std::clamp(c, 0L, long(side) - 1));
  };
  auto cell_y = [&](double y) {
    const auto c = static_cast<long>((y - ymin) / h * static_cast<double>(side));
    return static_cast<std::size_t>(std::clamp(c, 0L, long(side) - 1));
  };

  struct Span {
    std::size_t x0, x1, y0, y1;
  };
  std::vector<Span> spans(n);
  std::vector<std::vector<std::size_t>> buckets(side * side);
  for (std::size_t k = 0; k < n; ++k) {
    const auto &s = segs[k];
    Span sp{cell_x(std::min(s.a.x, s.b.x)), cell_x(std::max(s.a.x, s.b.x)),
            cell_y(std::min(s.a.y, s.b.y)), cell_y(std::max(s.a.y, s.b.y))};
    spans[k] = sp;
    for (std::size_t y = sp.y0; y <= sp.y1; ++y) {
      for (std::size_t x = sp.x0; x <= sp.x1; ++x) {
        buckets[y * side + x].push_back(k);
      }
    }
  }

  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) {
      const auto &b = buckets[y * side + x];
      for (std::size_t u = 0; u < b.size(); ++u) {
        for (std::size_t v = u + 1; v < b.size(); ++v) {
          const std::size_t i = b[u], j = b[v];
          // Test each pair only in the first bucket both segments share.
          if (std::max(spans[i].x0, spans[j].x0) != x ||
              std::max(spans[i].y0, spans[j].y0) != y) {
            continue;
          }
          const auto c = intersect_segments(segs[i], segs[j]);
          for (int k = 0; k < c.n; ++k) {
            if (!keep_shared &&
                is_shared_endpoint(segs[i], segs[j], c.pts[k])) {
              continue;
            }
            out.push_back({std::min(i, j), std::max(i, j), c.pts[k]});
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Crossing &l, const Crossing &r) {
    return std::tie(l.i, l.j, l.at) < std::tie(r.i, r.j, r.at);
  });
  return out;
}

}  // namespace

std::vector<Crossing> segment_intersections(const std::vector<Segment> &segs)
{
  return contacts_impl(segs, false);
}

std::vector<Crossing> segment_contacts(const std::vector<Segment> &segs)
{
  return contacts_impl(segs, true);
}

}  // namespace carto
