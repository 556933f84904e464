#include "carto/metrics.hpp"

#include "carto/density.hpp"
#include "carto/errors.hpp"
#include "carto/intersections.hpp"
#include "carto/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace carto
{

AreaErrors max_relative_area_error(const RegionSet &cartogram,
                                   const std::vector<double> &targets)
{
  if (targets.size() != cartogram.size()) {
    throw RegionMismatch("one target per region required");
  }
  AreaErrors out;
  std::vector<double> areas;
  for (const auto &r : cartogram.regions()) areas.push_back(region_area(r));
  const double total = std::accumulate(areas.begin(), areas.end(), 0.0);
  const double t_total = std::accumulate(targets.begin(), targets.end(), 0.0);
  for (std::size_t i = 0; i < areas.size(); ++i) {
    const double target = targets[i] / t_total * total;
    out.per_region.push_back(std::abs(areas[i] / target - 1.0));
    out.max = std::max(out.max, out.per_region.back());
  }
  return out;
}

Region normalize(const Region &region)
{
  const double area = region_area(region);
  if (!(area > 0.0)) {
    throw DegenerateGeometry("region '" + region.id + "' has no area");
  }
  const Point c = region_centroid(region);
  const double s = 1.0 / std::sqrt(area);
  Region out = region;
  for (auto &pwh : out.polygons) {
    for (auto &p : pwh.outer) p = s * (p - c);
    for (auto &h : pwh.holes) {
      for (auto &p : h) p = s * (p - c);
    }
  }
  return out;
}

const Ring &largest_outer(const Region &region)
{
  if (region.polygons.empty()) {
    throw DegenerateGeometry("region '" + region.id + "' has no polygons");
  }
  std::size_t best = 0;
  double best_area = -1.0;
  for (std::size_t i = 0; i < region.polygons.size(); ++i) {
    const double a = std::abs(polygon_area(region.polygons[i]));
    if (a > best_area) {
      best_area = a;
      best = i;
    }
  }
  return region.polygons[best].outer;
}

double frechet_distance(const Ring &a, const Ring &b)
{
  const std::size_t n = a.size(), m = b.size();
  if (n == 0 || m == 0) return 0.0;
  // Rows walk a0..a(n-1),a0; columns walk b from a start k, in either
  // direction, back to b_k.
  const bool cached = n * m <= (std::size_t(1) << 22);
  std::vector<double> d;
  if (cached) {
    d.resize(n * m);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) d[i * m + j] = distance(a[i], b[j]);
    }
  }
  auto dist = [&](std::size_t i, std::size_t j) {
    return cached ? d[i * m + j] : distance(a[i], b[j]);
  };

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> prev(m + 1), cur(m + 1);
  std::vector<std::size_t> col(m + 1);
  for (int dir : {1, -1}) {
    for (std::size_t k = 0; k < m; ++k) {
      if (dist(0, k) >= best) continue;
      for (std::size_t j = 0; j <= m; ++j) {
        const auto step = static_cast<long long>(j % m) * dir;
        col[j] = static_cast<std::size_t>(((static_cast<long long>(k) + step) % static_cast<long long>(m) +
                                           static_cast<long long>(m)) % static_cast<long long>(m));
      }
      bool abandoned = false;
      for (std::size_t i = 0; i <= n && !abandoned; ++i) {
        const std::size_t ai = i % n;
        double row_min = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j <= m; ++j) {
          const double dij = dist(ai, col[j]);
          double v;
          if (i == 0 && j == 0) {
            v = dij;
          } else if (i == 0) {
            v = std::max(cur[j - 1], dij);
          } else if (j == 0) {
            v = std::max(prev[0], dij);
          } else {
            v = std::max(std::min({prev[j], prev[j - 1], cur[j - 1]}), dij);
          }
          cur[j] = v;
          row_min = std::min(row_min, v);
        }
        // Values never decrease along a coupling.
        if (row_min >= best) abandoned = true;
        std::swap(prev, cur);
      }
      if (!abandoned) best = std::min(best, prev[m]);
    }
  }
  return best;
}

namespace
{

double point_segment(Point p, Point a, Point b)
{
  const Point d = b - a, w = p - a;
  const double len2 = d.x * d.x + d.y * d.y;
  double t = len2 > 0.0 ? (w.x * d.x + w.y * d.y) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, {a.x + t * d.x, a.y + t * d.y});
}

// Nearest-segment queries against the edges of a closed ring.
class SegmentGrid
{
public:
  explicit SegmentGrid(const Ring &ring) : ring_(ring)
  {
    const std::size_t n = ring.size();
    lo_ = hi_ = ring[0];
    for (const auto &p : ring) {
      lo_ = {std::min(lo_.x, p.x), std::min(lo_.y, p.y)};
      hi_ = {std::max(hi_.x, p.x), std::max(hi_.y, p.y)};
    }
    side_ = static_cast<long>(std::clamp(std::ceil(std::sqrt(double(n))), 1.0, 512.0));
    cw_ = std::max(hi_.x - lo_.x, 1e-300) / double(side_);
    ch_ = std::max(hi_.y - lo_.y, 1e-300) / double(side_);
    cells_.resize(std::size_t(side_ * side_));
    for (std::size_t i = 0; i < n; ++i) {
      const Point a = ring[i], b = ring[(i + 1) % n];
      for (long y = iy(std::min(a.y, b.y)); y <= iy(std::max(a.y, b.y)); ++y) {
        for (long x = ix(std::min(a.x, b.x)); x <= ix(std::max(a.x, b.x)); ++x) {
          cells_[std::size_t(y * side_ + x)].push_back(i);
        }
      }
    }
  }

  double segment_distance(std::size_t i, Point p) const
  {
    return point_segment(p, ring_[i], ring_[(i + 1) % ring_.size()]);
  }

  // Distance to the ring and the index of a nearest segment.
  std::pair<double, std::size_t> nearest(Point p) const
  {
    const long cx = ix(p.x), cy = iy(p.y);
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (long r = 0;; ++r) {
      const long x0 = cx - r, x1 = cx + r, y0 = cy - r, y1 = cy + r;
      for (long y = std::max(y0, 0L); y <= std::min(y1, side_ - 1); ++y) {
        for (long x = std::max(x0, 0L); x <= std::min(x1, side_ - 1); ++x) {
          if (std::max(std::abs(x - cx), std::abs(y - cy)) != r) continue;
          for (const auto i : cells_[std::size_t(y * side_ + x)]) {
            const double d = segment_distance(i, p);
            if (d < best) {
              best = d;
              arg = i;
            }
          }
        }
      }
      // Cells not yet visited lie beyond the block on some side.
      double bound = std::numeric_limits<double>::infinity();
      bool remaining = false;
      if (x0 > 0) {
        remaining = true;
        bound = std::min(bound, p.x - (lo_.x + double(x0) * cw_));
      }
      if (x1 < side_ - 1) {
        remaining = true;
        bound = std::min(bound, lo_.x + double(x1 + 1) * cw_ - p.x);
      }
      if (y0 > 0) {
        remaining = true;
        bound = std::min(bound, p.y - (lo_.y + double(y0) * ch_));
      }
      if (y1 < side_ - 1) {
        remaining = true;
        bound = std::min(bound, lo_.y + double(y1 + 1) * ch_ - p.y);
      }
      if (!remaining || best <= std::max(bound, 0.0)) break;
    }
    return {best, arg};
  }

private:
  long ix(double x) const
  {
    return std::clamp(static_cast<long>(std::floor((x - lo_.x) / cw_)), 0L, side_ - 1);
  }
  long iy(double y) const
  {
    return std::clamp(static_cast<long>(std::floor((y - lo_.y) / ch_)), 0L, side_ - 1);
  }

  const Ring &ring_;
  Point lo_, hi_;
  long side_ = 1;
  double cw_ = 1.0, ch_ = 1.0;
  std::vector<std::vector<std::size_t>> cells_;
};

// Largest distance from a point of ring a to ring b. On each segment of a
// the distance to b is a minimum of convex functions, so any one segment of
// b bounds it from above by its larger endpoint value; intervals whose
// bound cannot beat the current maximum are dropped.
double directed_hausdorff(const Ring &a, const Ring &b, double tol)
{
  const SegmentGrid grid(b);
  const std::size_t n = a.size();
  std::vector<std::pair<double, std::size_t>> at_vertex(n);
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    at_vertex[i] = grid.nearest(a[i]);
    best = std::max(best, at_vertex[i].first);
  }
  struct Interval {
    double t0, t1;
    std::size_t j0, j1;
  };
  std::vector<Interval> stack;
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = a[i], q = a[(i + 1) % n];
    auto at = [&](double t) { return Point{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)}; };
    stack.push_back({0.0, 1.0, at_vertex[i].second, at_vertex[(i + 1) % n].second});
    while (!stack.empty()) {
      const Interval iv = stack.back();
      stack.pop_back();
      const Point u = at(iv.t0), w = at(iv.t1);
      const double bound =
        std::min(std::max(grid.segment_distance(iv.j0, u), grid.segment_distance(iv.j0, w)),
                 std::max(grid.segment_distance(iv.j1, u), grid.segment_distance(iv.j1, w)));
      if (bound <= best + tol) continue;
      const double tm = 0.5 * (iv.t0 + iv.t1);
      if (tm <= iv.t0 || tm >= iv.t1) continue;
      const auto [dm, jm] = grid.nearest(at(tm));
      best = std::max(best, dm);
      stack.push_back({iv.t0, tm, iv.j0, jm});
      stack.push_back({tm, iv.t1, jm, iv.j1});
    }
  }
  return best;
}

double ring_extent(const Ring &a, const Ring &b)
{
  double m = 0.0;
  for (const auto *r : {&a, &b}) {
    for (const auto &p : *r) m = std::max({m, std::abs(p.x), std::abs(p.y)});
  }
  return m;
}

}  // namespace

double hausdorff_distance(const Ring &a, const Ring &b)
{
  if (a.empty() || b.empty()) return 0.0;
  const double tol = 1e-13 * std::max(ring_extent(a, b), 1e-300);
  return std::max(directed_hausdorff(a, b, tol), directed_hausdorff(b, a, tol));
}

namespace
{

// Rings of a region with outers counterclockwise and holes clockwise.
std::vector<Ring> oriented_rings(const Region &r)
{
  std::vector<Ring> out;
  for (const auto &pwh : r.polygons) {
    out.push_back(pwh.outer);
    if (!is_counterclockwise(out.back())) std::reverse(out.back().begin(), out.back().end());
    for (const auto &h : pwh.holes) {
      out.push_back(h);
      if (is_counterclockwise(out.back())) std::reverse(out.back().begin(), out.back().end());
    }
  }
  return out;
}

struct Piece {
  double t;
  Point at;
};

// Twice the Green's-theorem contribution of those parts of ring edges of
// `self` that bound the intersection with `other`: pieces inside `other`,
// and pieces running along an edge of `other` in the same direction when
// `keep_shared` is set. A piece lying within `eps` of the other boundary
// along its whole length counts as running along it, so rounding noise
// between nearly identical shapes does not flip its classification.
double clipped_boundary(const std::vector<Segment> &self,
                        const std::vector<Segment> &other,
                        const Region &other_region,
                        const std::vector<Ring> &other_rings,
                        double eps,
                        bool keep_shared)
{
  std::vector<SegmentGrid> grids;
  for (const auto &r : other_rings) grids.emplace_back(r);
  // Distance to the other boundary and the direction of a nearest edge.
  auto nearest = [&](Point p) {
    double best = std::numeric_limits<double>::infinity();
    Point dir{0.0, 0.0};
    for (std::size_t k = 0; k < grids.size(); ++k) {
      const auto [d, i] = grids[k].nearest(p);
      if (d < best) {
        const Ring &r = other_rings[k];
        best = d;
        dir = r[(i + 1) % r.size()] - r[i];
      }
    }
    return std::pair(best, dir);
  };
  std::vector<Segment> all = self;
  all.insert(all.end(), other.begin(), other.end());
  std::vector<std::vector<Piece>> cuts(self.size());
  struct Shared {
    double lo, hi;
    bool same;
  };
  std::vector<std::vector<Shared>> shared(self.size());
  auto param = [&](std::size_t i, Point x) {
    const Segment &s = self[i];
    const Point d = s.b - s.a, w = x - s.a;
    return (w.x * d.x + w.y * d.y) / (d.x * d.x + d.y * d.y);
  };
  for (const auto &c : segment_contacts(all)) {
    if (c.i >= self.size() || c.j < self.size()) continue;
    cuts[c.i].push_back({param(c.i, c.at), c.at});
    // A collinear overlap shows up as two contacts for the same pair.
    const auto x = intersect_segments(self[c.i], all[c.j]);
    if (x.n != 2 || x.pts[0] != c.at) continue;
    const Segment &s = self[c.i], &t = all[c.j];
    const Point ds = s.b - s.a, dt = t.b - t.a;
    const double t0 = param(c.i, x.pts[0]), t1 = param(c.i, x.pts[1]);
    shared[c.i].push_back({std::min(t0, t1), std::max(t0, t1), ds.x * dt.x + ds.y * dt.y > 0.0});
  }

  double sum = 0.0;
  for (std::size_t i = 0; i < self.size(); ++i) {
    auto &pc = cuts[i];
    pc.push_back({0.0, self[i].a});
    pc.push_back({1.0, self[i].b});
    std::sort(pc.begin(), pc.end(), [](const Piece &l, const Piece &r) { return l.t < r.t; });
    for (std::size_t k = 0; k + 1 < pc.size(); ++k) {
      const Piece &u = pc[k], &w = pc[k + 1];
      if (u.at == w.at) continue;
      bool include;
      const auto sh = std::find_if(shared[i].begin(), shared[i].end(), [&](const Shared &s) {
        return s.lo <= u.t && w.t <= s.hi;
      });
      if (sh != shared[i].end()) {
        include = keep_shared && sh->same;
      } else {
        const Point mid = 0.5 * (u.at + w.at);
        const auto [dm, dir] = nearest(mid);
        if (dm <= eps && nearest(u.at).first <= eps && nearest(w.at).first <= eps) {
          const Point d = w.at - u.at;
          include = keep_shared && d.x * dir.x + d.y * dir.y > 0.0;
        } else {
          include = contains(other_region, mid);
        }
      }
      if (include) sum += u.at.x * w.at.y - w.at.x * u.at.y;
    }
  }
  return sum;
}

std::vector<Segment> edges_of(const std::vector<Ring> &rings)
{
  std::vector<Segment> out;
  for (const auto &r : rings) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i] != r[(i + 1) % r.size()]) out.push_back({r[i], r[(i + 1) % r.size()]});
    }
  }
  return out;
}

}  // namespace

double symmetric_difference(const Region &a, const Region &b)
{
  const auto ra = oriented_rings(a), rb = oriented_rings(b);
  const auto ea = edges_of(ra), eb = edges_of(rb);
  const auto box = RegionSet({a, b}).bounding_box();
  const double eps = 1e-9 * std::max(box.width(), box.height());
  const double inter = 0.5 * (clipped_boundary(ea, eb, b, rb, eps, true) +
                              clipped_boundary(eb, ea, a, ra, eps, false));
  const double area_a = region_area(a), area_b = region_area(b);
  const double out = area_a + area_b - 2.0 * inter;
  if (!std::isfinite(out) || out < -1e-9 * (area_a + area_b)) {
    throw DegenerateGeometry("clipping failed for region '" + a.id + "'");
  }
  return std::max(out, 0.0);
}

MetricsReport evaluate(const RegionSet &input,
                       const RegionSet &cartogram,
                       int iterations,
                       bool converged)
{
  if (input.size() != cartogram.size()) {
    throw RegionMismatch("input and cartogram have different region counts");
  }
  MetricsReport rep;
  rep.iterations_run = iterations;
  rep.converged = converged;

  std::vector<double> targets;
  for (const auto &r : cartogram.regions()) {
    std::size_t k;
    try {
      k = input.index_of(r.id);
    } catch (const Error &) {
      throw RegionMismatch("cartogram region '" + r.id + "' missing from input");
    }
    targets.push_back(input[k].target_value);
  }
  const auto errors = max_relative_area_error(cartogram, targets);

  double sf = 0.0, sh = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < cartogram.size(); ++i) {
    const Region &c = cartogram[i];
    const Region na = normalize(input[input.index_of(c.id)]);
    const Region nc = normalize(c);
    RegionMetrics m;
    m.id = c.id;
    m.relative_area_error = errors.per_region[i];
    m.frechet = frechet_distance(largest_outer(na), largest_outer(nc));
    m.hausdorff = hausdorff_distance(largest_outer(na), largest_outer(nc));
    m.sym_diff = symmetric_difference(na, nc);
    sf += m.frechet;
    sh += m.hausdorff;
    ss += m.sym_diff;
    rep.per_region.push_back(std::move(m));
  }
  const double n = double(std::max<std::size_t>(cartogram.size(), 1));
  auto &agg = rep.aggregate;
  agg.e_max = errors.max;
  agg.mean_frechet = sf / n;
  agg.mean_hausdorff = sh / n;
  agg.mean_symdiff = ss / n;
  const auto s = intersection_summary(cartogram);
  agg.self_intersections = std::accumulate(s.self_per_region.begin(), s.self_per_region.end(), std::size_t(0));
  agg.overlap_intersections = s.overlap;
  agg.disparity_group = density_disparity(region_densities(input)).group;
  return rep;
}

}  // namespace carto
