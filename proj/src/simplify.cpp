#include "carto/simplify.hpp"

#include "carto/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace carto
{

std::size_t default_simplify_target(const RegionSet &set)
{
  return std::max<std::size_t>(10000, 15 * set.n_polygons());
}

namespace
{

struct Arc {
  std::vector<Point> pts;
  std::vector<std::size_t> prev, next;
  std::vector<bool> alive;
  std::vector<std::size_t> users;  // global ring ids, one per use
  std::vector<std::uint32_t> stamp;
};

struct RingParts {
  std::vector<std::pair<std::size_t, bool>> parts;  // arc, reversed
};

struct PairHash {
  std::size_t operator()(const std::pair<Point, Point> &s) const noexcept
  {
    PointHash h;
    return h(s.first) * 1000003u ^ h(s.second);
  }
};

std::pair<Point, Point> key_of(Point a, Point b) { return std::minmax(a, b); }

// Uniform grid over the surviving vertex coordinates.
class VertexGrid
{
public:
  VertexGrid(const BoundingBox &box, std::size_t n)
    : min_(box.min),
      side_(static_cast<std::size_t>(
        std::clamp(std::ceil(std::sqrt(static_cast<double>(n))), 1.0, 2048.0))),
      cw_(std::max(box.width(), 1e-300) / static_cast<double>(side_)),
      ch_(std::max(box.height(), 1e-300) / static_cast<double>(side_)),
      cells_(side_ * side_)
  {
  }

  void add(Point p) { cells_[cell(p)].push_back(p); }
  void remove(Point p)
  {
    auto &c = cells_[cell(p)];
    const auto it = std::find(c.begin(), c.end(), p);
    if (it != c.end()) {
      *it = c.back();
      c.pop_back();
    }
  }

  // True if some vertex other than p, v, q lies in the closed triangle.
  bool any_in(Point p, Point v, Point q) const
  {
    const std::size_t i0 = ix(std::min({p.x, v.x, q.x}));
    const std::size_t i1 = ix(std::max({p.x, v.x, q.x}));
    const std::size_t j0 = iy(std::min({p.y, v.y, q.y}));
    const std::size_t j1 = iy(std::max({p.y, v.y, q.y}));
    const int s = orient2d(p, v, q);
    for (std::size_t j = j0; j <= j1; ++j) {
      for (std::size_t i = i0; i <= i1; ++i) {
        for (const auto &x : cells_[j * side_ + i]) {
          if (x == p || x == v || x == q) continue;
          if (s == 0) {
            if (on_segment(p, v, x) || on_segment(v, q, x) || on_segment(p, q, x)) return true;
            continue;
          }
          if (orient2d(p, v, x) * s >= 0 && orient2d(v, q, x) * s >= 0 &&
              orient2d(q, p, x) * s >= 0) {
            return true;
          }
        }
      }
    }
    return false;
  }

private:
  std::size_t ix(double x) const
  {
    const auto c = static_cast<long long>(std::floor((x - min_.x) / cw_));
    return static_cast<std::size_t>(std::clamp<long long>(c, 0, static_cast<long long>(side_) - 1));
  }
  std::size_t iy(double y) const
  {
    const auto c = static_cast<long long>(std::floor((y - min_.y) / ch_));
    return static_cast<std::size_t>(std::clamp<long long>(c, 0, static_cast<long long>(side_) - 1));
  }
  std::size_t cell(Point p) const { return iy(p.y) * side_ + ix(p.x); }

  Point min_;
  std::size_t side_;
  double cw_, ch_;
  std::vector<std::vector<Point>> cells_;
};

struct Candidate {
  double area;
  std::size_t arc;
  std::size_t index;
  std::uint32_t stamp;

  bool operator>(const Candidate &o) const
  {
    return std::tie(area, arc, index) > std::tie(o.area, o.arc, o.index);
  }
};

}  // namespace

RegionSet simplify(const RegionSet &set, std::size_t target)
{
  std::vector<const Ring *> rings;
  for (const auto &r : set.regions()) {
    for (const auto &pwh : r.polygons) {
      rings.push_back(&pwh.outer);
      for (const auto &h : pwh.holes) rings.push_back(&h);
    }
  }

  // Junctions: coordinates with other than two distinct neighbours.
  std::unordered_map<Point, std::vector<Point>, PointHash> nbrs;
  for (const auto *ring : rings) {
    const std::size_t n = ring->size();
    for (std::size_t i = 0; i < n; ++i) {
      auto &list = nbrs[(*ring)[i]];
      for (const Point q : {(*ring)[(i + n - 1) % n], (*ring)[(i + 1) % n]}) {
        if (std::find(list.begin(), list.end(), q) == list.end()) list.push_back(q);
      }
    }
  }
  std::unordered_set<Point, PointHash> nodes;
  for (const auto &[p, list] : nbrs) {
    if (list.size() != 2) nodes.insert(p);
  }
  // A ring without junctions is anchored at its smallest vertex, which any
  // ring tracing the same loop picks as well.
  for (const auto *ring : rings) {
    if (ring->empty()) continue;
    if (std::none_of(ring->begin(), ring->end(), [&](Point p) { return nodes.count(p); })) {
      nodes.insert(*std::min_element(ring->begin(), ring->end()));
    }
  }

  std::vector<Arc> arcs;
  std::map<std::vector<Point>, std::size_t> arc_ids;
  std::vector<RingParts> parts(rings.size());
  std::vector<std::size_t> counts(rings.size());
  for (std::size_t r = 0; r < rings.size(); ++r) {
    const Ring &ring = *rings[r];
    const std::size_t n = ring.size();
    counts[r] = n;
    if (n == 0) continue;
    std::size_t s = 0;
    while (!nodes.count(ring[s])) ++s;
    std::vector<Point> chain{ring[s]};
    for (std::size_t k = 1; k <= n; ++k) {
      const Point p = ring[(s + k) % n];
      chain.push_back(p);
      if (!nodes.count(p)) continue;
      std::vector<Point> rev(chain.rbegin(), chain.rend());
      bool reversed;
      if (chain.front() != chain.back()) {
        reversed = chain.back() < chain.front();
      } else {
        reversed = chain.size() > 2 && chain[chain.size() - 2] < chain[1];
      }
      const auto &key = reversed ? rev : chain;
      auto [it, fresh] = arc_ids.emplace(key, arcs.size());
      if (fresh) {
        Arc a;
        a.pts = key;
        const std::size_t m = key.size();
        for (std::size_t i = 0; i < m; ++i) {
          a.prev.push_back(i == 0 ? 0 : i - 1);
          a.next.push_back(i + 1 == m ? m - 1 : i + 1);
        }
        a.alive.assign(m, true);
        a.stamp.assign(m, 0);
        arcs.push_back(std::move(a));
      }
      arcs[it->second].users.push_back(r);
      parts[r].parts.emplace_back(it->second, reversed);
      chain = {p};
    }
  }

  std::size_t total = 0;
  for (const auto c : counts) total += c;

  std::unordered_set<std::pair<Point, Point>, PairHash> segments;
  VertexGrid grid(set.bounding_box(), total);
  std::unordered_set<Point, PointHash> seen;
  for (const auto &a : arcs) {
    for (std::size_t i = 0; i < a.pts.size(); ++i) {
      if (seen.insert(a.pts[i]).second) grid.add(a.pts[i]);
      if (i + 1 < a.pts.size()) segments.insert(key_of(a.pts[i], a.pts[i + 1]));
    }
  }

  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> queue;
  auto push = [&](std::size_t ai, std::size_t i) {
    const Arc &a = arcs[ai];
    if (i == 0 || i + 1 == a.pts.size() || !a.alive[i]) return;
    const double area =
      0.5 * std::abs(orient2d_value(a.pts[a.prev[i]], a.pts[i], a.pts[a.next[i]]));
    queue.push({area, ai, i, a.stamp[i]});
  };
  for (std::size_t ai = 0; ai < arcs.size(); ++ai) {
    for (std::size_t i = 1; i + 1 < arcs[ai].pts.size(); ++i) push(ai, i);
  }

  while (total > target && !queue.empty()) {
    const Candidate c = queue.top();
    queue.pop();
    Arc &a = arcs[c.arc];
    if (!a.alive[c.index] || a.stamp[c.index] != c.stamp) continue;
    const std::size_t pi = a.prev[c.index], ni = a.next[c.index];
    const Point p = a.pts[pi], v = a.pts[c.index], q = a.pts[ni];

    bool ok = !segments.count(key_of(p, q));
    if (ok) {
      std::map<std::size_t, std::size_t> uses;
      for (const auto r : a.users) ++uses[r];
      for (const auto &[r, m] : uses) ok = ok && counts[r] >= 3 + m;
    }
    ok = ok && !grid.any_in(p, v, q);
    if (!ok) continue;

    a.alive[c.index] = false;
    a.next[pi] = ni;
    a.prev[ni] = pi;
    segments.erase(key_of(p, v));
    segments.erase(key_of(v, q));
    segments.insert(key_of(p, q));
    grid.remove(v);
    for (const auto r : a.users) --counts[r];
    total -= a.users.size();
    ++a.stamp[pi];
    ++a.stamp[ni];
    push(c.arc, pi);
    push(c.arc, ni);
  }

  // Reassemble rings, starting each at its first surviving original vertex.
  std::vector<Ring> out(rings.size());
  for (std::size_t r = 0; r < rings.size(); ++r) {
    Ring ring;
    for (const auto &[ai, reversed] : parts[r].parts) {
      const Arc &a = arcs[ai];
      std::vector<Point> pts;
      for (std::size_t i = 0;; i = a.next[i]) {
        pts.push_back(a.pts[i]);
        if (i + 1 == a.pts.size()) break;
      }
      if (reversed) std::reverse(pts.begin(), pts.end());
      ring.insert(ring.end(), pts.begin(), pts.end() - 1);
    }
    std::unordered_map<Point, std::size_t, PointHash> pos;
    for (std::size_t i = ring.size(); i-- > 0;) pos[ring[i]] = i;
    for (const auto &p : *rings[r]) {
      const auto it = pos.find(p);
      if (it != pos.end()) {
        std::rotate(ring.begin(), ring.begin() + static_cast<std::ptrdiff_t>(it->second), ring.end());
        break;
      }
    }
    out[r] = std::move(ring);
  }

  std::vector<Region> regions;
  std::size_t k = 0;
  for (const auto &r : set.regions()) {
    Region nr{r.id, {}, r.target_value};
    for (const auto &pwh : r.polygons) {
      PolygonWithHoles np;
      np.outer = std::move(out[k++]);
      for (std::size_t h = 0; h < pwh.holes.size(); ++h) np.holes.push_back(std::move(out[k++]));
      nr.polygons.push_back(std::move(np));
    }
    regions.push_back(std::move(nr));
  }
  return RegionSet(std::move(regions));
}

}  // namespace carto
