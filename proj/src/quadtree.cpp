#include "carto/quadtree.hpp"

#include "carto/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace carto
{

std::vector<std::size_t> Quadtree::leaves() const
{
  std::vector<std::size_t> out;
  out.reserve(leaf_count);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k].is_leaf()) out.push_back(k);
  }
  return out;
}

std::size_t default_target_leaves(std::size_t grid_size, double fraction)
{
  const double cells = static_cast<double>(grid_size) * static_cast<double>(grid_size);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(fraction * cells)));
}

namespace
{

std::uint64_t spread_bits(std::uint32_t v)
{
  std::uint64_t x = v;
  x = (x | (x << 16)) & 0x0000ffff0000ffffULL;
  x = (x | (x << 8)) & 0x00ff00ff00ff00ffULL;
  x = (x | (x << 4)) & 0x0f0f0f0f0f0f0f0fULL;
  x = (x | (x << 2)) & 0x3333333333333333ULL;
  x = (x | (x << 1)) & 0x5555555555555555ULL;
  return x;
}

std::uint64_t morton(const QuadNode &n)
{
  return spread_bits(static_cast<std::uint32_t>(n.origin.x)) |
         (spread_bits(static_cast<std::uint32_t>(n.origin.y)) << 1);
}

// Min and max over aligned 2^L blocks for every level L.
struct Pyramid {
  std::size_t n = 0;
  std::vector<std::vector<double>> lo, hi;

  explicit Pyramid(const DensityGrid &grid) : n(grid.width)
  {
    lo.push_back(grid.values);
    hi.push_back(grid.values);
    for (std::size_t w = n / 2; w >= 1; w /= 2) {
      const auto &plo = lo.back();
      const auto &phi = hi.back();
      std::vector<double> l(w * w), h(w * w);
      for (std::size_t j = 0; j < w; ++j) {
        for (std::size_t i = 0; i < w; ++i) {
          const std::size_t a = (2 * j) * (2 * w) + 2 * i;
          const std::size_t b = a + 2 * w;
          l[j * w + i] = std::min({plo[a], plo[a + 1], plo[b], plo[b + 1]});
          h[j * w + i] = std::max({phi[a], phi[a + 1], phi[b], phi[b + 1]});
        }
      }
      lo.push_back(std::move(l));
      hi.push_back(std::move(h));
    }
  }

  void fill(QuadNode &node) const
  {
    const auto s = static_cast<std::size_t>(node.size);
    const auto level = static_cast<std::size_t>(std::countr_zero(s));
    const std::size_t w = n / s;
    const std::size_t k = static_cast<std::size_t>(node.origin.y) / s * w +
                          static_cast<std::size_t>(node.origin.x) / s;
    node.density_min = lo[level][k];
    node.density_max = hi[level][k];
  }
};

void split(Quadtree &t, std::size_t k, const Pyramid *pyr)
{
  const QuadNode parent = t.nodes[k];
  const double h = parent.size / 2;
  t.nodes[k].first_child = static_cast<std::int64_t>(t.nodes.size());
  for (int c = 0; c < 4; ++c) {
    QuadNode child;
    child.depth = parent.depth + 1;
    child.size = h;
    child.origin = {parent.origin.x + (c & 1 ? h : 0.0),
                    parent.origin.y + (c & 2 ? h : 0.0)};
    if (pyr) {
      pyr->fill(child);
    } else {
      child.density_min = parent.density_min;
      child.density_max = parent.density_max;
    }
    t.nodes.push_back(child);
  }
  t.leaf_count += 3;
}

}  // namespace

Quadtree build_quadtree(const DensityGrid &grid, std::size_t target_leaves)
{
  if (grid.width == 0 || grid.width != grid.height ||
      !std::has_single_bit(grid.width)) {
    throw GridTooCoarse("quadtree needs a square power-of-two grid");
  }
  if (target_leaves < 1) target_leaves = 1;
  const Pyramid pyr(grid);
  Quadtree t;
  t.grid_size = grid.width;
  t.max_depth = std::countr_zero(grid.width);
  QuadNode root;
  root.size = static_cast<double>(grid.width);
  pyr.fill(root);
  t.nodes.push_back(root);

  struct Entry {
    double diff;
    std::uint64_t code;
    std::size_t node;
  };
  auto worse = [](const Entry &a, const Entry &b) {
    if (a.diff != b.diff) return a.diff < b.diff;
    return a.code > b.code;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  auto push = [&](std::size_t k) {
    const QuadNode &n = t.nodes[k];
    if (n.size > 1.0) heap.push({n.diff(), morton(n), k});
  };
  push(0);
  while (t.leaf_count < target_leaves && !heap.empty()) {
    const Entry e = heap.top();
    heap.pop();
    t.split_log.push_back({e.node, e.diff});
    split(t, e.node, &pyr);
    const auto first = static_cast<std::size_t>(t.nodes[e.node].first_child);
    for (std::size_t c = 0; c < 4; ++c) push(first + c);
  }
  return t;
}

namespace
{

std::uint64_t node_key(int depth, std::int64_t ix, std::int64_t iy)
{
  return (static_cast<std::uint64_t>(depth) << 58) |
         (static_cast<std::uint64_t>(ix) << 29) | static_cast<std::uint64_t>(iy);
}

}  // namespace

Quadtree grade(Quadtree t)
{
  std::unordered_map<std::uint64_t, std::size_t> index;
  auto key_of = [&](const QuadNode &n) {
    return node_key(n.depth, std::llround(n.origin.x / n.size),
                    std::llround(n.origin.y / n.size));
  };
  for (std::size_t k = 0; k < t.nodes.size(); ++k) index[key_of(t.nodes[k])] = k;

  auto internal = [&](int d, std::int64_t ix, std::int64_t iy) {
    const auto it = index.find(node_key(d, ix, iy));
    return it != index.end() && !t.nodes[it->second].is_leaf();
  };
  // A leaf must split if a same-size neighbour has a split child touching it.
  auto violates = [&](const QuadNode &n) {
    const int d = n.depth;
    const std::int64_t cells = std::int64_t(1) << d;
    const std::int64_t ix = std::llround(n.origin.x / n.size);
    const std::int64_t iy = std::llround(n.origin.y / n.size);
    const std::int64_t dx[4] = {1, -1, 0, 0};
    const std::int64_t dy[4] = {0, 0, 1, -1};
    for (int s = 0; s < 4; ++s) {
      const std::int64_t nx = ix + dx[s], ny = iy + dy[s];
      if (nx < 0 || ny < 0 || nx >= cells || ny >= cells) continue;
      if (!internal(d, nx, ny)) continue;
      // Children of the neighbour along the shared side.
      for (std::int64_t o = 0; o < 2; ++o) {
        const std::int64_t cx = dx[s] == 0 ? 2 * nx + o : 2 * nx + (dx[s] > 0 ? 0 : 1);
        const std::int64_t cy = dy[s] == 0 ? 2 * ny + o : 2 * ny + (dy[s] > 0 ? 0 : 1);
        if (internal(d + 1, cx, cy)) return true;
      }
    }
    return false;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    const std::size_t count = t.nodes.size();
    for (std::size_t k = 0; k < count; ++k) {
      if (!t.nodes[k].is_leaf() || !violates(t.nodes[k])) continue;
      split(t, k, nullptr);
      const auto first = static_cast<std::size_t>(t.nodes[k].first_child);
      for (std::size_t c = 0; c < 4; ++c) {
        index[key_of(t.nodes[first + c])] = first + c;
      }
      changed = true;
    }
  }
  t.graded = true;
  return t;
}

std::vector<Point> leaf_corners(const Quadtree &tree)
{
  std::vector<Point> pts;
  for (const auto k : tree.leaves()) {
    const QuadNode &n = tree.nodes[k];
    const Point o = n.origin;
    pts.push_back(o);
    pts.push_back({o.x + n.size, o.y});
    pts.push_back({o.x, o.y + n.size});
    pts.push_back({o.x + n.size, o.y + n.size});
  }
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
    return std::pair(a.y, a.x) < std::pair(b.y, b.x);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

namespace
{

Ring boundary_with(const QuadNode &n,
                   const std::unordered_set<Point, PointHash> &corners)
{
  const Point o = n.origin;
  const double s = n.size, h = s / 2;
  const Point c[4] = {o, {o.x + s, o.y}, {o.x + s, o.y + s}, {o.x, o.y + s}};
  const Point m[4] = {{o.x + h, o.y}, {o.x + s, o.y + h}, {o.x + h, o.y + s},
                      {o.x, o.y + h}};
  Ring r;
  for (int k = 0; k < 4; ++k) {
    r.push_back(c[k]);
    if (s > 1.0 && corners.count(m[k])) r.push_back(m[k]);
  }
  return r;
}

std::unordered_set<Point, PointHash> corner_set(const Quadtree &tree)
{
  const auto pts = leaf_corners(tree);
  return {pts.begin(), pts.end()};
}

}  // namespace

Ring leaf_boundary(const Quadtree &tree, std::size_t leaf)
{
  return boundary_with(tree.nodes[leaf], corner_set(tree));
}

std::vector<std::pair<Point, Point>> leaf_edges(const Quadtree &tree)
{
  const auto corners = corner_set(tree);
  std::vector<std::pair<Point, Point>> out;
  for (const auto k : tree.leaves()) {
    const Ring r = boundary_with(tree.nodes[k], corners);
    for (std::size_t i = 0; i < r.size(); ++i) {
      Point a = r[i], b = r[(i + 1) % r.size()];
      if (b < a) std::swap(a, b);
      out.emplace_back(a, b);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace carto
