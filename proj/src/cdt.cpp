#include "carto/cdt.hpp"

#include "carto/errors.hpp"
#include "carto/predicates.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

namespace carto
{

namespace
{

int next(int i) { return i == 2 ? 0 : i + 1; }
int prev(int i) { return i == 0 ? 2 : i - 1; }

}  // namespace

Cdt::Cdt(std::vector<Point> points) : pts_(std::move(points))
{
  if (pts_.size() < 3) throw DegenerateGeometry("triangulation needs points");
  std::unordered_map<Point, std::int32_t, PointHash> seen;
  double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
  double xmax = -xmin, ymax = -xmin;
  for (std::size_t k = 0; k < pts_.size(); ++k) {
    if (!seen.emplace(pts_[k], static_cast<std::int32_t>(k)).second) {
      throw DegenerateGeometry("duplicate triangulation vertex");
    }
    xmin = std::min(xmin, pts_[k].x);
    xmax = std::max(xmax, pts_[k].x);
    ymin = std::min(ymin, pts_[k].y);
    ymax = std::max(ymax, pts_[k].y);
  }
  const Point box[4] = {{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}};
  std::int32_t c[4];
  for (int k = 0; k < 4; ++k) {
    const auto it = seen.find(box[k]);
    if (it == seen.end() || xmin == xmax || ymin == ymax) {
      throw DegenerateGeometry("bounding box corners must be vertices");
    }
    c[k] = it->second;
  }
  vtri_.assign(pts_.size(), -1);
  add_triangle(c[0], c[1], c[2]);
  add_triangle(c[0], c[2], c[3]);
  tris_[0].nb = {-1, 1, -1};
  tris_[1].nb = {-1, -1, 0};
  for (std::size_t k = 0; k < pts_.size(); ++k) {
    const auto p = static_cast<std::int32_t>(k);
    if (p == c[0] || p == c[1] || p == c[2] || p == c[3]) continue;
    insert_point(p);
  }
}

std::int32_t Cdt::add_triangle(std::int32_t a, std::int32_t b, std::int32_t c)
{
  tris_.push_back({{a, b, c}, {-1, -1, -1}, {}});
  const auto t = static_cast<std::int32_t>(tris_.size() - 1);
  vtri_[a] = vtri_[b] = vtri_[c] = t;
  return t;
}

void Cdt::set_triangle(std::int32_t t, std::int32_t a, std::int32_t b, std::int32_t c)
{
  tris_[t].v = {a, b, c};
  vtri_[a] = vtri_[b] = vtri_[c] = t;
}

void Cdt::relink(std::int32_t n, std::int32_t from, std::int32_t to)
{
  if (n < 0) return;
  for (auto &x : tris_[n].nb) {
    if (x == from) {
      x = to;
      return;
    }
  }
}

std::int32_t Cdt::walk(std::int32_t t, Point p) const
{
  // Visibility walk; Delaunay triangulations guarantee termination, the
  // step cap only guards constrained states.
  const std::size_t cap = 4 * tris_.size() + 16;
  for (std::size_t step = 0; step < cap; ++step) {
    const auto &tr = tris_[t];
    int moved = -1;
    for (int i = 0; i < 3; ++i) {
      if (tr.nb[i] < 0) continue;
      if (orient2d(pts_[tr.v[next(i)]], pts_[tr.v[prev(i)]], p) < 0) {
        moved = i;
        break;
      }
    }
    if (moved < 0) return t;
    t = tr.nb[moved];
  }
  for (std::size_t k = 0; k < tris_.size(); ++k) {
    const auto &tr = tris_[k];
    bool in = true;
    for (int i = 0; i < 3 && in; ++i) {
      in = orient2d(pts_[tr.v[next(i)]], pts_[tr.v[prev(i)]], p) >= 0;
    }
    if (in) return static_cast<std::int32_t>(k);
  }
  throw DegenerateGeometry("point outside triangulation");
}

void Cdt::insert_point(std::int32_t p)
{
  const Point q = pts_[p];
  const std::int32_t t = walk(last_, q);
  const Triangle tr = tris_[t];
  int o[3];
  int zeros = 0, edge = -1;
  for (int i = 0; i < 3; ++i) {
    o[i] = orient2d(pts_[tr.v[next(i)]], pts_[tr.v[prev(i)]], q);
    if (o[i] == 0) {
      ++zeros;
      edge = i;
    }
  }
  if (zeros >= 2) throw DegenerateGeometry("duplicate triangulation vertex");

  std::vector<std::pair<std::int32_t, int>> stack;
  if (zeros == 0) {
    // Split into three around p; t keeps (p, v1, v2).
    const std::int32_t a = tr.v[0], b = tr.v[1], c = tr.v[2];
    const std::int32_t t1 = add_triangle(p, c, a);
    const std::int32_t t2 = add_triangle(p, a, b);
    set_triangle(t, p, b, c);
    tris_[t].nb = {tr.nb[0], t1, t2};
    tris_[t1].nb = {tr.nb[1], t2, t};
    tris_[t2].nb = {tr.nb[2], t, t1};
    tris_[t].fixed = {tr.fixed[0], false, false};
    tris_[t1].fixed = {tr.fixed[1], false, false};
    tris_[t2].fixed = {tr.fixed[2], false, false};
    relink(tr.nb[1], t, t1);
    relink(tr.nb[2], t, t2);
    stack = {{t, 0}, {t1, 0}, {t2, 0}};
  } else {
    // p lies on the edge opposite v[edge]: split t, and its neighbour if any.
    const std::int32_t x = tr.v[edge];
    const std::int32_t u = tr.v[next(edge)];
    const std::int32_t w = tr.v[prev(edge)];
    const std::int32_t n = tr.nb[edge];
    const bool was_fixed = tr.fixed[edge];
    const std::int32_t n_xu = tr.nb[prev(edge)];  // across (x, u)
    const std::int32_t n_wx = tr.nb[next(edge)];  // across (w, x)
    const bool f_xu = tr.fixed[prev(edge)], f_wx = tr.fixed[next(edge)];
    // t -> (p, x, u), t1 -> (p, w, x)
    const std::int32_t t1 = add_triangle(p, w, x);
    set_triangle(t, p, x, u);
    if (n < 0) {
      tris_[t].nb = {n_xu, -1, t1};
      tris_[t1].nb = {n_wx, t, -1};
      tris_[t].fixed = {f_xu, was_fixed, false};
      tris_[t1].fixed = {f_wx, false, was_fixed};
      relink(n_wx, t, t1);
      stack = {{t, 0}, {t1, 0}};
    } else {
      const Triangle nt = tris_[n];
      int j = 0;
      while (nt.nb[j] != t) ++j;
      const std::int32_t y = nt.v[j];  // nt = (y, w, u)
      const std::int32_t n_uy = nt.nb[next(j)];  // across (u, y)
      const std::int32_t n_yw = nt.nb[prev(j)];  // across (y, w)
      const bool f_uy = nt.fixed[next(j)], f_yw = nt.fixed[prev(j)];
      // n -> (p, u, y), t2 -> (p, y, w)
      const std::int32_t t2 = add_triangle(p, y, w);
      set_triangle(n, p, u, y);
      tris_[t].nb = {n_xu, n, t1};
      tris_[t1].nb = {n_wx, t, t2};
      tris_[n].nb = {n_uy, t2, t};
      tris_[t2].nb = {n_yw, t1, n};
      tris_[t].fixed = {f_xu, was_fixed, false};
      tris_[t1].fixed = {f_wx, false, was_fixed};
      tris_[n].fixed = {f_uy, false, was_fixed};
      tris_[t2].fixed = {f_yw, was_fixed, false};
      relink(n_wx, t, t1);
      relink(n_yw, n, t2);
      stack = {{t, 0}, {t1, 0}, {n, 0}, {t2, 0}};
    }
  }
  legalize(stack);
  last_ = vtri_[p];
}

void Cdt::flip(std::int32_t t, int i)
{
  const Triangle a = tris_[t];
  const std::int32_t t2 = a.nb[i];
  const Triangle b = tris_[t2];
  int j = 0;
  while (b.nb[j] != t) ++j;
  const std::int32_t x = a.v[i], u = a.v[next(i)], w = a.v[prev(i)];
  const std::int32_t y = b.v[j];  // b = (y, w, u)
  const std::int32_t n_xu = a.nb[prev(i)], n_wx = a.nb[next(i)];
  const std::int32_t n_uy = b.nb[next(j)], n_yw = b.nb[prev(j)];
  const bool f_xu = a.fixed[prev(i)], f_wx = a.fixed[next(i)];
  const bool f_uy = b.fixed[next(j)], f_yw = b.fixed[prev(j)];
  // t -> (x, u, y), t2 -> (y, w, x)
  set_triangle(t, x, u, y);
  set_triangle(t2, y, w, x);
  tris_[t].nb = {n_uy, t2, n_xu};
  tris_[t].fixed = {f_uy, false, f_xu};
  tris_[t2].nb = {n_wx, t, n_yw};
  tris_[t2].fixed = {f_wx, false, f_yw};
  relink(n_uy, t2, t);
  relink(n_wx, t, t2);
}

void Cdt::legalize(std::vector<std::pair<std::int32_t, int>> &stack)
{
  // Each entry names an edge by (triangle, opposite corner index). After a
  // flip the two outer edges of the new pair are rechecked.
  while (!stack.empty()) {
    const auto [t, i] = stack.back();
    stack.pop_back();
    const Triangle &tr = tris_[t];
    const std::int32_t n = tr.nb[i];
    if (n < 0 || tr.fixed[i]) continue;
    const Triangle &nt = tris_[n];
    int j = 0;
    while (nt.nb[j] != t) ++j;
    if (incircle(pts_[tr.v[0]], pts_[tr.v[1]], pts_[tr.v[2]], pts_[nt.v[j]]) <= 0) {
      continue;
    }
    flip(t, i);
    // t = (x, u, y), n = (y, w, x): recheck the edges opposite x.
    stack.emplace_back(t, 0);
    stack.emplace_back(n, 2);
  }
}

std::pair<std::int32_t, int> Cdt::find_edge(std::int32_t a, std::int32_t b) const
{
  // Circulate around a in both directions from its recorded triangle.
  const std::int32_t start = vtri_[a];
  for (int dir = 0; dir < 2; ++dir) {
    std::int32_t t = start;
    for (std::size_t guard = 0; guard < tris_.size() + 1 && t >= 0; ++guard) {
      const Triangle &tr = tris_[t];
      int k = 0;
      while (tr.v[k] != a) ++k;
      if (tr.v[next(k)] == b) return {t, prev(k)};
      if (tr.v[prev(k)] == b) return {t, next(k)};
      t = dir == 0 ? tr.nb[prev(k)] : tr.nb[next(k)];
      if (t == start) break;
    }
  }
  return {-1, -1};
}

std::vector<std::int32_t> Cdt::incident(std::int32_t a) const
{
  std::vector<std::int32_t> out;
  const std::int32_t start = vtri_[a];
  for (int dir = 0; dir < 2; ++dir) {
    std::int32_t t = start;
    while (true) {
      const Triangle &tr = tris_[t];
      int k = 0;
      while (tr.v[k] != a) ++k;
      if (dir == 0 || t != start) out.push_back(t);
      t = dir == 0 ? tr.nb[prev(k)] : tr.nb[next(k)];
      if (t < 0) break;
      if (t == start) return out;
    }
  }
  return out;
}

bool Cdt::has_edge(std::size_t a, std::size_t b) const
{
  return find_edge(static_cast<std::int32_t>(a), static_cast<std::int32_t>(b)).first >= 0;
}

bool Cdt::is_constrained(std::size_t a, std::size_t b) const
{
  const auto [t, i] = find_edge(static_cast<std::int32_t>(a), static_cast<std::int32_t>(b));
  return t >= 0 && tris_[t].fixed[i];
}

std::vector<std::pair<std::size_t, std::size_t>> Cdt::edges() const
{
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t t = 0; t < tris_.size(); ++t) {
    const auto &tr = tris_[t];
    for (int i = 0; i < 3; ++i) {
      const auto u = static_cast<std::size_t>(tr.v[next(i)]);
      const auto w = static_cast<std::size_t>(tr.v[prev(i)]);
      if (tr.nb[i] < 0 || static_cast<std::size_t>(tr.nb[i]) > t) {
        out.emplace_back(std::min(u, w), std::max(u, w));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void Cdt::insert_constraint(std::size_t a_in, std::size_t b_in)
{
  auto a = static_cast<std::int32_t>(a_in);
  const auto b = static_cast<std::int32_t>(b_in);
  if (a == b) return;
  auto mark = [&](std::int32_t u, std::int32_t w) {
    const auto [t, i] = find_edge(u, w);
    tris_[t].fixed[i] = true;
    const std::int32_t n = tris_[t].nb[i];
    if (n >= 0) {
      for (int j = 0; j < 3; ++j) {
        if (tris_[n].nb[j] == t) tris_[n].fixed[j] = true;
      }
    }
  };
  while (a != b) {
    if (find_edge(a, b).first >= 0) {
      mark(a, b);
      return;
    }
    const Point pa = pts_[a], pb = pts_[b];
    // Find the triangle around a whose opposite edge the segment enters.
    std::int32_t t = -1;
    std::int32_t stop = -1;  // a vertex on the segment, reached first
    int enter = -1;
    for (const std::int32_t cur : incident(a)) {
      const Triangle &tr = tris_[cur];
      int k = 0;
      while (tr.v[k] != a) ++k;
      const std::int32_t u = tr.v[next(k)], w = tr.v[prev(k)];
      const int ou = orient2d(pa, pb, pts_[u]);
      const int ow = orient2d(pa, pb, pts_[w]);
      auto ahead = [&](std::int32_t v) {
        const Point d = pts_[v] - pa, e = pb - pa;
        return d.x * e.x + d.y * e.y > 0.0;
      };
      if (ou == 0 && ahead(u)) {
        stop = u;
        break;
      }
      if (ow == 0 && ahead(w)) {
        stop = w;
        break;
      }
      if (ou < 0 && ow > 0) {
        t = cur;
        enter = k;
        break;
      }
    }
    if (stop >= 0) {
      if (find_edge(a, stop).first < 0) {
        throw DegenerateGeometry("constraint recovery failed");
      }
      mark(a, stop);
      a = stop;
      continue;
    }
    if (enter < 0) throw DegenerateGeometry("constraint recovery failed");

    // Collect the edges crossed by a-b, stopping at b or at a vertex on
    // the segment.
    std::deque<std::pair<std::int32_t, std::int32_t>> crossing;
    std::int32_t end = b;
    {
      std::int32_t cur = t;
      int opp = enter;  // edge opposite v[opp] is being crossed
      while (true) {
        const Triangle &tr = tris_[cur];
        if (tr.fixed[opp]) throw DegenerateGeometry("constraints cross");
        const std::int32_t u = tr.v[next(opp)], w = tr.v[prev(opp)];
        crossing.emplace_back(u, w);
        const std::int32_t n = tr.nb[opp];
        const Triangle &nt = tris_[n];
        int j = 0;
        while (nt.nb[j] != cur) ++j;
        const std::int32_t y = nt.v[j];
        if (y == b) break;
        const int oy = orient2d(pa, pb, pts_[y]);
        if (oy == 0) {
          end = y;
          break;
        }
        // nt = (y, w, u); leave through (y, w) if y is left of a-b, else (u, y).
        cur = n;
        opp = oy > 0 ? next(j) : prev(j);
      }
    }

    const Point pe = pts_[end];
    auto crosses = [&](std::int32_t u, std::int32_t w) {
      if (u == a || w == a || u == end || w == end) return false;
      const int o1 = orient2d(pa, pe, pts_[u]);
      const int o2 = orient2d(pa, pe, pts_[w]);
      return o1 * o2 < 0;
    };
    std::vector<std::pair<std::int32_t, std::int32_t>> fresh;
    std::size_t stall = 0;
    while (!crossing.empty()) {
      const auto [eu, ew] = crossing.front();
      crossing.pop_front();
      const auto [tt, i] = find_edge(eu, ew);
      const Triangle &tr = tris_[tt];
      const std::int32_t x = tr.v[i];
      const std::int32_t u = tr.v[next(i)], w = tr.v[prev(i)];
      const std::int32_t n = tr.nb[i];
      const Triangle &nt = tris_[n];
      int j = 0;
      while (nt.nb[j] != tt) ++j;
      const std::int32_t y = nt.v[j];
      // The quad x-u-y-w must be strictly convex for the flip.
      const bool convex = orient2d(pts_[x], pts_[u], pts_[y]) > 0 &&
                          orient2d(pts_[y], pts_[w], pts_[x]) > 0;
      if (!convex) {
        crossing.emplace_back(u, w);
        if (++stall > 4 * crossing.size() + 64) {
          throw DegenerateGeometry("constraint recovery stalled");
        }
        continue;
      }
      stall = 0;
      flip(tt, i);
      if (crosses(x, y)) {
        crossing.emplace_back(x, y);
      } else {
        fresh.emplace_back(x, y);
      }
    }
    mark(a, end);

    // Restore Delaunay on the new edges that are not the constraint.
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto &[u, w] : fresh) {
        if ((u == a && w == end) || (u == end && w == a)) continue;
        const auto [tt, i] = find_edge(u, w);
        if (tt < 0) continue;
        const Triangle &tr = tris_[tt];
        const std::int32_t n = tr.nb[i];
        if (n < 0 || tr.fixed[i]) continue;
        const Triangle &nt = tris_[n];
        int j = 0;
        while (nt.nb[j] != tt) ++j;
        const std::int32_t y = nt.v[j];
        if (incircle(pts_[tr.v[0]], pts_[tr.v[1]], pts_[tr.v[2]], pts_[y]) > 0) {
          const std::int32_t x = tr.v[i];
          flip(tt, i);
          u = x;
          w = y;
          changed = true;
        }
      }
    }
    a = end;
  }
}

}  // namespace carto
