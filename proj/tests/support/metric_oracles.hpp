// Reference implementations of the shape metrics, written for clarity
// rather than speed.
#ifndef CARTO_TEST_METRIC_ORACLES_HPP
#define CARTO_TEST_METRIC_ORACLES_HPP

#include "carto/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle
{

using carto::BoundingBox;
using carto::distance;
using carto::Point;
using carto::Region;
using carto::Ring;

// Textbook discrete Frechet recursion on two explicit sequences.
inline double dp_frechet(const std::vector<Point> &p, const std::vector<Point> &q)
{
  const std::size_t n = p.size(), m = q.size();
  std::vector<double> c(n * m, -1.0);
  std::function<double(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t j) {
    double &v = c[i * m + j];
    if (v >= 0.0) return v;
    const double d = distance(p[i], q[j]);
    if (i == 0 && j == 0) {
      v = d;
    } else if (i == 0) {
      v = std::max(rec(0, j - 1), d);
    } else if (j == 0) {
      v = std::max(rec(i - 1, 0), d);
    } else {
      v = std::max(std::min({rec(i - 1, j), rec(i - 1, j - 1), rec(i, j - 1)}), d);
    }
    return v;
  };
  return rec(n - 1, m - 1);
}

// Both rings closed by repeating their start; b tried from every start in
// both directions.
inline double oracle_frechet(const Ring &a, const Ring &b)
{
  std::vector<Point> pa(a.begin(), a.end());
  pa.push_back(a.front());
  double best = INFINITY;
  for (int dir : {1, -1}) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      std::vector<Point> pb;
      for (std::size_t j = 0; j <= b.size(); ++j) {
        const long m = long(b.size());
        pb.push_back(b[std::size_t(((long(k) + dir * long(j)) % m + m) % m)]);
      }
      best = std::min(best, dp_frechet(pa, pb));
    }
  }
  return best;
}

inline double to_polyline(Point p, const Ring &r)
{
  double best = INFINITY;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Point a = r[i], b = r[(i + 1) % r.size()];
    const double dx = b.x - a.x, dy = b.y - a.y;
    double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy);
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy)));
  }
  return best;
}

// Dense sampling along a, with golden-section refinement around the best
// samples.
inline double oracle_directed(const Ring &a, const Ring &b, int samples)
{
  double perim = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) perim += distance(a[i], a[(i + 1) % a.size()]);
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Point p = a[i], q = a[(i + 1) % a.size()];
    const int k = std::max(2, int(samples * distance(p, q) / perim));
    auto f = [&](double t) { return to_polyline({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)}, b); };
    std::vector<double> v(k + 1);
    for (int s = 0; s <= k; ++s) v[s] = f(double(s) / k);
    for (int s = 0; s <= k; ++s) {
      best = std::max(best, v[s]);
      const bool peak = (s == 0 || v[s] >= v[s - 1]) && (s == k || v[s] >= v[s + 1]);
      if (!peak) continue;
      double lo = std::max(0.0, double(s - 1) / k), hi = std::min(1.0, double(s + 1) / k);
      const double g = (std::sqrt(5.0) - 1.0) / 2.0;
      for (int it = 0; it < 80; ++it) {
        const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
        if (f(m1) < f(m2)) {
          lo = m1;
        } else {
          hi = m2;
        }
      }
      best = std::max(best, f(0.5 * (lo + hi)));
    }
  }
  return best;
}

inline double oracle_hausdorff(const Ring &a, const Ring &b)
{
  return std::max(oracle_directed(a, b, 10000), oracle_directed(b, a, 10000));
}

// Random simple star-shaped ring around c.
inline Ring star(std::mt19937_64 &rng, std::size_t n, Point c, double r)
{
  std::uniform_real_distribution<double> u(0.3, 1.0);
  Ring out;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * (i + 0.5 * u(rng)) / double(n);
    const double rr = r * u(rng);
    out.push_back({c.x + rr * std::cos(a), c.y + rr * std::sin(a)});
  }
  return out;
}

// Winding number test; random sample points almost surely avoid edges.
inline bool oracle_inside(const Ring &ring, Point p)
{
  int w = 0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point a = ring[i], b = ring[(i + 1) % ring.size()];
    const double side = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (a.y <= p.y) {
      if (b.y > p.y && side > 0) ++w;
    } else if (b.y <= p.y && side < 0) {
      --w;
    }
  }
  return w != 0;
}

inline bool oracle_in_region(const Region &r, Point p)
{
  for (const auto &pwh : r.polygons) {
    if (!oracle_inside(pwh.outer, p)) continue;
    bool in_hole = false;
    for (const auto &h : pwh.holes) in_hole = in_hole || oracle_inside(h, p);
    if (!in_hole) return true;
  }
  return false;
}

inline double monte_carlo_symdiff(const Region &a, const Region &b, int samples, std::uint64_t seed)
{
  BoundingBox box{{INFINITY, INFINITY}, {-INFINITY, -INFINITY}};
  for (const auto *r : {&a, &b}) {
    for (const auto &pwh : r->polygons) {
      for (const auto &p : pwh.outer) {
        box.min = {std::min(box.min.x, p.x), std::min(box.min.y, p.y)};
        box.max = {std::max(box.max.x, p.x), std::max(box.max.y, p.y)};
      }
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.min.x, box.max.x), uy(box.min.y, box.max.y);
  int hit = 0;
  for (int s = 0; s < samples; ++s) {
    const Point p{ux(rng), uy(rng)};
    if (oracle_in_region(a, p) != oracle_in_region(b, p)) ++hit;
  }
  return double(hit) / samples * box.width() * box.height();
}

}  // namespace oracle

#endif
