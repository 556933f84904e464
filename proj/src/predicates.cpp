#include "carto/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace carto
{

namespace
{

// Expansion arithmetic after Shewchuk: a value is stored as a sum of
// non-overlapping doubles, ordered by increasing magnitude.
using Expansion = std::vector<double>;

constexpr double splitter = 134217729.0;  // 2^27 + 1

inline void two_sum(double a, double b, double &x, double &y)
{
  x = a + b;
  const double bv = x - a;
  const double av = x - bv;
  y = (a - av) + (b - bv);
}

inline void split(double a, double &hi, double &lo)
{
  const double c = splitter * a;
  const double big = c - a;
  hi = c - big;
  lo = a - hi;
}

inline void two_product(double a, double b, double &x, double &y)
{
  x = a * b;
  double ahi, alo, bhi, blo;
  split(a, ahi, alo);
  split(b, bhi, blo);
  const double err1 = x - (ahi * bhi);
  const double err2 = err1 - (alo * bhi);
  const double err3 = err2 - (ahi * blo);
  y = (alo * blo) - err3;
}

Expansion two_diff_exp(double a, double b)
{
  double x, y;
  two_sum(a, -b, x, y);
  return Expansion{y, x};
}

// Exact sum of two expansions by repeated growth.
Expansion add(const Expansion &e, const Expansion &f)
{
  Expansion h = e;
  for (const double b : f) {
    Expansion g;
    g.reserve(h.size() + 1);
    double q = b;
    for (const double a : h) {
      double sum, err;
      two_sum(q, a, sum, err);
      if (err != 0.0) g.push_back(err);
      q = sum;
    }
    if (q != 0.0 || g.empty()) g.push_back(q);
    h = std::move(g);
  }
  return h;
}

Expansion negate(Expansion e)
{
  for (double &v : e) v = -v;
  return e;
}

Expansion scale(const Expansion &e, double b)
{
  Expansion h;
  h.reserve(2 * e.size());
  for (const double a : e) {
    double p, q;
    two_product(a, b, p, q);
    Expansion term{q, p};
    h = h.empty() ? term : add(h, term);
  }
  if (h.empty()) h.push_back(0.0);
  return h;
}

Expansion mul(const Expansion &e, const Expansion &f)
{
  Expansion h{0.0};
  for (const double b : f) {
    if (b == 0.0) continue;
    h = add(h, scale(e, b));
  }
  return h;
}

int sign(const Expansion &e)
{
  // Components are non-overlapping, so the largest non-zero one decides.
  for (auto it = e.rbegin(); it != e.rend(); ++it) {
    if (*it > 0.0) return 1;
    if (*it < 0.0) return -1;
  }
  return 0;
}

int orient2d_exact(Point a, Point b, Point c)
{
  const Expansion acx = two_diff_exp(a.x, c.x);
  const Expansion acy = two_diff_exp(a.y, c.y);
  const Expansion bcx = two_diff_exp(b.x, c.x);
  const Expansion bcy = two_diff_exp(b.y, c.y);
  const Expansion det = add(mul(acx, bcy), negate(mul(acy, bcx)));
  return sign(det);
}

int incircle_exact(Point a, Point b, Point c, Point d)
{
  const Expansion adx = two_diff_exp(a.x, d.x);
  const Expansion ady = two_diff_exp(a.y, d.y);
  const Expansion bdx = two_diff_exp(b.x, d.x);
  const Expansion bdy = two_diff_exp(b.y, d.y);
  const Expansion cdx = two_diff_exp(c.x, d.x);
  const Expansion cdy = two_diff_exp(c.y, d.y);

  const Expansion alift = add(mul(adx, adx), mul(ady, ady));
  const Expansion blift = add(mul(bdx, bdx), mul(bdy, bdy));
  const Expansion clift = add(mul(cdx, cdx), mul(cdy, cdy));

  const Expansion bc = add(mul(bdx, cdy), negate(mul(cdx, bdy)));
  const Expansion ca = add(mul(cdx, ady), negate(mul(adx, cdy)));
  const Expansion ab = add(mul(adx, bdy), negate(mul(bdx, ady)));

  const Expansion det =
    add(add(mul(alift, bc), mul(blift, ca)), mul(clift, ab));
  return sign(det);
}

constexpr double eps = std::numeric_limits<double>::epsilon() * 0.5;
constexpr double ccw_bound = (3.0 + 16.0 * eps) * eps;
constexpr double icc_bound = (10.0 + 96.0 * eps) * eps;

}  // namespace

int orient2d(Point a, Point b, Point c)
{
  const double detleft = (a.x - c.x) * (b.y - c.y);
  const double detright = (a.y - c.y) * (b.x - c.x);
  const double det = detleft - detright;
  const double detsum = std::abs(detleft) + std::abs(detright);
  const double bound = ccw_bound * detsum;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  if (detsum == 0.0) return 0;
  return orient2d_exact(a, b, c);
}

int incircle(Point a, Point b, Point c, Point d)
{
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                     clift * (adxbdy - bdxady);
  const double permanent =
    (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
    (std::abs(cdxady) + std::abs(adxcdy)) * blift +
    (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  const double bound = icc_bound * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  if (permanent == 0.0) return 0;
  return incircle_exact(a, b, c, d);
}

bool on_segment(Point a, Point b, Point p)
{
  if (orient2d(a, b, p) != 0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace carto
