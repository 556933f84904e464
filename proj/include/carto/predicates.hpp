#ifndef CARTO_PREDICATES_HPP
#define CARTO_PREDICATES_HPP

#include "carto/geometry.hpp"

namespace carto
{

// Exact-sign geometric predicates. A floating-point filter handles the
// common case; near-degenerate inputs fall back to exact expansion
// arithmetic, so the returned sign is always that of the true determinant
// of the (exactly represented) double inputs.

// +1 if c lies left of the directed line a->b, -1 if right, 0 if collinear.
int orient2d(Point a, Point b, Point c);

// +1 if d lies strictly inside the circle through a, b, c (counterclockwise),
// -1 if outside, 0 if cocircular.
int incircle(Point a, Point b, Point c, Point d);

// Approximate value of the orientation determinant (twice the signed area).
inline double orient2d_value(Point a, Point b, Point c)
{
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// True if p lies on the closed segment [a, b] (exact).
bool on_segment(Point a, Point b, Point p);

}  // namespace carto

#endif
