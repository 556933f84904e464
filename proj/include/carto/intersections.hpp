#ifndef CARTO_INTERSECTIONS_HPP
#define CARTO_INTERSECTIONS_HPP

#include "carto/geometry.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace carto
{

struct Segment {
  Point a;
  Point b;
};

struct Crossing {
  std::size_t i = 0;  // i < j
  std::size_t j = 0;
  Point at;

  friend bool operator==(const Crossing &, const Crossing &) = default;
};

// Up to two points where two closed segments meet. A proper crossing or a
// touch yields one point; a collinear overlap yields its two endpoints
// (one if the overlap degenerates to a point). Touch and overlap points
// are copies of input endpoints, so they compare exactly.
struct SegmentContact {
  int n = 0;
  Point pts[2];
};

SegmentContact intersect_segments(const Segment &s, const Segment &t);

// True if p equals an endpoint of both segments.
bool is_shared_endpoint(const Segment &s, const Segment &t, Point p);

// Every contact point between pairs of segments, excluding points that are
// an endpoint of both segments of the pair. Results are sorted by
// (i, j, point). Candidate pairs come from a uniform bucket grid; the
// answer is identical to checking all pairs.
std::vector<Crossing> segment_intersections(const std::vector<Segment> &segs);

// As above, but keeps shared-endpoint contacts too.
std::vector<Crossing> segment_contacts(const std::vector<Segment> &segs);

}  // namespace carto

#endif
