#ifndef CARTO_TOPOLOGY_HPP
#define CARTO_TOPOLOGY_HPP

#include "carto/geometry.hpp"
#include "carto/intersections.hpp"

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace carto
{

// Where an edge lives: edge `index` of ring `ring` (0 = outer, k = hole
// k-1) of polygon `polygon` of region `region`. `ring_global` numbers
// rings in traversal order over the whole set.
struct EdgeRef {
  std::size_t region = 0;
  std::size_t polygon = 0;
  std::size_t ring = 0;
  std::size_t index = 0;
  std::size_t ring_global = 0;
  std::size_t ring_size = 0;
};

// Flattens every ring edge of a set, in traversal order.
void collect_edges(const RegionSet &set,
                   std::vector<Segment> &segments,
                   std::vector<EdgeRef> &refs);

const Ring &ring_of(const RegionSet &set,
                    std::size_t region,
                    std::size_t polygon,
                    std::size_t ring);

struct IntersectionSummary {
  // Crossings between edges of the same polygon, per region.
  std::vector<std::size_t> self_per_region;
  // Crossings between edges of different polygons.
  std::size_t overlap = 0;
  // Crossings among the edges of one ring, per global ring index.
  std::vector<std::size_t> ring_self;
  // Crossings between edges of two different rings.
  std::size_t cross_ring = 0;
  std::vector<Point> self_points;
  std::vector<Point> overlap_points;
};

IntersectionSummary intersection_summary(const RegionSet &set);

std::vector<std::size_t> count_self_intersections(const RegionSet &set);
std::size_t count_overlap_intersections(const RegionSet &set);

struct JunctionCheck {
  Point before;
  Point after;
  std::size_t arcs = 0;
  bool ok = true;
};

struct ValidationReport {
  std::vector<std::size_t> ring_self_counts;  // P1, one entry per ring
  std::size_t cross_ring_crossings = 0;       // P2
  std::vector<JunctionCheck> junctions;       // P3

  bool p1_ok() const;
  bool p2_ok() const { return cross_ring_crossings == 0; }
  bool p3_ok() const;
  bool all_ok() const { return p1_ok() && p2_ok() && p3_ok(); }
};

// `after` must have the same regions, polygons, rings and ring sizes as
// `before`; otherwise StructureMismatch is thrown.
ValidationReport validate_topology(const RegionSet &before,
                                   const RegionSet &after);

// Cyclic order of boundary arcs around every junction (a vertex with at
// least three distinct neighbours), keyed by junction coordinate. Arcs are
// labelled by the (global ring, direction) pairs that traverse them, so the
// signature survives changes in vertex counts.
using ArcLabel = std::vector<std::pair<std::size_t, int>>;
std::map<Point, std::vector<ArcLabel>> junction_signature(
  const RegionSet &set);

}  // namespace carto

#endif
