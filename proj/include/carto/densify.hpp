#ifndef CARTO_DENSIFY_HPP
#define CARTO_DENSIFY_HPP

#include "carto/geometry.hpp"
#include "carto/triangulation.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace carto
{

struct DensifiedRegionSet {
  RegionSet regions;
  // One flag per vertex, per ring in traversal order (region, polygon,
  // outer then holes): 1 if the vertex was inserted.
  std::vector<std::vector<std::uint8_t>> inserted;
  double vertex_growth = 0.0;  // new / old vertex count - 1
};

// Inserts a vertex wherever a polygon edge crosses a triangle edge. Each
// edge is processed in a canonical direction (lexicographically smaller
// endpoint first), so an edge shared by two rings gains identical points.
// Crossings within the point tolerance of an endpoint or of each other
// collapse into one; an edge through a triangle vertex gains that vertex.
DensifiedRegionSet densify(const RegionSet &set, const Triangulation &tri);

// Splits every polygon edge of one open polyline the same way.
std::vector<Point> densify_polyline(const std::vector<Point> &line,
                                    const Triangulation &tri);

// Maps every vertex through the piecewise-affine projection.
RegionSet project_regions(const DensifiedRegionSet &densified,
                          const Triangulation &tri);
RegionSet project_regions(const RegionSet &set, const Triangulation &tri);

// Splits each edge longer than max_edge_length into equal parts no longer
// than max_edge_length.
DensifiedRegionSet uniform_densify(const RegionSet &set, double max_edge_length);

// Drops the inserted vertices again.
RegionSet strip_inserted(const DensifiedRegionSet &densified);

}  // namespace carto

#endif
