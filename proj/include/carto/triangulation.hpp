#ifndef CARTO_TRIANGULATION_HPP
#define CARTO_TRIANGULATION_HPP

#include "carto/geometry.hpp"
#include "carto/quadtree.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace carto
{

struct TriPair {
  std::array<std::size_t, 3> v;        // vertex indices, counterclockwise
  std::array<Point, 3> unprojected;
  std::array<Point, 3> projected;
  // X = a0 x + a1 y + a2, Y = a3 x + a4 y + a5
  std::array<double, 6> affine;
};

using IndexEdge = std::pair<std::size_t, std::size_t>;

struct Triangulation {
  double canvas_size = 0.0;
  std::vector<Point> vertices;  // leaf corners, row-major
  std::vector<Point> images;    // projected corners, same order
  std::vector<TriPair> triangles;
  bool identity = false;

  // Construction record: triangles of the projected-domain triangulation,
  // its edges that became constraints, and the edges dropped because they
  // pass through a third corner once unprojected.
  std::vector<std::array<std::size_t, 3>> projected_triangles;
  std::vector<IndexEdge> accepted_edges;
  std::vector<IndexEdge> rejected_edges;

  // Locator: buckets of triangle indices, ascending, row-major.
  std::size_t buckets_per_side = 1;
  double bucket_size = 0.0;
  std::vector<std::vector<std::int32_t>> buckets;
};

// Builds the triangulation on the tree's leaf corners. corner_images is
// aligned with leaf_corners(tree). Throws DegenerateProjection if a
// projected triangle has area <= (1e-9 * canvas diagonal)^2 or the
// projected corners cannot be triangulated.
Triangulation build_triangulation(const Quadtree &tree,
                                  const std::vector<Point> &corner_images);

// Lowest-index triangle whose closed unprojected region contains p.
// Throws OutsideCanvas.
std::size_t locate(const Triangulation &tri, Point p);

// Image of p under the affine map of triangle t, evaluated with
// barycentric weights. Triangle vertices map to their images exactly.
Point map_in_triangle(const Triangulation &tri, std::size_t t, Point p);

// Piecewise-affine image of p. Throws OutsideCanvas.
Point project_point(const Triangulation &tri, Point p);

}  // namespace carto

#endif
