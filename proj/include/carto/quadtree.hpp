#ifndef CARTO_QUADTREE_HPP
#define CARTO_QUADTREE_HPP

#include "carto/density.hpp"
#include "carto/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace carto
{

struct QuadNode {
  int depth = 0;
  Point origin;        // min corner, canvas units
  double size = 0.0;   // side length, canvas units
  std::int64_t first_child = -1;  // children are stored consecutively
  double density_min = 0.0;
  double density_max = 0.0;

  bool is_leaf() const { return first_child < 0; }
  double diff() const { return density_max - density_min; }
};

// Split order as performed by build_quadtree: node index and the density
// difference that made it the next split.
struct SplitEvent {
  std::size_t node = 0;
  double diff = 0.0;
};

struct Quadtree {
  std::vector<QuadNode> nodes;  // nodes[0] is the root
  std::size_t leaf_count = 1;
  bool graded = false;
  std::size_t grid_size = 0;
  int max_depth = 0;
  std::vector<SplitEvent> split_log;

  const QuadNode &root() const { return nodes.front(); }
  std::vector<std::size_t> leaves() const;  // in node order
};

// round(fraction * grid_size^2), at least 1.
std::size_t default_target_leaves(std::size_t grid_size,
                                  double fraction = 1.0 / 256.0);

// Repeatedly splits the leaf with the largest density difference until
// leaf_count >= target_leaves. Ties go to the smallest Morton code of the
// node's min corner; single-cell leaves are never split.
Quadtree build_quadtree(const DensityGrid &grid, std::size_t target_leaves);

// Adds the fewest splits so edge-adjacent leaves differ by at most one
// level.
Quadtree grade(Quadtree tree);

// Deduplicated leaf corners in row-major order (by y, then x).
std::vector<Point> leaf_corners(const Quadtree &tree);

// Boundary of a leaf as a counterclockwise ring starting at its min
// corner, including corners of finer neighbours that lie on its sides.
// Requires a graded tree.
Ring leaf_boundary(const Quadtree &tree, std::size_t leaf);

// Unique leaf boundary edges split at every corner on them, each with its
// endpoints in lexicographic order, sorted. Requires a graded tree.
std::vector<std::pair<Point, Point>> leaf_edges(const Quadtree &tree);

}  // namespace carto

#endif
