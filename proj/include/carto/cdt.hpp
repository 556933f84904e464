#ifndef CARTO_CDT_HPP
#define CARTO_CDT_HPP

#include "carto/geometry.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace carto
{

// Constrained Delaunay triangulation of a point set whose bounding box
// corners are among the points. Points are inserted incrementally with
// Lawson flips; constraints are then recovered by flipping the edges they
// cross and Delaunay is restored around them. Vertex indices follow the
// input order. All decisions use exact predicates, so the result depends
// only on the input coordinates and order.
class Cdt
{
public:
  struct Triangle {
    std::array<std::int32_t, 3> v;    // counterclockwise
    std::array<std::int32_t, 3> nb;   // nb[i] is across the edge opposite v[i]
    std::array<bool, 3> fixed{};      // edge opposite v[i] is constrained
  };

  // Throws DegenerateGeometry on duplicate points or if a bounding box
  // corner is missing.
  explicit Cdt(std::vector<Point> points);

  // Forces the segment a-b into the triangulation. A vertex lying on the
  // open segment splits the constraint there. Throws DegenerateGeometry if
  // the segment crosses an existing constraint.
  void insert_constraint(std::size_t a, std::size_t b);

  const std::vector<Point> &points() const { return pts_; }
  const std::vector<Triangle> &triangles() const { return tris_; }

  // Unique edges as (lower index, higher index), sorted.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  bool has_edge(std::size_t a, std::size_t b) const;
  bool is_constrained(std::size_t a, std::size_t b) const;

private:
  void insert_point(std::int32_t p);
  std::int32_t walk(std::int32_t start, Point p) const;
  void legalize(std::vector<std::pair<std::int32_t, int>> &stack);
  void flip(std::int32_t t, int i);
  void relink(std::int32_t n, std::int32_t from, std::int32_t to);
  std::vector<std::int32_t> incident(std::int32_t a) const;
  std::pair<std::int32_t, int> find_edge(std::int32_t a, std::int32_t b) const;
  std::int32_t add_triangle(std::int32_t a, std::int32_t b, std::int32_t c);
  void set_triangle(std::int32_t t, std::int32_t a, std::int32_t b, std::int32_t c);

  std::vector<Point> pts_;
  std::vector<Triangle> tris_;
  std::vector<std::int32_t> vtri_;  // some triangle incident to each vertex
  std::int32_t last_ = 0;
};

}  // namespace carto

#endif
