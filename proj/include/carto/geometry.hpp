#ifndef CARTO_GEOMETRY_HPP
#define CARTO_GEOMETRY_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace carto
{

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point &, const Point &) = default;
  friend auto operator<=>(const Point &, const Point &) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }

double distance(Point a, Point b);

struct PointHash {
  std::size_t operator()(const Point &p) const noexcept;
};

// Closed implicitly: the last vertex connects back to the first.
using Ring = std::vector<Point>;

struct PolygonWithHoles {
  Ring outer;               // counterclockwise
  std::vector<Ring> holes;  // clockwise
};

struct Region {
  std::string id;
  std::vector<PolygonWithHoles> polygons;
  double target_value = 1.0;
};

struct BoundingBox {
  Point min{0.0, 0.0};
  Point max{0.0, 0.0};

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  double diagonal() const;
};

class RegionSet
{
public:
  RegionSet() = default;
  explicit RegionSet(std::vector<Region> regions);

  const std::vector<Region> &regions() const { return regions_; }
  std::vector<Region> &mutable_regions() { return regions_; }
  std::size_t size() const { return regions_.size(); }
  const Region &operator[](std::size_t i) const { return regions_[i]; }

  const Region &at(const std::string &id) const;
  std::size_t index_of(const std::string &id) const;

  BoundingBox bounding_box() const;
  std::size_t n_polygons() const;
  std::size_t n_rings() const;
  std::size_t n_vertices() const;

  // Applies f to every vertex of every ring.
  void transform(const std::function<Point(Point)> &f);

private:
  std::vector<Region> regions_;
};

// Signed shoelace area; positive for counterclockwise rings.
double signed_area(std::span<const Point> ring);
bool is_counterclockwise(std::span<const Point> ring);

// Area of outer ring minus holes.
double polygon_area(const PolygonWithHoles &pwh);

// Sum over polygons of (|outer| - sum |holes|). Throws DegenerateGeometry
// if any ring has zero area within eps_area.
double region_area(const Region &region);

double total_area(const RegionSet &set);

// Area-weighted centroid of a region, holes subtracted.
Point region_centroid(const Region &region);

// Coincident-point tolerance for a map: 1e-9 of the bounding-box diagonal.
double point_tolerance(const BoundingBox &bbox);

// Reorients rings so outers are counterclockwise and holes clockwise.
void orient_rings(RegionSet &set);

// Drops consecutive duplicate vertices and a closing vertex equal to the
// first one. Leaves rings with fewer than 3 vertices empty.
Ring clean_ring(const Ring &ring);

// Even-odd point-in-region test over all rings of the region.
bool contains(const Region &region, Point p);

}  // namespace carto

#endif
