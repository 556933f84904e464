#ifndef CARTO_METRICS_HPP
#define CARTO_METRICS_HPP

#include "carto/geometry.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace carto
{

struct AreaErrors {
  std::vector<double> per_region;  // |A_cart / A_target - 1|, region order
  double max = 0.0;
};

// Targets come from the regions' target values, rescaled so they sum to the
// total cartogram area.
AreaErrors max_relative_area_error(const RegionSet &cartogram,
                                   const std::vector<double> &targets);

// Region scaled to unit area with its centroid moved to the origin.
// Throws DegenerateGeometry for a region without area.
Region normalize(const Region &region);

// Outer ring of the polygon with the largest area.
const Ring &largest_outer(const Region &region);

// Discrete Frechet distance between two closed vertex sequences, minimized
// over the starting vertex and traversal direction of b.
double frechet_distance(const Ring &a, const Ring &b);

// Hausdorff distance between two closed polylines, measured over all
// points of their segments.
double hausdorff_distance(const Ring &a, const Ring &b);

// Area(a \ b) + Area(b \ a) over all polygons of both regions.
double symmetric_difference(const Region &a, const Region &b);

struct RegionMetrics {
  std::string id;
  double relative_area_error = 0.0;
  double frechet = 0.0;
  double hausdorff = 0.0;
  double sym_diff = 0.0;
};

struct AggregateMetrics {
  double e_max = 0.0;
  double mean_frechet = 0.0;
  double mean_hausdorff = 0.0;
  double mean_symdiff = 0.0;
  std::size_t self_intersections = 0;
  std::size_t overlap_intersections = 0;
  int disparity_group = 1;
};

struct MetricsReport {
  std::vector<RegionMetrics> per_region;
  AggregateMetrics aggregate;
  int iterations_run = 0;
  bool converged = false;
};

// Compares each cartogram region with the input region of the same id.
// Throws RegionMismatch if the id sets differ.
MetricsReport evaluate(const RegionSet &input,
                       const RegionSet &cartogram,
                       int iterations,
                       bool converged);

}  // namespace carto

#endif
