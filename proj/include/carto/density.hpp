#ifndef CARTO_DENSITY_HPP
#define CARTO_DENSITY_HPP

#include "carto/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace carto
{

// Uniform scale plus translation between map coordinates and canvas
// coordinates, in which one grid cell is one unit.
struct CanvasTransform {
  double scale = 1.0;
  Point offset{0.0, 0.0};

  Point to_canvas(Point p) const { return {scale * p.x + offset.x, scale * p.y + offset.y}; }
  Point to_map(Point p) const { return {(p.x - offset.x) / scale, (p.y - offset.y) / scale}; }
};

// Fits a bounding box into the central `fill` fraction of a square canvas
// of grid_size cells, preserving aspect ratio.
CanvasTransform fit_to_canvas(const BoundingBox &bbox,
                              std::size_t grid_size,
                              double fill = 0.8);

struct DensityGrid {
  std::size_t width = 0;
  std::size_t height = 0;
  double cell_size = 1.0;
  std::vector<double> values;  // row-major, values[j * width + i]
  double mean_density = 1.0;
  CanvasTransform transform;
  // Index of the region owning each cell center, -1 outside all regions.
  std::vector<std::int32_t> owner;

  double at(std::size_t i, std::size_t j) const { return values[j * width + i]; }
  double &at(std::size_t i, std::size_t j) { return values[j * width + i]; }
};

// Target values rescaled so that they sum to the total actual area, in
// region order. Throws NonPositiveValue for values <= 0.
std::vector<double> target_areas(const RegionSet &set);

// rho_i = A_target_i / A_actual_i.
std::map<std::string, double> region_densities(const RegionSet &set);

struct DisparityReport {
  double min_density = 1.0;
  double max_density = 1.0;
  double disparity = 1.0;
  int group = 1;
};

// Difficulty group of a disparity value: 1 below 100, 2 below 1000,
// 3 below 10000, 4 otherwise.
int disparity_group(double disparity);

DisparityReport density_disparity(const std::map<std::string, double> &densities);

struct RasterizeOptions {
  double fill = 0.8;
  // When false, regions too small to contain a cell center are tolerated
  // and simply leave no trace on the grid.
  bool require_coverage = true;
};

// Cell-center rasterization of region densities onto a grid_size^2 canvas.
// Cells outside every region receive the mean target density.
DensityGrid rasterize(const RegionSet &set,
                      std::size_t grid_size,
                      const RasterizeOptions &options = {});

// Normalized 1D Gaussian weights for offsets -r..r, r = ceil(6 * radius).
std::vector<double> gaussian_kernel(double radius);

// Separable Gaussian blur with mirror boundaries. radius is the standard
// deviation in cells; radius 0 returns the grid unchanged.
DensityGrid smooth(const DensityGrid &grid, double radius);

}  // namespace carto

#endif
