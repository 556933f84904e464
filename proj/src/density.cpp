#include "carto/density.hpp"

#include "carto/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace carto
{

CanvasTransform fit_to_canvas(const BoundingBox &bbox,
                              std::size_t grid_size,
                              double fill)
{
  const double n = static_cast<double>(grid_size);
  const double extent = std::max(bbox.width(), bbox.height());
  if (!(extent > 0.0)) {
    throw DegenerateGeometry("map bounding box has zero extent");
  }
  CanvasTransform t;
  t.scale = fill * n / extent;
  const Point center{0.5 * (bbox.min.x + bbox.max.x),
                     0.5 * (bbox.min.y + bbox.max.y)};
  t.offset = {0.5 * n - t.scale * center.x, 0.5 * n - t.scale * center.y};
  return t;
}

std::vector<double> target_areas(const RegionSet &set)
{
  double value_sum = 0.0;
  double area_sum = 0.0;
  for (const auto &r : set.regions()) {
    if (!(r.target_value > 0.0)) {
      throw NonPositiveValue("region '" + r.id + "' has target value " +
                             std::to_string(r.target_value));
    }
    value_sum += r.target_value;
    area_sum += region_area(r);
  }
  std::vector<double> out;
  out.reserve(set.size());
  for (const auto &r : set.regions()) {
    out.push_back(r.target_value * area_sum / value_sum);
  }
  return out;
}

std::map<std::string, double> region_densities(const RegionSet &set)
{
  const auto targets = target_areas(set);
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    out[set[i].id] = targets[i] / region_area(set[i]);
  }
  return out;
}

int disparity_group(double disparity)
{
  if (disparity < 100.0) return 1;
  if (disparity < 1000.0) return 2;
  if (disparity < 10000.0) return 3;
  return 4;
}

DisparityReport density_disparity(const std::map<std::string, double> &densities)
{
  DisparityReport rep;
  if (densities.empty()) return rep;
  rep.min_density = densities.begin()->second;
  rep.max_density = rep.min_density;
  for (const auto &[id, d] : densities) {
    rep.min_density = std::min(rep.min_density, d);
    rep.max_density = std::max(rep.max_density, d);
  }
  rep.disparity = rep.max_density / rep.min_density;
  rep.group = disparity_group(rep.disparity);
  return rep;
}

DensityGrid rasterize(const RegionSet &set,
                      std::size_t grid_size,
                      const RasterizeOptions &options)
{
  if (grid_size == 0 || (grid_size & (grid_size - 1)) != 0) {
    throw GridTooCoarse("grid size " + std::to_string(grid_size) +
                        " is not a power of two");
  }
  const std::size_t n = grid_size;
  DensityGrid grid;
  grid.width = n;
  grid.height = n;
  grid.transform = fit_to_canvas(set.bounding_box(), n, options.fill);

  const auto targets = target_areas(set);
  double target_sum = 0.0, actual_sum = 0.0;
  std::vector<double> rho(set.size());
  for (std::size_t r = 0; r < set.size(); ++r) {
    const double a = region_area(set[r]);
    rho[r] = targets[r] / a;
    target_sum += targets[r];
    actual_sum += a;
  }
  const double exterior = target_sum / actual_sum;

  // Regions in lexicographic id order so boundary ties go to the smallest id.
  std::vector<std::size_t> order(set.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return set[a].id < set[b].id; });

  struct Edge {
    Point a, b;
  };
  // Per region, edges bucketed by the rows whose center line they cross.
  std::vector<std::vector<std::vector<Edge>>> rows(
    set.size(), std::vector<std::vector<Edge>>(n));
  for (std::size_t r = 0; r < set.size(); ++r) {
    auto add_ring = [&](const Ring &ring) {
      for (std::size_t k = 0; k < ring.size(); ++k) {
        const Point a = grid.transform.to_canvas(ring[k]);
        const Point b = grid.transform.to_canvas(ring[(k + 1) % ring.size()]);
        const double lo = std::min(a.y, b.y), hi = std::max(a.y, b.y);
        const long j0 = std::max(0L, static_cast<long>(std::floor(lo - 0.5)));
        const long j1 = std::min(static_cast<long>(n) - 1,
                                 static_cast<long>(std::ceil(hi - 0.5)));
        for (long j = j0; j <= j1; ++j) rows[r][j].push_back({a, b});
      }
    };
    for (const auto &pwh : set[r].polygons) {
      add_ring(pwh.outer);
      for (const auto &h : pwh.holes) add_ring(h);
    }
  }

  grid.owner.assign(n * n, -1);
  std::vector<double> xs;
  for (std::size_t j = 0; j < n; ++j) {
    const double y = static_cast<double>(j) + 0.5;
    for (const std::size_t r : order) {
      xs.clear();
      for (const auto &e : rows[r][j]) {
        if ((e.a.y <= y) != (e.b.y <= y)) {
          xs.push_back(e.a.x + (y - e.a.y) * (e.b.x - e.a.x) / (e.b.y - e.a.y));
        }
      }
      std::sort(xs.begin(), xs.end());
      for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
        const long i0 = std::max(0L, static_cast<long>(std::ceil(xs[k] - 0.5)));
        const long i1 = std::min(static_cast<long>(n) - 1,
                                 static_cast<long>(std::floor(xs[k + 1] - 0.5)));
        for (long i = i0; i <= i1; ++i) {
          auto &o = grid.owner[j * n + static_cast<std::size_t>(i)];
          if (o < 0) o = static_cast<std::int32_t>(r);
        }
      }
    }
  }

  std::vector<std::size_t> covered(set.size(), 0);
  grid.values.resize(n * n);
  for (std::size_t c = 0; c < n * n; ++c) {
    const auto o = grid.owner[c];
    if (o >= 0) {
      grid.values[c] = rho[static_cast<std::size_t>(o)];
      ++covered[static_cast<std::size_t>(o)];
    } else {
      grid.values[c] = exterior;
    }
  }
  if (options.require_coverage) {
    for (std::size_t r = 0; r < set.size(); ++r) {
      if (covered[r] == 0) {
        throw GridTooCoarse("region '" + set[r].id +
                            "' covers no cell center on a " +
                            std::to_string(n) + " grid");
      }
    }
  }
  grid.mean_density =
    std::accumulate(grid.values.begin(), grid.values.end(), 0.0) /
    static_cast<double>(n * n);
  return grid;
}

std::vector<double> gaussian_kernel(double radius)
{
  if (radius <= 0.0) return {1.0};
  const int r = static_cast<int>(std::ceil(6.0 * radius));
  std::vector<double> w(2 * static_cast<std::size_t>(r) + 1);
  double sum = 0.0;
  for (int k = -r; k <= r; ++k) {
    const double v = std::exp(-0.5 * k * k / (radius * radius));
    w[static_cast<std::size_t>(k + r)] = v;
    sum += v;
  }
  for (auto &v : w) v /= sum;
  return w;
}

namespace
{

// Mirror index about the cell edges: -1 -> 0, n -> n-1, period 2n.
std::size_t reflect(long k, long n)
{
  long m = k % (2 * n);
  if (m < 0) m += 2 * n;
  return static_cast<std::size_t>(m < n ? m : 2 * n - 1 - m);
}

}  // namespace

DensityGrid smooth(const DensityGrid &grid, double radius)
{
  if (radius <= 0.0) return grid;
  const auto w = gaussian_kernel(radius);
  const long r = static_cast<long>(w.size() / 2);
  const long nx = static_cast<long>(grid.width);
  const long ny = static_cast<long>(grid.height);

  DensityGrid out = grid;
  std::vector<double> tmp(grid.values.size());
  for (long j = 0; j < ny; ++j) {
    for (long i = 0; i < nx; ++i) {
      double s = 0.0;
      for (long k = -r; k <= r; ++k) {
        s += w[static_cast<std::size_t>(k + r)] *
             grid.values[static_cast<std::size_t>(j * nx) + reflect(i + k, nx)];
      }
      tmp[static_cast<std::size_t>(j * nx + i)] = s;
    }
  }
  for (long j = 0; j < ny; ++j) {
    for (long i = 0; i < nx; ++i) {
      double s = 0.0;
      for (long k = -r; k <= r; ++k) {
        s += w[static_cast<std::size_t>(k + r)] *
             tmp[reflect(j + k, ny) * static_cast<std::size_t>(nx) +
                 static_cast<std::size_t>(i)];
      }
      out.values[static_cast<std::size_t>(j * nx + i)] = s;
    }
  }
  out.mean_density =
    std::accumulate(out.values.begin(), out.values.end(), 0.0) /
    static_cast<double>(out.values.size());
  return out;
}

}  // namespace carto
