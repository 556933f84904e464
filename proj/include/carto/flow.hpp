#ifndef CARTO_FLOW_HPP
#define CARTO_FLOW_HPP

#include "carto/density.hpp"
#include "carto/geometry.hpp"

#include <algorithm>
#include <cstddef>
#include <memory>
#include <vector>

namespace carto
{

// Velocity sampled at the (n+1)^2 grid nodes (cell corners) of an n x n
// canvas, interpolated bilinearly in between. The normal component
// vanishes on the canvas walls.
struct VelocityField {
  std::size_t n = 0;
  std::vector<Point> v;  // v[j * (n + 1) + i] at node (i, j)

  Point at(Point p) const;
};

inline Point VelocityField::at(Point p) const
{
  const double fn = static_cast<double>(n);
  const double x = std::clamp(p.x, 0.0, fn);
  const double y = std::clamp(p.y, 0.0, fn);
  // int conversions are much cheaper than size_t ones on x86-64.
  const int last = static_cast<int>(n) - 1;
  const int i = std::min(static_cast<int>(x), last);
  const int j = std::min(static_cast<int>(y), last);
  const double fx = x - static_cast<double>(i);
  const double fy = y - static_cast<double>(j);
  const Point *r0 = &v[static_cast<std::size_t>(j) * (n + 1) + static_cast<std::size_t>(i)];
  const Point *r1 = r0 + (n + 1);
  const double a = (1 - fx) * (1 - fy), b = fx * (1 - fy);
  const double c = (1 - fx) * fy, d = fx * fy;
  return {a * r0[0].x + b * r0[1].x + c * r1[0].x + d * r1[1].x,
          a * r0[0].y + b * r0[1].y + c * r1[0].y + d * r1[1].y};
}

struct FlowOptions {
  // Diffusion stops once max|rho - mean| has dropped to this fraction of
  // the mean, or of its initial value if that is smaller.
  double uniform_tolerance = 1e-3;
  // A step is accepted when Euler and midpoint estimates of every tracked
  // node agree within this many cell sizes.
  double step_tolerance = 1e-3;
  double initial_step = 1e-2;
  std::size_t max_steps = 20000;
};

struct FlowStep {
  double t = 0.0;
  double h = 0.0;
};

// Result of diffusing a density grid to uniformity. Density and velocity
// at any pseudo-time are evaluated from the stored cosine spectrum, so
// points can be advected after the solve without storing every snapshot.
class FlowField
{
public:
  std::size_t size() const { return n_; }
  double duration() const { return duration_; }
  double mean_density() const { return mean_; }
  const std::vector<FlowStep> &steps() const { return steps_; }

  // Cell-centered density at pseudo-time t.
  std::vector<double> density_at(double t) const;
  VelocityField velocity_at(double t) const;

  // Where the grid nodes end up, tracked during the solve.
  const std::vector<Point> &node_images() const { return node_images_; }
  // Node images with the final accepted step redone in `parts` equal
  // parts, starting from the positions before that step. Throws
  // LeftCanvas if a node leaves the canvas.
  std::vector<Point> node_images_final_step_split(int parts) const;

  // max|rho(t) - mean| / mean.
  double deviation_at(double t) const;

private:
  friend FlowField solve_flow(const DensityGrid &, const FlowOptions &);

  // out must come from fftw_alloc_real(n * n).
  void density_into(double t, double *out) const;
  void velocity_into(const double *rho, VelocityField &f, std::vector<double> &pad) const;

  std::size_t n_ = 0;
  double mean_ = 1.0;
  double duration_ = 0.0;
  std::vector<double> spectrum_;  // normalized DCT-II coefficients
  std::vector<double> lambda_;    // discrete Neumann eigenvalues per index
  std::vector<FlowStep> steps_;
  std::vector<Point> node_images_;
  std::vector<Point> before_final_step_;
  std::shared_ptr<void> inverse_plan_;
};

// Diffuses rho_t = lap(rho) with no-flux walls, choosing pseudo-time
// steps adaptively. Throws NoConvergence if max_steps is exhausted.
FlowField solve_flow(const DensityGrid &grid, const FlowOptions &options = {});

struct ProjectedPoint {
  Point source;
  Point image;
};

// Integrates each point through v = -grad(rho)/rho with the midpoint rule
// on the solve's step schedule, each step split into `substeps` equal
// parts. If a trajectory leaves the canvas the integration is repeated
// once with twice the substeps; a second failure raises LeftCanvas. Points
// outside the canvas raise OutsideCanvas.
std::vector<ProjectedPoint> advect(const FlowField &field,
                                   const std::vector<Point> &points,
                                   int substeps = 1);

}  // namespace carto

#endif
