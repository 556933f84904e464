#include "carto/flow.hpp"

#include "carto/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace carto
{

namespace
{

// The FFTW planner is not thread-safe; execution with new arrays is.
std::mutex &planner_mutex()
{
  static std::mutex m;
  return m;
}

class AlignedBuffer
{
public:
  explicit AlignedBuffer(std::size_t n) : p_(fftw_alloc_real(n * n)) {}
  ~AlignedBuffer() { fftw_free(p_); }
  AlignedBuffer(const AlignedBuffer &) = delete;
  AlignedBuffer &operator=(const AlignedBuffer &) = delete;
  double *get() const { return p_; }

private:
  double *p_;
};

// With aligned = true the plan may only be executed on fftw_alloc'd arrays.
std::shared_ptr<void> make_plan(std::size_t n, fftw_r2r_kind kind, bool aligned)
{
  std::lock_guard<std::mutex> lock(planner_mutex());
  double *buf = fftw_alloc_real(n * n);
  fftw_plan p = fftw_plan_r2r_2d(static_cast<int>(n), static_cast<int>(n),
                                 buf, buf, kind, kind,
                                 FFTW_ESTIMATE | (aligned ? 0u : FFTW_UNALIGNED));
  fftw_free(buf);
  return std::shared_ptr<void>(p, [](void *q) {
    std::lock_guard<std::mutex> l(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(q));
  });
}

}  // namespace

void FlowField::density_into(double t, double *out) const
{
  const std::size_t n = n_;
  std::vector<double> decay(n);
  for (std::size_t k = 0; k < n; ++k) decay[k] = std::exp(-lambda_[k] * t);
  for (std::size_t l = 0; l < n; ++l) {
    const double *src = &spectrum_[l * n];
    double *dst = out + l * n;
    for (std::size_t k = 0; k < n; ++k) dst[k] = src[k] * (decay[k] * decay[l]);
  }
  fftw_execute_r2r(static_cast<fftw_plan>(inverse_plan_.get()), out, out);
}

std::vector<double> FlowField::density_at(double t) const
{
  AlignedBuffer buf(n_);
  density_into(t, buf.get());
  return std::vector<double>(buf.get(), buf.get() + n_ * n_);
}

double FlowField::deviation_at(double t) const
{
  double dev = 0.0;
  for (const double v : density_at(t)) dev = std::max(dev, std::abs(v - mean_));
  return dev / mean_;
}

void FlowField::velocity_into(const double *rho, VelocityField &f, std::vector<double> &pad) const
{
  const std::size_t n = n_;
  const std::size_t w = n + 1;
  f.n = n;
  f.v.resize(w * w);
  // Cells padded by one mirrored ghost cell on every side, so that node
  // (i, j) sits between padded cells i, i+1 and rows j, j+1. The mirror
  // makes the normal gradient vanish on the walls.
  const std::size_t m = n + 2;
  pad.resize(m * m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t cj = j == 0 ? 0 : std::min(j - 1, n - 1);
    const double *src = &rho[cj * n];
    double *dst = &pad[j * m];
    dst[0] = src[0];
    std::copy(src, src + n, dst + 1);
    dst[m - 1] = src[n - 1];
  }
  for (std::size_t j = 0; j <= n; ++j) {
    const double *lo = &pad[j * m];
    const double *hi = lo + m;
    Point *out = &f.v[j * w];
    for (std::size_t i = 0; i <= n; ++i) {
      const double r00 = lo[i], r10 = lo[i + 1], r01 = hi[i], r11 = hi[i + 1];
      const double rho_node = 0.25 * (r00 + r10 + r01 + r11);
      const double gx = i == 0 || i == n ? 0.0 : 0.5 * ((r10 + r11) - (r00 + r01));
      const double gy = j == 0 || j == n ? 0.0 : 0.5 * ((r01 + r11) - (r00 + r10));
      out[i] = {-gx / rho_node, -gy / rho_node};
    }
  }
}

VelocityField FlowField::velocity_at(double t) const
{
  AlignedBuffer buf(n_);
  density_into(t, buf.get());
  VelocityField f;
  std::vector<double> pad;
  velocity_into(buf.get(), f, pad);
  return f;
}

FlowField solve_flow(const DensityGrid &grid, const FlowOptions &options)
{
  if (grid.width != grid.height || grid.width == 0) {
    throw GridTooCoarse("flow solve needs a nonempty square grid");
  }
  const std::size_t n = grid.width;
  for (const double v : grid.values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw NonPositiveValue("density grid must be positive and finite");
    }
  }

  FlowField f;
  f.n_ = n;
  f.inverse_plan_ = make_plan(n, FFTW_REDFT01, true);
  f.spectrum_ = grid.values;
  {
    auto forward = make_plan(n, FFTW_REDFT10, false);
    fftw_execute_r2r(static_cast<fftw_plan>(forward.get()), f.spectrum_.data(),
                     f.spectrum_.data());
  }
  const double norm = 1.0 / (4.0 * static_cast<double>(n * n));
  for (auto &c : f.spectrum_) c *= norm;
  f.mean_ = f.spectrum_[0];
  f.lambda_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = std::sin(std::numbers::pi * static_cast<double>(k) /
                              (2.0 * static_cast<double>(n)));
    f.lambda_[k] = 4.0 * s * s;
  }

  const std::size_t w = n + 1;
  std::vector<Point> pos(w * w);
  for (std::size_t j = 0; j <= n; ++j) {
    for (std::size_t i = 0; i <= n; ++i) {
      pos[j * w + i] = {static_cast<double>(i), static_cast<double>(j)};
    }
  }

  const std::size_t cells = n * n;
  auto deviation = [&](const double *rho) {
    double dev = 0.0;
    for (std::size_t k = 0; k < cells; ++k) dev = std::max(dev, std::abs(rho[k] - f.mean_));
    return dev;
  };

  AlignedBuffer rho(n);
  std::vector<double> pad;
  f.density_into(0.0, rho.get());
  const double dev0 = deviation(rho.get());
  if (dev0 <= 1e-12 * f.mean_) {
    f.before_final_step_ = pos;
    f.node_images_ = std::move(pos);
    return f;
  }
  const double target = options.uniform_tolerance * std::min(dev0, f.mean_);
  const double fn = static_cast<double>(n);

  // Velocity at each node's start position, kept across rejected attempts.
  VelocityField v0, vm;
  f.velocity_into(rho.get(), v0, pad);
  std::vector<Point> start(pos.size());
  for (std::size_t k = 0; k < pos.size(); ++k) start[k] = v0.at(pos[k]);
  double t = 0.0;
  double h = options.initial_step;
  std::vector<Point> next(pos.size());
  std::size_t attempts = 0;
  while (true) {
    if (++attempts > options.max_steps || h < 1e-14) {
      throw NoConvergence("flow solve did not reach uniform density after " +
                          std::to_string(f.steps_.size()) + " steps");
    }
    f.density_into(t + 0.5 * h, rho.get());
    f.velocity_into(rho.get(), vm, pad);
    double err = 0.0;  // squared until the loop ends
    bool inside = true;
    for (std::size_t k = 0; k < pos.size(); ++k) {
      const Point r = pos[k];
      const Point a = start[k];
      const Point euler = r + h * a;
      const Point m = r + h * vm.at(r + (0.5 * h) * a);
      const double dx = euler.x - m.x, dy = euler.y - m.y;
      err = std::max(err, dx * dx + dy * dy);
      if (m.x < 0.0 || m.x > fn || m.y < 0.0 || m.y > fn) inside = false;
      next[k] = m;
    }
    err = std::sqrt(err);
    // The Euler-midpoint gap grows like h^2.
    const double ratio = err > 0.0 ? std::sqrt(options.step_tolerance / err) : 4.0;
    if (err > options.step_tolerance || !inside) {
      h *= inside ? std::clamp(0.9 * ratio, 0.2, 0.9) : 0.5;
      continue;
    }
    std::swap(pos, next);
    f.steps_.push_back({t, h});
    t += h;
    f.density_into(t, rho.get());
    if (deviation(rho.get()) <= target) break;
    f.velocity_into(rho.get(), v0, pad);
    for (std::size_t k = 0; k < pos.size(); ++k) start[k] = v0.at(pos[k]);
    h *= std::clamp(0.9 * ratio, 0.2, 4.0);
  }
  f.duration_ = t;
  f.before_final_step_ = std::move(next);
  f.node_images_ = std::move(pos);
  return f;
}

std::vector<Point> FlowField::node_images_final_step_split(int parts) const
{
  if (steps_.empty() || parts <= 1) return node_images_;
  const FlowStep last = steps_.back();
  const double fn = static_cast<double>(n_);
  const double h = last.h / parts;
  std::vector<Point> pts = before_final_step_;
  for (int s = 0; s < parts; ++s) {
    const double t = last.t + s * h;
    const VelocityField v0 = velocity_at(t);
    const VelocityField vm = velocity_at(t + 0.5 * h);
    for (auto &r : pts) {
      r = r + h * vm.at(r + (0.5 * h) * v0.at(r));
      if (r.x < 0.0 || r.x > fn || r.y < 0.0 || r.y > fn) {
        throw LeftCanvas("a grid node left the canvas in the split final step");
      }
    }
  }
  return pts;
}

namespace
{

bool integrate(const FlowField &field,
               std::vector<Point> &pts,
               int substeps)
{
  const double fn = static_cast<double>(field.size());
  for (const auto &step : field.steps()) {
    const double h = step.h / substeps;
    for (int s = 0; s < substeps; ++s) {
      const double t = step.t + s * h;
      const VelocityField v0 = field.velocity_at(t);
      const VelocityField vm = field.velocity_at(t + 0.5 * h);
      for (auto &r : pts) {
        r = r + h * vm.at(r + (0.5 * h) * v0.at(r));
        if (r.x < 0.0 || r.x > fn || r.y < 0.0 || r.y > fn) return false;
      }
    }
  }
  return true;
}

}  // namespace

std::vector<ProjectedPoint> advect(const FlowField &field,
                                   const std::vector<Point> &points,
                                   int substeps)
{
  const double fn = static_cast<double>(field.size());
  for (const auto &p : points) {
    if (!(p.x >= 0.0 && p.x <= fn && p.y >= 0.0 && p.y <= fn)) {
      throw OutsideCanvas("point (" + std::to_string(p.x) + ", " +
                          std::to_string(p.y) + ") is outside the canvas");
    }
  }
  // Grid nodes were integrated during the solve with the same steps and
  // arithmetic, so their images are reused as they are.
  const std::size_t n = field.size();
  std::vector<ProjectedPoint> out(points.size());
  std::vector<std::size_t> rest;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Point p = points[k];
    if (substeps == 1 && p.x == std::floor(p.x) && p.y == std::floor(p.y)) {
      const auto i = static_cast<std::size_t>(p.x), j = static_cast<std::size_t>(p.y);
      out[k] = {p, field.node_images()[j * (n + 1) + i]};
    } else {
      rest.push_back(k);
    }
  }
  if (rest.empty()) return out;
  std::vector<Point> start(rest.size());
  for (std::size_t k = 0; k < rest.size(); ++k) start[k] = points[rest[k]];
  std::vector<Point> pts = start;
  if (!integrate(field, pts, substeps)) {
    pts = start;
    if (!integrate(field, pts, 2 * substeps)) {
      throw LeftCanvas("trajectory left the canvas even with halved steps");
    }
  }
  for (std::size_t k = 0; k < rest.size(); ++k) out[rest[k]] = {start[k], pts[k]};
  return out;
}

}  // namespace carto
