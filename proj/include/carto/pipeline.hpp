#ifndef CARTO_PIPELINE_HPP
#define CARTO_PIPELINE_HPP

#include "carto/geometry.hpp"
#include "carto/metrics.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace carto
{

enum class DensifyMode { triangulated, uniform, off };

struct RunConfig {
  std::size_t grid_size = 512;
  double leaf_fraction = 1.0 / 256.0;
  int max_iterations = 100;
  double target_error = 0.01;
  std::size_t simplify_target = 0;  // 0: max(10000, 15 x polygon count)
  DensifyMode mode = DensifyMode::triangulated;
  double max_edge_length = 1.0;  // uniform mode, canvas units
  double blur_radius = 1.0;      // cells
  std::uint64_t seed = 0;
  std::string id_key = "id";
  std::string debug_dir;  // first-iteration dumps when set
};

// "5fcarto", "bfb" or "uniform:<max edge length>".
void parse_mode(const std::string &text, RunConfig &config);
std::string mode_name(const RunConfig &config);

// Throws DegenerateGeometry for a non-positive or non-finite setting.
void check_config(const RunConfig &config);

struct IterationRecord {
  int iteration = 0;
  double e_max = 0.0;
  std::vector<double> region_errors;  // input order
  std::size_t self_intersections = 0;
  std::size_t overlap_intersections = 0;
  std::size_t vertices = 0;
  double vertex_growth = 0.0;
  double flow_duration = 0.0;
  std::size_t flow_steps = 0;
  std::size_t leaves = 0;
  std::size_t triangles = 0;
  bool topology_ok = true;
  double blur = 0.0;  // blur radius that produced a valid projection
  int retries = 0;
  double seconds = 0.0;  // since the start of the run
};

struct IterationTrace {
  double initial_e_max = 0.0;
  std::vector<IterationRecord> iterations;
  double best_e_max = 0.0;
  int best_iteration = 0;
  std::size_t vertices_before_simplify = 0;
  std::size_t vertices_after_simplify = 0;
};

struct PipelineResult {
  RegionSet cartogram;
  MetricsReport metrics;
  IterationTrace trace;
};

// Iterates rasterize, smooth, flow, quadtree, triangulation, densify and
// project until E_max < target_error or max_iterations, then simplifies
// once. Not reaching the target is reported through metrics.converged.
PipelineResult run_pipeline(const RegionSet &input, const RunConfig &config);
PipelineResult run_pipeline(const std::string &geometry_path,
                            const std::string &data_path,
                            const RunConfig &config);

// JSON report with a fixed key order.
std::string metrics_json(const MetricsReport &report, const RunConfig &config);

// One JSON object per line: a header line, then one per iteration.
std::string trace_jsonl(const IterationTrace &trace);

}  // namespace carto

#endif
