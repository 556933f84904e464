#include "carto/pipeline.hpp"

#include "carto/density.hpp"
#include "carto/densify.hpp"
#include "carto/errors.hpp"
#include "carto/flow.hpp"
#include "carto/io.hpp"
#include "carto/quadtree.hpp"
#include "carto/simplify.hpp"
#include "carto/svg.hpp"
#include "carto/topology.hpp"
#include "carto/triangulation.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <sstream>

namespace carto
{

void parse_mode(const std::string &text, RunConfig &config)
{
  if (text == "5fcarto") {
    config.mode = DensifyMode::triangulated;
  } else if (text == "bfb") {
    config.mode = DensifyMode::off;
  } else if (text.rfind("uniform:", 0) == 0) {
    const std::string len = text.substr(8);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(len, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == 0 || used != len.size() || !(v > 0.0) || !std::isfinite(v)) {
      throw ParseError("uniform mode needs a positive edge length, got '" + len + "'");
    }
    config.mode = DensifyMode::uniform;
    config.max_edge_length = v;
  } else {
    throw ParseError("unknown mode '" + text + "' (expected 5fcarto, bfb or uniform:<len>)");
  }
}

std::string mode_name(const RunConfig &config)
{
  switch (config.mode) {
  case DensifyMode::triangulated:
    return "5fcarto";
  case DensifyMode::off:
    return "bfb";
  case DensifyMode::uniform: {
    std::ostringstream s;
    s << "uniform:" << config.max_edge_length;
    return s.str();
  }
  }
  return "";
}

void check_config(const RunConfig &c)
{
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (c.grid_size == 0 || (c.grid_size & (c.grid_size - 1)) != 0) {
    throw DegenerateGeometry("grid size must be a positive power of two");
  }
  if (!positive(c.leaf_fraction) || c.leaf_fraction > 1.0) {
    throw DegenerateGeometry("leaf fraction must be in (0, 1]");
  }
  if (c.max_iterations <= 0) throw DegenerateGeometry("max iterations must be positive");
  if (!positive(c.target_error)) throw DegenerateGeometry("target error must be positive");
  if (c.mode == DensifyMode::uniform && !positive(c.max_edge_length)) {
    throw DegenerateGeometry("uniform edge length must be positive");
  }
  if (!(c.blur_radius >= 0.0) || !std::isfinite(c.blur_radius)) {
    throw DegenerateGeometry("blur radius must be non-negative");
  }
}

namespace
{

std::vector<double> targets_of(const RegionSet &set)
{
  std::vector<double> t;
  for (const auto &r : set.regions()) t.push_back(r.target_value);
  return t;
}

RegionSet advect_regions(const FlowField &flow, const RegionSet &set)
{
  std::vector<Point> pts;
  pts.reserve(set.n_vertices());
  RegionSet out = set;
  out.transform([&](Point p) {
    pts.push_back(p);
    return p;
  });
  const auto moved = advect(flow, pts);
  std::size_t k = 0;
  out.transform([&](Point) { return moved[k++].image; });
  return out;
}

// Scales the set about its bounding-box centre to the given total area.
void rescale(RegionSet &set, double area)
{
  const double now = total_area(set);
  if (!(now > 0.0)) return;
  const double s = std::sqrt(area / now);
  const auto box = set.bounding_box();
  const Point c = 0.5 * (box.min + box.max);
  set.transform([&](Point p) { return c + s * (p - c); });
}

void dump_debug(const std::string &dir,
                const DensityGrid &grid,
                const FlowField &flow,
                const Quadtree *tree,
                const Triangulation *tri)
{
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ostringstream d;
  d << grid.width << ' ' << grid.height << '\n';
  for (std::size_t j = 0; j < grid.height; ++j) {
    for (std::size_t i = 0; i < grid.width; ++i) d << (i ? " " : "") << grid.at(i, j);
    d << '\n';
  }
  write_text_file((fs::path(dir) / "density.txt").string(), d.str());

  std::ostringstream v;
  const std::size_t n = flow.size();
  v << n + 1 << ' ' << n + 1 << '\n';
  const auto &img = flow.node_images();
  for (std::size_t j = 0; j <= n; ++j) {
    for (std::size_t i = 0; i <= n; ++i) {
      const Point p = img[j * (n + 1) + i];
      v << i << ' ' << j << ' ' << p.x - double(i) << ' ' << p.y - double(j) << '\n';
    }
  }
  write_text_file((fs::path(dir) / "displacement.txt").string(), v.str());
  if (tree) write_text_file((fs::path(dir) / "quadtree.svg").string(), quadtree_svg(*tree));
  if (tri) {
    write_text_file((fs::path(dir) / "triangulation.svg").string(), triangulation_svg(*tri, false));
    write_text_file((fs::path(dir) / "triangulation_projected.svg").string(),
                    triangulation_svg(*tri, true));
  }
}

}  // namespace

PipelineResult run_pipeline(const RegionSet &input, const RunConfig &config)
{
  check_config(config);
  const auto start = std::chrono::steady_clock::now();
  const auto targets = targets_of(input);
  target_areas(input);  // rejects non-positive values up front
  const double area0 = total_area(input);

  PipelineResult res;
  auto &trace = res.trace;
  trace.initial_e_max = max_relative_area_error(input, targets).max;

  RegionSet cur = input;
  bool converged = false;
  int iterations = 0;
  const std::size_t target_leaves = std::max<std::size_t>(
    1, static_cast<std::size_t>(std::llround(config.leaf_fraction * double(config.grid_size * config.grid_size))));

  for (int it = 1; it <= config.max_iterations; ++it) {
    IterationRecord rec;
    rec.iteration = it;
    const auto raw = rasterize(cur, config.grid_size, {0.8, false});
    const auto &xf = raw.transform;
    RegionSet canvas = cur;
    canvas.transform([&](Point p) { return xf.to_canvas(p); });

    // A strongly sheared flow can fold the straight-edged images of quadtree
    // cells even though the flow itself is injective. Retry first with a split
    // final advection step, then with a smoother density, which the next iteration
    // corrects for.
    const double max_blur = 0.5 * double(config.grid_size);
    double blur = config.blur_radius;
    RegionSet moved;
    while (true) {
      const auto grid = smooth(raw, blur);
      const auto flow = solve_flow(grid);
      rec.flow_duration = flow.duration();
      rec.flow_steps = flow.steps().size();
      rec.blur = blur;
      const bool dump = it == 1 && !config.debug_dir.empty();
      if (config.mode != DensifyMode::triangulated) {
        if (dump) dump_debug(config.debug_dir, grid, flow, nullptr, nullptr);
        RegionSet base = canvas;
        if (config.mode == DensifyMode::uniform) {
          auto dense = uniform_densify(canvas, config.max_edge_length);
          rec.vertex_growth = dense.vertex_growth;
          base = std::move(dense.regions);
        }
        moved = advect_regions(flow, base);
        break;
      }
      const auto tree = grade(build_quadtree(grid, target_leaves));
      const auto corners = leaf_corners(tree);
      // Leaf corners are grid nodes, so their images come straight from the
      // solve. The first retry redoes only the final step in two halves.
      bool done = false;
      for (int parts = 1; parts <= 2 && !done; ++parts) {
        try {
          const auto nodes = flow.node_images_final_step_split(parts);
          const std::size_t w = flow.size() + 1;
          std::vector<Point> images;
          images.reserve(corners.size());
          for (const Point c : corners) {
            images.push_back(nodes[static_cast<std::size_t>(c.y) * w + static_cast<std::size_t>(c.x)]);
          }
          const auto tri = build_triangulation(tree, images);
          const auto dense = densify(canvas, tri);
          auto out = project_regions(dense, tri);
          if (!validate_topology(dense.regions, out).all_ok()) {
            throw DegenerateProjection("projected boundaries are not valid");
          }
          if (dump) dump_debug(config.debug_dir, grid, flow, &tree, &tri);
          rec.leaves = tree.leaf_count;
          rec.triangles = tri.triangles.size();
          rec.vertex_growth = dense.vertex_growth;
          moved = std::move(out);
          done = true;
        } catch (const DegenerateProjection &) {
          ++rec.retries;
        } catch (const LeftCanvas &) {
          ++rec.retries;
        }
      }
      if (done) break;
      blur = std::max(2.0 * blur, 1.0);
      if (blur > max_blur) {
        throw DegenerateProjection("no valid projection even with blur radius " +
                                   std::to_string(max_blur));
      }
    }

    moved.transform([&](Point p) { return xf.to_map(p); });
    rescale(moved, area0);
    cur = std::move(moved);
    iterations = it;

    auto errors = max_relative_area_error(cur, targets);
    rec.e_max = errors.max;
    rec.region_errors = std::move(errors.per_region);
    const auto s = intersection_summary(cur);
    rec.self_intersections = std::accumulate(s.self_per_region.begin(), s.self_per_region.end(), std::size_t(0));
    rec.overlap_intersections = s.overlap;
    rec.vertices = cur.n_vertices();
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (trace.best_iteration == 0 || rec.e_max < trace.best_e_max) {
      trace.best_e_max = rec.e_max;
      trace.best_iteration = it;
    }
    trace.iterations.push_back(rec);
    if (rec.e_max < config.target_error) {
      converged = true;
      break;
    }
  }

  trace.vertices_before_simplify = cur.n_vertices();
  const std::size_t target =
    config.simplify_target > 0 ? config.simplify_target : default_simplify_target(cur);
  if (cur.n_vertices() > target) {
    cur = simplify(cur, target);
    rescale(cur, area0);
  }
  trace.vertices_after_simplify = cur.n_vertices();

  res.metrics = evaluate(input, cur, iterations, converged);
  res.cartogram = std::move(cur);
  return res;
}

PipelineResult run_pipeline(const std::string &geometry_path,
                            const std::string &data_path,
                            const RunConfig &config)
{
  auto set = read_geojson(geometry_path, config.id_key);
  join_values(set, read_values_csv(data_path));
  return run_pipeline(set, config);
}

std::string metrics_json(const MetricsReport &report, const RunConfig &config)
{
  nlohmann::ordered_json j;
  j["mode"] = mode_name(config);
  j["grid_size"] = config.grid_size;
  j["seed"] = config.seed;
  j["iterations_run"] = report.iterations_run;
  j["converged"] = report.converged;
  const auto &a = report.aggregate;
  j["aggregate"] = nlohmann::ordered_json{
    {"e_max", a.e_max},
    {"mean_frechet", a.mean_frechet},
    {"mean_hausdorff", a.mean_hausdorff},
    {"mean_symdiff", a.mean_symdiff},
    {"self_intersections", a.self_intersections},
    {"overlap_intersections", a.overlap_intersections},
    {"disparity_group", a.disparity_group}};
  auto regions = nlohmann::ordered_json::array();
  for (const auto &r : report.per_region) {
    regions.push_back(nlohmann::ordered_json{{"id", r.id},
                                             {"relative_area_error", r.relative_area_error},
                                             {"frechet", r.frechet},
                                             {"hausdorff", r.hausdorff},
                                             {"sym_diff", r.sym_diff}});
  }
  j["regions"] = std::move(regions);
  return j.dump(2) + "\n";
}

std::string trace_jsonl(const IterationTrace &trace)
{
  std::ostringstream out;
  nlohmann::ordered_json head{{"initial_e_max", trace.initial_e_max},
                              {"best_e_max", trace.best_e_max},
                              {"best_iteration", trace.best_iteration},
                              {"vertices_before_simplify", trace.vertices_before_simplify},
                              {"vertices_after_simplify", trace.vertices_after_simplify}};
  out << head.dump() << '\n';
  for (const auto &r : trace.iterations) {
    nlohmann::ordered_json j{{"iteration", r.iteration},
                             {"e_max", r.e_max},
                             {"self_intersections", r.self_intersections},
                             {"overlap_intersections", r.overlap_intersections},
                             {"vertices", r.vertices},
                             {"vertex_growth", r.vertex_growth},
                             {"flow_duration", r.flow_duration},
                             {"flow_steps", r.flow_steps},
                             {"leaves", r.leaves},
                             {"triangles", r.triangles},
                             {"topology_ok", r.topology_ok},
                             {"blur", r.blur},
                             {"retries", r.retries},
                             {"region_errors", r.region_errors},
                             {"seconds", r.seconds}};
    out << j.dump() << '\n';
  }
  return out.str();
}

}  // namespace carto
