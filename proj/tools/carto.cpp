#include "carto/errors.hpp"
#include "carto/io.hpp"
#include "carto/pipeline.hpp"
#include "carto/svg.hpp"
#include "carto/topology.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

int main(int argc, char **argv)
{
  CLI::App app{"Topology-preserving contiguous cartograms"};
  carto::RunConfig cfg;
  std::string geometry, data, mode = "5fcarto";
  std::string output, metrics_out, svg_out, trace_out;

  app.add_option("--geometry", geometry, "GeoJSON FeatureCollection of Polygon/MultiPolygon regions")
    ->required()
    ->check(CLI::ExistingFile);
  app.add_option("--data", data, "CSV with header id,value")->required()->check(CLI::ExistingFile);
  app.add_option("--id-key", cfg.id_key, "Feature property holding the region id")->capture_default_str();
  app.add_option("--grid-size", cfg.grid_size, "Density grid side, a power of two")->capture_default_str();
  app.add_option("--leaf-fraction", cfg.leaf_fraction, "Quadtree leaves per grid cell")->capture_default_str();
  app.add_option("--max-iterations", cfg.max_iterations)->capture_default_str();
  app.add_option("--target-error", cfg.target_error, "Stop once the largest relative area error is below this")
    ->capture_default_str();
  app.add_option("--simplify-target", cfg.simplify_target,
                 "Vertex budget for the final simplification (0: max(10000, 15 x polygons))")
    ->capture_default_str();
  app.add_option("--mode", mode, "5fcarto, bfb or uniform:<max edge length in cells>")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Recorded in the report; offsets the SVG palette")->capture_default_str();
  app.add_option("--output", output, "Cartogram GeoJSON (default: <geometry stem>_cartogram.geojson)");
  app.add_option("--metrics-out", metrics_out, "JSON metrics report");
  app.add_option("--svg-out", svg_out, "SVG rendering with crossings marked");
  app.add_option("--trace-out", trace_out, "JSON-lines iteration trace");
  app.add_option("--debug-dir", cfg.debug_dir, "Write first-iteration grids, quadtree and triangulations here");
  CLI11_PARSE(app, argc, argv);

  try {
    carto::parse_mode(mode, cfg);
    if (output.empty()) {
      const std::filesystem::path g(geometry);
      output = (g.parent_path() / (g.stem().string() + "_cartogram.geojson")).string();
    }
    const auto res = carto::run_pipeline(geometry, data, cfg);
    carto::write_geojson(res.cartogram, output, cfg.id_key);
    if (!metrics_out.empty()) carto::write_text_file(metrics_out, carto::metrics_json(res.metrics, cfg));
    if (!trace_out.empty()) carto::write_text_file(trace_out, carto::trace_jsonl(res.trace));
    if (!svg_out.empty()) {
      const auto s = carto::intersection_summary(res.cartogram);
      carto::SvgStyle style;
      style.palette_offset = cfg.seed;
      style.markers = s.self_points;
      style.markers.insert(style.markers.end(), s.overlap_points.begin(), s.overlap_points.end());
      carto::render_svg(res.cartogram, style, svg_out);
    }
    const auto &a = res.metrics.aggregate;
    std::cerr << "iterations " << res.metrics.iterations_run << ", E_max " << a.e_max
              << ", self-intersections " << a.self_intersections << ", overlaps "
              << a.overlap_intersections << '\n';
    if (!res.metrics.converged) {
      std::cerr << "warning: E_max stayed above " << cfg.target_error << " after "
                << cfg.max_iterations << " iterations (best " << res.trace.best_e_max << ")\n";
      return 3;
    }
  } catch (const carto::Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
