#ifndef CARTO_SVG_HPP
#define CARTO_SVG_HPP

#include "carto/geometry.hpp"
#include "carto/quadtree.hpp"
#include "carto/triangulation.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace carto
{

struct SvgStyle {
  std::vector<std::string> palette;  // empty: built-in palette
  std::uint64_t palette_offset = 0;
  double width_px = 800.0;
  std::string stroke = "#333333";
  double stroke_px = 0.5;
  std::vector<Point> markers;  // drawn as red circles
};

// One path per polygon with even-odd fill, coloured by a hash of the region
// id. The viewBox is the bounding box with y flipped; output depends only
// on the arguments.
std::string svg_document(const RegionSet &set, const SvgStyle &style = {});
void render_svg(const RegionSet &set, const SvgStyle &style, const std::string &path);

// Leaf rectangles of a quadtree.
std::string quadtree_svg(const Quadtree &tree);

// Triangles before (projected = false) or after projection.
std::string triangulation_svg(const Triangulation &tri, bool projected);

}  // namespace carto

#endif
