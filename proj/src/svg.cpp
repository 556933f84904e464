#include "carto/svg.hpp"

#include "carto/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>

namespace carto
{

namespace
{

const std::vector<std::string> default_palette{
  "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
  "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"};

std::uint64_t fnv1a(const std::string &s)
{
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string num(double v)
{
  std::array<char, 32> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 4);
  std::string s(buf.data(), r.ptr);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

// Maps canvas or map coordinates to SVG user units with y pointing down.
struct Frame {
  BoundingBox box;
  double scale = 1.0;
  double pad = 0.0;

  Frame(const BoundingBox &b, double width_px) : box(b)
  {
    const double extent = std::max({b.width(), b.height(), 1e-300});
    scale = width_px / extent;
    pad = 0.02 * width_px;
  }
  double w() const { return box.width() * scale + 2 * pad; }
  double h() const { return box.height() * scale + 2 * pad; }
  std::string x(double v) const { return num((v - box.min.x) * scale + pad); }
  std::string y(double v) const { return num((box.max.y - v) * scale + pad); }
};

void header(std::ostringstream &out, const Frame &f)
{
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(f.w())
      << "\" height=\"" << num(f.h()) << "\" viewBox=\"0 0 " << num(f.w()) << ' ' << num(f.h())
      << "\">\n";
}

void ring_path(std::ostringstream &out, const Ring &ring, const Frame &f)
{
  for (std::size_t i = 0; i < ring.size(); ++i) {
    out << (i == 0 ? "M" : " L") << f.x(ring[i].x) << ' ' << f.y(ring[i].y);
  }
  if (!ring.empty()) out << " Z ";
}

}  // namespace

std::string svg_document(const RegionSet &set, const SvgStyle &style)
{
  const auto &palette = style.palette.empty() ? default_palette : style.palette;
  const Frame f(set.bounding_box(), style.width_px);
  std::ostringstream out;
  header(out, f);
  for (const auto &r : set.regions()) {
    const auto colour = palette[(fnv1a(r.id) + style.palette_offset) % palette.size()];
    for (const auto &pwh : r.polygons) {
      out << "<path data-id=\"" << r.id << "\" fill=\"" << colour << "\" fill-rule=\"evenodd\" stroke=\""
          << style.stroke << "\" stroke-width=\"" << num(style.stroke_px) << "\" d=\"";
      ring_path(out, pwh.outer, f);
      for (const auto &h : pwh.holes) ring_path(out, h, f);
      out << "\"/>\n";
    }
  }
  for (const auto &p : style.markers) {
    out << "<circle class=\"crossing\" cx=\"" << f.x(p.x) << "\" cy=\"" << f.y(p.y)
        << "\" r=\"3\" fill=\"none\" stroke=\"#e41a1c\" stroke-width=\"1.5\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void render_svg(const RegionSet &set, const SvgStyle &style, const std::string &path)
{
  write_text_file(path, svg_document(set, style));
}

std::string quadtree_svg(const Quadtree &tree)
{
  const double n = static_cast<double>(tree.grid_size);
  const Frame f({{0, 0}, {n, n}}, 800.0);
  std::ostringstream out;
  header(out, f);
  for (const auto i : tree.leaves()) {
    const auto &leaf = tree.nodes[i];
    const double x0 = leaf.origin.x, y0 = leaf.origin.y, s = leaf.size;
    out << "<path fill=\"none\" stroke=\"#333333\" stroke-width=\"0.5\" d=\"";
    ring_path(out, {{x0, y0}, {x0 + s, y0}, {x0 + s, y0 + s}, {x0, y0 + s}}, f);
    out << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string triangulation_svg(const Triangulation &tri, bool projected)
{
  const double n = tri.canvas_size;
  const Frame f({{0, 0}, {n, n}}, 800.0);
  std::ostringstream out;
  header(out, f);
  for (const auto &t : tri.triangles) {
    const auto &p = projected ? t.projected : t.unprojected;
    out << "<path fill=\"none\" stroke=\"#1f78b4\" stroke-width=\"0.4\" d=\"";
    ring_path(out, {p[0], p[1], p[2]}, f);
    out << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace carto
