#include "carto/io.hpp"

#include "carto/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace carto
{

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string read_text_file(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string &path, const std::string &text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

namespace
{

Ring parse_ring(const json &coords)
{
  Ring ring;
  for (const auto &c : coords) {
    if (!c.is_array() || c.size() < 2 || !c[0].is_number() ||
        !c[1].is_number()) {
      throw ParseError("coordinate is not a [x, y] number pair");
    }
    ring.push_back({c[0].get<double>(), c[1].get<double>()});
  }
  return clean_ring(ring);
}

PolygonWithHoles parse_polygon(const json &rings)
{
  if (!rings.is_array() || rings.empty()) {
    throw ParseError("polygon without rings");
  }
  PolygonWithHoles pwh;
  pwh.outer = parse_ring(rings[0]);
  if (pwh.outer.empty()) throw ParseError("outer ring has fewer than 3 vertices");
  for (std::size_t k = 1; k < rings.size(); ++k) {
    Ring h = parse_ring(rings[k]);
    if (h.empty()) throw ParseError("hole has fewer than 3 vertices");
    pwh.holes.push_back(std::move(h));
  }
  return pwh;
}

std::string id_string(const json &v)
{
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return v.dump();
  throw ParseError("region id is neither a string nor a number");
}

}  // namespace

RegionSet parse_geojson(const std::string &text, const std::string &id_key)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw ParseError("expected a FeatureCollection");
  }
  std::vector<Region> regions;
  std::set<std::string> seen;
  for (const auto &f : doc["features"]) {
    if (!f.contains("properties") || !f["properties"].is_object() ||
        !f["properties"].contains(id_key)) {
      throw ParseError("feature without property '" + id_key + "'");
    }
    Region r;
    r.id = id_string(f["properties"][id_key]);
    if (!seen.insert(r.id).second) {
      throw ParseError("duplicate region id '" + r.id + "'");
    }
    if (!f.contains("geometry") || !f["geometry"].is_object()) {
      throw ParseError("feature '" + r.id + "' has no geometry");
    }
    const auto &g = f["geometry"];
    const std::string type = g.value("type", "");
    if (type == "Polygon") {
      r.polygons.push_back(parse_polygon(g.at("coordinates")));
    } else if (type == "MultiPolygon") {
      for (const auto &p : g.at("coordinates")) {
        r.polygons.push_back(parse_polygon(p));
      }
    } else {
      throw ParseError("feature '" + r.id + "' has unsupported geometry '" +
                       type + "'");
    }
    regions.push_back(std::move(r));
  }
  RegionSet set(std::move(regions));
  orient_rings(set);
  return set;
}

RegionSet read_geojson(const std::string &path, const std::string &id_key)
{
  return parse_geojson(read_text_file(path), id_key);
}

namespace
{

ordered_json ring_json(const Ring &ring)
{
  ordered_json out = ordered_json::array();
  for (const auto &p : ring) out.push_back({p.x, p.y});
  if (!ring.empty()) out.push_back({ring.front().x, ring.front().y});
  return out;
}

}  // namespace

std::string to_geojson(const RegionSet &set, const std::string &id_key)
{
  ordered_json doc;
  doc["type"] = "FeatureCollection";
  doc["features"] = ordered_json::array();
  for (const auto &r : set.regions()) {
    ordered_json coords = ordered_json::array();
    for (const auto &pwh : r.polygons) {
      ordered_json rings = ordered_json::array();
      rings.push_back(ring_json(pwh.outer));
      for (const auto &h : pwh.holes) rings.push_back(ring_json(h));
      coords.push_back(std::move(rings));
    }
    ordered_json f;
    f["type"] = "Feature";
    f["properties"] = ordered_json::object();
    f["properties"][id_key] = r.id;
    f["properties"]["value"] = r.target_value;
    f["geometry"] = {{"type", "MultiPolygon"}, {"coordinates", std::move(coords)}};
    doc["features"].push_back(std::move(f));
  }
  return doc.dump() + "\n";
}

void write_geojson(const RegionSet &set,
                   const std::string &path,
                   const std::string &id_key)
{
  write_text_file(path, to_geojson(set, id_key));
}

namespace
{

std::string trim(const std::string &s)
{
  const auto b = s.find_first_not_of(" \t\r\n\"");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n\"");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::map<std::string, double> parse_values_csv(const std::string &text)
{
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV");
  const auto comma = line.find(',');
  if (comma == std::string::npos || trim(line.substr(0, comma)) != "id" ||
      trim(line.substr(comma + 1)) != "value") {
    throw ParseError("CSV header must be 'id,value'");
  }
  std::map<std::string, double> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto c = line.find(',');
    if (c == std::string::npos) {
      throw ParseError("line " + std::to_string(lineno) + ": expected two columns");
    }
    const std::string id = trim(line.substr(0, c));
    const std::string v = trim(line.substr(c + 1));
    double value = 0.0;
    std::size_t used = 0;
    try {
      value = std::stod(v, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == 0 || used != v.size()) {
      throw ParseError("line " + std::to_string(lineno) + ": '" + v +
                       "' is not a number");
    }
    if (!out.emplace(id, value).second) {
      throw ParseError("duplicate id '" + id + "' in CSV");
    }
  }
  return out;
}

std::map<std::string, double> read_values_csv(const std::string &path)
{
  return parse_values_csv(read_text_file(path));
}

void join_values(RegionSet &set, const std::map<std::string, double> &values)
{
  for (auto &r : set.mutable_regions()) {
    const auto it = values.find(r.id);
    if (it == values.end()) {
      throw IdMismatch("no value for region '" + r.id + "'");
    }
    r.target_value = it->second;
  }
  if (values.size() != set.size()) {
    for (const auto &[id, v] : values) {
      bool found = false;
      for (const auto &r : set.regions()) found = found || r.id == id;
      if (!found) throw IdMismatch("value for unknown region '" + id + "'");
    }
  }
}

}  // namespace carto
