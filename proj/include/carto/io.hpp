#ifndef CARTO_IO_HPP
#define CARTO_IO_HPP

#include "carto/geometry.hpp"

#include <map>
#include <string>

namespace carto
{

// Reads a GeoJSON FeatureCollection of Polygon/MultiPolygon features.
// Region ids come from properties[id_key]; target values default to 1.
// Closing vertices are dropped and rings reoriented (outer ccw, holes cw).
RegionSet parse_geojson(const std::string &text, const std::string &id_key = "id");
RegionSet read_geojson(const std::string &path, const std::string &id_key = "id");

// Serializes regions as a FeatureCollection of MultiPolygon features with
// properties {id_key: id, "value": target_value}. Output is deterministic.
std::string to_geojson(const RegionSet &set, const std::string &id_key = "id");
void write_geojson(const RegionSet &set,
                   const std::string &path,
                   const std::string &id_key = "id");

// Two-column CSV with header "id,value".
std::map<std::string, double> parse_values_csv(const std::string &text);
std::map<std::string, double> read_values_csv(const std::string &path);

// Sets each region's target value from `values`. Throws IdMismatch unless
// the two id sets are identical.
void join_values(RegionSet &set, const std::map<std::string, double> &values);

std::string read_text_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &text);

}  // namespace carto

#endif
