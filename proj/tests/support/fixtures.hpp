// Access to the bundled fixtures.
#ifndef CARTO_TEST_FIXTURES_HPP
#define CARTO_TEST_FIXTURES_HPP

#include "carto/io.hpp"

#include <string>

namespace fixtures
{

inline std::string path(const std::string &name, const std::string &ext)
{
  return std::string(CARTO_FIXTURE_DIR) + "/" + name + "." + ext;
}

// Geometry joined with its target values.
inline carto::RegionSet load(const std::string &name)
{
  auto set = carto::read_geojson(path(name, "geojson"));
  carto::join_values(set, carto::read_values_csv(path(name, "csv")));
  return set;
}

}  // namespace fixtures

#endif
