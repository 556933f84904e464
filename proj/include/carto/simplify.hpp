#ifndef CARTO_SIMPLIFY_HPP
#define CARTO_SIMPLIFY_HPP

#include "carto/geometry.hpp"

#include <cstddef>

namespace carto
{

// Default vertex budget: max(10000, 15 x polygon count).
std::size_t default_simplify_target(const RegionSet &set);

// Removes vertices in order of least effective area until the set has at
// most `target` vertices or nothing more can go. Rings are cut into arcs at
// junctions, and an arc shared by two rings is simplified once, so both
// rings stay in agreement. Junctions are kept. A removal is skipped if
// another vertex lies in the closed triangle it sweeps, if it would
// duplicate an existing segment, or if a ring would drop below 3 vertices.
RegionSet simplify(const RegionSet &set, std::size_t target);

}  // namespace carto

#endif
