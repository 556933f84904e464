#include "carto/topology.hpp"

#include "carto/errors.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace carto
{

const Ring &ring_of(const RegionSet &set,
                    std::size_t region,
                    std::size_t polygon,
                    std::size_t ring)
{
  const auto &pwh = set[region].polygons[polygon];
  return ring == 0 ? pwh.outer : pwh.holes[ring - 1];
}

void collect_edges(const RegionSet &set,
                   std::vector<Segment> &segments,
                   std::vector<EdgeRef> &refs)
{
  segments.clear();
  refs.clear();
  segments.reserve(set.n_vertices());
  refs.reserve(set.n_vertices());
  std::size_t ring_global = 0;
  for (std::size_t r = 0; r < set.size(); ++r) {
    const auto &polys = set[r].polygons;
    for (std::size_t p = 0; p < polys.size(); ++p) {
      for (std::size_t k = 0; k <= polys[p].holes.size(); ++k) {
        const Ring &ring = k == 0 ? polys[p].outer : polys[p].holes[k - 1];
        const std::size_t n = ring.size();
        for (std::size_t i = 0; i < n; ++i) {
          segments.push_back({ring[i], ring[(i + 1) % n]});
          refs.push_back({r, p, k, i, ring_global, n});
        }
        ++ring_global;
      }
    }
  }
}

namespace
{

// True if a and b are consecutive edges of the same ring and p is the
// vertex joining them.
bool joins_consecutive(const EdgeRef &a, const EdgeRef &b, const Segment &sa,
                       const Segment &sb, Point p)
{
  if (a.ring_global != b.ring_global) return false;
  const std::size_t n = a.ring_size;
  if ((a.index + 1) % n == b.index && p == sa.b && p == sb.a) return true;
  if ((b.index + 1) % n == a.index && p == sb.b && p == sa.a) return true;
  return false;
}

}  // namespace

IntersectionSummary intersection_summary(const RegionSet &set)
{
  std::vector<Segment> segs;
  std::vector<EdgeRef> refs;
  collect_edges(set, segs, refs);

  IntersectionSummary s;
  s.self_per_region.assign(set.size(), 0);
  s.ring_self.assign(set.n_rings(), 0);

  for (const auto &c : segment_contacts(segs)) {
    const EdgeRef &a = refs[c.i];
    const EdgeRef &b = refs[c.j];
    if (is_shared_endpoint(segs[c.i], segs[c.j], c.at)) {
      // Shared vertices are only a violation when a ring touches itself
      // somewhere other than between consecutive edges.
      if (a.ring_global != b.ring_global) continue;
      if (joins_consecutive(a, b, segs[c.i], segs[c.j], c.at)) continue;
    }
    const bool same_polygon = a.region == b.region && a.polygon == b.polygon;
    if (same_polygon) {
      ++s.self_per_region[a.region];
      s.self_points.push_back(c.at);
    } else {
      ++s.overlap;
      s.overlap_points.push_back(c.at);
    }
    if (a.ring_global == b.ring_global) {
      ++s.ring_self[a.ring_global];
    } else {
      ++s.cross_ring;
    }
  }
  return s;
}

std::vector<std::size_t> count_self_intersections(const RegionSet &set)
{
  return intersection_summary(set).self_per_region;
}

std::size_t count_overlap_intersections(const RegionSet &set)
{
  return intersection_summary(set).overlap;
}

bool ValidationReport::p1_ok() const
{
  return std::all_of(ring_self_counts.begin(), ring_self_counts.end(),
                     [](std::size_t c) { return c == 0; });
}

bool ValidationReport::p3_ok() const
{
  return std::all_of(junctions.begin(), junctions.end(),
                     [](const JunctionCheck &j) { return j.ok; });
}

namespace
{

struct Occurrence {
  std::size_t ring;  // global ring index
  std::size_t index;
};

struct RingTable {
  std::vector<const Ring *> rings;
};

RingTable ring_table(const RegionSet &set)
{
  RingTable t;
  for (const auto &r : set.regions()) {
    for (const auto &pwh : r.polygons) {
      t.rings.push_back(&pwh.outer);
      for (const auto &h : pwh.holes) t.rings.push_back(&h);
    }
  }
  return t;
}

void check_structure(const RegionSet &a, const RegionSet &b)
{
  if (a.size() != b.size()) {
    throw StructureMismatch("region counts differ");
  }
  for (std::size_t r = 0; r < a.size(); ++r) {
    const auto &pa = a[r].polygons;
    const auto &pb = b[r].polygons;
    if (pa.size() != pb.size()) {
      throw StructureMismatch("polygon counts differ in region '" + a[r].id +
                              "'");
    }
    for (std::size_t p = 0; p < pa.size(); ++p) {
      if (pa[p].holes.size() != pb[p].holes.size() ||
          pa[p].outer.size() != pb[p].outer.size()) {
        throw StructureMismatch("ring structure differs in region '" +
                                a[r].id + "'");
      }
      for (std::size_t h = 0; h < pa[p].holes.size(); ++h) {
        if (pa[p].holes[h].size() != pb[p].holes[h].size()) {
          throw StructureMismatch("hole sizes differ in region '" + a[r].id +
                                  "'");
        }
      }
    }
  }
}

// Groups of incident edges around each junction. Each group is one
// distinct neighbour coordinate; members are the (ring, index, direction)
// occurrences that reach it.
struct EdgeGroup {
  Point neighbour;
  Occurrence rep;  // occurrence of the neighbour vertex
  ArcLabel label;
};

struct Junction {
  Point at;
  Occurrence first;
  std::vector<EdgeGroup> groups;
};

std::vector<Junction> find_junctions(const RingTable &t)
{
  std::unordered_map<Point, std::vector<Occurrence>, PointHash> occ;
  for (std::size_t r = 0; r < t.rings.size(); ++r) {
    const Ring &ring = *t.rings[r];
    for (std::size_t i = 0; i < ring.size(); ++i) occ[ring[i]].push_back({r, i});
  }
  std::vector<Junction> out;
  for (const auto &[pt, list] : occ) {
    std::vector<EdgeGroup> groups;
    auto add = [&](Point nb, Occurrence rep, std::size_t ring, int dir) {
      for (auto &g : groups) {
        if (g.neighbour == nb) {
          g.label.emplace_back(ring, dir);
          return;
        }
      }
      groups.push_back({nb, rep, {{ring, dir}}});
    };
    for (const auto &o : list) {
      const Ring &ring = *t.rings[o.ring];
      const std::size_t n = ring.size();
      const std::size_t prev = (o.index + n - 1) % n;
      const std::size_t next = (o.index + 1) % n;
      add(ring[prev], {o.ring, prev}, o.ring, -1);
      add(ring[next], {o.ring, next}, o.ring, +1);
    }
    if (groups.size() < 3) continue;
    for (auto &g : groups) std::sort(g.label.begin(), g.label.end());
    Occurrence first = list.front();
    for (const auto &o : list) {
      if (std::tie(o.ring, o.index) < std::tie(first.ring, first.index)) {
        first = o;
      }
    }
    out.push_back({pt, first, std::move(groups)});
  }
  std::sort(out.begin(), out.end(),
            [](const Junction &a, const Junction &b) { return a.at < b.at; });
  return out;
}

// Indices of `dirs` sorted counterclockwise by angle, rotated so the
// smallest index comes first.
std::vector<std::size_t> cyclic_order(const std::vector<Point> &dirs)
{
  std::vector<std::size_t> idx(dirs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::atan2(dirs[a].y, dirs[a].x) < std::atan2(dirs[b].y, dirs[b].x);
  });
  const auto m = std::min_element(idx.begin(), idx.end());
  std::rotate(idx.begin(), m, idx.end());
  return idx;
}

}  // namespace

ValidationReport validate_topology(const RegionSet &before,
                                   const RegionSet &after)
{
  check_structure(before, after);
  ValidationReport rep;
  const auto summary = intersection_summary(after);
  rep.ring_self_counts = summary.ring_self;
  rep.cross_ring_crossings = summary.cross_ring;

  const RingTable tb = ring_table(before);
  const RingTable ta = ring_table(after);
  for (const auto &j : find_junctions(tb)) {
    JunctionCheck jc;
    jc.before = j.at;
    jc.after = (*ta.rings[j.first.ring])[j.first.index];
    jc.arcs = j.groups.size();
    std::vector<Point> db, da;
    for (const auto &g : j.groups) {
      db.push_back(g.neighbour - j.at);
      const Point nb_after = (*ta.rings[g.rep.ring])[g.rep.index];
      const Point d = nb_after - jc.after;
      if (d.x == 0.0 && d.y == 0.0) jc.ok = false;
      da.push_back(d);
    }
    if (jc.ok) jc.ok = cyclic_order(db) == cyclic_order(da);
    rep.junctions.push_back(jc);
  }
  return rep;
}

std::map<Point, std::vector<ArcLabel>> junction_signature(const RegionSet &set)
{
  std::map<Point, std::vector<ArcLabel>> out;
  for (const auto &j : find_junctions(ring_table(set))) {
    std::vector<Point> dirs;
    for (const auto &g : j.groups) dirs.push_back(g.neighbour - j.at);
    auto order = cyclic_order(dirs);
    std::vector<ArcLabel> labels;
    for (const auto i : order) labels.push_back(j.groups[i].label);
    const auto m = std::min_element(labels.begin(), labels.end());
    std::rotate(labels.begin(), m, labels.end());
    out.emplace(j.at, std::move(labels));
  }
  return out;
}

}  // namespace carto
