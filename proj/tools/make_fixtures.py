#!/usr/bin/env python3
"""Writes the bundled synthetic fixtures to data/fixtures/."""

import json
import math
import os
import sys

OUT = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
    os.path.dirname(__file__), "..", "data", "fixtures")


def area(ring):
    s = 0.0
    for i in range(len(ring)):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % len(ring)]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def ccw(ring):
    return ring if area(ring) > 0 else ring[::-1]


def cw(ring):
    return ring if area(ring) < 0 else ring[::-1]


def rnd(p):
    return [round(p[0], 6), round(p[1], 6)]


def wiggle(p0, p1, n, amp, waves=2.0, phase=0.0):
    """Points strictly between p0 and p1 with a sinusoidal normal offset."""
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    length = math.hypot(dx, dy)
    nx, ny = -dy / length, dx / length
    pts = []
    for k in range(1, n):
        t = k / n
        off = amp * math.sin(2 * math.pi * waves * t + phase)
        pts.append(rnd((p0[0] + t * dx + off * nx, p0[1] + t * dy + off * ny)))
    return pts


def path(*pieces):
    out = []
    for piece in pieces:
        for p in piece:
            p = rnd(p)
            if not out or out[-1] != p:
                out.append(p)
    if out[0] == out[-1]:
        out.pop()
    return out


def rev(seq):
    return list(reversed(seq))


def feature(rid, polygons):
    coords = []
    for outer, holes in polygons:
        rings = [ccw(outer)] + [cw(h) for h in holes]
        coords.append([r + [r[0]] for r in rings])
    return {"type": "Feature", "properties": {"id": rid},
            "geometry": {"type": "MultiPolygon", "coordinates": coords}}


def write(name, features, values):
    with open(os.path.join(OUT, name + ".geojson"), "w") as f:
        json.dump({"type": "FeatureCollection", "features": features}, f)
        f.write("\n")
    with open(os.path.join(OUT, name + ".csv"), "w") as f:
        f.write("id,value\n")
        for rid, v in values:
            f.write(f"{rid},{v}\n")


def halves():
    left = [[0, 0], [1, 0], [1, 1], [0, 1]]
    right = [[1, 0], [2, 0], [2, 1], [1, 1]]
    write("halves", [feature("L", [(left, [])]), feature("R", [(right, [])])],
          [("L", 3), ("R", 1)])


def checker():
    feats, vals = [], []
    for j in range(4):
        for i in range(4):
            rid = f"c{j}{i}"
            sq = [[i, j], [i + 1, j], [i + 1, j + 1], [i, j + 1]]
            feats.append(feature(rid, [(sq, [])]))
            vals.append((rid, 3 if (i + j) % 2 else 1))
    write("checker", feats, vals)


def strip3():
    w, h = 120.0, 60.0
    b1 = [[40, 0]] + wiggle([40, 0], [40, h], 12, 4.0, 1.5) + [[40, h]]
    b2 = [[80, 0]] + wiggle([80, 0], [80, h], 12, 3.0, 2.0, 1.0) + [[80, h]]
    west = path([[0, 0]], b1, [[0, h]])
    mid = path([[40, 0]], b2, rev(b1))
    east = path(b2, [[w, h]], [[w, 0]])
    write("strip3", [feature("W", [(west, [])]), feature("M", [(mid, [])]),
                     feature("E", [(east, [])])],
          [("W", 1), ("M", 6), ("E", 20)])


def belgium():
    # 2022 populations; areas are tuned so that the region densities equal
    # the published ones (0.574 for Wallonia, 19.91 for Brussels).
    pop = {"BRU": 1222637, "VLG": 6698876, "WAL": 3662495}
    total = sum(pop.values())
    f_bru = pop["BRU"] / total / 19.91
    f_wal = pop["WAL"] / total / 0.574

    width = 280.0
    north = [[width, 150]] + wiggle([width, 150], [0, 150], 14, 5.0, 3.0) + [[0, 150]]
    south = [[0, 0]] + wiggle([0, 0], [width, 0], 14, 6.0, 2.5, 0.7) + [[width, 0]]
    outline = path(south, north)
    a_total = area(outline)

    def border(y0):
        return ([[width, y0]] + wiggle([width, y0], [0, y0], 20, 8.0, 2.0, 0.3) +
                [[0, y0]])

    def wal_ring(y0):
        return path(south, border(y0))

    lo, hi = 10.0, 140.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if area(wal_ring(mid)) < f_wal * a_total:
            lo = mid
        else:
            hi = mid
    y0 = 0.5 * (lo + hi)
    wal = wal_ring(y0)
    # Area of the unrounded border curve differs from the rounded ring by
    # far less than the density precision that matters here.
    r = math.sqrt(f_bru * a_total / (2 * math.sqrt(2)))  # regular octagon
    cx, cy = 150.0, y0 + 30.0
    bru = [[cx + r * math.cos(math.pi / 8 + k * math.pi / 4),
            cy + r * math.sin(math.pi / 8 + k * math.pi / 4)] for k in range(8)]
    bru = [rnd(p) for p in bru]
    vlg = path(rev(border(y0)), north)
    write("belgium", [feature("BRU", [(bru, [])]),
                      feature("VLG", [(vlg, [bru])]),
                      feature("WAL", [(wal, [])])],
          sorted(pop.items()))


def islands():
    east_low = wiggle([60, 0], [60, 20], 5, 2.0, 1.0)
    east_high = wiggle([60, 30], [60, 50], 5, 2.0, 1.0)
    main = path([[0, 0], [60, 0]], east_low, [[60, 20], [60, 30]], east_high,
                [[60, 50], [0, 50]])
    lake = [[15, 15], [25, 14], [27, 24], [16, 26]]
    city = [[60, 20], [72, 22], [74, 32], [60, 30]]
    isle1 = [[80, 5], [92, 4], [95, 14], [84, 16]]
    isle2 = [[82, 35], [90, 33], [93, 45], [81, 44]]
    write("islands", [feature("main", [(main, [lake])]),
                      feature("city", [(city, [])]),
                      feature("isles", [(isle1, []), (isle2, [])])],
          [("city", 40), ("isles", 3), ("main", 60)])


def convoluted():
    # A thin strip whose top boundary is one long straight edge, squeezed
    # between a plain northern region and a southern region that contains a
    # dense core. Moving the core pushes the strip's dense lower boundary
    # across the straight upper one unless the upper one is densified.
    w = 200.0
    top_left, top_right = [0, 53], [w, 53]
    low = [[w, 50]] + [[x, 50] for x in range(196, 0, -4)] + [[0, 50]]
    north = [top_left, top_right, [w, 100], [0, 100]]
    strip = path(low, [top_left, top_right])
    core = [[88, 34], [112, 34], [112, 47], [88, 47]]
    south = path([[0, 0], [w, 0]], low)
    write("convoluted", [feature("N", [(north, [])]),
                         feature("T", [(strip, [])]),
                         feature("S", [(south, [core])]),
                         feature("D", [(core, [])])],
          [("D", 500), ("N", 50), ("S", 100), ("T", 3)])


def extreme():
    feats, vals = [], []
    dens = [1, 5000, 20, 300, 2, 60]
    for k in range(6):
        i, j = k % 3, k // 3
        sq = [[i * 10, j * 10], [i * 10 + 10, j * 10],
              [i * 10 + 10, j * 10 + 10], [i * 10, j * 10 + 10]]
        feats.append(feature(f"x{k}", [(sq, [])]))
        vals.append((f"x{k}", dens[k]))
    write("extreme", feats, vals)


if __name__ == "__main__":
    os.makedirs(OUT, exist_ok=True)
    halves()
    checker()
    strip3()
    belgium()
    islands()
    convoluted()
    extreme()
