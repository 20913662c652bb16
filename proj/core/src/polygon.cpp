#include "polygon.hpp"

#include "voxdfm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace voxdfm::detail {

namespace {

double signed_area(const std::vector<PolyPoint>& ring) {
    double a = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const PolyPoint& p = ring[i];
        const PolyPoint& q = ring[(i + 1) % ring.size()];
        a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
}

double cross3(const PolyPoint& a, const PolyPoint& b, const PolyPoint& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool same_xy(const PolyPoint& a, const PolyPoint& b) { return a.x == b.x && a.y == b.y; }

// True when [a,b] and [c,d] cross or touch anywhere except at a shared
// endpoint. Used to reject candidate bridges.
bool segments_block(const PolyPoint& a, const PolyPoint& b, const PolyPoint& c,
                    const PolyPoint& d) {
    if (same_xy(a, c) || same_xy(a, d) || same_xy(b, c) || same_xy(b, d)) return false;
    const double d1 = cross3(c, d, a);
    const double d2 = cross3(c, d, b);
    const double d3 = cross3(a, b, c);
    const double d4 = cross3(a, b, d);
    if (((d1 > 0) != (d2 > 0)) && d1 != 0 && d2 != 0 && ((d3 > 0) != (d4 > 0)) && d3 != 0 &&
        d4 != 0)
        return true;
    auto within = [](const PolyPoint& p, const PolyPoint& q, const PolyPoint& r) {
        return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
               std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
    };
    if (d1 == 0 && within(c, d, a)) return true;
    if (d2 == 0 && within(c, d, b)) return true;
    if (d3 == 0 && within(a, b, c)) return true;
    if (d4 == 0 && within(a, b, d)) return true;
    return false;
}

bool point_in_or_on_ccw_triangle(const PolyPoint& a, const PolyPoint& b, const PolyPoint& c,
                                 const PolyPoint& p) {
    return cross3(a, b, p) >= 0 && cross3(b, c, p) >= 0 && cross3(c, a, p) >= 0;
}

// Splices `hole` into `outer` through a bridge from the hole's rightmost
// vertex to the nearest boundary vertex the bridge can reach without
// touching any edge of `outer` or of the rings in `blockers`.
void merge_hole(std::vector<PolyPoint>& outer, const std::vector<PolyPoint>& hole,
                const std::vector<const std::vector<PolyPoint>*>& blockers) {
    std::size_t mi = 0;
    for (std::size_t i = 1; i < hole.size(); ++i) {
        if (hole[i].x > hole[mi].x || (hole[i].x == hole[mi].x && hole[i].y < hole[mi].y))
            mi = i;
    }
    const PolyPoint& m = hole[mi];

    std::vector<std::size_t> order(outer.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double da = (outer[a].x - m.x) * (outer[a].x - m.x) +
                          (outer[a].y - m.y) * (outer[a].y - m.y);
        const double db = (outer[b].x - m.x) * (outer[b].x - m.x) +
                          (outer[b].y - m.y) * (outer[b].y - m.y);
        return da != db ? da < db : a < b;
    });

    auto ring_blocks = [&](const std::vector<PolyPoint>& ring, const PolyPoint& v) {
        for (std::size_t i = 0; i < ring.size(); ++i) {
            if (segments_block(m, v, ring[i], ring[(i + 1) % ring.size()])) return true;
        }
        return false;
    };

    for (std::size_t vi : order) {
        const PolyPoint& v = outer[vi];
        if (same_xy(v, m)) continue;
        bool blocked = ring_blocks(outer, v) || ring_blocks(hole, v);
        for (const auto* ring : blockers)
            if (!blocked && ring_blocks(*ring, v)) blocked = true;
        if (blocked) continue;

        // ..., outer[vi], hole[mi..], hole[..mi], hole[mi]', outer[vi]', ...
        std::vector<PolyPoint> merged;
        merged.reserve(outer.size() + hole.size() + 2);
        for (std::size_t i = 0; i <= vi; ++i) merged.push_back(outer[i]);
        for (std::size_t k = 0; k <= hole.size(); ++k)
            merged.push_back(hole[(mi + k) % hole.size()]);
        for (std::size_t i = vi; i < outer.size(); ++i) merged.push_back(outer[i]);
        outer = std::move(merged);
        return;
    }
    throw NonManifoldGeometry("no visible bridge target for hole opening");
}

std::vector<std::array<std::uint32_t, 3>> ear_clip(const std::vector<PolyPoint>& poly) {
    const std::size_t n = poly.size();
    std::vector<std::array<std::uint32_t, 3>> tris;
    if (n < 3) throw NonManifoldGeometry("degenerate facet boundary");
    tris.reserve(n - 2);

    std::vector<std::size_t> prev(n), next(n);
    for (std::size_t i = 0; i < n; ++i) {
        prev[i] = (i + n - 1) % n;
        next[i] = (i + 1) % n;
    }

    std::size_t remaining = n;
    std::size_t head = 0;
    while (remaining > 3) {
        bool clipped = false;
        std::size_t i = head;
        for (std::size_t scanned = 0; scanned < remaining; ++scanned, i = next[i]) {
            const std::size_t a = prev[i], c = next[i];
            if (cross3(poly[a], poly[i], poly[c]) <= 0) continue;
            bool blocked = false;
            for (std::size_t j = next[c]; j != a; j = next[j]) {
                const PolyPoint& p = poly[j];
                if (same_xy(p, poly[a]) || same_xy(p, poly[i]) || same_xy(p, poly[c]))
                    continue;
                if (point_in_or_on_ccw_triangle(poly[a], poly[i], poly[c], p)) {
                    blocked = true;
                    break;
                }
            }
            if (blocked) continue;
            tris.push_back({poly[a].id, poly[i].id, poly[c].id});
            next[a] = c;
            prev[c] = a;
            head = a;
            --remaining;
            clipped = true;
            break;
        }
        if (clipped) continue;

        // No strict ear. Drop an exactly collinear vertex (empty triangle)
        // if one exists; otherwise the input was not a simple polygon.
        i = head;
        for (std::size_t scanned = 0; scanned < remaining; ++scanned, i = next[i]) {
            const std::size_t a = prev[i], c = next[i];
            if (cross3(poly[a], poly[i], poly[c]) == 0) {
                next[a] = c;
                prev[c] = a;
                head = a;
                --remaining;
                clipped = true;
                break;
            }
        }
        if (!clipped) throw NonManifoldGeometry("ear clipping stalled on facet polygon");
    }
    const std::size_t a = head, b = next[head], c = next[next[head]];
    if (cross3(poly[a], poly[b], poly[c]) > 0)
        tris.push_back({poly[a].id, poly[b].id, poly[c].id});
    return tris;
}

} // namespace

std::vector<std::array<std::uint32_t, 3>> triangulate_with_holes(
    std::vector<PolyPoint> outer, std::vector<std::vector<PolyPoint>> holes) {
    if (signed_area(outer) < 0) std::reverse(outer.begin(), outer.end());
    for (auto& hole : holes) {
        if (signed_area(hole) > 0) std::reverse(hole.begin(), hole.end());
    }

    // Rightmost holes first so later bridges cannot cross earlier ones.
    std::vector<std::size_t> order(holes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        auto rightmost = [](const std::vector<PolyPoint>& ring) {
            double best = -std::numeric_limits<double>::infinity();
            for (const PolyPoint& p : ring) best = std::max(best, p.x);
            return best;
        };
        const double ra = rightmost(holes[a]), rb = rightmost(holes[b]);
        return ra != rb ? ra > rb : a < b;
    });

    for (std::size_t k = 0; k < order.size(); ++k) {
        std::vector<const std::vector<PolyPoint>*> blockers;
        for (std::size_t r = k + 1; r < order.size(); ++r)
            blockers.push_back(&holes[order[r]]);
        merge_hole(outer, holes[order[k]], blockers);
    }
    return ear_clip(outer);
}

} // namespace voxdfm::detail
