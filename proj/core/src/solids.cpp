#include "voxdfm/solids.hpp"

#include "voxdfm/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace voxdfm {

namespace {

double& comp(Vec3& v, int i) { return i == 0 ? v.x : (i == 1 ? v.y : v.z); }

double clamp01(double t) { return t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t); }

double sq(double v) { return v * v; }

} // namespace

// Closest-point formulation from Ericson's collision-detection derivation;
// robust for parallel and degenerate segments.
double segment_segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1) {
    const Vec3 d1 = p1 - p0;
    const Vec3 d2 = q1 - q0;
    const Vec3 r = p0 - q0;
    const double a = dot(d1, d1);
    const double e = dot(d2, d2);
    const double f = dot(d2, r);

    double s = 0.0, t = 0.0;
    if (a == 0.0 && e == 0.0) {
        return norm(r);
    }
    if (a == 0.0) {
        t = clamp01(f / e);
    } else {
        const double c = dot(d1, r);
        if (e == 0.0) {
            s = clamp01(-c / a);
        } else {
            const double b = dot(d1, d2);
            const double denom = a * e - b * b;
            if (denom != 0.0) s = clamp01((b * f - c * e) / denom);
            t = b * s + f;
            if (t < 0.0) {
                t = 0.0;
                s = clamp01(-c / a);
            } else if (t > e) {
                t = 1.0;
                s = clamp01((b - c) / a);
            } else {
                t /= e;
            }
        }
    }
    return norm((p0 + d1 * s) - (q0 + d2 * t));
}

Vec3 face_normal(Face f) {
    switch (f) {
        case Face::XPos: return {1, 0, 0};
        case Face::XNeg: return {-1, 0, 0};
        case Face::YPos: return {0, 1, 0};
        case Face::YNeg: return {0, -1, 0};
        case Face::ZPos: return {0, 0, 1};
        case Face::ZNeg: return {0, 0, -1};
    }
    return {};
}

int face_axis(Face f) { return static_cast<int>(f) / 2; }

bool face_positive(Face f) { return static_cast<int>(f) % 2 == 0; }

const char* to_string(Face f) {
    switch (f) {
        case Face::XPos: return "x+";
        case Face::XNeg: return "x-";
        case Face::YPos: return "y+";
        case Face::YNeg: return "y-";
        case Face::ZPos: return "z+";
        case Face::ZNeg: return "z-";
    }
    return "?";
}

Face face_from_string(const std::string& s) {
    static const std::array<Face, 6> all = {Face::XPos, Face::XNeg, Face::YPos,
                                            Face::YNeg, Face::ZPos, Face::ZNeg};
    for (Face f : all)
        if (s == to_string(f)) return f;
    throw SchemaError("unknown face name: " + s);
}

void face_axes(Face f, Vec3& u, Vec3& v) {
    const int a = face_axis(f);
    Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    u = axes[(a + 1) % 3];
    v = axes[(a + 2) % 3];
}

Aabb base_bounds(const BaseShape& base) {
    return std::visit(
        [](const auto& s) -> Aabb {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Block>) {
                return {{0, 0, 0}, s.size};
            } else if constexpr (std::is_same_v<S, LBlock>) {
                return {{0, 0, 0}, s.outer};
            } else {
                return {{0, 0, 0}, {2 * s.radius, 2 * s.radius, s.height}};
            }
        },
        base);
}

double base_volume(const BaseShape& base) {
    return std::visit(
        [](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Block>) {
                return s.size.x * s.size.y * s.size.z;
            } else if constexpr (std::is_same_v<S, LBlock>) {
                return s.outer.x * s.outer.y * s.outer.z - s.cut.x * s.cut.y * s.cut.z;
            } else {
                const double pi = 3.14159265358979323846;
                return pi * s.radius * s.radius * s.height;
            }
        },
        base);
}

bool base_contains(const BaseShape& base, const Vec3& p) {
    return std::visit(
        [&p](const auto& s) -> bool {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Block>) {
                return p.x >= 0 && p.x <= s.size.x && p.y >= 0 && p.y <= s.size.y &&
                       p.z >= 0 && p.z <= s.size.z;
            } else if constexpr (std::is_same_v<S, LBlock>) {
                if (p.x < 0 || p.x > s.outer.x || p.y < 0 || p.y > s.outer.y || p.z < 0 ||
                    p.z > s.outer.z)
                    return false;
                // The notch is open: its walls still belong to the material.
                return !(p.x > s.outer.x - s.cut.x && p.z > s.outer.z - s.cut.z);
            } else {
                if (p.z < 0 || p.z > s.height) return false;
                return sq(p.x - s.radius) + sq(p.y - s.radius) <= sq(s.radius);
            }
        },
        base);
}

namespace {

// Material interval [lo, hi] along the axis-parallel line through lateral
// coordinates (c1, c2) = (axis+1, axis+2 components). False when the line
// misses the material. All corpus shapes are axis-convex, so a single
// interval is always enough.
bool axis_line_span(const BaseShape& base, int axis, double c1, double c2, double& lo,
                    double& hi) {
    return std::visit(
        [&](const auto& s) -> bool {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Block>) {
                const Vec3 sz = s.size;
                const double s1 = sz[(axis + 1) % 3], s2 = sz[(axis + 2) % 3];
                if (c1 < 0 || c1 > s1 || c2 < 0 || c2 > s2) return false;
                lo = 0.0;
                hi = sz[axis];
                return true;
            } else if constexpr (std::is_same_v<S, LBlock>) {
                const double ox = s.outer.x, oy = s.outer.y, oz = s.outer.z;
                const double nx = ox - s.cut.x;  // notch wall plane
                const double nz = oz - s.cut.z;  // notch floor plane
                if (axis == 2) {
                    const double x = c1, y = c2;
                    if (x < 0 || x > ox || y < 0 || y > oy) return false;
                    lo = 0.0;
                    hi = x > nx ? nz : oz;
                    return true;
                }
                if (axis == 0) {
                    const double y = c1, z = c2;
                    if (y < 0 || y > oy || z < 0 || z > oz) return false;
                    lo = 0.0;
                    hi = z > nz ? nx : ox;
                    return true;
                }
                const double z = c1, x = c2;
                if (x < 0 || x > ox || z < 0 || z > oz) return false;
                if (x > nx && z > nz) return false;
                lo = 0.0;
                hi = oy;
                return true;
            } else {
                if (axis != 2) return false;  // only the flat end faces are drillable
                const double x = c1, y = c2;
                if (sq(x - s.radius) + sq(y - s.radius) > sq(s.radius)) return false;
                lo = 0.0;
                hi = s.height;
                return true;
            }
        },
        base);
}

// L-block cross-section polygon in the (x, z) plane, counter-clockwise.
std::array<std::array<double, 2>, 6> lblock_profile(const LBlock& s) {
    const double ox = s.outer.x, oz = s.outer.z;
    const double nx = ox - s.cut.x, nz = oz - s.cut.z;
    return {{{0, 0}, {ox, 0}, {ox, nz}, {nx, nz}, {nx, oz}, {0, oz}}};
}

double point_segment_distance_2d(double px, double py, double ax, double ay, double bx,
                                 double by) {
    const double dx = bx - ax, dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    double t = len2 == 0.0 ? 0.0 : ((px - ax) * dx + (py - ay) * dy) / len2;
    t = clamp01(t);
    return std::hypot(px - (ax + t * dx), py - (ay + t * dy));
}

double lblock_profile_boundary_distance(const LBlock& s, double x, double z) {
    const auto poly = lblock_profile(s);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % poly.size()];
        best = std::min(best, point_segment_distance_2d(x, z, a[0], a[1], b[0], b[1]));
    }
    return best;
}

} // namespace

HoleFrame resolve_hole(const PartModel& part, std::size_t hole_index) {
    if (hole_index >= part.holes.size()) throw Error("hole index out of range");
    const HoleSpec& h = part.holes[hole_index];
    if (h.diameter <= 0 || h.depth <= 0)
        throw Error("hole diameter and depth must be positive");

    const int a = face_axis(h.face);
    const Aabb bb = base_bounds(part.base);
    Vec3 u, v;
    face_axes(h.face, u, v);
    Vec3 fc = bb.center();
    comp(fc, a) = face_positive(h.face) ? bb.hi[a] : bb.lo[a];
    Vec3 p = fc + u * h.pos_u + v * h.pos_v;

    double lo, hi;
    if (!axis_line_span(part.base, a, p[(a + 1) % 3], p[(a + 2) % 3], lo, hi))
        throw Error("hole axis does not meet the stock at its (u, v) position");

    HoleFrame frame;
    frame.axis = -face_normal(h.face);
    frame.radius = 0.5 * h.diameter;
    frame.thickness = hi - lo;
    frame.through = h.depth >= frame.thickness;
    frame.drill_depth = frame.through ? frame.thickness : h.depth;
    comp(p, a) = face_positive(h.face) ? hi : lo;
    frame.entry = p;
    return frame;
}

bool hole_removes(const HoleFrame& f, const Vec3& p) {
    const Vec3 d = p - f.entry;
    const double t = dot(d, f.axis);
    if (t < 0.0) return false;
    // Blind floors stay material (strict <); through exits are open (<=).
    if (f.through ? (t > f.drill_depth) : (t >= f.drill_depth)) return false;
    const Vec3 radial = d - f.axis * t;
    return dot(radial, radial) < sq(f.radius);
}

bool contains(const PartModel& part, const Vec3& p) {
    if (!base_contains(part.base, p)) return false;
    for (std::size_t i = 0; i < part.holes.size(); ++i) {
        if (hole_removes(resolve_hole(part, i), p)) return false;
    }
    return true;
}

double lateral_clearance(const PartModel& part, std::size_t hole_index) {
    const HoleSpec& h = part.holes[hole_index];
    const HoleFrame f = resolve_hole(part, hole_index);
    const int a = face_axis(h.face);

    return std::visit(
        [&](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Block>) {
                double wall = std::numeric_limits<double>::infinity();
                for (int off = 1; off <= 2; ++off) {
                    const int i = (a + off) % 3;
                    const double c = f.entry[i];
                    wall = std::min({wall, c, s.size[i] - c});
                }
                return wall - f.radius;
            } else if constexpr (std::is_same_v<S, Cylinder>) {
                const double rho =
                    std::hypot(f.entry.x - s.radius, f.entry.y - s.radius);
                return s.radius - rho - f.radius;
            } else {
                const double ox = s.outer.x, oy = s.outer.y, oz = s.outer.z;
                const double nx = ox - s.cut.x, nz = oz - s.cut.z;
                const double span_hi = std::max(f.entry[a], f.entry[a] + f.axis[a] * f.drill_depth);
                if (a == 2) {
                    // Walls in x depend on whether the swept range reaches
                    // above the notch floor next to the notch wall.
                    const double x = f.entry.x, y = f.entry.y;
                    const double wall_hi_x = (x <= nx && span_hi > nz) ? nx : ox;
                    const double wall =
                        std::min({x, wall_hi_x - x, y, oy - y});
                    return wall - f.radius;
                }
                if (a == 0) {
                    const double y = f.entry.y, z = f.entry.z;
                    const double wall_hi_z = (z <= nz && span_hi > nx) ? nz : oz;
                    const double wall =
                        std::min({y, oy - y, z, wall_hi_z - z});
                    return wall - f.radius;
                }
                return lblock_profile_boundary_distance(s, f.entry.x, f.entry.z) - f.radius;
            }
        },
        part.base);
}

double web_thickness(const PartModel& part, std::size_t hole_index) {
    const HoleFrame f = resolve_hole(part, hole_index);
    return f.through ? 0.0 : f.thickness - f.drill_depth;
}

double hole_surface_gap(const PartModel& part, std::size_t a, std::size_t b) {
    const HoleFrame fa = resolve_hole(part, a);
    const HoleFrame fb = resolve_hole(part, b);
    const double axis_dist =
        segment_segment_distance(fa.entry, fa.entry + fa.axis * fa.drill_depth, fb.entry,
                                 fb.entry + fb.axis * fb.drill_depth);
    return axis_dist - fa.radius - fb.radius;
}

double distance_to_nearest_hole_axis(const PartModel& part, const Vec3& p) {
    if (part.holes.empty()) throw NoHoles("part has no holes");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < part.holes.size(); ++i) {
        const HoleFrame f = resolve_hole(part, i);
        best = std::min(best,
                        point_segment_distance(p, f.entry, f.entry + f.axis * f.drill_depth));
    }
    return best;
}

namespace {

// Disk of radius r around (c1, c2) inside the closed rectangle
// [0, s1] x [0, s2]; tangency allowed.
bool disk_in_rect(double c1, double c2, double r, double s1, double s2) {
    return c1 - r >= 0 && c1 + r <= s1 && c2 - r >= 0 && c2 + r <= s2;
}

bool opening_fits(const BaseShape& base, int axis, double along, double c1, double c2,
                  double r) {
    return std::visit(
        [&](const auto& s) -> bool {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Block>) {
                const double s1 = s.size[(axis + 1) % 3], s2 = s.size[(axis + 2) % 3];
                return disk_in_rect(c1, c2, r, s1, s2);
            } else if constexpr (std::is_same_v<S, Cylinder>) {
                if (axis != 2) return false;
                return std::hypot(c1 - s.radius, c2 - s.radius) + r <= s.radius;
            } else {
                const double ox = s.outer.x, oy = s.outer.y, oz = s.outer.z;
                const double nx = ox - s.cut.x, nz = oz - s.cut.z;
                if (axis == 2) {
                    const double x = c1, y = c2;
                    if (!disk_in_rect(x, y, r, ox, oy)) return false;
                    if (along == 0.0) return true;  // bottom face, one rectangle
                    if (along == oz) return x + r <= nx;       // top of the tall column
                    if (along == nz) return x - r >= nx;       // notch floor
                    return false;
                }
                if (axis == 0) {
                    const double y = c1, z = c2;
                    if (y - r < 0 || y + r > oy) return false;
                    if (along == 0.0) return z - r >= 0 && z + r <= oz;
                    if (along == ox) return z - r >= 0 && z + r <= nz;   // outer wall
                    if (along == nx) return z - r >= nz && z + r <= oz;  // notch wall
                    return false;
                }
                const double z = c1, x = c2;
                // End caps are the L profile itself.
                if (x < 0 || x > ox || z < 0 || z > oz || (x > nx && z > nz)) return false;
                return lblock_profile_boundary_distance(s, x, z) >= r;
            }
        },
        base);
}

} // namespace

bool opening_on_single_facet(const PartModel& part, std::size_t hole_index) {
    const HoleSpec& h = part.holes[hole_index];
    const HoleFrame f = resolve_hole(part, hole_index);
    const int a = face_axis(h.face);
    const double c1 = f.entry[(a + 1) % 3], c2 = f.entry[(a + 2) % 3];
    if (!opening_fits(part.base, a, f.entry[a], c1, c2, f.radius)) return false;
    if (f.through) {
        const double exit_along = f.entry[a] + f.axis[a] * f.drill_depth;
        if (!opening_fits(part.base, a, exit_along, c1, c2, f.radius)) return false;
    }
    return true;
}

void validate_part(const PartModel& part) {
    std::visit(
        [](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Block>) {
                if (s.size.x <= 0 || s.size.y <= 0 || s.size.z <= 0)
                    throw Error("block dimensions must be positive");
            } else if constexpr (std::is_same_v<S, LBlock>) {
                if (s.outer.x <= 0 || s.outer.y <= 0 || s.outer.z <= 0)
                    throw Error("l-block outer dimensions must be positive");
                if (!(s.cut.x > 0 && s.cut.x < s.outer.x))
                    throw Error("l-block cut must be strictly inside the outer x extent");
                if (!(s.cut.z > 0 && s.cut.z < s.outer.z))
                    throw Error("l-block cut must be strictly inside the outer z extent");
                if (s.cut.y != s.outer.y)
                    throw Error("l-block cut must span the full y extent");
            } else {
                if (s.radius <= 0 || s.height <= 0)
                    throw Error("cylinder radius and height must be positive");
            }
        },
        part.base);

    for (std::size_t i = 0; i < part.holes.size(); ++i) {
        const HoleSpec& h = part.holes[i];
        std::ostringstream where;
        where << "hole " << i << ": ";
        if (h.diameter <= 0) throw Error(where.str() + "diameter must be positive");
        if (h.depth <= 0) throw Error(where.str() + "depth must be positive");
        if (std::holds_alternative<Cylinder>(part.base) && face_axis(h.face) != 2)
            throw Error(where.str() + "cylinder stock is drillable on its end faces only");
        try {
            resolve_hole(part, i);
        } catch (const Error& e) {
            throw Error(where.str() + e.what());
        }
    }
}

} // namespace voxdfm
