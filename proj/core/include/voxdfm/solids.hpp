#pragma once

#include "voxdfm/vec3.hpp"

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace voxdfm {

// The six axis-aligned drilling directions, named after the outward normal
// of the bounding-box face the tool enters through.
enum class Face { XPos, XNeg, YPos, YNeg, ZPos, ZNeg };

Vec3 face_normal(Face f);
int face_axis(Face f);          // 0, 1 or 2
bool face_positive(Face f);
const char* to_string(Face f);
Face face_from_string(const std::string& s);

// In-face axes. Positions on a face are measured from the face center along
// (u, v); the pairing is cyclic so it only depends on the face axis:
//   x faces -> (u, v) = (y, z),  y faces -> (z, x),  z faces -> (x, y).
void face_axes(Face f, Vec3& u, Vec3& v);

// Stock shapes. Axis aligned, minimum bounding-box corner at the origin.
struct Block {
    Vec3 size;
    friend bool operator==(const Block&, const Block&) = default;
};

// Box with a rectangular notch removed along the full y extent at the
// +x/+z corner: material is { x in [0,ox], y in [0,oy], z in [0,oz] }
// minus { x > ox-cx, z > oz-cz }. cut.y must equal outer.y.
struct LBlock {
    Vec3 outer;
    Vec3 cut;
    friend bool operator==(const LBlock&, const LBlock&) = default;
};

// Upright cylinder: axis +z through (radius, radius), z in [0, height].
struct Cylinder {
    double radius = 0.0;
    double height = 0.0;
    friend bool operator==(const Cylinder&, const Cylinder&) = default;
};

using BaseShape = std::variant<Block, LBlock, Cylinder>;

// One drilled hole. (pos_u, pos_v) offset the axis from the entry-face
// center; depth is measured from the stock surface along the drill
// direction. A hole whose depth reaches the stock thickness is a through
// hole, anything shallower is blind.
struct HoleSpec {
    Face face = Face::ZPos;
    double pos_u = 0.0;
    double pos_v = 0.0;
    double diameter = 0.0;
    double depth = 0.0;
    friend bool operator==(const HoleSpec&, const HoleSpec&) = default;
};

struct PartModel {
    BaseShape base;
    std::vector<HoleSpec> holes;
    friend bool operator==(const PartModel&, const PartModel&) = default;
};

Aabb base_bounds(const BaseShape& base);
double base_volume(const BaseShape& base);

// Closed-set membership of the stock shape (boundary points count as inside).
bool base_contains(const BaseShape& base, const Vec3& p);

// Drilling geometry of one hole, resolved against the stock. The entry
// point lies on the actual material surface: for an L-block drilled over
// the notch this is the notch floor, not the bounding-box plane.
struct HoleFrame {
    Vec3 entry;
    Vec3 axis;           // unit, pointing into the material
    double radius = 0.0;
    double thickness = 0.0;    // material run along the axis line
    double drill_depth = 0.0;  // swept length: min(spec depth, thickness)
    bool through = false;      // spec depth >= thickness
};

// Throws Error if the axis misses the material entirely (the entry point
// would not lie on the claimed face).
HoleFrame resolve_hole(const PartModel& part, std::size_t hole_index);

// True when p sits strictly inside the removed material of the hole: within
// the open cylinder radially and past the opening but short of a blind floor.
bool hole_removes(const HoleFrame& frame, const Vec3& p);

// Closed-set membership of the finished part: inside the stock and not
// strictly inside any drilled hole. Hole walls and blind-hole floors are
// part of the solid; the opening disks are not.
bool contains(const PartModel& part, const Vec3& p);

// Smallest wall between the hole surface and the stock's lateral boundary,
// taken over the hole's axial span. Negative means the hole breaks out of
// a side wall. Exact (no sampling), so threshold cases compare cleanly.
double lateral_clearance(const PartModel& part, std::size_t hole_index);

// Material left beyond a blind hole's floor along the drill axis.
// Zero for through holes.
double web_thickness(const PartModel& part, std::size_t hole_index);

// Gap between the cylindrical surfaces of two holes (axis-segment distance
// minus both radii). Negative means they intersect.
double hole_surface_gap(const PartModel& part, std::size_t a, std::size_t b);

// Distance from p to the nearest hole axis segment. Throws NoHoles.
double distance_to_nearest_hole_axis(const PartModel& part, const Vec3& p);

// True when the opening disk lies on a single planar facet of the stock
// (it does not straddle the L-block notch edge or overhang the boundary).
bool opening_on_single_facet(const PartModel& part, std::size_t hole_index);

// Structural validation: positive dimensions, cut smaller than outer,
// cylinder holes only on the flat end faces, every hole resolvable.
// Throws Error with a description of the first problem found.
void validate_part(const PartModel& part);

} // namespace voxdfm
