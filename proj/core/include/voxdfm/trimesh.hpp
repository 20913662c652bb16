#pragma once

#include "voxdfm/solids.hpp"
#include "voxdfm/vec3.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace voxdfm {

// Indexed triangle surface with one outward unit normal per triangle.
struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;
    std::vector<Vec3> normals;
};

Aabb mesh_bounds(const TriMesh& mesh);

// Divergence-theorem volume; positive when the surface is closed and its
// triangles wind outward.
double signed_volume(const TriMesh& mesh);

// Closed orientable 2-manifold check: every undirected edge must be used by
// exactly two triangles, once in each direction.
bool is_watertight(const TriMesh& mesh);

void write_obj(const TriMesh& mesh, const std::string& path);

// Boundary surface of a drilled part. Hole circles become regular
// circle_segments-gons whose vertices sit at angles offset by half a step,
// so a circle tangent to a stock edge still tessellates cleanly (the
// polygon stays strictly inside the tangent line).
//
// Every facet is triangulated against its hole openings by bridging each
// opening to the enclosing boundary and ear clipping. Throws
// NonManifoldGeometry when holes overlap each other, break out of a side
// wall, or straddle facet edges.
TriMesh tessellate(const PartModel& part, int circle_segments = 64);

} // namespace voxdfm
