#pragma once

#include "voxdfm/trimesh.hpp"
#include "voxdfm/voxelgrid.hpp"

#include <cstddef>
#include <unordered_map>

namespace voxdfm {

// Closed-set separating-axis test over the 13 candidate axes (3 box face
// normals, the triangle normal, 9 edge cross products). Touching counts.
bool tri_aabb_intersect(const Vec3& a, const Vec3& b, const Vec3& c, const Aabb& box);

// Ray-crossing parity occupancy: one ray per voxel column along cast_axis,
// a voxel center is inside iff an odd number of surface crossings lie below
// it. The mesh must be watertight and fit inside the grid domain. Columns
// whose ray grazes an edge, vertex, or center-height surface are retried
// with fixed sub-voxel offsets; DegenerateHit if none of them resolves it.
// workers = 0 uses the hardware concurrency; the result is identical for
// every worker count.
VoxelGrid voxelize_parity(const TriMesh& mesh, const GridSpec& spec, int workers = 0,
                          int cast_axis = 2);

// Exact membership of each voxel center in the part model. Independent of
// the mesh path end to end, so the two engines cross-check each other.
VoxelGrid voxelize_analytic(const PartModel& part, const GridSpec& spec, int workers = 0);

// Surface normals for boundary voxels. A voxel is boundary iff at least one
// triangle intersects its box; its normal is the normalized sum of those
// triangles' unit normals, or exactly zero when they cancel (|sum| < 1e-9).
struct BoundaryNormals {
    GridSpec spec;
    // key: x + nx*(y + ny*z)
    std::unordered_map<std::size_t, Vec3> normals;
};

BoundaryNormals boundary_normals(const TriMesh& mesh, const GridSpec& spec, int workers = 0);

// Expands 1-channel occupancy into the network input encoding:
//   OccupancyOnly        1ch  pass-through
//   FourChannel          4ch  occupancy, then normal x,y,z on boundary voxels
//   CoupledThreeChannel  3ch  normal on boundary voxels, else (1,1,1) inside
//                             and (0,0,0) outside
// Throws SpecMismatch when occ and normals disagree on the grid.
VoxelGrid encode(const VoxelGrid& occ, const BoundaryNormals& normals, EncodingKind kind);

// Voxel values that differ between two grids of identical shape.
std::size_t count_mismatches(const VoxelGrid& a, const VoxelGrid& b);

} // namespace voxdfm
