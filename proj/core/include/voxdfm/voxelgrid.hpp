#pragma once

#include "voxdfm/solids.hpp"
#include "voxdfm/vec3.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace voxdfm {

// Uniform cubic-cell grid. Cell (x,y,z) spans
// [origin + (x,y,z)*spacing, origin + (x+1,y+1,z+1)*spacing].
struct GridSpec {
    Vec3 origin{};
    double spacing = 1.0;
    int nx = 1, ny = 1, nz = 1;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

    int dim(int axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }
    std::size_t cell_count() const {
        return static_cast<std::size_t>(nx) * ny * nz;
    }
    Vec3 cell_center(int x, int y, int z) const {
        return {origin.x + (x + 0.5) * spacing, origin.y + (y + 0.5) * spacing,
                origin.z + (z + 0.5) * spacing};
    }
    Aabb cell_box(int x, int y, int z) const {
        const Vec3 lo{origin.x + x * spacing, origin.y + y * spacing,
                      origin.z + z * spacing};
        return {lo, {lo.x + spacing, lo.y + spacing, lo.z + spacing}};
    }
    Aabb domain() const {
        return {origin, {origin.x + nx * spacing, origin.y + ny * spacing,
                         origin.z + nz * spacing}};
    }
};

enum class EncodingKind {
    OccupancyOnly,       // 1 channel
    FourChannel,         // occupancy + normal x,y,z
    CoupledThreeChannel, // normals on the boundary, (1,1,1)/(0,0,0) off it
};

int channel_count(EncodingKind kind);
std::string to_string(EncodingKind kind);
EncodingKind encoding_from_string(const std::string& name);

// Dense multi-channel grid, stored channel-major with x fastest:
// index = ((c*nz + z)*ny + y)*nx + x.
struct VoxelGrid {
    GridSpec spec;
    int channels = 1;
    std::vector<float> data;

    VoxelGrid() = default;
    VoxelGrid(const GridSpec& s, int nchannels);

    std::size_t index(int c, int x, int y, int z) const {
        return ((static_cast<std::size_t>(c) * spec.nz + z) * spec.ny + y) * spec.nx + x;
    }
    float& at(int c, int x, int y, int z) { return data[index(c, x, y, z)]; }
    float at(int c, int x, int y, int z) const { return data[index(c, x, y, z)]; }
};

// Cube grid of cells^3 voxels centered on the part's bounding box, each side
// padded by `padding` times the largest box extent.
GridSpec grid_for_bounds(const Aabb& bounds, int cells, double padding = 0.05);
GridSpec grid_for_part(const PartModel& part, int cells, double padding = 0.05);

} // namespace voxdfm
