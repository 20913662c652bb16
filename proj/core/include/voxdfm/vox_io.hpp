#pragma once

#include "voxdfm/voxelgrid.hpp"

#include <string>

namespace voxdfm {

// Binary grid file. Layout, all little-endian:
//   "VXG1"  magic
//   u32     nx, ny, nz, channels
//   f64     origin x, y, z
//   f64     spacing
//   f32     nx*ny*nz*channels values, channel-major, z, y, x fastest
void write_vox(const VoxelGrid& grid, const std::string& path);
VoxelGrid read_vox(const std::string& path);

} // namespace voxdfm
