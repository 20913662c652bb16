#include "voxdfm/voxelgrid.hpp"

#include "voxdfm/errors.hpp"

namespace voxdfm {

int channel_count(EncodingKind kind) {
    switch (kind) {
    case EncodingKind::OccupancyOnly: return 1;
    case EncodingKind::FourChannel: return 4;
    case EncodingKind::CoupledThreeChannel: return 3;
    }
    return 1;
}

std::string to_string(EncodingKind kind) {
    switch (kind) {
    case EncodingKind::OccupancyOnly: return "occ";
    case EncodingKind::FourChannel: return "four";
    case EncodingKind::CoupledThreeChannel: return "coupled";
    }
    return "occ";
}

EncodingKind encoding_from_string(const std::string& name) {
    if (name == "occ") return EncodingKind::OccupancyOnly;
    if (name == "four") return EncodingKind::FourChannel;
    if (name == "coupled") return EncodingKind::CoupledThreeChannel;
    throw Error("unknown encoding '" + name + "' (expected occ, four, or coupled)");
}

VoxelGrid::VoxelGrid(const GridSpec& s, int nchannels) : spec(s), channels(nchannels) {
    if (!(s.spacing > 0.0) || s.nx < 1 || s.ny < 1 || s.nz < 1 || nchannels < 1)
        throw Error("invalid grid spec");
    data.assign(spec.cell_count() * channels, 0.0f);
}

GridSpec grid_for_bounds(const Aabb& bounds, int cells, double padding) {
    if (cells < 1) throw Error("grid resolution must be positive");
    if (padding < 0.0) throw Error("grid padding must be non-negative");
    const Vec3 ext = bounds.extent();
    const double largest = std::max({ext.x, ext.y, ext.z});
    if (!(largest > 0.0)) throw Error("degenerate bounds");
    const double side = largest * (1.0 + 2.0 * padding);
    const Vec3 c = bounds.center();
    GridSpec spec;
    spec.spacing = side / cells;
    spec.nx = spec.ny = spec.nz = cells;
    spec.origin = {c.x - side / 2.0, c.y - side / 2.0, c.z - side / 2.0};
    return spec;
}

GridSpec grid_for_part(const PartModel& part, int cells, double padding) {
    return grid_for_bounds(base_bounds(part.base), cells, padding);
}

} // namespace voxdfm
