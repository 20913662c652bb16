#include "voxdfm/vox_io.hpp"

#include "voxdfm/errors.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

namespace voxdfm {

namespace {

static_assert(std::endian::native == std::endian::little,
              "vox files are little-endian and so is every supported target");
static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

constexpr char kMagic[4] = {'V', 'X', 'G', '1'};

// 2^31 floats (8 GiB) is far beyond any grid this pipeline produces; bigger
// counts in a header mean a corrupt or hostile file.
constexpr std::uint64_t kMaxValues = std::uint64_t{1} << 31;

} // namespace

void write_vox(const VoxelGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");

    const std::uint32_t dims[4] = {
        static_cast<std::uint32_t>(grid.spec.nx), static_cast<std::uint32_t>(grid.spec.ny),
        static_cast<std::uint32_t>(grid.spec.nz), static_cast<std::uint32_t>(grid.channels)};
    const double geom[4] = {grid.spec.origin.x, grid.spec.origin.y, grid.spec.origin.z,
                            grid.spec.spacing};
    out.write(kMagic, sizeof kMagic);
    out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    out.write(reinterpret_cast<const char*>(geom), sizeof geom);
    out.write(reinterpret_cast<const char*>(grid.data.data()),
              static_cast<std::streamsize>(grid.data.size() * sizeof(float)));
    out.close();
    if (!out) throw IoError("write failed for '" + path + "'");
}

VoxelGrid read_vox(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");

    char magic[4];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw FormatError("'" + path + "' is not a VXG1 voxel file");

    std::uint32_t dims[4];
    double geom[4];
    in.read(reinterpret_cast<char*>(dims), sizeof dims);
    in.read(reinterpret_cast<char*>(geom), sizeof geom);
    if (!in) throw FormatError("'" + path + "': truncated header");

    const std::uint64_t values =
        std::uint64_t{dims[0]} * dims[1] * dims[2] * dims[3];
    if (dims[0] < 1 || dims[1] < 1 || dims[2] < 1 || dims[3] < 1 || values > kMaxValues)
        throw FormatError("'" + path + "': implausible dimensions in header");
    if (!std::isfinite(geom[3]) || !(geom[3] > 0.0))
        throw FormatError("'" + path + "': non-positive voxel spacing");

    GridSpec spec;
    spec.origin = {geom[0], geom[1], geom[2]};
    spec.spacing = geom[3];
    spec.nx = static_cast<int>(dims[0]);
    spec.ny = static_cast<int>(dims[1]);
    spec.nz = static_cast<int>(dims[2]);

    VoxelGrid grid(spec, static_cast<int>(dims[3]));
    in.read(reinterpret_cast<char*>(grid.data.data()),
            static_cast<std::streamsize>(values * sizeof(float)));
    if (static_cast<std::uint64_t>(in.gcount()) != values * sizeof(float))
        throw FormatError("'" + path + "': truncated payload");
    if (in.peek() != std::ifstream::traits_type::eof())
        throw FormatError("'" + path + "': trailing bytes after payload");
    return grid;
}

} // namespace voxdfm
