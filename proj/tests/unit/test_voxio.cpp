#include "doctest.h"

#include "../support/testers.hpp"
#include "voxdfm/errors.hpp"
#include "voxdfm/vox_io.hpp"

#include <fstream>

using namespace voxdfm;

namespace {

VoxelGrid sample_grid() {
    GridSpec gs;
    gs.origin = {-0.25, 1.5, 3.0};
    gs.spacing = 0.173;
    gs.nx = 3;
    gs.ny = 4;
    gs.nz = 2;
    VoxelGrid g(gs, 3);
    for (std::size_t i = 0; i < g.data.size(); ++i)
        g.data[i] = static_cast<float>(i) * 0.37f - 2.0f;
    return g;
}

} // namespace

TEST_CASE("voxel files round-trip bit-exactly") {
    const testers::TmpDir dir("voxio");
    const VoxelGrid g = sample_grid();
    write_vox(g, dir.str("g.vox"));
    const VoxelGrid back = read_vox(dir.str("g.vox"));
    CHECK(back.spec == g.spec);
    CHECK(back.channels == g.channels);
    CHECK(back.data == g.data);

    // byte-determinism: writing the same grid twice gives identical files
    write_vox(g, dir.str("g2.vox"));
    CHECK(testers::identical_files(dir.str("g.vox"), dir.str("g2.vox")));
}

TEST_CASE("read_vox rejects what it cannot trust") {
    const testers::TmpDir dir("voxio-bad");
    const VoxelGrid g = sample_grid();
    write_vox(g, dir.str("good.vox"));
    const std::string good = testers::slurp(dir.str("good.vox"));

    SUBCASE("missing file") {
        CHECK_THROWS_AS(read_vox(dir.str("nope.vox")), IoError);
    }
    SUBCASE("wrong magic") {
        std::string bad = good;
        bad[0] = 'W';
        std::ofstream(dir.str("bad.vox"), std::ios::binary) << bad;
        CHECK_THROWS_AS(read_vox(dir.str("bad.vox")), FormatError);
    }
    SUBCASE("truncated header") {
        std::ofstream(dir.str("bad.vox"), std::ios::binary) << good.substr(0, 10);
        CHECK_THROWS_AS(read_vox(dir.str("bad.vox")), FormatError);
    }
    SUBCASE("truncated payload") {
        std::ofstream(dir.str("bad.vox"), std::ios::binary) << good.substr(0, good.size() - 5);
        CHECK_THROWS_AS(read_vox(dir.str("bad.vox")), FormatError);
    }
    SUBCASE("trailing garbage") {
        std::ofstream(dir.str("bad.vox"), std::ios::binary) << (good + "x");
        CHECK_THROWS_AS(read_vox(dir.str("bad.vox")), FormatError);
    }
    SUBCASE("implausible dimension") {
        std::string bad = good;
        bad[4] = bad[5] = bad[6] = bad[7] = '\xff'; // nx = 2^32-1
        std::ofstream(dir.str("bad.vox"), std::ios::binary) << bad;
        CHECK_THROWS_AS(read_vox(dir.str("bad.vox")), FormatError);
    }
}
