#include "doctest.h"

#include "voxdfm/errors.hpp"
#include "voxdfm/trimesh.hpp"
#include "voxdfm/voxelize.hpp"

#include <cmath>

using namespace voxdfm;

namespace {

// Mesh-parity and analytic-membership are independent end to end, so
// agreement on a part is a strong correctness signal for both.
void check_engines_agree(const PartModel& part, int cells) {
    const GridSpec gs = grid_for_part(part, cells);
    const TriMesh mesh = tessellate(part);
    const VoxelGrid expect = voxelize_analytic(part, gs, 1);
    for (int axis : {0, 1, 2}) {
        CAPTURE(axis);
        const VoxelGrid got = voxelize_parity(mesh, gs, 1, axis);
        CHECK(count_mismatches(got, expect) == 0);
    }
}

} // namespace

TEST_CASE("parity and analytic engines agree across shapes and cast axes") {
    check_engines_agree({Block{{5, 5, 5}}, {{Face::ZPos, 0.5, 0.5, 1.0, 2.5}}}, 24);
    check_engines_agree({Block{{5, 5, 5}},
                         {{Face::ZPos, -1.2, 0.8, 0.8, 1.5}, {Face::YPos, 1.0, 1.0, 0.6, 5.0}}},
                        24);
    check_engines_agree({LBlock{{5, 5, 5}, {2, 5, 2}}, {{Face::ZPos, 1.5, 0, 1.0, 1.5}}}, 24);
    check_engines_agree({Cylinder{2.5, 5.0}, {{Face::ZPos, 1.0, 0, 1.0, 2.0}}}, 24);
}

TEST_CASE("rays that run exactly along facet diagonals stay robust") {
    // Thin-stock part whose centered hole puts grid columns exactly onto the
    // bottom-facet diagonal; with fused multiply-add the edge functions round
    // to tiny nonzero values, which the rounding band must absorb.
    const PartModel slab{Block{{5, 5, 5.2}}, {{Face::ZPos, 0, 0, 0.4, 4.8}}};
    const GridSpec gs = grid_for_part(slab, 32);
    const TriMesh mesh = tessellate(slab);
    VoxelGrid got;
    CHECK_NOTHROW(got = voxelize_parity(mesh, gs, 1));
    CHECK(count_mismatches(got, voxelize_analytic(slab, gs, 1)) == 0);
}

TEST_CASE("grid aligned with the stock exercises every graze retry") {
    // Cell centers line up with the box faces' diagonals; the domain is
    // padded so the mesh sits strictly inside.
    const PartModel part{Block{{4, 4, 4}}, {}};
    GridSpec gs;
    gs.origin = {-0.5, -0.5, -0.5};
    gs.spacing = 0.5;
    gs.nx = gs.ny = gs.nz = 10;
    const TriMesh mesh = tessellate(part);
    for (int axis : {0, 1, 2}) {
        CAPTURE(axis);
        VoxelGrid got;
        CHECK_NOTHROW(got = voxelize_parity(mesh, gs, 1, axis));
        CHECK(count_mismatches(got, voxelize_analytic(part, gs, 1)) == 0);
    }
}

TEST_CASE("worker count never changes the result") {
    const PartModel part{Block{{5, 5, 5}}, {{Face::XPos, 0, 0, 1.0, 3.0}}};
    const GridSpec gs = grid_for_part(part, 24);
    const TriMesh mesh = tessellate(part);
    const VoxelGrid one = voxelize_parity(mesh, gs, 1);
    const VoxelGrid four = voxelize_parity(mesh, gs, 4);
    CHECK(count_mismatches(one, four) == 0);
    CHECK(count_mismatches(voxelize_analytic(part, gs, 1),
                           voxelize_analytic(part, gs, 4)) == 0);
}

TEST_CASE("parity voxelizer rejects broken input") {
    GridSpec gs;
    gs.spacing = 1.0;
    gs.nx = gs.ny = gs.nz = 4;

    SUBCASE("open surface has odd crossings") {
        TriMesh tri;
        tri.vertices = {{0, 0, 1.0}, {4, 0, 1.0}, {0, 4, 1.0}};
        tri.triangles = {{0, 1, 2}};
        tri.normals = {{0, 0, 1}};
        CHECK_THROWS_AS(voxelize_parity(tri, gs, 1), NonManifoldGeometry);
    }
    SUBCASE("empty mesh") {
        CHECK_THROWS_AS(voxelize_parity(TriMesh{}, gs, 1), NonManifoldGeometry);
    }
    SUBCASE("mesh outside the domain") {
        const TriMesh m = tessellate({Block{{6, 2, 2}}, {}});
        CHECK_THROWS_AS(voxelize_parity(m, gs, 1), Error);
    }
    SUBCASE("bad cast axis") {
        const TriMesh m = tessellate({Block{{2, 2, 2}}, {}});
        CHECK_THROWS_AS(voxelize_parity(m, gs, 1, 3), Error);
    }
}

TEST_CASE("boundary normals point out of the stock") {
    const PartModel part{Block{{4, 4, 4}}, {}};
    GridSpec gs;
    gs.spacing = 1.0;
    gs.nx = gs.ny = gs.nz = 4;
    const BoundaryNormals bn = boundary_normals(tessellate(part), gs, 1);

    const auto key = [&gs](int x, int y, int z) {
        return static_cast<std::size_t>(x) + gs.nx * (static_cast<std::size_t>(y) + gs.ny * z);
    };

    // face-interior cells see exactly one facet
    REQUIRE(bn.normals.count(key(1, 1, 3)) == 1);
    CHECK(bn.normals.at(key(1, 1, 3)) == Vec3{0, 0, 1});
    REQUIRE(bn.normals.count(key(0, 2, 1)) == 1);
    CHECK(bn.normals.at(key(0, 2, 1)) == Vec3{-1, 0, 0});
    REQUIRE(bn.normals.count(key(2, 3, 1)) == 1);
    CHECK(bn.normals.at(key(2, 3, 1)) == Vec3{0, 1, 0});

    // interior cells are not boundary
    CHECK(bn.normals.count(key(1, 1, 1)) == 0);
    CHECK(bn.normals.count(key(2, 2, 2)) == 0);

    // every recorded normal is unit or exactly zero
    for (const auto& [k, n] : bn.normals) {
        const double len = norm(n);
        CHECK((len == 0.0 || std::abs(len - 1.0) < 1e-12));
    }
}

TEST_CASE("opposed facets in one cell cancel to the zero normal") {
    const PartModel slab{Block{{4, 4, 0.5}}, {}};
    GridSpec gs;
    gs.spacing = 1.0;
    gs.nx = gs.ny = 4;
    gs.nz = 1;
    const BoundaryNormals bn = boundary_normals(tessellate(slab), gs, 1);
    // cell (1,1,0) holds both the top (+z) and bottom (-z) skin
    const std::size_t k = 1 + 4 * (1 + 4 * 0);
    REQUIRE(bn.normals.count(k) == 1);
    CHECK(bn.normals.at(k) == Vec3{0, 0, 0});
}

TEST_CASE("encode expands occupancy into the network encodings") {
    GridSpec gs;
    gs.spacing = 1.0;
    gs.nx = 3;
    gs.ny = gs.nz = 1;
    VoxelGrid occ(gs, 1);
    occ.data = {1.f, 1.f, 0.f}; // cell 0 boundary, cell 1 interior, cell 2 outside

    BoundaryNormals bn;
    bn.spec = gs;
    bn.normals[0] = Vec3{0, 0, 1};

    SUBCASE("occupancy only") {
        const VoxelGrid g = encode(occ, bn, EncodingKind::OccupancyOnly);
        CHECK(g.channels == 1);
        CHECK(g.data == occ.data);
    }
    SUBCASE("four channel keeps occupancy and adds normals") {
        const VoxelGrid g = encode(occ, bn, EncodingKind::FourChannel);
        REQUIRE(g.channels == 4);
        CHECK(g.at(0, 0, 0, 0) == 1.f);
        CHECK(g.at(0, 1, 0, 0) == 1.f);
        CHECK(g.at(0, 2, 0, 0) == 0.f);
        CHECK(g.at(3, 0, 0, 0) == 1.f);  // normal z on the boundary cell
        CHECK(g.at(1, 0, 0, 0) == 0.f);
        CHECK(g.at(3, 1, 0, 0) == 0.f);  // interior carries no normal
    }
    SUBCASE("coupled three channel folds occupancy into the normal slots") {
        const VoxelGrid g = encode(occ, bn, EncodingKind::CoupledThreeChannel);
        REQUIRE(g.channels == 3);
        // boundary: the normal
        CHECK(g.at(0, 0, 0, 0) == 0.f);
        CHECK(g.at(2, 0, 0, 0) == 1.f);
        // inside, off the boundary: (1,1,1)
        CHECK(g.at(0, 1, 0, 0) == 1.f);
        CHECK(g.at(1, 1, 0, 0) == 1.f);
        CHECK(g.at(2, 1, 0, 0) == 1.f);
        // outside: zero
        CHECK(g.at(0, 2, 0, 0) == 0.f);
        CHECK(g.at(1, 2, 0, 0) == 0.f);
        CHECK(g.at(2, 2, 0, 0) == 0.f);
    }
    SUBCASE("grid mismatch is rejected") {
        BoundaryNormals other = bn;
        other.spec.nx = 4;
        CHECK_THROWS_AS(encode(occ, other, EncodingKind::FourChannel), SpecMismatch);
        VoxelGrid two(gs, 2);
        CHECK_THROWS_AS(encode(two, bn, EncodingKind::FourChannel), SpecMismatch);
    }
}

TEST_CASE("count_mismatches requires identical shapes") {
    GridSpec a;
    a.nx = a.ny = a.nz = 2;
    GridSpec b = a;
    b.nz = 3;
    CHECK_THROWS_AS(count_mismatches(VoxelGrid(a, 1), VoxelGrid(b, 1)), SpecMismatch);
    CHECK_THROWS_AS(count_mismatches(VoxelGrid(a, 1), VoxelGrid(a, 2)), SpecMismatch);
    VoxelGrid x(a, 1), y(a, 1);
    y.data[3] = 1.f;
    CHECK(count_mismatches(x, y) == 1);
}

TEST_CASE("tri_aabb_intersect is a closed-set test") {
    const Aabb box{{0, 0, 0}, {1, 1, 1}};
    // fully inside
    CHECK(tri_aabb_intersect({0.2, 0.2, 0.2}, {0.8, 0.2, 0.3}, {0.5, 0.8, 0.6}, box));
    // touching one face from outside
    CHECK(tri_aabb_intersect({1.0, 0.2, 0.2}, {1.0, 0.8, 0.2}, {1.5, 0.5, 0.5}, box));
    // touching only a corner
    CHECK(tri_aabb_intersect({1.0, 1.0, 1.0}, {2.0, 1.0, 1.0}, {1.0, 2.0, 1.0}, box));
    // clearly separated
    CHECK(!tri_aabb_intersect({1.2, 1.2, 1.2}, {2, 1.2, 1.2}, {1.2, 2, 1.2}, box));
    // large triangle slicing through the box
    CHECK(tri_aabb_intersect({-5, -5, 0.5}, {5, -5, 0.5}, {0, 10, 0.5}, box));
}
