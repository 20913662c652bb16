#include "doctest.h"

#include "voxdfm/errors.hpp"
#include "voxdfm/solids.hpp"
#include "voxdfm/trimesh.hpp"

#include <cmath>
#include <numbers>

using namespace voxdfm;

namespace {

// Volume of one drilled bore as tessellated: a regular n-gon prism. The
// polygon is inscribed, so this is slightly less than the true cylinder.
double ngon_bore_volume(double radius, double depth, int n = 64) {
    return 0.5 * n * radius * radius * std::sin(2.0 * std::numbers::pi / n) * depth;
}

} // namespace

TEST_CASE("plain stock meshes close up and measure their exact volume") {
    SUBCASE("block") {
        const TriMesh m = tessellate({Block{{5, 4, 3}}, {}});
        CHECK(is_watertight(m));
        CHECK(signed_volume(m) == doctest::Approx(60.0).epsilon(1e-12));
        CHECK(m.triangles.size() == 12);
        CHECK(m.normals.size() == m.triangles.size());
    }
    SUBCASE("lblock") {
        const TriMesh m = tessellate({LBlock{{5, 4, 3}, {2, 4, 1}}, {}});
        CHECK(is_watertight(m));
        CHECK(signed_volume(m) == doctest::Approx(52.0).epsilon(1e-12));
    }
    SUBCASE("cylinder is a 64-gon prism") {
        const TriMesh m = tessellate({Cylinder{2.0, 3.0}, {}});
        CHECK(is_watertight(m));
        CHECK(signed_volume(m) ==
              doctest::Approx(0.5 * 64 * 4.0 * std::sin(2 * std::numbers::pi / 64) * 3.0)
                  .epsilon(1e-12));
    }
}

TEST_CASE("drilled parts subtract exactly one n-gon prism per hole") {
    SUBCASE("blind hole") {
        const PartModel p{Block{{5, 5, 5}}, {{Face::ZPos, 0, 0, 1.0, 2.0}}};
        const TriMesh m = tessellate(p);
        CHECK(is_watertight(m));
        CHECK(signed_volume(m) ==
              doctest::Approx(125.0 - ngon_bore_volume(0.5, 2.0)).epsilon(1e-12));
    }
    SUBCASE("through hole") {
        const PartModel p{Block{{5, 5, 5}}, {{Face::XNeg, 0.7, -0.4, 1.2, 5.0}}};
        const TriMesh m = tessellate(p);
        CHECK(is_watertight(m));
        CHECK(signed_volume(m) ==
              doctest::Approx(125.0 - ngon_bore_volume(0.6, 5.0)).epsilon(1e-12));
    }
    SUBCASE("two holes from different faces") {
        const PartModel p{Block{{5, 5, 5}},
                          {{Face::ZPos, -1.2, 0.8, 0.8, 1.5}, {Face::YPos, 1.0, 1.0, 0.6, 5.0}}};
        const TriMesh m = tessellate(p);
        CHECK(is_watertight(m));
        CHECK(signed_volume(m) == doctest::Approx(125.0 - ngon_bore_volume(0.4, 1.5) -
                                                  ngon_bore_volume(0.3, 5.0))
                                      .epsilon(1e-12));
    }
    SUBCASE("hole tangent to a stock wall still closes") {
        // polygon vertices are half-step offset, so the tangent line never cuts
        const PartModel p{Block{{5, 5, 5}}, {{Face::ZPos, 2.0, 0, 1.0, 2.0}}};
        const TriMesh m = tessellate(p);
        CHECK(is_watertight(m));
        CHECK(signed_volume(m) ==
              doctest::Approx(125.0 - ngon_bore_volume(0.5, 2.0)).epsilon(1e-12));
    }
    SUBCASE("hole through the lblock notch floor") {
        const PartModel p{LBlock{{5, 5, 5}, {2, 5, 2}}, {{Face::ZPos, 1.5, 0, 1.0, 1.5}}};
        const TriMesh m = tessellate(p);
        CHECK(is_watertight(m));
        CHECK(signed_volume(m) ==
              doctest::Approx((125.0 - 2 * 5 * 2) - ngon_bore_volume(0.5, 1.5)).epsilon(1e-12));
    }
    SUBCASE("axial hole in a cylinder") {
        const PartModel p{Cylinder{2.5, 5.0}, {{Face::ZPos, 1.0, 0, 1.0, 2.0}}};
        const TriMesh m = tessellate(p);
        CHECK(is_watertight(m));
        const double stock = 0.5 * 64 * 2.5 * 2.5 * std::sin(2 * std::numbers::pi / 64) * 5.0;
        CHECK(signed_volume(m) ==
              doctest::Approx(stock - ngon_bore_volume(0.5, 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("tessellate rejects geometry that cannot close") {
    // overlapping bores
    CHECK_THROWS_AS(tessellate({Block{{5, 5, 5}},
                                {{Face::ZPos, -0.3, 0, 1.0, 2.0}, {Face::ZPos, 0.3, 0, 1.0, 2.0}}}),
                    NonManifoldGeometry);
    // opening straddles the notch edge
    CHECK_THROWS_AS(tessellate({LBlock{{5, 5, 5}, {2, 5, 2}}, {{Face::ZPos, 0.3, 0, 1.0, 2.0}}}),
                    NonManifoldGeometry);
    // bore breaks out of the side wall
    CHECK_THROWS_AS(tessellate({Block{{5, 5, 5}}, {{Face::ZPos, 2.2, 0, 1.0, 2.0}}}),
                    NonManifoldGeometry);
}

TEST_CASE("is_watertight catches open and doubled surfaces") {
    TriMesh m = tessellate({Block{{2, 2, 2}}, {}});
    CHECK(is_watertight(m));

    TriMesh open = m;
    open.triangles.pop_back();
    open.normals.pop_back();
    CHECK(!is_watertight(open));

    TriMesh doubled = m;
    doubled.triangles.push_back(doubled.triangles.back());
    doubled.normals.push_back(doubled.normals.back());
    CHECK(!is_watertight(doubled));
}

TEST_CASE("mesh_bounds covers the part") {
    const TriMesh m = tessellate({Block{{5, 4, 3}}, {}});
    const Aabb b = mesh_bounds(m);
    CHECK(b.lo == Vec3{0, 0, 0});
    CHECK(b.hi == Vec3{5, 4, 3});
}
