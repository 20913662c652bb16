#include "doctest.h"

#include "voxdfm/errors.hpp"
#include "voxdfm/solids.hpp"

#include <cmath>
#include <numbers>

using namespace voxdfm;

TEST_CASE("face frames follow the cyclic convention") {
    Vec3 u, v;

    face_axes(Face::XPos, u, v);
    CHECK(u == Vec3{0, 1, 0});
    CHECK(v == Vec3{0, 0, 1});
    face_axes(Face::XNeg, u, v);
    CHECK(u == Vec3{0, 1, 0});

    face_axes(Face::YPos, u, v);
    CHECK(u == Vec3{0, 0, 1});
    CHECK(v == Vec3{1, 0, 0});

    face_axes(Face::ZNeg, u, v);
    CHECK(u == Vec3{1, 0, 0});
    CHECK(v == Vec3{0, 1, 0});

    CHECK(face_normal(Face::YNeg) == Vec3{0, -1, 0});
    CHECK(face_axis(Face::ZPos) == 2);
    CHECK(face_positive(Face::XNeg) == false);

    for (Face f : {Face::XPos, Face::XNeg, Face::YPos, Face::YNeg, Face::ZPos, Face::ZNeg})
        CHECK(face_from_string(to_string(f)) == f);
    CHECK_THROWS_AS(face_from_string("w+"), Error);
}

TEST_CASE("base shapes: bounds, volume, membership") {
    SUBCASE("block") {
        const BaseShape b = Block{{5, 4, 3}};
        CHECK(base_volume(b) == doctest::Approx(60.0));
        const Aabb box = base_bounds(b);
        CHECK(box.lo == Vec3{0, 0, 0});
        CHECK(box.hi == Vec3{5, 4, 3});
        CHECK(base_contains(b, {0, 0, 0}));      // boundary counts
        CHECK(base_contains(b, {5, 4, 3}));
        CHECK(!base_contains(b, {5.001, 2, 1}));
    }

    SUBCASE("lblock removes the +x/+z corner") {
        const BaseShape b = LBlock{{5, 4, 3}, {2, 4, 1}};
        CHECK(base_volume(b) == doctest::Approx(60.0 - 2 * 4 * 1));
        CHECK(base_contains(b, {1, 1, 2.9}));    // tall part of the L
        CHECK(!base_contains(b, {4.5, 1, 2.9})); // inside the notch
        CHECK(base_contains(b, {4.5, 1, 2.0}));  // notch floor is material
        CHECK(base_contains(b, {3.0, 1, 2.5}));  // notch side wall is material
    }

    SUBCASE("cylinder") {
        const BaseShape b = Cylinder{2.0, 3.0};
        CHECK(base_volume(b) == doctest::Approx(std::numbers::pi * 4.0 * 3.0));
        const Aabb box = base_bounds(b);
        CHECK(box.lo == Vec3{0, 0, 0});
        CHECK(box.hi == Vec3{4, 4, 3});
        CHECK(base_contains(b, {4.0, 2.0, 1.5}));   // on the lateral surface
        CHECK(!base_contains(b, {3.9, 3.9, 1.5}));  // bbox corner, outside the circle
    }
}

TEST_CASE("resolve_hole finds the real entry surface") {
    SUBCASE("plain block, through and blind") {
        PartModel p{Block{{5, 5, 5}}, {{Face::ZPos, 0, 0, 1.0, 2.0}}};
        HoleFrame f = resolve_hole(p, 0);
        CHECK(f.entry == Vec3{2.5, 2.5, 5.0});
        CHECK(f.axis == Vec3{0, 0, -1});
        CHECK(f.radius == doctest::Approx(0.5));
        CHECK(f.thickness == doctest::Approx(5.0));
        CHECK(f.drill_depth == doctest::Approx(2.0));
        CHECK(!f.through);

        p.holes[0].depth = 5.0;
        f = resolve_hole(p, 0);
        CHECK(f.through);
        CHECK(f.drill_depth == doctest::Approx(5.0));

        p.holes[0].depth = 7.0; // deeper than the stock: capped, still through
        f = resolve_hole(p, 0);
        CHECK(f.through);
        CHECK(f.drill_depth == doctest::Approx(5.0));
    }

    SUBCASE("lblock hole over the notch starts on the notch floor") {
        PartModel p{LBlock{{5, 5, 5}, {2, 5, 2}}, {{Face::ZPos, 1.5, 0, 1.0, 1.5}}};
        const HoleFrame f = resolve_hole(p, 0);
        CHECK(f.entry == Vec3{4.0, 2.5, 3.0});
        CHECK(f.thickness == doctest::Approx(3.0));
        CHECK(f.drill_depth == doctest::Approx(1.5));
        CHECK(!f.through);
    }

    SUBCASE("axis that misses the material entirely") {
        PartModel p{Cylinder{2.5, 5.0}, {{Face::ZPos, 2.4, 2.4, 0.5, 1.0}}};
        CHECK_THROWS_AS(resolve_hole(p, 0), Error);
    }
}

TEST_CASE("part membership: walls and floors stay solid, bores are removed") {
    const PartModel p{Block{{5, 5, 5}}, {{Face::ZPos, 0, 0, 1.0, 2.0}}};
    const HoleFrame f = resolve_hole(p, 0);

    CHECK(hole_removes(f, {2.5, 2.5, 4.0}));
    CHECK(!contains(p, {2.5, 2.5, 4.0}));

    CHECK(!hole_removes(f, {2.5, 2.5, 2.9}));  // just beyond the floor
    CHECK(contains(p, {2.5, 2.5, 2.9}));
    CHECK(contains(p, {2.5, 2.5, 3.0}));       // the floor itself
    CHECK(contains(p, {3.0, 2.5, 4.0}));       // the bore wall
    CHECK(contains(p, {1.0, 1.0, 4.0}));       // stock far from the hole

    CHECK(!contains(p, {2.5, 2.5, 5.0}));      // opening disk is not material
    CHECK(contains(p, {2.5, 2.5, 0.0}));       // opposite face is
}

TEST_CASE("opening_on_single_facet flags straddles and overhangs") {
    SUBCASE("clean opening") {
        const PartModel p{Block{{5, 5, 5}}, {{Face::ZPos, 1.0, 0, 1.0, 2.0}}};
        CHECK(opening_on_single_facet(p, 0));
    }
    SUBCASE("straddles the lblock notch edge") {
        const PartModel p{LBlock{{5, 5, 5}, {2, 5, 2}}, {{Face::ZPos, 0.3, 0, 1.0, 2.0}}};
        CHECK(!opening_on_single_facet(p, 0));
    }
    SUBCASE("tangent to the notch edge still counts") {
        const PartModel p{LBlock{{5, 5, 5}, {2, 5, 2}}, {{Face::ZPos, 0.0, 0, 1.0, 2.0}}};
        CHECK(opening_on_single_facet(p, 0));
    }
    SUBCASE("overhangs the stock boundary") {
        const PartModel p{Block{{5, 5, 5}}, {{Face::ZPos, 2.2, 0, 1.0, 2.0}}};
        CHECK(!opening_on_single_facet(p, 0));
    }
}

TEST_CASE("validate_part rejects structurally bad parts") {
    CHECK_THROWS_AS(validate_part({Block{{0, 5, 5}}, {}}), Error);
    CHECK_THROWS_AS(validate_part({LBlock{{5, 5, 5}, {6, 5, 2}}, {}}), Error);
    CHECK_THROWS_AS(validate_part({LBlock{{5, 5, 5}, {2, 4, 2}}, {}}), Error); // cut.y != outer.y
    CHECK_THROWS_AS(validate_part({Cylinder{2.5, 5}, {{Face::XPos, 0, 0, 1, 2}}}), Error);
    CHECK_THROWS_AS(validate_part({Block{{5, 5, 5}}, {{Face::ZPos, 0, 0, -1, 2}}}), Error);
    CHECK_NOTHROW(validate_part({Block{{5, 5, 5}}, {{Face::ZPos, 0, 0, 1, 2}}}));
    CHECK_NOTHROW(validate_part({Cylinder{2.5, 5}, {{Face::ZNeg, 1.0, 0, 0.8, 2}}}));
}

TEST_CASE("distance_to_nearest_hole_axis") {
    const PartModel p{Block{{5, 5, 5}},
                      {{Face::ZPos, 0, 0, 1.0, 2.0}, {Face::ZPos, 1.5, 0, 1.0, 2.0}}};
    // next to hole 0's axis segment (z in [3,5] at x=y=2.5)
    CHECK(distance_to_nearest_hole_axis(p, {2.5, 2.5, 4.0}) == doctest::Approx(0.0));
    CHECK(distance_to_nearest_hole_axis(p, {2.5, 3.5, 4.0}) == doctest::Approx(1.0));
    // below the segment end: distance is to the endpoint, not the infinite line
    CHECK(distance_to_nearest_hole_axis(p, {2.5, 2.5, 2.0}) == doctest::Approx(1.0));
    CHECK(distance_to_nearest_hole_axis(p, {4.0, 2.5, 4.5}) == doctest::Approx(0.0));

    CHECK_THROWS_AS(distance_to_nearest_hole_axis({Block{{5, 5, 5}}, {}}, {1, 1, 1}),
                    NoHoles);
}
