#include "doctest.h"

#include "../support/dfm_cases.hpp"
#include "voxdfm/dfm.hpp"
#include "voxdfm/errors.hpp"

#include <algorithm>
#include <numbers>

using namespace voxdfm;

TEST_CASE("rule oracle matches the hand-labeled table") {
    for (const testers::DfmCase& c : testers::dfm_cases()) {
        CAPTURE(c.name);
        const DfmLabel got = dfm_classify(c.part);
        CHECK(got.manufacturable == c.manufacturable);
        CHECK(got.violations == c.violations);
    }
}

TEST_CASE("labels are internally consistent") {
    for (const testers::DfmCase& c : testers::dfm_cases()) {
        CAPTURE(c.name);
        const DfmLabel got = dfm_classify(c.part);
        CHECK(got.manufacturable == got.violations.empty());
        CHECK(std::is_sorted(got.violations.begin(), got.violations.end()));
        CHECK(std::adjacent_find(got.violations.begin(), got.violations.end()) ==
              got.violations.end());
    }
}

TEST_CASE("clearance helpers give the exact hand-computed distances") {
    const BaseShape cube = Block{{5, 5, 5}};

    SUBCASE("lateral wall on a block") {
        PartModel p{cube, {{Face::ZPos, 1.6, 0, 1.0, 2.0}}};
        CHECK(lateral_clearance(p, 0) == doctest::Approx(0.4).epsilon(1e-12));
        p.holes[0].pos_u = 1.5;
        CHECK(lateral_clearance(p, 0) == doctest::Approx(0.5).epsilon(1e-12));
        p.holes[0].pos_u = 2.0;
        CHECK(lateral_clearance(p, 0) == doctest::Approx(0.0).scale(1).epsilon(1e-12));
    }

    SUBCASE("web behind a blind floor, zero for through holes") {
        PartModel p{cube, {{Face::ZPos, 0, 0, 1.0, 4.6}}};
        CHECK(web_thickness(p, 0) == doctest::Approx(0.4).epsilon(1e-12));
        p.holes[0].depth = 5.0;
        CHECK(web_thickness(p, 0) == 0.0);
    }

    SUBCASE("surface gap between parallel and skew axes") {
        PartModel twins{cube,
                        {{Face::ZPos, -0.7, 0, 1.0, 2.0}, {Face::ZPos, 0.7, 0, 1.0, 2.0}}};
        CHECK(hole_surface_gap(twins, 0, 1) == doctest::Approx(0.4).epsilon(1e-12));

        // skew pair: closest axis points (2.5,2.5,3.4) and (3.4,2.5,2.5)
        PartModel skew{cube,
                       {{Face::ZPos, 0, 0, 1.0, 1.6}, {Face::XPos, 0, 0, 1.0, 1.6}}};
        CHECK(hole_surface_gap(skew, 0, 1) ==
              doctest::Approx(0.9 * std::numbers::sqrt2 - 1.0).epsilon(1e-9));
    }

    SUBCASE("cylinder rim clearance is radial") {
        PartModel p{Cylinder{2.5, 5.0}, {{Face::ZPos, 1.7, 0, 1.0, 2.0}}};
        CHECK(lateral_clearance(p, 0) == doctest::Approx(0.3).epsilon(1e-12));
    }

    SUBCASE("lblock notch wall bounds the clearance when the hole runs past it") {
        PartModel p{LBlock{{5, 5, 5}, {2, 5, 2}}, {{Face::ZPos, 0.0, 0, 1.0, 2.5}}};
        CHECK(lateral_clearance(p, 0) == doctest::Approx(0.0).scale(1).epsilon(1e-12));
    }
}

TEST_CASE("violation names round-trip") {
    for (DfmViolation v :
         {DfmViolation::RatioBlind, DfmViolation::RatioThrough, DfmViolation::EdgeProximity,
          DfmViolation::ThinSection, DfmViolation::HoleSpacing}) {
        CHECK(dfm_violation_from_string(to_string(v)) == v);
    }
    CHECK_THROWS_AS(dfm_violation_from_string("NotARule"), Error);
}
