#pragma once

#include "voxdfm/dfm.hpp"
#include "voxdfm/solids.hpp"

#include <string>
#include <vector>

namespace testers {

// Hand-labeled rule-oracle table. Every geometric quantity below is worked
// out on paper from the part dimensions; the expected labels never go near
// the library's own clearance helpers. Threshold semantics under test:
// depth/d >= 5 and thickness/d >= 10 already violate (inclusive), wall and
// web and spacing violate only strictly below half a diameter.
struct DfmCase {
    std::string name;
    voxdfm::PartModel part;
    bool manufacturable;
    std::vector<voxdfm::DfmViolation> violations; // expected, sorted
};

inline std::vector<DfmCase> dfm_cases() {
    using namespace voxdfm;
    using V = DfmViolation;
    std::vector<DfmCase> cases;

    const auto cube = [](double e) { return BaseShape(Block{{e, e, e}}); };
    const auto add = [&cases](std::string name, BaseShape base,
                              std::vector<HoleSpec> holes, bool ok,
                              std::vector<V> v = {}) {
        cases.push_back({std::move(name), PartModel{std::move(base), std::move(holes)},
                         ok, std::move(v)});
    };

    // --- blind-hole depth ratio on a 5-cube (thickness 5)
    add("plain block", cube(5), {}, true);
    add("shallow center hole", cube(5), {{Face::ZPos, 0, 0, 1.0, 2.5}}, true);
    add("blind ratio 4.0", cube(5), {{Face::ZPos, 0, 0, 1.0, 4.0}}, true);
    add("blind ratio 4.99", cube(5), {{Face::ZPos, 0, 0, 0.9, 4.491}}, true);
    add("blind ratio exactly 5", cube(5), {{Face::ZPos, 0, 0, 0.9, 4.5}}, false,
        {V::RatioBlind});
    add("blind ratio 5.5, webby stock", cube(5), {{Face::ZPos, 0, 0, 0.8, 4.4}}, false,
        {V::RatioBlind}); // web 0.6 > 0.4, so the ratio alone fires
    add("deep narrow hole", cube(5), {{Face::XPos, 0, 0, 0.5, 3.0}}, false,
        {V::RatioBlind}); // ratio 6; web 2.0 is plenty

    // --- through-hole thickness ratio
    add("through ratio 5", cube(5), {{Face::ZPos, 0, 0, 1.0, 5.0}}, true);
    add("through ratio 9.9", BaseShape(Block{{5, 5, 9.9}}),
        {{Face::ZPos, 0, 0, 1.0, 9.9}}, true);
    add("through ratio exactly 10", BaseShape(Block{{5, 5, 10}}),
        {{Face::ZPos, 0, 0, 1.0, 10.0}}, false, {V::RatioThrough});
    add("through ratio 12", BaseShape(Block{{5, 5, 6}}),
        {{Face::ZPos, 0, 0, 0.5, 6.0}}, false, {V::RatioThrough});
    add("overdrilled spec depth is a through hole", cube(5),
        {{Face::ZPos, 0, 0, 1.0, 7.0}}, true); // drill capped at 5, ratio 5 < 10

    // --- lateral wall (edge proximity); wall = 2.5 - pos - d/2 on a 5-cube
    add("wall exactly half d", cube(5), {{Face::ZPos, 1.5, 0, 1.0, 2.0}}, true);
    add("wall just under half d", cube(5), {{Face::ZPos, 1.6, 0, 1.0, 2.0}}, false,
        {V::EdgeProximity}); // wall 0.4
    add("wall zero (tangent)", cube(5), {{Face::ZPos, 2.0, 0, 1.0, 2.0}}, false,
        {V::EdgeProximity});
    add("diagonal position keeps both walls", cube(5),
        {{Face::YNeg, 1.5, 1.5, 1.0, 2.0}}, true); // wall 0.5 on both lateral axes
    add("wall ok on one axis, thin on the other", cube(5),
        {{Face::XNeg, 1.0, 1.75, 1.0, 2.0}}, false, {V::EdgeProximity}); // 1.0 vs 0.25

    // --- web beyond a blind floor (thin section); web = 5 - depth on a 5-cube
    add("web exactly half d", cube(5), {{Face::ZPos, 0, 0, 1.0, 4.5}}, true);
    add("web just under half d", cube(5), {{Face::ZPos, 0, 0, 1.0, 4.6}}, false,
        {V::ThinSection}); // web 0.4, ratio 4.6 still fine
    add("thin web and deep hole", cube(5), {{Face::ZPos, 0, 0, 0.92, 4.72}}, false,
        {V::RatioBlind, V::ThinSection}); // ratio 5.13, web 0.28 < 0.46

    // --- slabs (thin stock drilled through the thickness)
    add("slab comfortable web", BaseShape(Block{{5, 5, 2.0}}),
        {{Face::ZPos, 0, 0, 1.0, 1.5}}, true); // web 0.5, ratio 1.5
    add("slab thin web", BaseShape(Block{{5, 5, 1.8}}),
        {{Face::ZPos, 0, 0, 1.0, 1.4}}, false, {V::ThinSection}); // web 0.4
    add("slab through, fat enough", BaseShape(Block{{5, 5, 1.0}}),
        {{Face::ZNeg, 0, 0, 0.2, 1.0}}, true); // thickness ratio 5
    add("slab through, ratio exactly 10", BaseShape(Block{{5, 5, 1.0}}),
        {{Face::ZNeg, 0, 0, 0.1, 1.0}}, false, {V::RatioThrough});

    // --- hole spacing; gap = center distance - (d1+d2)/2, threshold max/2
    add("twin gap exactly half d", cube(5),
        {{Face::ZPos, -0.75, 0, 1.0, 2.0}, {Face::ZPos, 0.75, 0, 1.0, 2.0}},
        true); // gap 0.5
    add("twin gap just under half d", cube(5),
        {{Face::ZPos, -0.7, 0, 1.0, 2.0}, {Face::ZPos, 0.7, 0, 1.0, 2.0}}, false,
        {V::HoleSpacing}); // gap 0.4
    add("mixed diameters, gap vs larger half", cube(5),
        {{Face::ZPos, -0.6, 0, 1.0, 2.0}, {Face::ZPos, 0.6, 0, 0.6, 2.0}}, false,
        {V::HoleSpacing}); // gap 1.2 - 0.8 = 0.4 < max(d)/2 = 0.5
    add("parallel axes different faces", cube(5),
        {{Face::ZPos, 1.5, 0, 1.0, 5.0}, {Face::ZNeg, -1.5, 0, 1.0, 5.0}},
        true); // axes 3.0 apart, gap 2.0; both walls exactly 0.5
    add("crossing axes nearly touching", cube(5),
        {{Face::ZPos, 0, 0, 1.0, 1.6}, {Face::XPos, 0, 0, 1.0, 1.6}}, false,
        {V::HoleSpacing}); // segment endpoints (2.5,2.5,3.4)/(3.4,2.5,2.5): gap 0.27
    add("three holes, middle crowds both", cube(5),
        {{Face::ZPos, -1.1, 0, 0.8, 2.0},
         {Face::ZPos, 0.0, 0, 0.8, 2.0},
         {Face::ZPos, 1.1, 0, 0.8, 2.0}},
        false, {V::HoleSpacing}); // adjacent gaps 0.3 < 0.4; outer pair gap 1.4 fine

    // --- L-block: notch wall acts as a lateral boundary
    add("lblock clear of the notch", BaseShape(LBlock{{5, 5, 5}, {2, 5, 2}}),
        {{Face::ZPos, -1.0, 0, 1.0, 2.0}}, true); // hole at x=1.5, walls 1.0
    add("lblock tangent to the notch wall", BaseShape(LBlock{{5, 5, 5}, {2, 5, 2}}),
        {{Face::ZPos, 0.0, 0, 1.0, 2.5}}, false,
        {V::EdgeProximity}); // opening x in [2,3], notch wall at x=3
    add("hole in the notch floor", BaseShape(LBlock{{5, 5, 5}, {2, 5, 2}}),
        {{Face::ZPos, 1.5, 0, 1.0, 1.5}}, true); // enters notch floor z=3 at x=4

    // --- cylinder stock: rim clearance is radial
    add("cylinder center hole", BaseShape(Cylinder{2.5, 5.0}),
        {{Face::ZPos, 0, 0, 1.0, 2.5}}, true); // rim wall 2.0
    add("cylinder rim wall exactly half d", BaseShape(Cylinder{2.5, 5.0}),
        {{Face::ZPos, 1.5, 0, 1.0, 2.0}}, true); // wall 0.5
    add("cylinder rim wall thin", BaseShape(Cylinder{2.5, 5.0}),
        {{Face::ZPos, 1.7, 0, 1.0, 2.0}}, false, {V::EdgeProximity}); // wall 0.3
    add("cylinder axial through, fat", BaseShape(Cylinder{2.5, 5.0}),
        {{Face::ZNeg, 0, 0, 1.0, 5.0}}, true); // ratio 5
    add("cylinder axial through, ratio 10", BaseShape(Cylinder{2.5, 5.0}),
        {{Face::ZPos, 0, 0, 0.5, 5.0}}, false, {V::RatioThrough});

    // --- compound failures across rule families
    add("deep and off to the edge", cube(5), {{Face::ZPos, 1.8, 0, 0.8, 4.2}}, false,
        {V::RatioBlind, V::EdgeProximity}); // ratio 5.25, wall 0.3
    add("edge-hugging thin web", cube(5), {{Face::ZPos, 1.8, 0, 0.8, 4.7}}, false,
        {V::RatioBlind, V::EdgeProximity, V::ThinSection}); // ratio 5.875, wall 0.3, web 0.3
    add("crowded pair near a wall", cube(5),
        {{Face::ZPos, 1.7, 0, 1.0, 2.0}, {Face::ZPos, 0.4, 0, 1.0, 2.0}}, false,
        {V::EdgeProximity, V::HoleSpacing}); // wall 0.3; gap 1.3-1.0 = 0.3
    add("every blind rule at once", cube(5), {{Face::ZPos, 1.85, 0, 0.8, 4.65}}, false,
        {V::RatioBlind, V::EdgeProximity, V::ThinSection}); // 5.8125, 0.25, 0.35

    // --- different entry faces exercise the frame resolution
    add("x-neg face shallow", cube(5), {{Face::XNeg, 0, 0, 1.0, 2.0}}, true);
    add("y-pos face deep", cube(5), {{Face::YPos, 0, 0, 0.6, 3.1}}, false,
        {V::RatioBlind}); // ratio 5.17
    add("y-neg face wall", cube(5), {{Face::YNeg, 0, 1.9, 1.0, 2.0}}, false,
        {V::EdgeProximity}); // wall 0.1
    add("x-pos tangent wall", cube(5), {{Face::XPos, -2.0, 0, 1.0, 2.0}}, false,
        {V::EdgeProximity}); // wall 0.0

    return cases;
}

} // namespace testers
