#include "voxdfm/dfm.hpp"

#include "voxdfm/errors.hpp"

#include <algorithm>
#include <array>

namespace voxdfm {

const char* to_string(DfmViolation v) {
    switch (v) {
        case DfmViolation::RatioBlind: return "RatioBlind";
        case DfmViolation::RatioThrough: return "RatioThrough";
        case DfmViolation::EdgeProximity: return "EdgeProximity";
        case DfmViolation::ThinSection: return "ThinSection";
        case DfmViolation::HoleSpacing: return "HoleSpacing";
    }
    return "?";
}

DfmViolation dfm_violation_from_string(const std::string& s) {
    static const std::array<DfmViolation, 5> all = {
        DfmViolation::RatioBlind, DfmViolation::RatioThrough, DfmViolation::EdgeProximity,
        DfmViolation::ThinSection, DfmViolation::HoleSpacing};
    for (DfmViolation v : all)
        if (s == to_string(v)) return v;
    throw SchemaError("unknown rule name: " + s);
}

DfmLabel dfm_classify(const PartModel& part) {
    bool fired[5] = {false, false, false, false, false};
    auto fire = [&fired](DfmViolation v) { fired[static_cast<int>(v)] = true; };

    for (std::size_t i = 0; i < part.holes.size(); ++i) {
        const HoleSpec& h = part.holes[i];
        const HoleFrame f = resolve_hole(part, i);

        // Depth-to-diameter limits. A through hole can be drilled from both
        // sides, so it tolerates twice the ratio of a blind one; reaching
        // the limit exactly already counts as a violation.
        const double ratio = f.drill_depth / h.diameter;
        if (f.through) {
            if (ratio >= 10.0) fire(DfmViolation::RatioThrough);
        } else {
            if (ratio >= 5.0) fire(DfmViolation::RatioBlind);
        }

        // Wall rules are satisfied at exactly half a diameter.
        if (lateral_clearance(part, i) < 0.5 * h.diameter)
            fire(DfmViolation::EdgeProximity);
        if (!f.through && web_thickness(part, i) < 0.5 * h.diameter)
            fire(DfmViolation::ThinSection);
    }

    for (std::size_t i = 0; i < part.holes.size(); ++i) {
        for (std::size_t j = i + 1; j < part.holes.size(); ++j) {
            const double limit =
                0.5 * std::max(part.holes[i].diameter, part.holes[j].diameter);
            if (hole_surface_gap(part, i, j) < limit) fire(DfmViolation::HoleSpacing);
        }
    }

    DfmLabel label;
    for (int v = 0; v < 5; ++v)
        if (fired[v]) label.violations.push_back(static_cast<DfmViolation>(v));
    label.manufacturable = label.violations.empty();
    return label;
}

} // namespace voxdfm
