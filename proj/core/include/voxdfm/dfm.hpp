#pragma once

#include "voxdfm/solids.hpp"

#include <string>
#include <vector>

namespace voxdfm {

// Drilling manufacturability rules. A part is manufacturable iff no rule
// fires. Ratio thresholds are inclusive (a ratio of exactly 5.0 or 10.0
// already violates); wall thresholds are exclusive (a wall of exactly half
// a diameter is still manufacturable).
enum class DfmViolation {
    RatioBlind,     // blind hole with depth/diameter >= 5
    RatioThrough,   // through hole with thickness/diameter >= 10
    EdgeProximity,  // lateral wall to the stock boundary < diameter/2
    ThinSection,    // web beyond a blind hole floor < diameter/2
    HoleSpacing,    // wall between two hole surfaces < max(d1, d2)/2
};

const char* to_string(DfmViolation v);
DfmViolation dfm_violation_from_string(const std::string& s);

struct DfmLabel {
    bool manufacturable = true;
    std::vector<DfmViolation> violations;  // sorted, no duplicates
    friend bool operator==(const DfmLabel&, const DfmLabel&) = default;
};

DfmLabel dfm_classify(const PartModel& part);

} // namespace voxdfm
