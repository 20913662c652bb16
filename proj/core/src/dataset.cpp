#include "voxdfm/dataset.hpp"

#include "voxdfm/errors.hpp"
#include "voxdfm/rng.hpp"

#include <array>
#include <cmath>
#include <cstdio>

namespace voxdfm {

namespace {

// Filename-safe face token ("z+" -> "zp").
const char* face_tag(Face f) {
    switch (f) {
        case Face::XPos: return "xp";
        case Face::XNeg: return "xn";
        case Face::YPos: return "yp";
        case Face::YNeg: return "yn";
        case Face::ZPos: return "zp";
        case Face::ZNeg: return "zn";
    }
    return "??";
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// A record is buildable when the solid validates and the holes neither
// break out of a side wall nor run into each other. Boundary contact
// (wall exactly zero) still tessellates, so it stays in.
bool feasible(const PartModel& part) {
    try {
        validate_part(part);
    } catch (const Error&) {
        return false;
    }
    for (std::size_t i = 0; i < part.holes.size(); ++i) {
        if (!opening_on_single_facet(part, i)) return false;
        if (lateral_clearance(part, i) < 0.0) return false;
        for (std::size_t j = i + 1; j < part.holes.size(); ++j)
            if (hole_surface_gap(part, i, j) <= 0.0) return false;
    }
    return true;
}

void add(Corpus& out, std::string id, PartModel part, Split split) {
    if (!feasible(part)) {
        ++out.skipped;
        return;
    }
    SampleRecord rec;
    rec.id = std::move(id);
    rec.label = dfm_classify(part);
    rec.part = std::move(part);
    rec.split = split;
    out.records.push_back(std::move(rec));
}

// Slab stock for a hole entering the given face: full cube cross-section,
// thickness along the drill axis.
Block slab_for(Face f, double edge, double thickness) {
    Vec3 size{edge, edge, edge};
    switch (face_axis(f)) {
        case 0: size.x = thickness; break;
        case 1: size.y = thickness; break;
        default: size.z = thickness; break;
    }
    return Block{size};
}

} // namespace

const char* to_string(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Val: return "val";
        case Split::TestRepresentative: return "test_representative";
        case Split::TestNonRepresentative: return "test_nonrepresentative";
    }
    return "?";
}

Split split_from_string(const std::string& s) {
    for (Split v : {Split::Train, Split::Val, Split::TestRepresentative,
                    Split::TestNonRepresentative})
        if (s == to_string(v)) return v;
    throw Error("unknown split '" + s + "'");
}

DatasetSpec default_dataset_spec() {
    DatasetSpec spec;
    for (int i = 1; i <= 10; ++i) spec.diameters.push_back(i * 0.1);
    for (int i = 11; i <= 15; ++i) spec.representative_diameters.push_back(i * 0.1);
    for (int i = 1; i <= 10; ++i) spec.depths.push_back(i * 0.5);
    spec.positions = {0.0, 0.5, -0.5, 1.0, -1.0, 1.5, -1.5, 2.0, -2.0};
    spec.faces = {Face::XPos, Face::XNeg, Face::YPos,
                  Face::YNeg, Face::ZPos, Face::ZNeg};
    spec.thin_section_webs = {0.25, 0.5, 1.0};
    return spec;
}

Corpus enumerate_training(const DatasetSpec& spec) {
    Corpus out;
    const Block cube{{spec.cube_edge, spec.cube_edge, spec.cube_edge}};
    for (Face f : spec.faces)
        for (double d : spec.diameters)
            for (double depth : spec.depths)
                for (double p : spec.positions) {
                    PartModel part{cube, {HoleSpec{f, p, p, d, depth}}};
                    add(out,
                        "cube-" + std::string(face_tag(f)) + "-d" + num(d) + "-l" +
                            num(depth) + "-p" + num(p),
                        std::move(part), Split::Train);
                }
    // Thin-section slabs: blind hole, web = factor * diameter of material
    // left beyond the floor.
    for (Face f : spec.faces)
        for (double d : spec.diameters)
            for (double depth : spec.depths)
                for (double w : spec.thin_section_webs) {
                    PartModel part{slab_for(f, spec.cube_edge, depth + w * d),
                                   {HoleSpec{f, 0.0, 0.0, d, depth}}};
                    add(out,
                        "slab-" + std::string(face_tag(f)) + "-d" + num(d) + "-l" +
                            num(depth) + "-w" + num(w),
                        std::move(part), Split::Train);
                }
    return out;
}

Corpus enumerate_representative(const DatasetSpec& spec) {
    Corpus out;
    const Block cube{{spec.cube_edge, spec.cube_edge, spec.cube_edge}};
    // Axial positions: (p, 0) and (0, p); the diagonal (training) pattern
    // appears only at the shared center.
    std::vector<std::array<double, 2>> positions;
    for (double p : spec.positions) {
        if (p == 0.0) {
            positions.push_back({0.0, 0.0});
            continue;
        }
        positions.push_back({p, 0.0});
        positions.push_back({0.0, p});
    }
    for (Face f : spec.faces)
        for (double d : spec.representative_diameters)
            for (double depth : spec.depths)
                for (auto [u, v] : positions) {
                    PartModel part{cube, {HoleSpec{f, u, v, d, depth}}};
                    add(out,
                        "rep-" + std::string(face_tag(f)) + "-d" + num(d) + "-l" +
                            num(depth) + "-u" + num(u) + "-v" + num(v),
                        std::move(part), Split::TestRepresentative);
                }
    return out;
}

Corpus enumerate_nonrepresentative(const DatasetSpec& spec) {
    Corpus out;
    const double e = spec.cube_edge;
    const Block cube{{e, e, e}};

    // Two holes on the same face: surface gap = 2*off - d, chosen to sit
    // below, at, and above the spacing threshold d/2.
    for (double d : {0.6, 1.0})
        for (double gap : {0.2 * d, 0.5 * d, 1.0 * d})
            for (double depth : {1.5, 3.0}) {
                const double off = (gap + d) / 2.0;
                PartModel part{cube,
                               {HoleSpec{Face::ZPos, -off, 0.0, d, depth},
                                HoleSpec{Face::ZPos, off, 0.0, d, depth}}};
                add(out,
                    "twin-same-d" + num(d) + "-g" + num(gap) + "-l" + num(depth),
                    std::move(part), Split::TestNonRepresentative);
            }
    // Orthogonal faces; the axis offset sweeps the pair from clashing to
    // comfortably clear, labels fall where the oracle puts them.
    for (double d : {0.5, 1.0})
        for (double vz : {0.0, 1.0, 2.0})
            for (double depth : {2.0, 4.0}) {
                PartModel part{cube,
                               {HoleSpec{Face::ZPos, 0.0, 0.0, d, depth},
                                HoleSpec{Face::XPos, 0.0, vz, d, depth}}};
                add(out,
                    "twin-orth-d" + num(d) + "-z" + num(vz) + "-l" + num(depth),
                    std::move(part), Split::TestNonRepresentative);
            }

    // L-blocks: tall-side holes (u < 0 clears the notch) and notch-floor
    // holes (u > 0), some hugging the inner corner.
    const LBlock lb{{e, e, e}, {e / 2.0, e, e / 2.0}};
    for (double u : {-1.7, -0.9, 1.6})
        for (double v : {0.0, 1.6})
            for (double d : {0.4, 0.8})
                for (double depth : {1.0, 2.0}) {
                    PartModel part{lb, {HoleSpec{Face::ZPos, u, v, d, depth}}};
                    add(out,
                        "lblk-u" + num(u) + "-v" + num(v) + "-d" + num(d) + "-l" +
                            num(depth),
                        std::move(part), Split::TestNonRepresentative);
                }

    // Cylinders: axial holes from the flat end, offset toward the rim.
    const Cylinder cyl{e / 2.0, e};
    for (double u : {0.0, 1.0, 1.9})
        for (double d : {0.4, 1.0})
            for (double depth : {1.0, 2.5, e}) {
                PartModel part{cyl, {HoleSpec{Face::ZPos, u, 0.0, d, depth}}};
                add(out,
                    "cyl-u" + num(u) + "-d" + num(d) + "-l" + num(depth),
                    std::move(part), Split::TestNonRepresentative);
            }
    return out;
}

std::pair<std::vector<SampleRecord>, std::vector<SampleRecord>>
split_train_val(const std::vector<SampleRecord>& records, double fraction,
                std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw Error("split fraction must be in (0, 1)");
    std::vector<std::size_t> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    SplitMix64 rng(seed);
    shuffle(order, rng);

    const auto n_train =
        static_cast<std::size_t>(std::llround(fraction * static_cast<double>(records.size())));
    std::pair<std::vector<SampleRecord>, std::vector<SampleRecord>> out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        SampleRecord rec = records[order[i]];
        rec.split = i < n_train ? Split::Train : Split::Val;
        (i < n_train ? out.first : out.second).push_back(std::move(rec));
    }
    return out;
}

} // namespace voxdfm
