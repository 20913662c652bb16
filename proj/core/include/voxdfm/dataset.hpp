#pragma once

#include "voxdfm/dfm.hpp"
#include "voxdfm/solids.hpp"
#include "voxdfm/voxelgrid.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace voxdfm {

enum class Split { Train, Val, TestRepresentative, TestNonRepresentative };

const char* to_string(Split s);
Split split_from_string(const std::string& s);

// Parameter grids for corpus enumeration. Positions are offsets from the
// entry-face center; training holes sit on the diagonal (pos_u == pos_v),
// representative holes on the axes (one of pos_u, pos_v zero). Webs are
// factors of the hole diameter left beyond a blind floor in slab stock.
struct DatasetSpec {
    double cube_edge = 5.0;
    std::vector<double> diameters;
    std::vector<double> representative_diameters;
    std::vector<double> depths;
    std::vector<double> positions;
    std::vector<Face> faces;
    std::vector<double> thin_section_webs;
    int grid_resolution = 32;
    EncodingKind encoding = EncodingKind::CoupledThreeChannel;
    std::uint64_t seed = 0;
    friend bool operator==(const DatasetSpec&, const DatasetSpec&) = default;
};

// Diameters 0.1..1.0 / 1.1..1.5, depths 0.5..5.0, positions 0, +-0.5..+-2.0,
// all six faces, webs {0.25, 0.5, 1.0} x diameter.
DatasetSpec default_dataset_spec();

struct SampleRecord {
    std::string id;
    PartModel part;
    DfmLabel label;
    Split split = Split::Train;
    std::string voxel_path;  // empty until a tensor is written
    friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

// Enumeration output. Parameter combinations that cannot be built (a hole
// breaking out of a wall, overlapping holes) are skipped and counted, not
// errored, so grid edits degrade gracefully.
struct Corpus {
    std::vector<SampleRecord> records;
    int skipped = 0;
};

// Single holes on a cube over faces x diameters x depths x diagonal
// positions, plus blind holes in slabs leaving web = factor x diameter
// beyond the floor. Deterministic order, ids pure functions of parameters.
Corpus enumerate_training(const DatasetSpec& spec);

// Single holes on a cube with the held-out diameters and axial positions;
// shares no parameter tuple with the training grid.
Corpus enumerate_representative(const DatasetSpec& spec);

// Shapes the training corpus never shows: two-hole cubes (same and
// different faces, gaps straddling the spacing threshold), L-blocks with
// off-center holes, cylinders with axial holes near the rim.
Corpus enumerate_nonrepresentative(const DatasetSpec& spec);

// Seeded shuffle, then |train| = round(fraction * N). Tags the returned
// records Train/Val; every input record lands in exactly one side.
std::pair<std::vector<SampleRecord>, std::vector<SampleRecord>>
split_train_val(const std::vector<SampleRecord>& records, double fraction, std::uint64_t seed);

} // namespace voxdfm
