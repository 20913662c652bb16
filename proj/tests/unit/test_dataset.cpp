#include "doctest.h"

#include "voxdfm/dataset.hpp"
#include "voxdfm/dfm.hpp"

#include <algorithm>
#include <set>

using namespace voxdfm;

TEST_CASE("default corpus sizes and class balance") {
    const DatasetSpec spec = default_dataset_spec();

    SUBCASE("training grid") {
        const Corpus c = enumerate_training(spec);
        CHECK(c.records.size() == 7200);
        const auto cubes = std::count_if(c.records.begin(), c.records.end(), [](const auto& r) {
            const Block* b = std::get_if<Block>(&r.part.base);
            return b && b->size.x == b->size.y && b->size.y == b->size.z;
        });
        CHECK(cubes == 5400);
        const auto good = std::count_if(c.records.begin(), c.records.end(),
                                        [](const auto& r) { return r.label.manufacturable; });
        // both classes well represented
        CHECK(good > 2000);
        CHECK(c.records.size() - good > 2000);
    }

    SUBCASE("representative test set") {
        const Corpus c = enumerate_representative(spec);
        CHECK(c.records.size() == 3900);
        CHECK(c.skipped == 1200);
        for (const auto& r : c.records) CHECK(r.split == Split::TestRepresentative);
    }

    SUBCASE("non-representative test set") {
        const Corpus c = enumerate_nonrepresentative(spec);
        CHECK(c.records.size() == 55);
        CHECK(c.skipped == 11);
        // shapes the training enumeration never emits
        const bool has_lblock = std::any_of(c.records.begin(), c.records.end(), [](const auto& r) {
            return std::holds_alternative<LBlock>(r.part.base);
        });
        const bool has_cylinder = std::any_of(c.records.begin(), c.records.end(), [](const auto& r) {
            return std::holds_alternative<Cylinder>(r.part.base);
        });
        const bool has_two_holes = std::any_of(c.records.begin(), c.records.end(),
                                               [](const auto& r) { return r.part.holes.size() == 2; });
        CHECK(has_lblock);
        CHECK(has_cylinder);
        CHECK(has_two_holes);
    }
}

TEST_CASE("enumeration is deterministic with unique ids and honest labels") {
    DatasetSpec spec = default_dataset_spec();
    spec.diameters = {0.4, 0.8};
    spec.depths = {1.0, 3.0, 4.8};
    spec.positions = {0.0, 1.8};

    const Corpus a = enumerate_training(spec);
    const Corpus b = enumerate_training(spec);
    CHECK(a.records == b.records);
    CHECK(a.skipped == b.skipped);

    std::set<std::string> ids;
    for (const auto& r : a.records) {
        CHECK(ids.insert(r.id).second);
        CHECK(r.label == dfm_classify(r.part));
        CHECK(r.split == Split::Train);
        CHECK(r.voxel_path.empty());
    }
}

TEST_CASE("training and representative parameter grids do not overlap") {
    const DatasetSpec spec = default_dataset_spec();
    const Corpus train = enumerate_training(spec);
    const Corpus rep = enumerate_representative(spec);

    std::set<std::string> train_ids;
    for (const auto& r : train.records) train_ids.insert(r.id);
    for (const auto& r : rep.records) CHECK(train_ids.count(r.id) == 0);

    // representative diameters are the held-out ones
    for (const auto& r : rep.records)
        for (const auto& h : r.part.holes) CHECK(h.diameter >= 1.1);

    // training positions are diagonal, representative axial
    for (const auto& r : train.records)
        for (const auto& h : r.part.holes) CHECK(h.pos_u == h.pos_v);
    for (const auto& r : rep.records)
        for (const auto& h : r.part.holes) CHECK((h.pos_u == 0.0 || h.pos_v == 0.0));
}

TEST_CASE("split_train_val shuffles, tags, and keeps every record") {
    const DatasetSpec spec = default_dataset_spec();
    Corpus c = enumerate_training(spec);
    c.records.resize(1000);

    auto [train, val] = split_train_val(c.records, 0.75, 7);
    CHECK(train.size() == 750);
    CHECK(val.size() == 250);
    for (const auto& r : train) CHECK(r.split == Split::Train);
    for (const auto& r : val) CHECK(r.split == Split::Val);

    std::set<std::string> seen;
    for (const auto& r : train) seen.insert(r.id);
    for (const auto& r : val) seen.insert(r.id);
    CHECK(seen.size() == 1000);

    // same seed reproduces the split; a different seed moves records
    auto [train2, val2] = split_train_val(c.records, 0.75, 7);
    CHECK(train2 == train);
    auto [train3, val3] = split_train_val(c.records, 0.75, 8);
    CHECK(train3 != train);

    // fraction rounds to the nearest record
    auto [t4, v4] = split_train_val(c.records, 0.7504, 7);
    CHECK(t4.size() == 750);
    auto [t5, v5] = split_train_val(c.records, 0.7506, 7);
    CHECK(t5.size() == 751);
}
