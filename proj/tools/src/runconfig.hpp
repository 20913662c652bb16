#pragma once

#include "voxdfm/dataset.hpp"
#include "voxdfm/nn/train.hpp"

#include <string>

namespace voxdfm::cli {

// One run's knobs, resolved defaults <- config file <- flags. The resolved
// snapshot written next to outputs uses the same schema, so a snapshot is
// itself a valid --config for a rerun.
struct RunConfig {
    DatasetSpec dataset = default_dataset_spec();
    nn::TrainConfig train;
    double split_fraction = 0.75;  // train share of the training corpus
    std::string workspace;         // output root; empty = unset
    unsigned workers = 0;          // 0 = hardware concurrency
};

// Missing keys keep their defaults; unknown keys are ignored.
RunConfig load_run_config(const std::string& path);

// `extra` is a serialized JSON object recording the command and its own
// arguments; it lands under a "command" key the loader skips.
void write_snapshot(const RunConfig& cfg, const std::string& extra, const std::string& path);

} // namespace voxdfm::cli
