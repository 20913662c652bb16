#pragma once

#include "runconfig.hpp"

#include <stdexcept>
#include <string>

namespace voxdfm::cli {

// Bad invocations (missing workspace, contradictory flags) exit 1, unlike
// data/model failures which exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GenerateArgs {
    RunConfig cfg;
    std::string out;
    bool meshes = false;
};
int run_generate(const GenerateArgs& a);

struct VoxelizeArgs {
    RunConfig cfg;
    std::string manifest;
    std::string out;  // empty: next to the manifest
    std::string engine = "parity";
    bool verify = false;
    // Grid and encoding come from the manifest unless the user asked
    // otherwise on the command line (0 / empty = keep the manifest's).
    int grid = 0;
    std::string encoding;
};
int run_voxelize(const VoxelizeArgs& a);

struct TrainArgs {
    RunConfig cfg;
    std::string manifest;
    std::string out;
    int limit = 0;  // cap on loaded training samples, 0 = all
};
int run_train(const TrainArgs& a);

struct EvalArgs {
    std::string manifest;
    std::string model;
    std::string split = "all";
    int batch = 16;
};
int run_eval(const EvalArgs& a);

struct ExplainArgs {
    RunConfig cfg;
    std::string manifest;
    std::string model;
    std::string id;
    std::string out;
    std::string cam_class = "non_manufacturable";
    int width = 256;
    int height = 256;
    int samples = 0;
    double occupancy_weight = 1.0;
    double activation_weight = 1.0;
};
int run_explain(const ExplainArgs& a);

struct FeatmapsArgs {
    RunConfig cfg;
    std::string manifest;
    std::string model;
    std::string id;
    std::string out;
    int width = 256;
    int height = 256;
};
int run_featmaps(const FeatmapsArgs& a);

} // namespace voxdfm::cli
