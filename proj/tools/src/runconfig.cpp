#include "runconfig.hpp"

#include "voxdfm/errors.hpp"
#include "voxdfm/manifest.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace voxdfm::cli {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

ojson train_json(const nn::TrainConfig& t) {
    ojson j;
    j["batch_size"] = t.batch_size;
    j["patience"] = t.patience;
    j["max_epochs"] = t.max_epochs;
    j["seed"] = t.seed;
    j["val_fraction"] = t.val_fraction;
    j["train_accuracy_goal"] = t.train_accuracy_goal;
    return j;
}

void train_from_json(const json& j, nn::TrainConfig& t) {
    if (j.contains("batch_size")) t.batch_size = j.at("batch_size").get<int>();
    if (j.contains("patience")) t.patience = j.at("patience").get<int>();
    if (j.contains("max_epochs")) t.max_epochs = j.at("max_epochs").get<int>();
    if (j.contains("seed")) t.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("val_fraction")) t.val_fraction = j.at("val_fraction").get<double>();
    if (j.contains("train_accuracy_goal"))
        t.train_accuracy_goal = j.at("train_accuracy_goal").get<double>();
}

} // namespace

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();

    RunConfig cfg;
    try {
        const json j = json::parse(buf.str());
        if (j.contains("dataset"))
            cfg.dataset = dataset_spec_from_json(j.at("dataset").dump());
        if (j.contains("train")) train_from_json(j.at("train"), cfg.train);
        if (j.contains("split_fraction"))
            cfg.split_fraction = j.at("split_fraction").get<double>();
        if (j.contains("workspace")) cfg.workspace = j.at("workspace").get<std::string>();
        if (j.contains("workers")) cfg.workers = j.at("workers").get<unsigned>();
    } catch (const json::exception& e) {
        throw SchemaError("config '" + path + "': " + e.what());
    }
    return cfg;
}

void write_snapshot(const RunConfig& cfg, const std::string& extra, const std::string& path) {
    ojson j;
    j["command"] = ojson::parse(extra);
    j["dataset"] = ojson::parse(dataset_spec_to_json(cfg.dataset));
    j["train"] = train_json(cfg.train);
    j["split_fraction"] = cfg.split_fraction;
    j["workspace"] = cfg.workspace;
    j["workers"] = cfg.workers;

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    out.close();
    if (!out) throw IoError("write failed for '" + path + "'");
}

} // namespace voxdfm::cli
