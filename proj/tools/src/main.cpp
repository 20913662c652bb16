#include "commands.hpp"
#include "runconfig.hpp"

#include "voxdfm/errors.hpp"
#include "voxdfm/voxelgrid.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <string>

namespace {

using namespace voxdfm;
using namespace voxdfm::cli;

// Global knobs shared by every subcommand; precedence is
// defaults < --config file < --paper-config/--desk-config < specific flags.
struct GlobalOpts {
    std::string config_v, encoding_v;
    std::uint64_t seed_v = 0;
    int grid_v = 0;
    unsigned workers_v = 0;
    CLI::Option *config = nullptr, *seed = nullptr, *grid = nullptr, *encoding = nullptr,
                *workers = nullptr, *paper = nullptr, *desk = nullptr;

    void attach(CLI::App& app) {
        config = app.add_option("--config", config_v,
                                "JSON run config; flags override its fields")
                     ->check(CLI::ExistingFile);
        seed = app.add_option("--seed", seed_v, "Seed for corpus shuffling and weight init");
        grid = app.add_option("--grid", grid_v, "Voxel grid resolution")
                   ->check(CLI::PositiveNumber);
        encoding = app.add_option("--encoding", encoding_v, "Voxel encoding")
                       ->check(CLI::IsMember({"occ", "four", "coupled"}));
        workers = app.add_option("--workers", workers_v, "Worker threads (0 = all cores)");
        paper = app.add_flag("--paper-config", "64^3 grid, batch 64");
        desk = app.add_flag("--desk-config", "32^3 grid, batch 16");
        paper->excludes(desk);
        desk->excludes(paper);
    }

    RunConfig resolve() const {
        RunConfig cfg;
        if (config->count()) cfg = load_run_config(config_v);
        if (paper->count()) {
            cfg.dataset.grid_resolution = 64;
            cfg.train.batch_size = 64;
        }
        if (desk->count()) {
            cfg.dataset.grid_resolution = 32;
            cfg.train.batch_size = 16;
        }
        if (seed->count()) {
            cfg.dataset.seed = seed_v;
            cfg.train.seed = seed_v;
        }
        if (grid->count()) cfg.dataset.grid_resolution = grid_v;
        if (encoding->count()) cfg.dataset.encoding = encoding_from_string(encoding_v);
        if (workers->count()) cfg.workers = workers_v;
        return cfg;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Drilled-part manufacturability pipeline: corpus generation, voxelization,"
                 " training, evaluation, explanation"};
    app.require_subcommand(1);
    GlobalOpts g;
    g.attach(app);

    int rc = 0;

    GenerateArgs gen;
    CLI::App* c_gen = app.add_subcommand("generate", "Enumerate the corpora into manifests");
    c_gen->fallthrough();
    c_gen->add_option("-o,--out", gen.out, "Output directory");
    CLI::Option* gen_frac =
        c_gen->add_option("--split-fraction", gen.cfg.split_fraction,
                          "Train share of the training corpus")
            ->check(CLI::Range(0.01, 0.99));
    c_gen->add_flag("--meshes", gen.meshes, "Also write one OBJ mesh per record");
    c_gen->callback([&] {
        const double frac = gen.cfg.split_fraction;
        gen.cfg = g.resolve();
        if (gen_frac->count()) gen.cfg.split_fraction = frac;
        rc = run_generate(gen);
    });

    VoxelizeArgs vox;
    CLI::App* c_vox = app.add_subcommand("voxelize", "Turn manifest parts into voxel tensors");
    c_vox->fallthrough();
    c_vox->add_option("--manifest", vox.manifest, "Manifest to voxelize")
        ->required()
        ->check(CLI::ExistingFile);
    c_vox->add_option("-o,--out", vox.out, "Output directory (default: beside the manifest)");
    c_vox->add_option("--engine", vox.engine, "Occupancy engine")
        ->check(CLI::IsMember({"parity", "analytic"}));
    c_vox->add_flag("--verify", vox.verify, "Cross-check both engines on every record");
    c_vox->callback([&] {
        vox.cfg = g.resolve();
        if (g.grid->count() || g.paper->count() || g.desk->count())
            vox.grid = vox.cfg.dataset.grid_resolution;
        if (g.encoding->count()) vox.encoding = g.encoding_v;
        rc = run_voxelize(vox);
    });

    TrainArgs tr;
    CLI::App* c_tr = app.add_subcommand("train", "Train a classifier on a voxelized manifest");
    c_tr->fallthrough();
    c_tr->add_option("--manifest", tr.manifest, "Voxelized training manifest")
        ->required()
        ->check(CLI::ExistingFile);
    c_tr->add_option("-o,--out", tr.out, "Output directory");
    int batch = 0, max_epochs = 0, patience = 0;
    double goal = 0.0;
    CLI::Option* tr_batch = c_tr->add_option("--batch", batch, "Minibatch size");
    CLI::Option* tr_epochs = c_tr->add_option("--max-epochs", max_epochs, "Epoch cap");
    CLI::Option* tr_pat = c_tr->add_option("--patience", patience, "Early-stop patience");
    CLI::Option* tr_goal = c_tr->add_option("--train-accuracy-goal", goal,
                                            "Stop once training accuracy reaches this");
    c_tr->add_option("--limit", tr.limit, "Use at most this many train records");
    c_tr->callback([&] {
        tr.cfg = g.resolve();
        if (tr_batch->count()) tr.cfg.train.batch_size = batch;
        if (tr_epochs->count()) tr.cfg.train.max_epochs = max_epochs;
        if (tr_pat->count()) tr.cfg.train.patience = patience;
        if (tr_goal->count()) tr.cfg.train.train_accuracy_goal = goal;
        rc = run_train(tr);
    });

    EvalArgs ev;
    CLI::App* c_ev = app.add_subcommand("eval", "Confusion matrix of a model on a manifest");
    c_ev->fallthrough();
    c_ev->add_option("--manifest", ev.manifest, "Voxelized manifest")
        ->required()
        ->check(CLI::ExistingFile);
    c_ev->add_option("--model", ev.model, "Checkpoint to evaluate")
        ->required()
        ->check(CLI::ExistingFile);
    c_ev->add_option("--split", ev.split, "Record split to use")
        ->check(CLI::IsMember(
            {"all", "train", "val", "test_representative", "test_nonrepresentative"}));
    c_ev->add_option("--batch", ev.batch, "Inference batch size")->check(CLI::PositiveNumber);
    c_ev->callback([&] { rc = run_eval(ev); });

    ExplainArgs ex;
    CLI::App* c_ex =
        app.add_subcommand("explain", "Class-activation volume and renders for one record");
    c_ex->fallthrough();
    c_ex->add_option("--manifest", ex.manifest, "Manifest holding the record")
        ->required()
        ->check(CLI::ExistingFile);
    c_ex->add_option("--model", ex.model, "Checkpoint")->required()->check(CLI::ExistingFile);
    c_ex->add_option("--id", ex.id, "Record id to explain")->required();
    c_ex->add_option("-o,--out", ex.out, "Output directory");
    c_ex->add_option("--class", ex.cam_class, "Class the map explains")
        ->check(CLI::IsMember({"manufacturable", "non_manufacturable"}));
    c_ex->add_option("--width", ex.width, "Render width")->check(CLI::PositiveNumber);
    c_ex->add_option("--height", ex.height, "Render height")->check(CLI::PositiveNumber);
    c_ex->add_option("--samples", ex.samples, "Samples per ray (0 = twice the grid dim)");
    c_ex->add_option("--occupancy-weight", ex.occupancy_weight, "Occupancy term weight");
    c_ex->add_option("--activation-weight", ex.activation_weight, "Activation term weight");
    c_ex->callback([&] {
        ex.cfg = g.resolve();
        rc = run_explain(ex);
    });

    FeatmapsArgs fm;
    CLI::App* c_fm =
        app.add_subcommand("featmaps", "First-layer feature-map dumps for one record");
    c_fm->fallthrough();
    c_fm->add_option("--manifest", fm.manifest, "Manifest holding the record")
        ->required()
        ->check(CLI::ExistingFile);
    c_fm->add_option("--model", fm.model, "Checkpoint")->required()->check(CLI::ExistingFile);
    c_fm->add_option("--id", fm.id, "Record id")->required();
    c_fm->add_option("-o,--out", fm.out, "Output directory");
    c_fm->add_option("--width", fm.width, "Render width")->check(CLI::PositiveNumber);
    c_fm->add_option("--height", fm.height, "Render height")->check(CLI::PositiveNumber);
    c_fm->callback([&] {
        fm.cfg = g.resolve();
        rc = run_featmaps(fm);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return rc;
}
