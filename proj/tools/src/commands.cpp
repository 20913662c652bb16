#include "commands.hpp"

#include "voxdfm/errors.hpp"
#include "voxdfm/gradcam.hpp"
#include "voxdfm/manifest.hpp"
#include "voxdfm/nn/checkpoint.hpp"
#include "voxdfm/nn/train.hpp"
#include "voxdfm/render.hpp"
#include "voxdfm/trimesh.hpp"
#include "voxdfm/vox_io.hpp"
#include "voxdfm/voxelize.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace voxdfm::cli {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

fs::path ensure_dir(fs::path p) {
    if (p.empty()) p = ".";
    fs::create_directories(p);
    return p;
}

// --out beats the config's workspace beats the environment.
fs::path resolve_out(const std::string& flag, const RunConfig& cfg) {
    if (!flag.empty()) return flag;
    if (!cfg.workspace.empty()) return cfg.workspace;
    if (const char* env = std::getenv("VOXDFM_WORKSPACE"))
        if (*env) return env;
    throw UsageError(
        "no output directory: pass --out, set workspace in the config, or export "
        "VOXDFM_WORKSPACE");
}

void progress(const char* verb, std::size_t done, std::size_t total) {
    const std::size_t step = std::max<std::size_t>(1, total / 20);
    if (done == total || done % step == 0)
        std::fprintf(stderr, "%s %zu/%zu\n", verb, done, total);
}

void print_result(const ojson& j) { std::printf("%s\n", j.dump().c_str()); }

double manufacturable_share(const std::vector<SampleRecord>& recs) {
    if (recs.empty()) return 0.0;
    std::size_t m = 0;
    for (const SampleRecord& r : recs) m += r.label.manufacturable ? 1 : 0;
    return static_cast<double>(m) / static_cast<double>(recs.size());
}

ojson corpus_summary(const Manifest& m) {
    return {{"records", m.records.size()},
            {"skipped", m.skipped},
            {"manufacturable", manufacturable_share(m.records)}};
}

nn::Sample load_sample(const SampleRecord& rec, const fs::path& base) {
    if (rec.voxel_path.empty())
        throw Error("record '" + rec.id + "' has no voxel tensor; run voxelize first");
    fs::path p = rec.voxel_path;
    if (p.is_relative()) p = base / p;
    const VoxelGrid g = read_vox(p.string());
    nn::Tensor<float> t({g.channels, g.spec.nz, g.spec.ny, g.spec.nx});
    t.data = g.data;
    return {std::move(t), rec.label.manufacturable ? 1.0f : 0.0f};
}

const SampleRecord& find_record(const Manifest& m, const std::string& id) {
    for (const SampleRecord& r : m.records)
        if (r.id == id) return r;
    throw Error("unknown record id '" + id + "'");
}

// Geometry -> raw occupancy plus the network input tensor, the common
// front half of explain and featmaps.
struct EncodedPart {
    GridSpec gs;
    VoxelGrid occ;
    nn::Tensor<float> input;
};

EncodedPart encode_record(const SampleRecord& rec, const DatasetSpec& spec, unsigned workers) {
    const GridSpec gs = grid_for_part(rec.part, spec.grid_resolution);
    const TriMesh mesh = tessellate(rec.part);
    VoxelGrid occ = voxelize_parity(mesh, gs, workers);
    const VoxelGrid* net_in = &occ;
    VoxelGrid enc;
    if (spec.encoding != EncodingKind::OccupancyOnly) {
        enc = encode(occ, boundary_normals(mesh, gs, workers), spec.encoding);
        net_in = &enc;
    }
    nn::Tensor<float> t({net_in->channels, gs.nz, gs.ny, gs.nx});
    t.data = net_in->data;
    return {gs, std::move(occ), std::move(t)};
}

} // namespace

int run_generate(const GenerateArgs& a) {
    const fs::path out = ensure_dir(resolve_out(a.out, a.cfg));
    const DatasetSpec& spec = a.cfg.dataset;

    Corpus tr = enumerate_training(spec);
    auto split = split_train_val(tr.records, a.cfg.split_fraction, spec.seed);
    Manifest train_m{spec, std::move(split.first), tr.skipped};
    train_m.records.insert(train_m.records.end(), split.second.begin(), split.second.end());

    Corpus rep = enumerate_representative(spec);
    const Manifest rep_m{spec, std::move(rep.records), rep.skipped};
    Corpus non = enumerate_nonrepresentative(spec);
    const Manifest non_m{spec, std::move(non.records), non.skipped};

    write_manifest(train_m, (out / "train.jsonl").string());
    write_manifest(rep_m, (out / "test_representative.jsonl").string());
    write_manifest(non_m, (out / "test_nonrepresentative.jsonl").string());
    std::fprintf(stderr, "generate: %zu train, %zu representative, %zu non-representative\n",
                 train_m.records.size(), rep_m.records.size(), non_m.records.size());

    std::size_t meshes = 0;
    if (a.meshes) {
        const fs::path mdir = ensure_dir(out / "meshes");
        const std::size_t total =
            train_m.records.size() + rep_m.records.size() + non_m.records.size();
        const Manifest* const sets[] = {&train_m, &rep_m, &non_m};
        for (const Manifest* m : sets)
            for (const SampleRecord& r : m->records) {
                try {
                    write_obj(tessellate(r.part), (mdir / (r.id + ".obj")).string());
                } catch (const Error& e) {
                    throw Error("record '" + r.id + "': " + e.what());
                }
                progress("generate meshes", ++meshes, total);
            }
    }

    write_snapshot(a.cfg,
                   ojson{{"name", "generate"}, {"out", out.string()}, {"meshes", a.meshes}}.dump(),
                   (out / "generate.config.json").string());

    ojson sum;
    sum["train"] = corpus_summary(train_m);
    sum["test_representative"] = corpus_summary(rep_m);
    sum["test_nonrepresentative"] = corpus_summary(non_m);
    if (a.meshes) sum["meshes"] = meshes;
    print_result(sum);
    return 0;
}

int run_voxelize(const VoxelizeArgs& a) {
    if (a.engine != "parity" && a.engine != "analytic")
        throw UsageError("--engine must be parity or analytic");
    Manifest m = read_manifest(a.manifest);
    const fs::path out =
        ensure_dir(a.out.empty() ? fs::path(a.manifest).parent_path() : fs::path(a.out));
    ensure_dir(out / "vox");

    if (a.grid > 0) m.spec.grid_resolution = a.grid;
    if (!a.encoding.empty()) m.spec.encoding = encoding_from_string(a.encoding);
    const int grid = m.spec.grid_resolution;
    const EncodingKind enc = m.spec.encoding;
    const unsigned workers = a.cfg.workers;

    std::size_t mismatches = 0, cells_total = 0, done = 0;
    double worst = 1.0;
    std::string worst_id;
    for (SampleRecord& rec : m.records) {
        try {
            const GridSpec gs = grid_for_part(rec.part, grid);
            const bool need_mesh =
                a.engine == "parity" || a.verify || enc != EncodingKind::OccupancyOnly;
            TriMesh mesh;
            if (need_mesh) mesh = tessellate(rec.part);
            VoxelGrid occ = a.engine == "parity" ? voxelize_parity(mesh, gs, workers)
                                                 : voxelize_analytic(rec.part, gs, workers);
            if (a.verify) {
                const VoxelGrid other = a.engine == "parity"
                                            ? voxelize_analytic(rec.part, gs, workers)
                                            : voxelize_parity(mesh, gs, workers);
                const std::size_t mm = count_mismatches(occ, other);
                mismatches += mm;
                cells_total += gs.cell_count();
                const double agree =
                    1.0 - static_cast<double>(mm) / static_cast<double>(gs.cell_count());
                if (agree < worst) {
                    worst = agree;
                    worst_id = rec.id;
                }
            }
            const VoxelGrid encoded =
                enc == EncodingKind::OccupancyOnly
                    ? std::move(occ)
                    : encode(occ, boundary_normals(mesh, gs, workers), enc);
            const std::string rel = "vox/" + rec.id + ".vox";
            write_vox(encoded, (out / rel).string());
            rec.voxel_path = rel;
        } catch (const Error& e) {
            throw Error("record '" + rec.id + "': " + e.what());
        }
        progress("voxelize", ++done, m.records.size());
    }
    write_manifest(m, (out / fs::path(a.manifest).filename()).string());

    const std::string stem = fs::path(a.manifest).stem().string();
    write_snapshot(a.cfg,
                   ojson{{"name", "voxelize"},
                         {"manifest", a.manifest},
                         {"engine", a.engine},
                         {"verify", a.verify},
                         {"out", out.string()}}
                       .dump(),
                   (out / (stem + ".voxelize.config.json")).string());

    ojson sum;
    sum["records"] = m.records.size();
    sum["engine"] = a.engine;
    sum["grid"] = grid;
    sum["encoding"] = to_string(enc);
    if (a.verify && cells_total > 0) {
        const double agreement =
            1.0 - static_cast<double>(mismatches) / static_cast<double>(cells_total);
        if (agreement < 0.999) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "engines agree on only %.6f of voxels (worst record '%s' at %.6f)",
                          agreement, worst_id.c_str(), worst);
            throw Error(buf);
        }
        sum["agreement"] = agreement;
        sum["worst_record"] = worst_id;
        sum["worst_agreement"] = worst;
    }
    print_result(sum);
    return 0;
}

int run_train(const TrainArgs& a) {
    Manifest m = read_manifest(a.manifest);
    const fs::path base = fs::path(a.manifest).parent_path();
    const fs::path out = ensure_dir(resolve_out(a.out, a.cfg));

    std::vector<nn::Sample> train_set, val_set;
    for (const SampleRecord& rec : m.records) {
        if (rec.split == Split::Train) {
            if (a.limit > 0 && train_set.size() >= static_cast<std::size_t>(a.limit)) continue;
            train_set.push_back(load_sample(rec, base));
        } else if (rec.split == Split::Val) {
            val_set.push_back(load_sample(rec, base));
        }
    }
    if (train_set.empty()) throw EmptySplit("manifest has no train records");
    if (val_set.empty()) throw EmptySplit("manifest has no val records");
    std::fprintf(stderr, "train: %zu train / %zu val samples\n", train_set.size(),
                 val_set.size());

    if (train_set.front().voxels.dim(0) != channel_count(m.spec.encoding))
        throw SpecMismatch("voxel channels disagree with the manifest encoding");
    const int grid = train_set.front().voxels.dim(1);

    nn::Network<float> net =
        nn::build_network<float>(nn::default_arch(m.spec.encoding, grid), a.cfg.train.seed);
    const nn::TrainResult res =
        nn::train(net, train_set, val_set, a.cfg.train, [](const nn::EpochStats& st) {
            std::fprintf(stderr,
                         "epoch %d: train loss %.4f acc %.4f | val loss %.4f acc %.4f\n",
                         st.epoch, st.train_loss, st.train_accuracy, st.val_loss,
                         st.val_accuracy);
        });

    const fs::path model = out / "model.ckpt";
    nn::save_network(net, model.string());
    nn::write_history((out / "history.csv").string(), res.history);
    write_snapshot(a.cfg,
                   ojson{{"name", "train"},
                         {"manifest", a.manifest},
                         {"limit", a.limit},
                         {"out", out.string()}}
                       .dump(),
                   (out / "train.config.json").string());

    ojson sum;
    sum["epochs"] = res.history.size();
    sum["best_epoch"] = res.best_epoch;
    sum["best_val_loss"] = res.best_val_loss;
    sum["val_accuracy"] = res.history[static_cast<std::size_t>(res.best_epoch) - 1].val_accuracy;
    sum["train_samples"] = train_set.size();
    sum["val_samples"] = val_set.size();
    sum["model"] = model.string();
    print_result(sum);
    return 0;
}

int run_eval(const EvalArgs& a) {
    Manifest m = read_manifest(a.manifest);
    const fs::path base = fs::path(a.manifest).parent_path();
    nn::Network<float> net = nn::load_network(a.model);

    std::vector<nn::Sample> samples;
    std::size_t done = 0;
    for (const SampleRecord& rec : m.records) {
        if (a.split != "all" && a.split != to_string(rec.split)) continue;
        samples.push_back(load_sample(rec, base));
        progress("eval load", ++done, m.records.size());
    }
    if (samples.empty()) throw EmptySplit("manifest has no records in split '" + a.split + "'");

    const nn::ConfusionMatrix cm = nn::evaluate(net, samples, a.batch);
    std::printf("True Positive  True Negative  False Positive  False Negative  Accuracy\n");
    std::printf("%13lld  %13lld  %14lld  %14lld  %8.3f\n", static_cast<long long>(cm.tp),
                static_cast<long long>(cm.tn), static_cast<long long>(cm.fp),
                static_cast<long long>(cm.fn), cm.accuracy());
    return 0;
}

int run_explain(const ExplainArgs& a) {
    Manifest m = read_manifest(a.manifest);
    const SampleRecord& rec = find_record(m, a.id);
    const fs::path out = ensure_dir(resolve_out(a.out, a.cfg));
    nn::Network<float> net = nn::load_network(a.model);
    const CamClass cls = cam_class_from_string(a.cam_class);

    try {
        std::fprintf(stderr, "explain: voxelizing %s at %d^3\n", rec.id.c_str(),
                     m.spec.grid_resolution);
        EncodedPart ep = encode_record(rec, m.spec, a.cfg.workers);

        nn::Tensor<float> batched({1, ep.input.dim(0), ep.input.dim(1), ep.input.dim(2),
                                   ep.input.dim(3)});
        batched.data = ep.input.data;
        nn::Cache<float> cache;
        const float prob = net.forward(batched, false, cache).data[0];

        CamVolume cam = grad_cam(net, ep.input, cls);
        const std::array<int, 3> dims{ep.gs.nz, ep.gs.ny, ep.gs.nx};
        cam.values = trilinear_resample(cam.values, dims);
        const VoxelGrid comp = composite(ep.occ, cam);

        const std::string stem = rec.id + "-cam";
        ojson outputs = ojson::array();
        const fs::path vox = out / (stem + ".vox");
        write_vox(comp, vox.string());
        outputs.push_back(vox.string());

        const std::pair<Face, const char*> views[] = {
            {Face::XPos, "x"}, {Face::YPos, "y"}, {Face::ZPos, "z"}};
        for (const auto& [view, tag] : views) {
            RenderConfig rc;
            rc.view = view;
            rc.width = a.width;
            rc.height = a.height;
            rc.samples_per_ray = a.samples;
            rc.occupancy_weight = a.occupancy_weight;
            rc.activation_weight = a.activation_weight;
            const fs::path img = out / (stem + "-" + tag + ".ppm");
            write_ppm(raymarch_render(comp, rc, a.cfg.workers), img.string());
            outputs.push_back(img.string());
        }

        write_snapshot(a.cfg,
                       ojson{{"name", "explain"},
                             {"manifest", a.manifest},
                             {"model", a.model},
                             {"id", a.id},
                             {"class", a.cam_class},
                             {"out", out.string()}}
                           .dump(),
                       (out / (rec.id + ".explain.config.json")).string());

        ojson sum;
        sum["id"] = rec.id;
        sum["class"] = to_string(cls);
        sum["probability"] = prob;
        sum["feature_dims"] = cam.feature_dims;
        sum["outputs"] = outputs;
        print_result(sum);
    } catch (const Error& e) {
        throw Error("record '" + rec.id + "': " + e.what());
    }
    return 0;
}

int run_featmaps(const FeatmapsArgs& a) {
    Manifest m = read_manifest(a.manifest);
    const SampleRecord& rec = find_record(m, a.id);
    const fs::path out = ensure_dir(resolve_out(a.out, a.cfg));
    nn::Network<float> net = nn::load_network(a.model);

    try {
        std::fprintf(stderr, "featmaps: voxelizing %s at %d^3\n", rec.id.c_str(),
                     m.spec.grid_resolution);
        EncodedPart ep = encode_record(rec, m.spec, a.cfg.workers);
        const nn::Tensor<float> maps = nn::first_layer_feature_maps(net, ep.input);
        const int F = maps.dim(0);
        const std::size_t plane = maps.size() / static_cast<std::size_t>(F);

        ojson outputs = ojson::array();
        for (int f = 0; f < F; ++f) {
            VoxelGrid g(ep.gs, 1);
            std::copy(maps.data.begin() + static_cast<std::ptrdiff_t>(f * plane),
                      maps.data.begin() + static_cast<std::ptrdiff_t>((f + 1) * plane),
                      g.data.begin());
            char tag[16];
            std::snprintf(tag, sizeof tag, "-f%02d", f);
            const fs::path vox = out / (rec.id + tag + ".vox");
            write_vox(g, vox.string());
            outputs.push_back(vox.string());

            RenderConfig rc;
            rc.view = Face::ZPos;
            rc.width = a.width;
            rc.height = a.height;
            const fs::path img = out / (rec.id + tag + "-z.ppm");
            write_ppm(raymarch_render(g, rc, a.cfg.workers), img.string());
            outputs.push_back(img.string());
            progress("featmaps", static_cast<std::size_t>(f) + 1,
                     static_cast<std::size_t>(F));
        }

        write_snapshot(a.cfg,
                       ojson{{"name", "featmaps"},
                             {"manifest", a.manifest},
                             {"model", a.model},
                             {"id", a.id},
                             {"out", out.string()}}
                           .dump(),
                       (out / (rec.id + ".featmaps.config.json")).string());

        ojson sum;
        sum["id"] = rec.id;
        sum["maps"] = F;
        sum["dims"] = {maps.dim(1), maps.dim(2), maps.dim(3)};
        sum["outputs"] = outputs;
        print_result(sum);
    } catch (const Error& e) {
        throw Error("record '" + rec.id + "': " + e.what());
    }
    return 0;
}

} // namespace voxdfm::cli
