#include "voxdfm/nn/train.hpp"

#include "voxdfm/errors.hpp"
#include "voxdfm/nn/adadelta.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace voxdfm::nn {

namespace {

Tensor<float> make_batch(const std::vector<Sample>& set, const std::vector<std::uint32_t>& idx,
                         std::size_t from, std::size_t to, Tensor<float>& labels) {
    const Tensor<float>& first = set[idx[from]].voxels;
    if (first.shape.size() != 4)
        throw ShapeMismatch("samples must be [C, D, H, W] voxel tensors");
    std::vector<int> shape{static_cast<int>(to - from)};
    shape.insert(shape.end(), first.shape.begin(), first.shape.end());

    Tensor<float> x(shape);
    labels = Tensor<float>({static_cast<int>(to - from)});
    const std::size_t per = first.size();
    for (std::size_t n = 0; from + n < to; ++n) {
        const Sample& s = set[idx[from + n]];
        if (s.voxels.shape != first.shape)
            throw ShapeMismatch("all samples in a batch must share the voxel shape");
        std::copy(s.voxels.data.begin(), s.voxels.data.end(), x.data.begin() + n * per);
        labels.data[n] = s.label;
    }
    return x;
}

// Parameters plus batchnorm running statistics: everything that defines the
// network's inference behavior.
std::vector<Tensor<float>*> state_tensors(Network<float>& net) {
    std::vector<Tensor<float>*> out = net.parameters();
    for (Layer<float>& layer : net.layers) {
        if (auto* bn = std::get_if<BatchNorm<float>>(&layer)) {
            out.push_back(&bn->running_mean);
            out.push_back(&bn->running_var);
        }
    }
    return out;
}

} // namespace

void evaluate_loss(Network<float>& net, const std::vector<Sample>& records, int batch_size,
                   double& loss, double& accuracy) {
    if (records.empty()) throw EmptySplit("cannot evaluate an empty record set");
    if (batch_size < 1) throw Error("batch size must be positive");

    std::vector<std::uint32_t> idx(records.size());
    std::iota(idx.begin(), idx.end(), 0u);

    Cache<float> cache;
    double loss_sum = 0.0;
    std::int64_t correct = 0;
    for (std::size_t from = 0; from < records.size(); from += static_cast<std::size_t>(batch_size)) {
        const std::size_t to = std::min(records.size(), from + static_cast<std::size_t>(batch_size));
        Tensor<float> labels;
        const Tensor<float> x = make_batch(records, idx, from, to, labels);
        const Tensor<float> probs = net.forward(x, false, cache);
        for (std::size_t n = 0; n < probs.size(); ++n) {
            loss_sum += bce_loss(static_cast<double>(labels.data[n]),
                                 static_cast<double>(probs.data[n]));
            const bool pred = probs.data[n] >= 0.5f;
            const bool truth = labels.data[n] >= 0.5f;
            if (pred == truth) ++correct;
        }
    }
    loss = loss_sum / static_cast<double>(records.size());
    accuracy = static_cast<double>(correct) / static_cast<double>(records.size());
}

ConfusionMatrix evaluate(Network<float>& net, const std::vector<Sample>& records,
                         int batch_size) {
    if (records.empty()) throw EmptySplit("cannot evaluate an empty record set");
    if (batch_size < 1) throw Error("batch size must be positive");

    std::vector<std::uint32_t> idx(records.size());
    std::iota(idx.begin(), idx.end(), 0u);

    Cache<float> cache;
    ConfusionMatrix cm;
    for (std::size_t from = 0; from < records.size(); from += static_cast<std::size_t>(batch_size)) {
        const std::size_t to = std::min(records.size(), from + static_cast<std::size_t>(batch_size));
        Tensor<float> labels;
        const Tensor<float> x = make_batch(records, idx, from, to, labels);
        const Tensor<float> probs = net.forward(x, false, cache);
        for (std::size_t n = 0; n < probs.size(); ++n) {
            const bool pred = probs.data[n] >= 0.5f;
            const bool truth = labels.data[n] >= 0.5f;
            if (truth && pred) ++cm.tp;
            else if (truth) ++cm.fn;
            else if (pred) ++cm.fp;
            else ++cm.tn;
        }
    }
    return cm;
}

TrainResult train(Network<float>& net, const std::vector<Sample>& train_set,
                  const std::vector<Sample>& val_set, const TrainConfig& cfg,
                  const std::function<void(const EpochStats&)>& on_epoch) {
    if (train_set.empty()) throw EmptySplit("training split is empty");
    if (val_set.empty()) throw EmptySplit("validation split is empty");
    if (cfg.batch_size < 1) throw Error("batch size must be positive");
    if (cfg.patience < 1) throw Error("patience must be positive");
    if (cfg.max_epochs < 1) throw Error("max epochs must be positive");

    const std::vector<Tensor<float>*> params = net.parameters();
    Adadelta<float> opt;
    opt.init(params);

    SplitMix64 rng(cfg.seed);
    std::vector<std::uint32_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0u);

    TrainResult res;
    double best = std::numeric_limits<double>::infinity();
    int since_best = 0;
    std::vector<Tensor<float>> best_state;

    Cache<float> cache;
    const std::size_t bs = static_cast<std::size_t>(cfg.batch_size);
    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        shuffle(order, rng);

        double loss_sum = 0.0;
        std::int64_t correct = 0;
        std::size_t seen = 0;
        for (std::size_t from = 0; from < order.size(); from += bs) {
            const std::size_t to = std::min(order.size(), from + bs);
            if (to - from < 2) continue; // batch statistics undefined
            Tensor<float> labels;
            const Tensor<float> x = make_batch(train_set, order, from, to, labels);
            const Tensor<float> probs = net.forward(x, true, cache);
            for (std::size_t n = 0; n < probs.size(); ++n) {
                loss_sum += bce_loss(static_cast<double>(labels.data[n]),
                                     static_cast<double>(probs.data[n]));
                if ((probs.data[n] >= 0.5f) == (labels.data[n] >= 0.5f)) ++correct;
            }
            seen += to - from;
            const std::vector<Tensor<float>> grads = net.backward(cache, labels);
            opt.step(params, grads);
        }
        if (seen == 0)
            throw EmptySplit("batch size and split size leave no trainable minibatch");

        EpochStats st;
        st.epoch = epoch;
        st.train_loss = loss_sum / static_cast<double>(seen);
        st.train_accuracy = static_cast<double>(correct) / static_cast<double>(seen);
        evaluate_loss(net, val_set, cfg.batch_size, st.val_loss, st.val_accuracy);
        res.history.push_back(st);
        if (on_epoch) on_epoch(st);

        if (st.val_loss < best) {
            best = st.val_loss;
            res.best_epoch = epoch;
            since_best = 0;
            best_state.clear();
            for (const Tensor<float>* t : state_tensors(net)) best_state.push_back(*t);
        } else if (++since_best >= cfg.patience) {
            break;
        }
        if (cfg.train_accuracy_goal > 0.0 && st.train_accuracy >= cfg.train_accuracy_goal)
            break;
    }

    const std::vector<Tensor<float>*> state = state_tensors(net);
    for (std::size_t i = 0; i < state.size(); ++i) *state[i] = best_state[i];
    res.best_val_loss = best;
    return res;
}

void write_history(const std::string& path, const std::vector<EpochStats>& history) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    std::fputs("epoch,train_loss,train_accuracy,val_loss,val_accuracy\n", f);
    for (const EpochStats& st : history)
        std::fprintf(f, "%d,%.9g,%.9g,%.9g,%.9g\n", st.epoch, st.train_loss,
                     st.train_accuracy, st.val_loss, st.val_accuracy);
    if (std::fclose(f) != 0) throw IoError("write failed for '" + path + "'");
}

} // namespace voxdfm::nn
