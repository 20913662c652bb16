#pragma once

#include "voxdfm/nn/network.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace voxdfm::nn {

struct TrainConfig {
    int batch_size = 16;
    int patience = 10;
    int max_epochs = 100;
    std::uint64_t seed = 0;
    double val_fraction = 0.25;
    // Optional extra stop: end training once the rolling training accuracy
    // of an epoch reaches this value. 0 disables it.
    double train_accuracy_goal = 0.0;
};

// One labeled voxel tensor [C, D, H, W]; label 1 = manufacturable.
struct Sample {
    Tensor<float> voxels;
    float label = 0.0f;
};

struct EpochStats {
    int epoch = 0; // 1-based
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    double val_loss = 0.0;
    double val_accuracy = 0.0;
};

struct TrainResult {
    std::vector<EpochStats> history;
    int best_epoch = 0; // 1-based epoch whose parameters the net now holds
    double best_val_loss = 0.0;
};

// Seeded-shuffled minibatch epochs with ADADELTA; stops after `patience`
// epochs without a validation-loss improvement or at max_epochs, and leaves
// the network holding the best-validation-epoch state (including batchnorm
// running statistics). Remainder batches of one sample are dropped because
// batch statistics are undefined for them. `on_epoch` fires after every
// completed epoch (progress reporting; must not touch the network).
TrainResult train(Network<float>& net, const std::vector<Sample>& train_set,
                  const std::vector<Sample>& val_set, const TrainConfig& cfg,
                  const std::function<void(const EpochStats&)>& on_epoch = {});

struct ConfusionMatrix {
    std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;
    std::int64_t total() const { return tp + tn + fp + fn; }
    double accuracy() const {
        return total() == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(total());
    }
};

// prob >= 0.5 predicts manufacturable; positive class = manufacturable.
ConfusionMatrix evaluate(Network<float>& net, const std::vector<Sample>& records,
                         int batch_size = 16);

// Mean BCE and accuracy of a labeled set under the current parameters.
void evaluate_loss(Network<float>& net, const std::vector<Sample>& records, int batch_size,
                   double& loss, double& accuracy);

// One CSV line per epoch: epoch,train_loss,train_accuracy,val_loss,val_accuracy.
void write_history(const std::string& path, const std::vector<EpochStats>& history);

} // namespace voxdfm::nn
