#pragma once

#include "voxdfm/nn/tensor.hpp"

#include <cmath>

namespace voxdfm::nn {

// Predictions are clamped into [kProbClamp, 1 - kProbClamp] before the logs
// so a saturated sigmoid can never produce inf.
inline constexpr double kProbClamp = 1e-7;

template <typename T>
T bce_loss(T label, T prob) {
    const T lo = T(kProbClamp), hi = T(1) - T(kProbClamp);
    const T p = prob < lo ? lo : (prob > hi ? hi : prob);
    return -(label * std::log(p) + (T(1) - label) * std::log(T(1) - p));
}

template <typename T>
T bce_grad(T label, T prob) {
    const T lo = T(kProbClamp), hi = T(1) - T(kProbClamp);
    if (prob < lo || prob > hi) return T(0); // inside the clamp: loss is flat
    return (prob - label) / (prob * (T(1) - prob));
}

// d(bce)/d(logit) with the sigmoid folded in. Deliberately NOT clamped: the
// clamp only guards the reported loss value. Zeroing this gradient in the
// saturated region would freeze training permanently the moment every
// prediction saturates (the optimizer then sees pure-zero gradients), whereas
// prob - label keeps a bounded recovery pull toward the correct class.
template <typename T>
T bce_logit_grad(T label, T prob) {
    return prob - label;
}

template <typename T>
T batch_bce(const Tensor<T>& labels, const Tensor<T>& probs) {
    if (labels.size() != probs.size()) throw ShapeMismatch("loss batch size mismatch");
    T sum = T(0);
    for (std::size_t i = 0; i < probs.size(); ++i)
        sum += bce_loss(labels.data[i], probs.data[i]);
    return sum / static_cast<T>(probs.size());
}

} // namespace voxdfm::nn
