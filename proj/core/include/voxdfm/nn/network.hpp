#pragma once

#include "voxdfm/nn/layers.hpp"
#include "voxdfm/nn/loss.hpp"
#include "voxdfm/rng.hpp"
#include "voxdfm/voxelgrid.hpp"

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

namespace voxdfm::nn {

template <typename T>
using Layer = std::variant<Conv3d<T>, BatchNorm<T>, MaxPool3d<T>, Dense<T>, Output<T>>;

namespace detail {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
} // namespace detail

// Everything the backward pass needs from a forward pass:
// acts[i] is the input of layer i, acts[layers.size()] the predicted
// probabilities, plus per-layer batchnorm and pooling caches.
template <typename T>
struct Cache {
    bool train = false;
    std::vector<Tensor<T>> acts;
    Tensor<T> logits;
    std::vector<typename BatchNorm<T>::Fwd> bn;
    std::vector<std::vector<std::size_t>> argmax;
};

// Classifier shape. Kernels default to the occupancy-only stack; callers
// building a normal-augmented network use default_arch to get (6, 3, 2).
struct ArchConfig {
    int input_channels = 1;
    int grid = 32;
    std::array<int, 3> kernels{8, 4, 2};
    std::array<int, 3> filters{8, 16, 32};
    int dense_units = 128;
    double bn_momentum = 0.1;
    double bn_eps = 1e-5;

    friend bool operator==(const ArchConfig&, const ArchConfig&) = default;
};

ArchConfig default_arch(EncodingKind kind, int grid);

template <typename T>
struct Network {
    std::vector<Layer<T>> layers;

    // train=true uses and updates batch statistics; train=false runs on the
    // running statistics and leaves the network untouched.
    Tensor<T> forward(const Tensor<T>& x, bool train, Cache<T>& cache) {
        cache.train = train;
        cache.acts.clear();
        cache.acts.reserve(layers.size() + 1);
        cache.bn.assign(layers.size(), {});
        cache.argmax.assign(layers.size(), {});
        cache.acts.push_back(x);
        for (std::size_t i = 0; i < layers.size(); ++i) {
            const Tensor<T>& in = cache.acts.back();
            Tensor<T> out = std::visit(
                detail::overloaded{
                    [&](Conv3d<T>& l) { return l.forward(in); },
                    [&](BatchNorm<T>& l) { return l.forward(in, train, cache.bn[i]); },
                    [&](MaxPool3d<T>& l) { return l.forward(in, cache.argmax[i]); },
                    [&](Dense<T>& l) { return l.forward(in); },
                    [&](Output<T>& l) { return l.forward(in, cache.logits); },
                },
                layers[i]);
            cache.acts.push_back(std::move(out));
        }
        return cache.acts.back();
    }

    std::vector<Tensor<T>*> parameters() {
        std::vector<Tensor<T>*> out;
        for (Layer<T>& layer : layers) {
            std::visit(detail::overloaded{
                           [&](Conv3d<T>& l) { out.push_back(&l.w); out.push_back(&l.b); },
                           [&](BatchNorm<T>& l) {
                               out.push_back(&l.gamma);
                               out.push_back(&l.beta);
                           },
                           [&](MaxPool3d<T>&) {},
                           [&](Dense<T>& l) { out.push_back(&l.w); out.push_back(&l.b); },
                           [&](Output<T>& l) { out.push_back(&l.w); out.push_back(&l.b); },
                       },
                       layer);
        }
        return out;
    }

    // Gradient of the mean BCE loss over the batch for every parameter,
    // ordered exactly like parameters().
    std::vector<Tensor<T>> backward(const Cache<T>& cache, const Tensor<T>& labels) const {
        const Tensor<T>& probs = cache.acts.back();
        if (labels.size() != probs.size())
            throw ShapeMismatch("label count does not match batch size");
        const T invn = T(1) / static_cast<T>(probs.size());
        Tensor<T> gz({static_cast<int>(probs.size())});
        for (std::size_t n = 0; n < probs.size(); ++n)
            gz.data[n] = bce_logit_grad(labels.data[n], probs.data[n]) * invn;
        std::vector<Tensor<T>> grads;
        backprop(cache, std::move(gz), -1, &grads);
        return grads;
    }

    // Gradient of (seed * logit) with respect to the output of layer
    // `stop_layer`, for explanation backprops that stop at a conv volume.
    Tensor<T> backward_logit_to(const Cache<T>& cache, T seed, int stop_layer) const {
        const Tensor<T>& probs = cache.acts.back();
        Tensor<T> gz({static_cast<int>(probs.size())});
        for (std::size_t n = 0; n < probs.size(); ++n) gz.data[n] = seed;
        return backprop(cache, std::move(gz), stop_layer, nullptr);
    }

    int first_conv() const { return find_conv(true); }
    int last_conv() const { return find_conv(false); }

private:
    int find_conv(bool first) const {
        int found = -1;
        for (std::size_t i = 0; i < layers.size(); ++i) {
            if (std::holds_alternative<Conv3d<T>>(layers[i])) {
                found = static_cast<int>(i);
                if (first) return found;
            }
        }
        if (found < 0) throw ShapeMismatch("network has no conv layer");
        return found;
    }

    // Walks layers above stop_layer from the logit down; g enters as the
    // per-sample logit gradient. Returns the gradient with respect to
    // acts[stop_layer + 1]; stop_layer = -1 reaches the network input.
    Tensor<T> backprop(const Cache<T>& cache, Tensor<T> g, int stop_layer,
                       std::vector<Tensor<T>>* grads_out) const {
        std::vector<Tensor<T>> grads;
        std::vector<std::size_t> slot(layers.size(), 0);
        for (std::size_t i = 0; i < layers.size(); ++i) {
            slot[i] = grads.size();
            std::visit(detail::overloaded{
                           [&](const Conv3d<T>& l) {
                               grads.push_back(Tensor<T>(l.w.shape));
                               grads.push_back(Tensor<T>(l.b.shape));
                           },
                           [&](const BatchNorm<T>& l) {
                               grads.push_back(Tensor<T>(l.gamma.shape));
                               grads.push_back(Tensor<T>(l.beta.shape));
                           },
                           [&](const MaxPool3d<T>&) {},
                           [&](const Dense<T>& l) {
                               grads.push_back(Tensor<T>(l.w.shape));
                               grads.push_back(Tensor<T>(l.b.shape));
                           },
                           [&](const Output<T>& l) {
                               grads.push_back(Tensor<T>(l.w.shape));
                               grads.push_back(Tensor<T>(l.b.shape));
                           },
                       },
                       layers[i]);
        }

        for (int i = static_cast<int>(layers.size()) - 1; i > stop_layer; --i) {
            const Tensor<T>& in = cache.acts[static_cast<std::size_t>(i)];
            const Tensor<T>& out = cache.acts[static_cast<std::size_t>(i) + 1];
            const std::size_t s = slot[static_cast<std::size_t>(i)];
            g = std::visit(
                detail::overloaded{
                    [&](const Conv3d<T>& l) {
                        return l.backward(in, out, g, grads[s], grads[s + 1]);
                    },
                    [&](const BatchNorm<T>& l) {
                        return l.backward(g, cache.bn[static_cast<std::size_t>(i)], grads[s],
                                          grads[s + 1]);
                    },
                    [&](const MaxPool3d<T>& l) {
                        return l.backward(in.shape, g,
                                          cache.argmax[static_cast<std::size_t>(i)]);
                    },
                    [&](const Dense<T>& l) {
                        return l.backward(in, out, g, grads[s], grads[s + 1]);
                    },
                    [&](const Output<T>& l) { return l.backward(in, g, grads[s], grads[s + 1]); },
                },
                layers[i]);
        }
        if (grads_out) *grads_out = std::move(grads);
        return g;
    }
};

// Three conv blocks (batchnorm after each, pooling after the first and the
// last), one hidden dense layer, one sigmoid output. Weights start uniform
// in +-sqrt(6 / (fan_in + fan_out)), biases zero, drawn from `seed`.
template <typename T>
Network<T> build_network(const ArchConfig& a, std::uint64_t seed) {
    Network<T> net;
    const int g2 = (a.grid + 1) / 2;
    const int g4 = (g2 + 1) / 2;

    net.layers.push_back(Conv3d<T>(a.input_channels, a.filters[0], a.kernels[0]));
    net.layers.push_back(BatchNorm<T>(a.filters[0], a.bn_momentum, a.bn_eps));
    net.layers.push_back(MaxPool3d<T>{});
    net.layers.push_back(Conv3d<T>(a.filters[0], a.filters[1], a.kernels[1]));
    net.layers.push_back(BatchNorm<T>(a.filters[1], a.bn_momentum, a.bn_eps));
    net.layers.push_back(Conv3d<T>(a.filters[1], a.filters[2], a.kernels[2]));
    net.layers.push_back(BatchNorm<T>(a.filters[2], a.bn_momentum, a.bn_eps));
    net.layers.push_back(MaxPool3d<T>{});
    net.layers.push_back(Dense<T>(a.filters[2] * g4 * g4 * g4, a.dense_units));
    net.layers.push_back(Output<T>(a.dense_units));

    SplitMix64 rng(seed);
    const auto fill = [&rng](Tensor<T>& w, double fan_in, double fan_out) {
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        for (T& v : w.data)
            v = static_cast<T>((2.0 * rng.next_double() - 1.0) * limit);
    };
    for (Layer<T>& layer : net.layers) {
        std::visit(detail::overloaded{
                       [&](Conv3d<T>& l) {
                           const double k3 = static_cast<double>(l.k) * l.k * l.k;
                           fill(l.w, l.in_ch * k3, l.out_ch * k3);
                       },
                       [&](Dense<T>& l) { fill(l.w, l.in_features, l.units); },
                       [&](Output<T>& l) { fill(l.w, l.in_features, 1.0); },
                       [](auto&) {},
                   },
                   layer);
    }
    return net;
}

// First conv layer's post-activation maps for one sample [C, D, H, W],
// each map divided by its own max (all-zero maps stay zero). [F, D, H, W].
template <typename T>
Tensor<T> first_layer_feature_maps(const Network<T>& net, const Tensor<T>& input) {
    if (input.shape.size() != 4) throw ShapeMismatch("expected one sample [C, D, H, W]");
    const Conv3d<T>& conv =
        std::get<Conv3d<T>>(net.layers[static_cast<std::size_t>(net.first_conv())]);
    Tensor<T> batched({1, input.dim(0), input.dim(1), input.dim(2), input.dim(3)});
    batched.data = input.data;
    const Tensor<T> maps = conv.forward(batched);

    Tensor<T> out({maps.dim(1), maps.dim(2), maps.dim(3), maps.dim(4)});
    out.data = maps.data;
    const std::size_t plane = out.size() / static_cast<std::size_t>(out.dim(0));
    for (int f = 0; f < out.dim(0); ++f) {
        T* p = out.ptr() + static_cast<std::size_t>(f) * plane;
        T mx = T(0);
        for (std::size_t i = 0; i < plane; ++i) mx = std::max(mx, p[i]);
        if (mx > T(0))
            for (std::size_t i = 0; i < plane; ++i) p[i] /= mx;
    }
    return out;
}

} // namespace voxdfm::nn
