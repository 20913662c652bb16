#pragma once

#include "voxdfm/nn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace testers {

// Central finite differences against an analytic gradient, elementwise.
// Relative error uses max(1, |fd|, |an|) so near-zero gradients are judged
// on absolute error. Everything runs in double; callers build their layers
// and losses in double too.
struct GradCheck {
    double max_rel = 0.0;
    std::size_t worst = 0;
    double fd_at_worst = 0.0;
    double an_at_worst = 0.0;
};

inline GradCheck fd_check(voxdfm::nn::Tensor<double>& x,
                          const voxdfm::nn::Tensor<double>& analytic,
                          const std::function<double()>& loss, double h = 1e-6) {
    GradCheck r;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x.data[i];
        x.data[i] = v + h;
        const double lp = loss();
        x.data[i] = v - h;
        const double lm = loss();
        x.data[i] = v;
        const double fd = (lp - lm) / (2.0 * h);
        const double an = analytic.data[i];
        const double rel = std::abs(fd - an) / std::max({1.0, std::abs(fd), std::abs(an)});
        if (rel > r.max_rel) {
            r.max_rel = rel;
            r.worst = i;
            r.fd_at_worst = fd;
            r.an_at_worst = an;
        }
    }
    return r;
}

// Deterministic pseudo-random fill in [lo, hi]. Values are also kept away
// from 0 by `gap` so ReLU kinks can't sit inside the finite-difference
// stencil.
inline void fill_random(voxdfm::nn::Tensor<double>& t, std::uint64_t seed, double lo,
                        double hi, double gap = 0.0) {
    std::uint64_t s = seed;
    auto next = [&s] {
        s += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    for (double& v : t.data) {
        const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        v = lo + u * (hi - lo);
        if (gap > 0.0 && std::abs(v) < gap) v = v < 0.0 ? v - gap : v + gap;
    }
}

// Fixed projection weights for scalar losses over multi-element outputs:
// L = sum_i c_i * y_i with c_i in [0.25, 1.0] (never zero, so every output
// element participates).
inline voxdfm::nn::Tensor<double> loss_weights(const std::vector<int>& shape,
                                               std::uint64_t seed) {
    voxdfm::nn::Tensor<double> c(shape);
    fill_random(c, seed, 0.25, 1.0);
    return c;
}

inline double weighted_sum(const voxdfm::nn::Tensor<double>& y,
                           const voxdfm::nn::Tensor<double>& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y.data[i] * c.data[i];
    return s;
}

} // namespace testers
