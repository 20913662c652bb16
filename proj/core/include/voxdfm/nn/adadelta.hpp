#pragma once

#include "voxdfm/nn/tensor.hpp"

#include <cmath>
#include <vector>

namespace voxdfm::nn {

// ADADELTA keeps decaying averages of squared gradients and squared updates
// per parameter. Update order per step:
//   E[g2]  <- rho E[g2] + (1-rho) g^2
//   dx      = -sqrt(E[dx2] + eps) / sqrt(E[g2] + eps) * g   (old E[dx2], new E[g2])
//   E[dx2] <- rho E[dx2] + (1-rho) dx^2
//   x      <- x + dx
template <typename T>
struct Adadelta {
    T rho = T(0.95);
    T eps = T(1e-6);
    std::vector<Tensor<T>> eg2, edx2;

    void init(const std::vector<Tensor<T>*>& params) {
        eg2.clear();
        edx2.clear();
        for (const Tensor<T>* p : params) {
            eg2.push_back(Tensor<T>(p->shape));
            edx2.push_back(Tensor<T>(p->shape));
        }
    }

    void step(const std::vector<Tensor<T>*>& params, const std::vector<Tensor<T>>& grads) {
        if (params.size() != grads.size() || params.size() != eg2.size())
            throw ShapeMismatch("optimizer state does not match parameter list");
        for (std::size_t i = 0; i < params.size(); ++i) {
            Tensor<T>& x = *params[i];
            const Tensor<T>& g = grads[i];
            if (g.shape != x.shape) throw ShapeMismatch("gradient shape mismatch");
            Tensor<T>& a = eg2[i];
            Tensor<T>& d = edx2[i];
            for (std::size_t j = 0; j < x.size(); ++j) {
                const T gj = g.data[j];
                a.data[j] = rho * a.data[j] + (T(1) - rho) * gj * gj;
                const T dx = -std::sqrt(d.data[j] + eps) / std::sqrt(a.data[j] + eps) * gj;
                d.data[j] = rho * d.data[j] + (T(1) - rho) * dx * dx;
                x.data[j] += dx;
            }
        }
    }
};

} // namespace voxdfm::nn
