#pragma once

#include "voxdfm/errors.hpp"

#include <cstddef>
#include <vector>

namespace voxdfm::nn {

// Dense row-major tensor. Rank is dynamic: conv activations are
// [batch, channels, depth, height, width], dense activations [batch, features].
template <typename T>
struct Tensor {
    std::vector<int> shape;
    std::vector<T> data;

    Tensor() = default;
    explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
        data.assign(numel(shape), T{});
    }

    static std::size_t numel(const std::vector<int>& s) {
        if (s.empty()) throw ShapeMismatch("tensor rank must be at least 1");
        std::size_t n = 1;
        for (const int d : s) {
            if (d <= 0) throw ShapeMismatch("tensor extents must be positive");
            n *= static_cast<std::size_t>(d);
        }
        return n;
    }

    std::size_t size() const { return data.size(); }
    int dim(int i) const { return shape[static_cast<std::size_t>(i)]; }
    T* ptr() { return data.data(); }
    const T* ptr() const { return data.data(); }

    friend bool operator==(const Tensor&, const Tensor&) = default;
};

} // namespace voxdfm::nn
