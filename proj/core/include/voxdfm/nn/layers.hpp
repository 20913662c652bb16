#pragma once

#include "voxdfm/nn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace voxdfm::nn {

// Stride-1 3D cross-correlation with zero padding low (k-1)/2, high k-(k-1)/2-1,
// so spatial dims are preserved for every kernel size. ReLU is part of the op.
template <typename T>
struct Conv3d {
    int in_ch = 1, out_ch = 1, k = 1;
    Tensor<T> w; // [out_ch, in_ch, k, k, k]
    Tensor<T> b; // [out_ch]

    Conv3d() = default;
    Conv3d(int ic, int oc, int kernel)
        : in_ch(ic), out_ch(oc), k(kernel),
          w(Tensor<T>({oc, ic, kernel, kernel, kernel})), b(Tensor<T>({oc})) {
        if (ic < 1 || oc < 1 || kernel < 1) throw ShapeMismatch("bad conv configuration");
    }

    void check_input(const Tensor<T>& x) const {
        if (x.shape.size() != 5 || x.dim(1) != in_ch)
            throw ShapeMismatch("conv input must be [N, in_ch, D, H, W]");
    }

    // Copies one sample's channels into a border of zeros so the hot loops
    // below run full rows with no bounds logic. lo is the border before
    // index 0; the padded dims are D+lo+hi etc.
    static void pad_sample(const T* src, std::vector<T>& dst, int ch, int D, int H, int W,
                           int lo, int hi) {
        const int Dp = D + lo + hi, Hp = H + lo + hi, Wp = W + lo + hi;
        dst.assign(static_cast<std::size_t>(ch) * Dp * Hp * Wp, T(0));
        for (int c = 0; c < ch; ++c)
            for (int z = 0; z < D; ++z)
                for (int yy = 0; yy < H; ++yy) {
                    const T* s = src + ((static_cast<std::size_t>(c) * D + z) * H + yy) * W;
                    T* d = dst.data() +
                           ((static_cast<std::size_t>(c) * Dp + z + lo) * Hp + yy + lo) * Wp + lo;
                    std::copy(s, s + W, d);
                }
    }

    Tensor<T> forward(const Tensor<T>& x) const {
        check_input(x);
        const int N = x.dim(0), D = x.dim(2), H = x.dim(3), W = x.dim(4);
        const int pad = (k - 1) / 2;
        const std::size_t plane = static_cast<std::size_t>(D) * H * W;
        const int Hp = H + k - 1, Wp = W + k - 1;

        Tensor<T> y({N, out_ch, D, H, W});
        std::vector<T> xpad;
        // Accumulator plane in the padded x layout; the pad columns collect
        // junk that never leaves the buffer. One long run per weight beats
        // per-row loops on setup cost.
        std::vector<T> acc(static_cast<std::size_t>(Hp) * Wp);
        const std::size_t run = static_cast<std::size_t>(H - 1) * Wp + W;
        for (int n = 0; n < N; ++n) {
            pad_sample(x.ptr() + static_cast<std::size_t>(n) * in_ch * plane, xpad, in_ch,
                       D, H, W, pad, k - 1 - pad);
            for (int co = 0; co < out_ch; ++co) {
                T* yp = y.ptr() + (static_cast<std::size_t>(n) * out_ch + co) * plane;
                const T* wco = w.ptr() + static_cast<std::size_t>(co) * in_ch * k * k * k;
                T* __restrict ap = acc.data();
                for (int oz = 0; oz < D; ++oz) {
                    std::fill(acc.begin(), acc.end(), b.data[co]);
                    for (int ci = 0; ci < in_ch; ++ci)
                        for (int dz = 0; dz < k; ++dz) {
                            const T* xplane =
                                xpad.data() +
                                (static_cast<std::size_t>(ci) * (D + k - 1) + oz + dz) * Hp * Wp;
                            const T* wp = wco + ((static_cast<std::size_t>(ci) * k + dz)) * k * k;
                            for (int dy = 0; dy < k; ++dy)
                                for (int dx = 0; dx < k; ++dx) {
                                    const T wv = wp[dy * k + dx];
                                    const T* __restrict xs = xplane + dy * Wp + dx;
                                    for (std::size_t j = 0; j < run; ++j) ap[j] += wv * xs[j];
                                }
                        }
                    T* orow = yp + static_cast<std::size_t>(oz) * H * W;
                    for (int oy = 0; oy < H; ++oy, orow += W) {
                        const T* arow = ap + static_cast<std::size_t>(oy) * Wp;
                        for (int ox = 0; ox < W; ++ox) orow[ox] = arow[ox] > T(0) ? arow[ox] : T(0);
                    }
                }
            }
        }
        return y;
    }

    // gw/gb must be pre-zeroed gradient tensors of the parameter shapes.
    Tensor<T> backward(const Tensor<T>& x, const Tensor<T>& y, const Tensor<T>& gy,
                       Tensor<T>& gw, Tensor<T>& gb) const {
        check_input(x);
        if (gy.shape != y.shape) throw ShapeMismatch("conv grad shape mismatch");
        const int N = x.dim(0), D = x.dim(2), H = x.dim(3), W = x.dim(4);
        const int pad = (k - 1) / 2;
        const std::size_t plane = static_cast<std::size_t>(D) * H * W;

        // dReLU: pass gradient only where the activation survived.
        Tensor<T> g = gy;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (y.data[i] <= T(0)) g.data[i] = T(0);

        Tensor<T> gx(x.shape);
        std::vector<T> xpad, gpad, gwide;
        const int Hp = H + k - 1, Wp = W + k - 1;
        // Full correlation of g with the kernel needs k-1 of slack on the
        // low side as well.
        const int Hg = H + 2 * (k - 1), Wg = W + 2 * (k - 1);
        const std::size_t run = static_cast<std::size_t>(H - 1) * Wp + W;
        const std::size_t grun = static_cast<std::size_t>(H - 1) * Wg + W;
        std::vector<T> acc(static_cast<std::size_t>(H) * Wg);
        for (int n = 0; n < N; ++n) {
            const T* gn = g.ptr() + static_cast<std::size_t>(n) * out_ch * plane;
            for (int co = 0; co < out_ch; ++co) {
                const T* gp = gn + static_cast<std::size_t>(co) * plane;
                T bsum = T(0);
                for (std::size_t i = 0; i < plane; ++i) bsum += gp[i];
                gb.data[co] += bsum;
            }

            // Weight gradients: plane-long dot products of the gradient
            // against shifted input planes. g is re-laid-out with the padded
            // row stride so both sides index with one running j; its pad
            // columns are zero and contribute nothing.
            pad_sample(x.ptr() + static_cast<std::size_t>(n) * in_ch * plane, xpad, in_ch,
                       D, H, W, pad, k - 1 - pad);
            pad_sample(gn, gwide, out_ch, D, H, W, 0, k - 1);
            for (int co = 0; co < out_ch; ++co)
                for (int ci = 0; ci < in_ch; ++ci) {
                    T* gwp = gw.ptr() + (static_cast<std::size_t>(co) * in_ch + ci) * k * k * k;
                    for (int dz = 0; dz < k; ++dz)
                        for (int oz = 0; oz < D; ++oz) {
                            const T* __restrict gplane =
                                gwide.data() +
                                (static_cast<std::size_t>(co) * (D + k - 1) + oz) * Hp * Wp;
                            const T* xplane =
                                xpad.data() +
                                (static_cast<std::size_t>(ci) * (D + k - 1) + oz + dz) * Hp * Wp;
                            for (int dy = 0; dy < k; ++dy)
                                for (int dx = 0; dx < k; ++dx) {
                                    const T* __restrict xs = xplane + dy * Wp + dx;
                                    // Fixed-lane partial sums; a single
                                    // accumulator would serialize on the
                                    // FMA latency and defeat SIMD.
                                    constexpr int kLanes = 16;
                                    T part[kLanes] = {};
                                    std::size_t j = 0;
                                    for (; j + kLanes <= run; j += kLanes)
                                        for (int l = 0; l < kLanes; ++l)
                                            part[l] += gplane[j + l] * xs[j + l];
                                    T s = T(0);
                                    for (; j < run; ++j) s += gplane[j] * xs[j];
                                    for (int l = 0; l < kLanes; ++l) s += part[l];
                                    gwp[(dz * k + dy) * k + dx] += s;
                                }
                        }
                }

            // Input gradients: full correlation with the flipped kernel,
            // accumulated per input plane.
            pad_sample(gn, gpad, out_ch, D, H, W, k - 1, k - 1);
            for (int ci = 0; ci < in_ch; ++ci) {
                T* gxp = gx.ptr() + (static_cast<std::size_t>(n) * in_ch + ci) * plane;
                T* __restrict ap = acc.data();
                for (int iz = 0; iz < D; ++iz) {
                    std::fill(acc.begin(), acc.end(), T(0));
                    for (int co = 0; co < out_ch; ++co) {
                        const T* wp =
                            w.ptr() + (static_cast<std::size_t>(co) * in_ch + ci) * k * k * k;
                        for (int dz = 0; dz < k; ++dz) {
                            const T* gplane =
                                gpad.data() +
                                (static_cast<std::size_t>(co) * (D + 2 * (k - 1)) + iz + k - 1 -
                                 dz + pad) * Hg * Wg;
                            for (int dy = 0; dy < k; ++dy)
                                for (int dx = 0; dx < k; ++dx) {
                                    const T wv = wp[(dz * k + dy) * k + dx];
                                    const T* __restrict gs =
                                        gplane + (k - 1 - dy + pad) * Wg + k - 1 - dx + pad;
                                    for (std::size_t j = 0; j < grun; ++j) ap[j] += wv * gs[j];
                                }
                        }
                    }
                    T* gxrow = gxp + static_cast<std::size_t>(iz) * H * W;
                    for (int iy = 0; iy < H; ++iy, gxrow += W) {
                        const T* arow = ap + static_cast<std::size_t>(iy) * Wg;
                        std::copy(arow, arow + W, gxrow);
                    }
                }
            }
        }
        return gx;
    }
};

// Per-channel normalization over batch and spatial dims, biased variance,
// then scale/shift. Running statistics track the batch statistics with an
// exponential moving average and serve inference.
template <typename T>
struct BatchNorm {
    int channels = 1;
    double momentum = 0.1;
    double eps = 1e-5;
    Tensor<T> gamma, beta, running_mean, running_var;

    struct Fwd {
        bool train = false;
        Tensor<T> xhat;
        std::vector<T> invstd;
    };

    BatchNorm() = default;
    explicit BatchNorm(int ch, double mom = 0.1, double epsilon = 1e-5)
        : channels(ch), momentum(mom), eps(epsilon), gamma(Tensor<T>({ch})),
          beta(Tensor<T>({ch})), running_mean(Tensor<T>({ch})),
          running_var(Tensor<T>({ch})) {
        if (ch < 1) throw ShapeMismatch("bad batchnorm channel count");
        std::fill(gamma.data.begin(), gamma.data.end(), T(1));
        std::fill(running_var.data.begin(), running_var.data.end(), T(1));
    }

    void check_input(const Tensor<T>& x) const {
        if (x.shape.size() < 2 || x.dim(1) != channels)
            throw ShapeMismatch("batchnorm input must be [N, channels, ...]");
    }

    Tensor<T> forward(const Tensor<T>& x, bool train, Fwd& cache) {
        check_input(x);
        const int N = x.dim(0);
        if (train && N < 2) throw DegenerateBatch("batchnorm needs batch size >= 2 to train");
        const std::size_t spatial = x.size() / (static_cast<std::size_t>(N) * channels);
        const std::size_t m = static_cast<std::size_t>(N) * spatial;

        cache.train = train;
        cache.xhat = Tensor<T>(x.shape);
        cache.invstd.assign(static_cast<std::size_t>(channels), T(0));

        Tensor<T> y(x.shape);
        for (int c = 0; c < channels; ++c) {
            T mean, var;
            if (train) {
                T s = T(0);
                for (int n = 0; n < N; ++n) {
                    const T* xp = x.ptr() + (static_cast<std::size_t>(n) * channels + c) * spatial;
                    for (std::size_t i = 0; i < spatial; ++i) s += xp[i];
                }
                mean = s / static_cast<T>(m);
                T v = T(0);
                for (int n = 0; n < N; ++n) {
                    const T* xp = x.ptr() + (static_cast<std::size_t>(n) * channels + c) * spatial;
                    for (std::size_t i = 0; i < spatial; ++i) {
                        const T d = xp[i] - mean;
                        v += d * d;
                    }
                }
                var = v / static_cast<T>(m);
                running_mean.data[c] =
                    T(1.0 - momentum) * running_mean.data[c] + T(momentum) * mean;
                running_var.data[c] =
                    T(1.0 - momentum) * running_var.data[c] + T(momentum) * var;
            } else {
                mean = running_mean.data[c];
                var = running_var.data[c];
            }
            const T invstd = T(1) / std::sqrt(var + T(eps));
            cache.invstd[static_cast<std::size_t>(c)] = invstd;
            const T g = gamma.data[c], bt = beta.data[c];
            for (int n = 0; n < N; ++n) {
                const std::size_t base = (static_cast<std::size_t>(n) * channels + c) * spatial;
                const T* xp = x.ptr() + base;
                T* hp = cache.xhat.ptr() + base;
                T* yp = y.ptr() + base;
                for (std::size_t i = 0; i < spatial; ++i) {
                    hp[i] = (xp[i] - mean) * invstd;
                    yp[i] = g * hp[i] + bt;
                }
            }
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& gy, const Fwd& cache, Tensor<T>& ggamma,
                       Tensor<T>& gbeta) const {
        if (gy.shape != cache.xhat.shape) throw ShapeMismatch("batchnorm grad shape mismatch");
        const int N = gy.dim(0);
        const std::size_t spatial = gy.size() / (static_cast<std::size_t>(N) * channels);
        const std::size_t m = static_cast<std::size_t>(N) * spatial;

        Tensor<T> gx(gy.shape);
        for (int c = 0; c < channels; ++c) {
            const T g = gamma.data[c];
            const T invstd = cache.invstd[static_cast<std::size_t>(c)];
            T sum_gy = T(0), sum_gy_xhat = T(0);
            for (int n = 0; n < N; ++n) {
                const std::size_t base = (static_cast<std::size_t>(n) * channels + c) * spatial;
                const T* gp = gy.ptr() + base;
                const T* hp = cache.xhat.ptr() + base;
                for (std::size_t i = 0; i < spatial; ++i) {
                    sum_gy += gp[i];
                    sum_gy_xhat += gp[i] * hp[i];
                }
            }
            ggamma.data[c] += sum_gy_xhat;
            gbeta.data[c] += sum_gy;
            for (int n = 0; n < N; ++n) {
                const std::size_t base = (static_cast<std::size_t>(n) * channels + c) * spatial;
                const T* gp = gy.ptr() + base;
                const T* hp = cache.xhat.ptr() + base;
                T* op = gx.ptr() + base;
                if (cache.train) {
                    // d/dx of the full batch statistic path
                    const T k1 = g * invstd / static_cast<T>(m);
                    for (std::size_t i = 0; i < spatial; ++i)
                        op[i] = k1 * (static_cast<T>(m) * gp[i] - sum_gy - hp[i] * sum_gy_xhat);
                } else {
                    // running stats are constants at inference
                    const T k1 = g * invstd;
                    for (std::size_t i = 0; i < spatial; ++i) op[i] = k1 * gp[i];
                }
            }
        }
        return gx;
    }
};

// Non-overlapping 2^3 window maxima, stride 2. Odd extents behave as if
// padded high with -inf: the clipped window just has fewer candidates.
// Ties go to the lowest linear index.
template <typename T>
struct MaxPool3d {
    static std::vector<int> out_shape(const std::vector<int>& in) {
        if (in.size() != 5) throw ShapeMismatch("maxpool input must be [N, C, D, H, W]");
        return {in[0], in[1], (in[2] + 1) / 2, (in[3] + 1) / 2, (in[4] + 1) / 2};
    }

    Tensor<T> forward(const Tensor<T>& x, std::vector<std::size_t>& argmax) const {
        Tensor<T> y(out_shape(x.shape));
        const int N = x.dim(0), C = x.dim(1), D = x.dim(2), H = x.dim(3), W = x.dim(4);
        const int OD = y.dim(2), OH = y.dim(3), OW = y.dim(4);
        argmax.assign(y.size(), 0);

        std::size_t oi = 0;
        for (int nc = 0; nc < N * C; ++nc) {
            const T* xp = x.ptr() + static_cast<std::size_t>(nc) * D * H * W;
            const std::size_t base = static_cast<std::size_t>(nc) * D * H * W;
            for (int oz = 0; oz < OD; ++oz) {
                for (int oy = 0; oy < OH; ++oy) {
                    for (int ox = 0; ox < OW; ++ox, ++oi) {
                        T best{};
                        std::size_t best_idx = 0;
                        bool first = true;
                        for (int dz = 0; dz < 2; ++dz) {
                            const int iz = 2 * oz + dz;
                            if (iz >= D) break;
                            for (int dy = 0; dy < 2; ++dy) {
                                const int iy = 2 * oy + dy;
                                if (iy >= H) break;
                                for (int dx = 0; dx < 2; ++dx) {
                                    const int ix = 2 * ox + dx;
                                    if (ix >= W) break;
                                    const std::size_t idx =
                                        (static_cast<std::size_t>(iz) * H + iy) * W + ix;
                                    if (first || xp[idx] > best) {
                                        best = xp[idx];
                                        best_idx = idx;
                                        first = false;
                                    }
                                }
                            }
                        }
                        y.data[oi] = best;
                        argmax[oi] = base + best_idx;
                    }
                }
            }
        }
        return y;
    }

    Tensor<T> backward(const std::vector<int>& in_shape, const Tensor<T>& gy,
                       const std::vector<std::size_t>& argmax) const {
        if (gy.size() != argmax.size()) throw ShapeMismatch("maxpool grad shape mismatch");
        Tensor<T> gx(in_shape);
        for (std::size_t i = 0; i < gy.size(); ++i) gx.data[argmax[i]] += gy.data[i];
        return gx;
    }
};

// Fully connected + ReLU. Flattens whatever comes in to [N, in_features].
template <typename T>
struct Dense {
    int in_features = 1, units = 1;
    Tensor<T> w; // [units, in_features]
    Tensor<T> b; // [units]

    Dense() = default;
    Dense(int in, int out)
        : in_features(in), units(out), w(Tensor<T>({out, in})), b(Tensor<T>({out})) {
        if (in < 1 || out < 1) throw ShapeMismatch("bad dense configuration");
    }

    void check_input(const Tensor<T>& x) const {
        const int N = x.dim(0);
        if (x.size() != static_cast<std::size_t>(N) * in_features)
            throw ShapeMismatch("dense input feature count mismatch");
    }

    Tensor<T> forward(const Tensor<T>& x) const {
        check_input(x);
        const int N = x.dim(0);
        Tensor<T> y({N, units});
        for (int n = 0; n < N; ++n) {
            const T* xp = x.ptr() + static_cast<std::size_t>(n) * in_features;
            for (int u = 0; u < units; ++u) {
                const T* wp = w.ptr() + static_cast<std::size_t>(u) * in_features;
                T acc = b.data[u];
                for (int f = 0; f < in_features; ++f) acc += wp[f] * xp[f];
                y.data[static_cast<std::size_t>(n) * units + u] = acc > T(0) ? acc : T(0);
            }
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& x, const Tensor<T>& y, const Tensor<T>& gy,
                       Tensor<T>& gw, Tensor<T>& gb) const {
        check_input(x);
        const int N = x.dim(0);
        Tensor<T> gx(x.shape);
        for (int n = 0; n < N; ++n) {
            const T* xp = x.ptr() + static_cast<std::size_t>(n) * in_features;
            T* gxp = gx.ptr() + static_cast<std::size_t>(n) * in_features;
            for (int u = 0; u < units; ++u) {
                const std::size_t yi = static_cast<std::size_t>(n) * units + u;
                if (y.data[yi] <= T(0)) continue;
                const T g = gy.data[yi];
                if (g == T(0)) continue;
                gb.data[u] += g;
                const T* wp = w.ptr() + static_cast<std::size_t>(u) * in_features;
                T* gwp = gw.ptr() + static_cast<std::size_t>(u) * in_features;
                for (int f = 0; f < in_features; ++f) {
                    gwp[f] += g * xp[f];
                    gxp[f] += g * wp[f];
                }
            }
        }
        return gx;
    }
};

// Single sigmoid unit producing the manufacturability probability.
template <typename T>
struct Output {
    int in_features = 1;
    Tensor<T> w; // [1, in_features]
    Tensor<T> b; // [1]

    Output() = default;
    explicit Output(int in)
        : in_features(in), w(Tensor<T>({1, in})), b(Tensor<T>({1})) {
        if (in < 1) throw ShapeMismatch("bad output configuration");
    }

    void check_input(const Tensor<T>& x) const {
        const int N = x.dim(0);
        if (x.size() != static_cast<std::size_t>(N) * in_features)
            throw ShapeMismatch("output layer input feature count mismatch");
    }

    // probs [N]; logits cached for the loss/seed backward entry points
    Tensor<T> forward(const Tensor<T>& x, Tensor<T>& logits) const {
        check_input(x);
        const int N = x.dim(0);
        logits = Tensor<T>({N});
        Tensor<T> y({N});
        for (int n = 0; n < N; ++n) {
            const T* xp = x.ptr() + static_cast<std::size_t>(n) * in_features;
            T acc = b.data[0];
            for (int f = 0; f < in_features; ++f) acc += w.data[f] * xp[f];
            logits.data[n] = acc;
            y.data[n] = T(1) / (T(1) + std::exp(-acc));
        }
        return y;
    }

    // gz: gradient at the logit, one per sample
    Tensor<T> backward(const Tensor<T>& x, const Tensor<T>& gz, Tensor<T>& gw,
                       Tensor<T>& gb) const {
        check_input(x);
        const int N = x.dim(0);
        if (gz.size() != static_cast<std::size_t>(N))
            throw ShapeMismatch("output grad shape mismatch");
        Tensor<T> gx(x.shape);
        for (int n = 0; n < N; ++n) {
            const T g = gz.data[n];
            if (g == T(0)) continue;
            gb.data[0] += g;
            const T* xp = x.ptr() + static_cast<std::size_t>(n) * in_features;
            T* gxp = gx.ptr() + static_cast<std::size_t>(n) * in_features;
            for (int f = 0; f < in_features; ++f) {
                gw.data[f] += g * xp[f];
                gxp[f] += g * w.data[f];
            }
        }
        return gx;
    }
};

} // namespace voxdfm::nn
