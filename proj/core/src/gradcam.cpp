#include "voxdfm/gradcam.hpp"

#include "voxdfm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace voxdfm {

const char* to_string(CamClass c) {
    return c == CamClass::Manufacturable ? "manufacturable" : "non_manufacturable";
}

CamClass cam_class_from_string(const std::string& s) {
    if (s == "manufacturable") return CamClass::Manufacturable;
    if (s == "non_manufacturable") return CamClass::NonManufacturable;
    throw Error("unknown class '" + s + "'");
}

CamVolume cam_from_maps(const nn::Tensor<float>& maps, const nn::Tensor<float>& grads,
                        CamClass c) {
    if (maps.shape.size() != 4 || grads.shape != maps.shape)
        throw ShapeMismatch("maps and gradients must both be [F, D, H, W]");
    const int F = maps.dim(0);
    const std::size_t Z = maps.size() / static_cast<std::size_t>(F);

    CamVolume cam;
    cam.source_class = c;
    cam.feature_dims = {maps.dim(1), maps.dim(2), maps.dim(3)};
    cam.pool_size = static_cast<int>(Z);
    cam.values = nn::Tensor<float>({maps.dim(1), maps.dim(2), maps.dim(3)});

    for (int f = 0; f < F; ++f) {
        const float* m = maps.ptr() + static_cast<std::size_t>(f) * Z;
        const float* g = grads.ptr() + static_cast<std::size_t>(f) * Z;
        double alpha = 0.0;
        for (std::size_t i = 0; i < Z; ++i) alpha += g[i];
        alpha /= static_cast<double>(Z);
        for (std::size_t i = 0; i < Z; ++i)
            cam.values.data[i] += static_cast<float>(alpha) * m[i];
    }
    for (float& v : cam.values.data)
        if (v < 0.0f) v = 0.0f;
    return cam;
}

CamVolume grad_cam(nn::Network<float>& net, const nn::Tensor<float>& input, CamClass c) {
    if (input.shape.size() != 4) throw ShapeMismatch("expected one sample [C, D, H, W]");
    int conv = -1;
    for (std::size_t i = 0; i < net.layers.size(); ++i)
        if (std::holds_alternative<nn::Conv3d<float>>(net.layers[i]))
            conv = static_cast<int>(i);
    if (conv < 0) throw NoConvLayer("network has no conv layer to explain");

    nn::Tensor<float> batched({1, input.dim(0), input.dim(1), input.dim(2), input.dim(3)});
    batched.data = input.data;
    nn::Cache<float> cache;
    net.forward(batched, false, cache);

    const float seed = c == CamClass::Manufacturable ? 1.0f : -1.0f;
    const nn::Tensor<float> grads = net.backward_logit_to(cache, seed, conv);
    const nn::Tensor<float>& acts = cache.acts[static_cast<std::size_t>(conv) + 1];

    // Drop the singleton batch dim on both volumes.
    nn::Tensor<float> maps({acts.dim(1), acts.dim(2), acts.dim(3), acts.dim(4)});
    maps.data = acts.data;
    nn::Tensor<float> g({grads.dim(1), grads.dim(2), grads.dim(3), grads.dim(4)});
    g.data = grads.data;
    return cam_from_maps(maps, g, c);
}

nn::Tensor<float> trilinear_resample(const nn::Tensor<float>& volume,
                                     const std::array<int, 3>& target_dims) {
    if (volume.shape.size() != 3) throw ShapeMismatch("expected a [D, H, W] volume");
    for (int a = 0; a < 3; ++a) {
        if (volume.dim(a) < 2) throw ShapeMismatch("source dims must be >= 2 per axis");
        if (target_dims[static_cast<std::size_t>(a)] < 1)
            throw ShapeMismatch("target dims must be >= 1 per axis");
    }
    const int sd = volume.dim(0), sh = volume.dim(1), sw = volume.dim(2);
    const int td = target_dims[0], th = target_dims[1], tw = target_dims[2];

    // Corner-aligned: target index i maps to i * (Ns-1) / (Nt-1); a
    // single-sample target sits on the first corner.
    const auto coord = [](int i, int nt, int ns) {
        if (nt < 2) return 0.0;
        return static_cast<double>(i) * (ns - 1) / (nt - 1);
    };

    nn::Tensor<float> out({td, th, tw});
    std::size_t o = 0;
    for (int z = 0; z < td; ++z) {
        const double fz = coord(z, td, sd);
        const int z0 = std::min(static_cast<int>(fz), sd - 2);
        const double tz = fz - z0;
        for (int y = 0; y < th; ++y) {
            const double fy = coord(y, th, sh);
            const int y0 = std::min(static_cast<int>(fy), sh - 2);
            const double ty = fy - y0;
            for (int x = 0; x < tw; ++x, ++o) {
                const double fx = coord(x, tw, sw);
                const int x0 = std::min(static_cast<int>(fx), sw - 2);
                const double tx = fx - x0;

                const auto at = [&](int dz, int dy, int dx) {
                    return static_cast<double>(
                        volume.data[(static_cast<std::size_t>(z0 + dz) * sh + y0 + dy) * sw +
                                    x0 + dx]);
                };
                const double c00 = at(0, 0, 0) * (1 - tx) + at(0, 0, 1) * tx;
                const double c01 = at(0, 1, 0) * (1 - tx) + at(0, 1, 1) * tx;
                const double c10 = at(1, 0, 0) * (1 - tx) + at(1, 0, 1) * tx;
                const double c11 = at(1, 1, 0) * (1 - tx) + at(1, 1, 1) * tx;
                const double c0 = c00 * (1 - ty) + c01 * ty;
                const double c1 = c10 * (1 - ty) + c11 * ty;
                out.data[o] = static_cast<float>(c0 * (1 - tz) + c1 * tz);
            }
        }
    }
    return out;
}

VoxelGrid composite(const VoxelGrid& occ, const CamVolume& cam) {
    if (occ.channels != 1) throw SpecMismatch("composite wants a single-channel occupancy");
    if (cam.values.shape.size() != 3 || cam.values.dim(0) != occ.spec.nz ||
        cam.values.dim(1) != occ.spec.ny || cam.values.dim(2) != occ.spec.nx)
        throw SpecMismatch("activation volume does not match the occupancy grid");

    VoxelGrid out(occ.spec, 2);
    std::copy(occ.data.begin(), occ.data.end(), out.data.begin());

    float mx = 0.0f;
    for (float v : cam.values.data) mx = std::max(mx, v);
    const std::size_t cells = occ.spec.cell_count();
    if (mx > 0.0f)
        for (std::size_t i = 0; i < cells; ++i) out.data[cells + i] = cam.values.data[i] / mx;
    return out;
}

} // namespace voxdfm
