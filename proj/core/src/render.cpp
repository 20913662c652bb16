#include "voxdfm/render.hpp"

#include "voxdfm/errors.hpp"
#include "voxdfm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace voxdfm {

namespace {

std::uint8_t lerp_byte(int a, int b, double t) {
    const long v = std::lround(a + (b - a) * t);
    return static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
}

// Trilinear clamp-to-edge lookup on the cell-center lattice of channel c.
float sample_channel(const VoxelGrid& vol, int c, const Vec3& p) {
    const GridSpec& gs = vol.spec;
    double gc[3];
    gc[0] = (p.x - gs.origin.x) / gs.spacing - 0.5;
    gc[1] = (p.y - gs.origin.y) / gs.spacing - 0.5;
    gc[2] = (p.z - gs.origin.z) / gs.spacing - 0.5;

    int i0[3], i1[3];
    double t[3];
    for (int a = 0; a < 3; ++a) {
        const int n = gs.dim(a);
        if (n == 1) {
            i0[a] = i1[a] = 0;
            t[a] = 0.0;
            continue;
        }
        const double f = std::floor(gc[a]);
        i0[a] = std::clamp(static_cast<int>(f), 0, n - 2);
        i1[a] = i0[a] + 1;
        t[a] = std::clamp(gc[a] - i0[a], 0.0, 1.0);
    }
    const auto at = [&](int x, int y, int z) {
        return static_cast<double>(vol.at(c, x, y, z));
    };
    const double c00 = at(i0[0], i0[1], i0[2]) * (1 - t[0]) + at(i1[0], i0[1], i0[2]) * t[0];
    const double c10 = at(i0[0], i1[1], i0[2]) * (1 - t[0]) + at(i1[0], i1[1], i0[2]) * t[0];
    const double c01 = at(i0[0], i0[1], i1[2]) * (1 - t[0]) + at(i1[0], i0[1], i1[2]) * t[0];
    const double c11 = at(i0[0], i1[1], i1[2]) * (1 - t[0]) + at(i1[0], i1[1], i1[2]) * t[0];
    const double c0 = c00 * (1 - t[1]) + c10 * t[1];
    const double c1 = c01 * (1 - t[1]) + c11 * t[1];
    return static_cast<float>(c0 * (1 - t[2]) + c1 * t[2]);
}

} // namespace

Rgb heat_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    if (t <= 0.5) {
        const double s = t / 0.5;
        return {lerp_byte(0, 0, s), lerp_byte(0, 255, s), lerp_byte(64, 255, s)};
    }
    const double s = (t - 0.5) / 0.5;
    return {lerp_byte(0, 255, s), lerp_byte(255, 32, s), lerp_byte(255, 32, s)};
}

Image raymarch_render(const VoxelGrid& vol, const RenderConfig& cfg, unsigned workers) {
    if (vol.channels != 1 && vol.channels != 2)
        throw SpecMismatch("render wants one occupancy channel plus at most one overlay");
    if (cfg.width < 1 || cfg.height < 1) throw Error("image size must be positive");
    const GridSpec& gs = vol.spec;
    const int axis = face_axis(cfg.view);
    const int ua = (axis + 1) % 3;
    const int va = (axis + 2) % 3;

    const int steps = cfg.samples_per_ray == 0 ? 2 * gs.dim(axis) : cfg.samples_per_ray;
    if (steps < gs.dim(axis))
        throw Error("samples_per_ray must cover the grid dim along the view axis");

    const Aabb box = gs.domain();
    const Vec3 ext = box.extent();

    if (workers == 0) workers = default_workers();
    const std::size_t npix = static_cast<std::size_t>(cfg.width) * cfg.height;
    std::vector<double> scalar(npix);
    parallel_for(npix, workers, [&](std::size_t pix) {
        const int px = static_cast<int>(pix % static_cast<std::size_t>(cfg.width));
        const int py = static_cast<int>(pix / static_cast<std::size_t>(cfg.width));
        const double u = box.lo[ua] + (px + 0.5) / cfg.width * ext[ua];
        const double v = box.hi[va] - (py + 0.5) / cfg.height * ext[va];
        double occ = 0.0, act = 0.0;
        for (int s = 0; s < steps; ++s) {
            const double a = box.lo[axis] + (s + 0.5) / steps * ext[axis];
            Vec3 p;
            p = axis == 0 ? Vec3{a, u, v} : (axis == 1 ? Vec3{v, a, u} : Vec3{u, v, a});
            occ += sample_channel(vol, 0, p);
            if (vol.channels > 1) act += sample_channel(vol, 1, p);
        }
        scalar[pix] = cfg.occupancy_weight * occ + cfg.activation_weight * act;
    });

    double mx = 0.0;
    for (double s : scalar) mx = std::max(mx, s);

    Image img;
    img.width = cfg.width;
    img.height = cfg.height;
    img.pixels.assign(npix, Rgb{});
    if (mx > 0.0)
        for (std::size_t i = 0; i < npix; ++i)
            if (scalar[i] > 0.0) img.pixels[i] = heat_color(scalar[i] / mx);
    return img;
}

void write_ppm(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    static_assert(sizeof(Rgb) == 3);
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size() * sizeof(Rgb)));
    out.close();
    if (!out) throw IoError("write failed for '" + path + "'");
}

} // namespace voxdfm
