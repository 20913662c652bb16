#pragma once

#include "voxdfm/voxelgrid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace voxdfm {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Row-major, top row first.
struct Image {
    int width = 0, height = 0;
    std::vector<Rgb> pixels;

    Rgb& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    Rgb at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    friend bool operator==(const Image&, const Image&) = default;
};

// Orthographic view along a face normal. Pixel columns run along the
// face's u axis ascending, rows along v descending (v points up on
// screen); u, v follow face_axes. samples_per_ray = 0 means twice the
// grid dim along the view axis; explicit values below that dim are
// rejected, coarser-than-grid marching skips cells.
struct RenderConfig {
    Face view = Face::ZNeg;
    int width = 256, height = 256;
    int samples_per_ray = 0;
    double occupancy_weight = 1.0;
    double activation_weight = 1.0;
};

// Heat scale used for the rendered scalars: 0 -> (0,0,64),
// 0.5 -> (0,255,255), 1 -> (255,32,32), linear between the stops.
Rgb heat_color(double t);

// One ray per pixel, trilinear clamp-to-edge samples at the centers of
// `samples_per_ray` equal intervals, per-ray scalar
//   occupancy_weight * sum(ch 0) + activation_weight * sum(ch 1, if any),
// normalized by the image-wide maximum. Rays that sum to exactly zero
// stay black, everything else maps through heat_color. Deterministic for
// any worker count.
Image raymarch_render(const VoxelGrid& vol, const RenderConfig& cfg, unsigned workers = 0);

// Binary PPM (P6), 8-bit RGB.
void write_ppm(const Image& img, const std::string& path);

} // namespace voxdfm
