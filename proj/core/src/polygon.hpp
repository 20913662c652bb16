#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace voxdfm::detail {

// 2D vertex carrying the mesh index it stands for.
struct PolyPoint {
    double x = 0.0;
    double y = 0.0;
    std::uint32_t id = 0;
};

// Triangulates a polygon with hole loops. Each hole is joined to the
// enclosing boundary through a bridge edge from its rightmost vertex to the
// nearest visible boundary vertex, then the resulting simple polygon is ear
// clipped. Ring orientations are normalized internally. Returns triangles
// counter-clockwise in the (x, y) frame, as mesh-index triples.
//
// Throws NonManifoldGeometry when no valid bridge or ear exists (which is
// what overlapping or boundary-crossing openings degenerate to).
std::vector<std::array<std::uint32_t, 3>> triangulate_with_holes(
    std::vector<PolyPoint> outer, std::vector<std::vector<PolyPoint>> holes);

} // namespace voxdfm::detail
