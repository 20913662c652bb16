#include "voxdfm/trimesh.hpp"

#include "voxdfm/errors.hpp"

#include <cstdio>
#include <unordered_map>

namespace voxdfm {

Aabb mesh_bounds(const TriMesh& mesh) {
    if (mesh.vertices.empty()) return {};
    Aabb box{mesh.vertices[0], mesh.vertices[0]};
    for (const Vec3& v : mesh.vertices) box.expand(v);
    return box;
}

double signed_volume(const TriMesh& mesh) {
    double vol = 0.0;
    for (const auto& t : mesh.triangles) {
        const Vec3& a = mesh.vertices[t[0]];
        const Vec3& b = mesh.vertices[t[1]];
        const Vec3& c = mesh.vertices[t[2]];
        vol += dot(a, cross(b, c));
    }
    return vol / 6.0;
}

bool is_watertight(const TriMesh& mesh) {
    // key: undirected edge; value: {uses, forward minus backward uses}
    std::unordered_map<std::uint64_t, std::pair<int, int>> edges;
    edges.reserve(mesh.triangles.size() * 3);
    for (const auto& t : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            const std::uint32_t a = t[e], b = t[(e + 1) % 3];
            if (a == b) return false;
            const std::uint64_t key =
                (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
            auto& slot = edges[key];
            slot.first += 1;
            slot.second += a < b ? 1 : -1;
        }
    }
    for (const auto& [key, slot] : edges) {
        (void)key;
        if (slot.first != 2 || slot.second != 0) return false;
    }
    return true;
}

void write_obj(const TriMesh& mesh, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw IoError("cannot open for writing: " + path);
    for (const Vec3& v : mesh.vertices)
        std::fprintf(f, "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
    for (const auto& t : mesh.triangles)
        std::fprintf(f, "f %u %u %u\n", t[0] + 1, t[1] + 1, t[2] + 1);
    if (std::fclose(f) != 0) throw IoError("write failed: " + path);
}

} // namespace voxdfm
