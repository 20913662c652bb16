#include "voxdfm/voxelize.hpp"

#include "voxdfm/errors.hpp"
#include "voxdfm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace voxdfm {

namespace {

double get(const Vec3& v, int i) { return i == 0 ? v.x : (i == 1 ? v.y : v.z); }

// Triangle pre-projected onto the column plane of the cast axis.
// u, v are the lateral coordinates, w runs along the ray. area2 is the
// signed doubled area in the projection; zero-area triangles are dropped
// before this struct is built.
struct ProjTri {
    double u[3], v[3], w[3];
    double area2;
};

constexpr int kHit = 1, kMiss = 0, kGraze = -1;

// One edge function a*b - c*d plus the rounding bound of that expression.
// An |e| inside the bound has an untrustworthy sign: the neighbouring
// triangle evaluates the shared edge with different operands and may
// disagree, which would lose or double-count a crossing.
struct EdgeFn {
    double e, tol;
};

EdgeFn edge_fn(double u0, double v0, double u1, double v1, double pu, double pv) {
    const double ab = (u1 - u0) * (pv - v0);
    const double cd = (v1 - v0) * (pu - u0);
    constexpr double kTolScale = 4.0 * std::numeric_limits<double>::epsilon();
    return {ab - cd, kTolScale * (std::abs(ab) + std::abs(cd))};
}

// Classifies the ray at (pu, pv) against one projected triangle.
// kGraze means the ray meets the triangle's projected boundary as far as
// double rounding can tell; the caller retries the whole column with an
// offset large enough to clear the uncertainty band.
int classify(const ProjTri& t, double pu, double pv, double& t_out) {
    const EdgeFn f0 = edge_fn(t.u[0], t.v[0], t.u[1], t.v[1], pu, pv);
    const EdgeFn f1 = edge_fn(t.u[1], t.v[1], t.u[2], t.v[2], pu, pv);
    const EdgeFn f2 = edge_fn(t.u[2], t.v[2], t.u[0], t.v[0], pu, pv);
    const double s = t.area2 > 0.0 ? 1.0 : -1.0;
    const double e0 = f0.e, e1 = f1.e, e2 = f2.e;
    if (e0 * s < -f0.tol || e1 * s < -f1.tol || e2 * s < -f2.tol) return kMiss;
    if (std::abs(e0) <= f0.tol || std::abs(e1) <= f1.tol || std::abs(e2) <= f2.tol)
        return kGraze;
    if (t.w[0] == t.w[1] && t.w[1] == t.w[2]) {
        t_out = t.w[0];
        return kHit;
    }
    // e1 weights vertex 0, e2 vertex 1, e0 vertex 2 (opposite edges)
    t_out = (e1 * t.w[0] + e2 * t.w[1] + e0 * t.w[2]) / t.area2;
    return kHit;
}

} // namespace

bool tri_aabb_intersect(const Vec3& a, const Vec3& b, const Vec3& c, const Aabb& box) {
    const Vec3 ctr = box.center();
    const Vec3 h = box.extent() * 0.5;
    const Vec3 v0 = a - ctr, v1 = b - ctr, v2 = c - ctr;

    for (int i = 0; i < 3; ++i) {
        const double lo = std::min({get(v0, i), get(v1, i), get(v2, i)});
        const double hi = std::max({get(v0, i), get(v1, i), get(v2, i)});
        if (lo > get(h, i) || hi < -get(h, i)) return false;
    }

    // Separation along L needs strict inequality so touching still counts
    // as intersecting. A zero L (edge parallel to a box axis) never
    // separates, which is correct here.
    const auto separated = [&](const Vec3& L) {
        const double p0 = dot(v0, L), p1 = dot(v1, L), p2 = dot(v2, L);
        const double r =
            h.x * std::abs(L.x) + h.y * std::abs(L.y) + h.z * std::abs(L.z);
        return std::min({p0, p1, p2}) > r || std::max({p0, p1, p2}) < -r;
    };

    const Vec3 edges[3] = {v1 - v0, v2 - v1, v0 - v2};
    for (const Vec3& e : edges) {
        if (separated({0.0, e.z, -e.y})) return false;
        if (separated({-e.z, 0.0, e.x})) return false;
        if (separated({e.y, -e.x, 0.0})) return false;
    }
    return !separated(cross(edges[0], edges[1]));
}

VoxelGrid voxelize_parity(const TriMesh& mesh, const GridSpec& spec, int workers,
                          int cast_axis) {
    if (cast_axis < 0 || cast_axis > 2) throw Error("cast_axis must be 0, 1, or 2");
    if (mesh.triangles.empty()) throw NonManifoldGeometry("cannot voxelize an empty mesh");

    const Aabb dom = mesh_bounds(mesh);
    const Aabb grid_dom = spec.domain();
    for (int i = 0; i < 3; ++i) {
        if (get(dom.lo, i) < get(grid_dom.lo, i) || get(dom.hi, i) > get(grid_dom.hi, i))
            throw Error("mesh extends outside the grid domain");
    }

    const int ca = cast_axis, a1 = (ca + 1) % 3, a2 = (ca + 2) % 3;
    const int n1 = spec.dim(a1), n2 = spec.dim(a2), ns = spec.dim(ca);
    const double o1 = get(spec.origin, a1), o2 = get(spec.origin, a2);
    const double os = get(spec.origin, ca);
    const double sp = spec.spacing;

    // Project once; triangles with no area in the projection (walls parallel
    // to the ray) contribute no crossings. A ray grazing such a wall always
    // touches the boundary of an adjacent projected triangle too, so the
    // graze is still detected. The drop uses the same rounding band as the
    // edge tests: a triangle whose area sits inside the band has its whole
    // interior inside the edge-graze band, so removing it never flips a
    // column silently.
    std::vector<ProjTri> tris;
    tris.reserve(mesh.triangles.size());
    for (const auto& tri : mesh.triangles) {
        ProjTri p{};
        for (int k = 0; k < 3; ++k) {
            const Vec3& vert = mesh.vertices[tri[k]];
            p.u[k] = get(vert, a1);
            p.v[k] = get(vert, a2);
            p.w[k] = get(vert, ca);
        }
        const double ab = (p.u[1] - p.u[0]) * (p.v[2] - p.v[0]);
        const double cd = (p.u[2] - p.u[0]) * (p.v[1] - p.v[0]);
        constexpr double kTolScale = 4.0 * std::numeric_limits<double>::epsilon();
        p.area2 = ab - cd;
        if (std::abs(p.area2) > kTolScale * (std::abs(ab) + std::abs(cd)))
            tris.push_back(p);
    }

    // Column buckets, one cell of slack for rays that retry with an offset.
    std::vector<std::vector<std::uint32_t>> buckets(
        static_cast<std::size_t>(n1) * n2);
    for (std::uint32_t ti = 0; ti < tris.size(); ++ti) {
        const ProjTri& p = tris[ti];
        const double ulo = std::min({p.u[0], p.u[1], p.u[2]});
        const double uhi = std::max({p.u[0], p.u[1], p.u[2]});
        const double vlo = std::min({p.v[0], p.v[1], p.v[2]});
        const double vhi = std::max({p.v[0], p.v[1], p.v[2]});
        const int i0 = std::max(0, static_cast<int>(std::floor((ulo - o1) / sp - 0.5)) - 1);
        const int i1 = std::min(n1 - 1, static_cast<int>(std::floor((uhi - o1) / sp)) + 1);
        const int j0 = std::max(0, static_cast<int>(std::floor((vlo - o2) / sp - 0.5)) - 1);
        const int j1 = std::min(n2 - 1, static_cast<int>(std::floor((vhi - o2) / sp)) + 1);
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i)
                buckets[static_cast<std::size_t>(j) * n1 + i].push_back(ti);
    }

    const double eps = sp / 1024.0;
    const double offsets[5][2] = {
        {0.0, 0.0}, {eps, 2 * eps}, {-eps, -2 * eps}, {2 * eps, -eps}, {-2 * eps, eps}};

    VoxelGrid grid(spec, 1);

    parallel_for(static_cast<std::size_t>(n1) * n2, workers, [&](std::size_t col) {
        const int i = static_cast<int>(col % n1);
        const int j = static_cast<int>(col / n1);
        const auto& bucket = buckets[col];

        std::vector<double> crossings;
        bool resolved = false;
        for (const auto& off : offsets) {
            const double pu = o1 + (i + 0.5) * sp + off[0];
            const double pv = o2 + (j + 0.5) * sp + off[1];
            crossings.clear();
            bool grazed = false;
            for (const std::uint32_t ti : bucket) {
                double t;
                const int r = classify(tris[ti], pu, pv, t);
                if (r == kGraze) {
                    grazed = true;
                    break;
                }
                if (r == kHit) crossings.push_back(t);
            }
            if (!grazed) {
                resolved = true;
                break;
            }
        }
        if (!resolved) {
            std::ostringstream msg;
            msg << "column (" << i << ", " << j << ") along axis " << ca
                << " still grazes the mesh after all ray offsets";
            throw DegenerateHit(msg.str());
        }
        if (crossings.size() % 2 != 0) {
            std::ostringstream msg;
            msg << "odd crossing count in column (" << i << ", " << j
                << "): mesh is not watertight";
            throw NonManifoldGeometry(msg.str());
        }
        std::sort(crossings.begin(), crossings.end());

        int cell[3];
        cell[a1] = i;
        cell[a2] = j;
        std::size_t below = 0;
        for (int k = 0; k < ns; ++k) {
            const double z = os + (k + 0.5) * sp;
            while (below < crossings.size() && crossings[below] < z) ++below;
            cell[ca] = k;
            grid.at(0, cell[0], cell[1], cell[2]) =
                (below % 2 == 1) ? 1.0f : 0.0f;
        }
    });

    return grid;
}

VoxelGrid voxelize_analytic(const PartModel& part, const GridSpec& spec, int workers) {
    validate_part(part);
    std::vector<HoleFrame> frames;
    frames.reserve(part.holes.size());
    for (std::size_t i = 0; i < part.holes.size(); ++i)
        frames.push_back(resolve_hole(part, i));

    VoxelGrid grid(spec, 1);
    parallel_for(static_cast<std::size_t>(spec.nz), workers, [&](std::size_t z) {
        for (int y = 0; y < spec.ny; ++y) {
            for (int x = 0; x < spec.nx; ++x) {
                const Vec3 p = spec.cell_center(x, y, static_cast<int>(z));
                bool inside = base_contains(part.base, p);
                for (std::size_t h = 0; inside && h < frames.size(); ++h)
                    if (hole_removes(frames[h], p)) inside = false;
                grid.at(0, x, y, static_cast<int>(z)) = inside ? 1.0f : 0.0f;
            }
        }
    });
    return grid;
}

BoundaryNormals boundary_normals(const TriMesh& mesh, const GridSpec& spec, int workers) {
    const std::size_t cells = spec.cell_count();
    std::vector<Vec3> sums(cells, Vec3{});
    std::vector<unsigned char> touched(cells, 0);

    const double sp = spec.spacing;
    const Vec3 o = spec.origin;

    // Workers own disjoint z slabs and every worker scans the triangles in
    // index order, so each voxel's sum is accumulated in a fixed order no
    // matter how many workers run.
    parallel_for(static_cast<std::size_t>(spec.nz), workers, [&](std::size_t zc) {
        const int z = static_cast<int>(zc);
        for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
            const Vec3& a = mesh.vertices[mesh.triangles[ti][0]];
            const Vec3& b = mesh.vertices[mesh.triangles[ti][1]];
            const Vec3& c = mesh.vertices[mesh.triangles[ti][2]];
            const Vec3 lo = min(min(a, b), c), hi = max(max(a, b), c);
            const int z0 = std::max(0, static_cast<int>(std::floor((lo.z - o.z) / sp)) - 1);
            const int z1 =
                std::min(spec.nz - 1, static_cast<int>(std::floor((hi.z - o.z) / sp)) + 1);
            if (z < z0 || z > z1) continue;
            const int x0 = std::max(0, static_cast<int>(std::floor((lo.x - o.x) / sp)) - 1);
            const int x1 =
                std::min(spec.nx - 1, static_cast<int>(std::floor((hi.x - o.x) / sp)) + 1);
            const int y0 = std::max(0, static_cast<int>(std::floor((lo.y - o.y) / sp)) - 1);
            const int y1 =
                std::min(spec.ny - 1, static_cast<int>(std::floor((hi.y - o.y) / sp)) + 1);
            for (int y = y0; y <= y1; ++y) {
                for (int x = x0; x <= x1; ++x) {
                    if (!tri_aabb_intersect(a, b, c, spec.cell_box(x, y, z))) continue;
                    const std::size_t idx =
                        (static_cast<std::size_t>(z) * spec.ny + y) * spec.nx + x;
                    sums[idx] = sums[idx] + mesh.normals[ti];
                    touched[idx] = 1;
                }
            }
        }
    });

    BoundaryNormals out;
    out.spec = spec;
    for (std::size_t idx = 0; idx < cells; ++idx) {
        if (!touched[idx]) continue;
        const double m = norm(sums[idx]);
        out.normals.emplace(idx, m < 1e-9 ? Vec3{} : sums[idx] / m);
    }
    return out;
}

VoxelGrid encode(const VoxelGrid& occ, const BoundaryNormals& normals, EncodingKind kind) {
    if (occ.channels != 1)
        throw SpecMismatch("encode expects a 1-channel occupancy grid");
    if (!(normals.spec == occ.spec))
        throw SpecMismatch("occupancy grid and normal map use different grids");

    const std::size_t cells = occ.spec.cell_count();
    if (kind == EncodingKind::OccupancyOnly) return occ;

    if (kind == EncodingKind::FourChannel) {
        VoxelGrid out(occ.spec, 4);
        std::copy(occ.data.begin(), occ.data.end(), out.data.begin());
        for (const auto& [idx, n] : normals.normals) {
            out.data[cells + idx] = static_cast<float>(n.x);
            out.data[2 * cells + idx] = static_cast<float>(n.y);
            out.data[3 * cells + idx] = static_cast<float>(n.z);
        }
        return out;
    }

    VoxelGrid out(occ.spec, 3);
    for (std::size_t idx = 0; idx < cells; ++idx) {
        const float v = occ.data[idx];
        out.data[idx] = v;
        out.data[cells + idx] = v;
        out.data[2 * cells + idx] = v;
    }
    for (const auto& [idx, n] : normals.normals) {
        out.data[idx] = static_cast<float>(n.x);
        out.data[cells + idx] = static_cast<float>(n.y);
        out.data[2 * cells + idx] = static_cast<float>(n.z);
    }
    return out;
}

std::size_t count_mismatches(const VoxelGrid& a, const VoxelGrid& b) {
    if (!(a.spec == b.spec) || a.channels != b.channels)
        throw SpecMismatch("grids have different shapes");
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        if (a.data[i] != b.data[i]) ++n;
    return n;
}

} // namespace voxdfm
