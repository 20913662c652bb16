#include "voxdfm/errors.hpp"
#include "voxdfm/trimesh.hpp"

#include "polygon.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <variant>

namespace voxdfm {

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec3 unit_axis(int a) { return {a == 0 ? 1.0 : 0.0, a == 1 ? 1.0 : 0.0, a == 2 ? 1.0 : 0.0}; }

double& comp(Vec3& v, int i) { return i == 0 ? v.x : (i == 1 ? v.y : v.z); }

std::uint64_t double_bits(double v) {
    if (v == 0.0) v = 0.0;  // collapse -0.0 and +0.0
    return std::bit_cast<std::uint64_t>(v);
}

struct VertexKey {
    std::uint64_t x, y, z;
    friend bool operator==(const VertexKey&, const VertexKey&) = default;
};

struct VertexKeyHash {
    std::size_t operator()(const VertexKey& k) const {
        std::uint64_t h = k.x * 0x9e3779b97f4a7c15ull;
        h = (h ^ k.y) * 0xff51afd7ed558ccdull;
        h = (h ^ k.z) * 0xc4ceb9fe1a85ec53ull;
        return static_cast<std::size_t>(h ^ (h >> 33));
    }
};

// Vertices are deduplicated on exact coordinates. All producers derive a
// shared corner or ring point from the same double expressions, so facets
// and hole walls agree on indices and edge pairing works out.
struct Builder {
    TriMesh mesh;
    std::unordered_map<VertexKey, std::uint32_t, VertexKeyHash> lookup;

    std::uint32_t vertex(const Vec3& p) {
        const VertexKey key{double_bits(p.x), double_bits(p.y), double_bits(p.z)};
        const auto [it, inserted] =
            lookup.try_emplace(key, static_cast<std::uint32_t>(mesh.vertices.size()));
        if (inserted) mesh.vertices.push_back(p);
        return it->second;
    }

    // Emits (i0, i1, i2) wound so the geometric normal points along `want`.
    void tri(std::uint32_t i0, std::uint32_t i1, std::uint32_t i2, const Vec3& want) {
        Vec3 n = cross(mesh.vertices[i1] - mesh.vertices[i0],
                       mesh.vertices[i2] - mesh.vertices[i0]);
        double side = dot(n, want);
        if (side < 0) {
            std::swap(i1, i2);
            n = -n;
            side = -side;
        }
        const double len = norm(n);
        if (!(len > 0.0) || side == 0.0)
            throw NonManifoldGeometry("tessellation produced a degenerate triangle");
        mesh.triangles.push_back({i0, i1, i2});
        mesh.normals.push_back(n / len);
    }
};

// One planar boundary facet: outward normal = sign * axis, plus the hole
// opening rings that lie on it.
struct Facet {
    int axis = 0;
    double along = 0.0;
    double sign = 1.0;
    std::vector<Vec3> boundary;
    std::vector<const std::vector<Vec3>*> openings;
};

std::vector<Vec3> rect_boundary(int axis, double along, double lo1, double hi1, double lo2,
                                double hi2) {
    const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
    const double c1[4] = {lo1, hi1, hi1, lo1};
    const double c2[4] = {lo2, lo2, hi2, hi2};
    std::vector<Vec3> out(4);
    for (int i = 0; i < 4; ++i) {
        comp(out[i], axis) = along;
        comp(out[i], a1) = c1[i];
        comp(out[i], a2) = c2[i];
    }
    return out;
}

std::vector<Facet> stock_facets(const BaseShape& base, const std::vector<Vec3>& cap_lo,
                                const std::vector<Vec3>& cap_hi) {
    std::vector<Facet> facets;
    std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Block>) {
                for (int a = 0; a < 3; ++a) {
                    const double s1 = s.size[(a + 1) % 3], s2 = s.size[(a + 2) % 3];
                    facets.push_back({a, 0.0, -1.0, rect_boundary(a, 0.0, 0, s1, 0, s2), {}});
                    facets.push_back(
                        {a, s.size[a], 1.0, rect_boundary(a, s.size[a], 0, s1, 0, s2), {}});
                }
            } else if constexpr (std::is_same_v<S, LBlock>) {
                const double ox = s.outer.x, oy = s.outer.y, oz = s.outer.z;
                const double nx = ox - s.cut.x, nz = oz - s.cut.z;
                facets.push_back({2, 0.0, -1.0, rect_boundary(2, 0.0, 0, ox, 0, oy), {}});
                facets.push_back({2, oz, 1.0, rect_boundary(2, oz, 0, nx, 0, oy), {}});
                facets.push_back({2, nz, 1.0, rect_boundary(2, nz, nx, ox, 0, oy), {}});
                facets.push_back({0, 0.0, -1.0, rect_boundary(0, 0.0, 0, oy, 0, oz), {}});
                facets.push_back({0, ox, 1.0, rect_boundary(0, ox, 0, oy, 0, nz), {}});
                facets.push_back({0, nx, 1.0, rect_boundary(0, nx, 0, oy, nz, oz), {}});
                const double px[6] = {0, ox, ox, nx, nx, 0};
                const double pz[6] = {0, 0, nz, nz, oz, oz};
                Facet cap_bottom{1, 0.0, -1.0, {}, {}};
                Facet cap_top{1, oy, 1.0, {}, {}};
                for (int i = 0; i < 6; ++i) {
                    cap_bottom.boundary.push_back({px[i], 0.0, pz[i]});
                    cap_top.boundary.push_back({px[i], oy, pz[i]});
                }
                facets.push_back(std::move(cap_bottom));
                facets.push_back(std::move(cap_top));
            } else {
                facets.push_back({2, 0.0, -1.0, cap_lo, {}});
                facets.push_back({2, s.height, 1.0, cap_hi, {}});
            }
        },
        base);
    return facets;
}

std::vector<Vec3> circle_ring(const Vec3& center, int axis, double radius, int segments) {
    const Vec3 e1 = unit_axis((axis + 1) % 3);
    const Vec3 e2 = unit_axis((axis + 2) % 3);
    std::vector<Vec3> ring;
    ring.reserve(segments);
    for (int j = 0; j < segments; ++j) {
        // Half-step offset keeps every polygon vertex strictly inside the
        // true circle's tangent lines, which matters for openings that
        // touch a stock edge exactly.
        const double theta = 2.0 * kPi * (j + 0.5) / segments;
        ring.push_back(center + e1 * (radius * std::cos(theta)) +
                       e2 * (radius * std::sin(theta)));
    }
    return ring;
}

} // namespace

TriMesh tessellate(const PartModel& part, int circle_segments) {
    if (circle_segments < 8) throw Error("circle_segments must be at least 8");
    validate_part(part);

    for (std::size_t i = 0; i < part.holes.size(); ++i) {
        if (!opening_on_single_facet(part, i)) {
            std::ostringstream msg;
            msg << "hole " << i << " crosses a facet boundary or breaks out of a side wall";
            throw NonManifoldGeometry(msg.str());
        }
        for (std::size_t j = i + 1; j < part.holes.size(); ++j) {
            if (hole_surface_gap(part, i, j) <= 0.0) {
                std::ostringstream msg;
                msg << "holes " << i << " and " << j << " intersect or touch";
                throw NonManifoldGeometry(msg.str());
            }
        }
    }

    Builder builder;

    struct HoleRings {
        HoleFrame frame;
        int axis = 0;
        std::vector<Vec3> entry, far;
    };
    std::vector<HoleRings> holes;
    holes.reserve(part.holes.size());
    for (std::size_t i = 0; i < part.holes.size(); ++i) {
        HoleRings hr;
        hr.frame = resolve_hole(part, i);
        hr.axis = face_axis(part.holes[i].face);
        hr.entry = circle_ring(hr.frame.entry, hr.axis, hr.frame.radius, circle_segments);
        hr.far = circle_ring(hr.frame.entry + hr.frame.axis * hr.frame.drill_depth, hr.axis,
                             hr.frame.radius, circle_segments);
        holes.push_back(std::move(hr));
    }

    // Cylinder stock needs its cap rings before the facet list is built so
    // the caps and the lateral wall share boundary vertices.
    std::vector<Vec3> cap_lo, cap_hi;
    if (const auto* cyl = std::get_if<Cylinder>(&part.base)) {
        const Vec3 lo_center{cyl->radius, cyl->radius, 0.0};
        const Vec3 hi_center{cyl->radius, cyl->radius, cyl->height};
        cap_lo = circle_ring(lo_center, 2, cyl->radius, circle_segments);
        cap_hi = circle_ring(hi_center, 2, cyl->radius, circle_segments);
    }

    std::vector<Facet> facets = stock_facets(part.base, cap_lo, cap_hi);

    auto attach_ring = [&facets](int axis, double along, const std::vector<Vec3>& ring,
                                 std::size_t hole_index) {
        for (Facet& f : facets) {
            if (f.axis == axis && f.along == along) {
                f.openings.push_back(&ring);
                return;
            }
        }
        std::ostringstream msg;
        msg << "hole " << hole_index << " opening lies on no stock facet";
        throw NonManifoldGeometry(msg.str());
    };

    for (std::size_t i = 0; i < holes.size(); ++i) {
        const HoleRings& hr = holes[i];
        attach_ring(hr.axis, hr.frame.entry[hr.axis], hr.entry, i);
        if (hr.frame.through) {
            const double exit_along =
                hr.frame.entry[hr.axis] + hr.frame.axis[hr.axis] * hr.frame.drill_depth;
            attach_ring(hr.axis, exit_along, hr.far, i);
        }
    }

    // Planar facets, each triangulated against its openings.
    for (const Facet& f : facets) {
        const int a1 = (f.axis + 1) % 3, a2 = (f.axis + 2) % 3;
        auto project = [&](const std::vector<Vec3>& ring) {
            std::vector<detail::PolyPoint> pts;
            pts.reserve(ring.size());
            for (const Vec3& p : ring)
                pts.push_back({p[a1], p[a2], builder.vertex(p)});
            return pts;
        };
        std::vector<std::vector<detail::PolyPoint>> openings;
        openings.reserve(f.openings.size());
        for (const auto* ring : f.openings) openings.push_back(project(*ring));

        const Vec3 want = unit_axis(f.axis) * f.sign;
        for (const auto& t : detail::triangulate_with_holes(project(f.boundary), openings))
            builder.tri(t[0], t[1], t[2], want);
    }

    // Hole walls; blind holes get a floor fan.
    for (const HoleRings& hr : holes) {
        const int n = circle_segments;
        for (int j = 0; j < n; ++j) {
            const int k = (j + 1) % n;
            const Vec3 mid = (hr.entry[j] + hr.far[k]) * 0.5;
            const double t = dot(mid - hr.frame.entry, hr.frame.axis);
            const Vec3 want = (hr.frame.entry + hr.frame.axis * t) - mid;
            const std::uint32_t e0 = builder.vertex(hr.entry[j]);
            const std::uint32_t e1 = builder.vertex(hr.entry[k]);
            const std::uint32_t f0 = builder.vertex(hr.far[j]);
            const std::uint32_t f1 = builder.vertex(hr.far[k]);
            builder.tri(e0, f0, f1, want);
            builder.tri(e0, f1, e1, want);
        }
        if (!hr.frame.through) {
            const std::uint32_t center = builder.vertex(
                hr.frame.entry + hr.frame.axis * hr.frame.drill_depth);
            for (int j = 0; j < n; ++j) {
                const int k = (j + 1) % n;
                builder.tri(center, builder.vertex(hr.far[j]), builder.vertex(hr.far[k]),
                            -hr.frame.axis);
            }
        }
    }

    // Cylinder lateral wall.
    if (const auto* cyl = std::get_if<Cylinder>(&part.base)) {
        const int n = circle_segments;
        for (int j = 0; j < n; ++j) {
            const int k = (j + 1) % n;
            const Vec3 mid = (cap_lo[j] + cap_hi[k]) * 0.5;
            const Vec3 want = mid - Vec3{cyl->radius, cyl->radius, mid.z};
            const std::uint32_t b0 = builder.vertex(cap_lo[j]);
            const std::uint32_t b1 = builder.vertex(cap_lo[k]);
            const std::uint32_t t0 = builder.vertex(cap_hi[j]);
            const std::uint32_t t1 = builder.vertex(cap_hi[k]);
            builder.tri(b0, t0, t1, want);
            builder.tri(b0, t1, b1, want);
        }
    }

    return builder.mesh;
}

} // namespace voxdfm
