#include "voxdfm/manifest.hpp"

#include "voxdfm/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <type_traits>

namespace voxdfm {

namespace {

constexpr const char* kFormat = "voxdfm-manifest/1";

using nlohmann::json;
// Insertion order keeps related fields adjacent in the file.
using ojson = nlohmann::ordered_json;

ojson spec_json(const DatasetSpec& s) {
    ojson j;
    j["cube_edge"] = s.cube_edge;
    j["diameters"] = s.diameters;
    j["representative_diameters"] = s.representative_diameters;
    j["depths"] = s.depths;
    j["positions"] = s.positions;
    ojson faces = ojson::array();
    for (Face f : s.faces) faces.push_back(to_string(f));
    j["faces"] = std::move(faces);
    j["thin_section_webs"] = s.thin_section_webs;
    j["grid_resolution"] = s.grid_resolution;
    j["encoding"] = to_string(s.encoding);
    j["seed"] = s.seed;
    return j;
}

DatasetSpec spec_from_json(const json& j) {
    DatasetSpec s;
    s.cube_edge = j.at("cube_edge").get<double>();
    s.diameters = j.at("diameters").get<std::vector<double>>();
    s.representative_diameters =
        j.at("representative_diameters").get<std::vector<double>>();
    s.depths = j.at("depths").get<std::vector<double>>();
    s.positions = j.at("positions").get<std::vector<double>>();
    for (const json& f : j.at("faces"))
        s.faces.push_back(face_from_string(f.get<std::string>()));
    s.thin_section_webs = j.at("thin_section_webs").get<std::vector<double>>();
    s.grid_resolution = j.at("grid_resolution").get<int>();
    s.encoding = encoding_from_string(j.at("encoding").get<std::string>());
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
}

ojson record_json(const SampleRecord& r) {
    ojson j;
    j["id"] = r.id;
    std::visit(
        [&](const auto& base) {
            using B = std::remove_cvref_t<decltype(base)>;
            if constexpr (std::is_same_v<B, Block>) {
                j["shape"] = "block";
                j["size"] = {base.size.x, base.size.y, base.size.z};
            } else if constexpr (std::is_same_v<B, LBlock>) {
                j["shape"] = "lblock";
                j["outer"] = {base.outer.x, base.outer.y, base.outer.z};
                j["cut"] = {base.cut.x, base.cut.y, base.cut.z};
            } else {
                j["shape"] = "cylinder";
                j["radius"] = base.radius;
                j["height"] = base.height;
            }
        },
        r.part.base);
    ojson holes = ojson::array();
    for (const HoleSpec& h : r.part.holes)
        holes.push_back({{"face", to_string(h.face)},
                         {"u", h.pos_u},
                         {"v", h.pos_v},
                         {"d", h.diameter},
                         {"depth", h.depth}});
    j["holes"] = std::move(holes);
    ojson viol = ojson::array();
    for (DfmViolation v : r.label.violations) viol.push_back(to_string(v));
    j["manufacturable"] = r.label.manufacturable;
    j["violations"] = std::move(viol);
    j["split"] = to_string(r.split);
    if (!r.voxel_path.empty()) j["vox"] = r.voxel_path;
    return j;
}

Vec3 vec_from(const json& a) {
    return {a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>()};
}

SampleRecord record_from_json(const json& j) {
    SampleRecord r;
    r.id = j.at("id").get<std::string>();
    const std::string shape = j.at("shape").get<std::string>();
    if (shape == "block") {
        r.part.base = Block{vec_from(j.at("size"))};
    } else if (shape == "lblock") {
        r.part.base = LBlock{vec_from(j.at("outer")), vec_from(j.at("cut"))};
    } else if (shape == "cylinder") {
        r.part.base = Cylinder{j.at("radius").get<double>(), j.at("height").get<double>()};
    } else {
        throw FormatError("unknown shape '" + shape + "'");
    }
    for (const json& h : j.at("holes"))
        r.part.holes.push_back(HoleSpec{face_from_string(h.at("face").get<std::string>()),
                                        h.at("u").get<double>(), h.at("v").get<double>(),
                                        h.at("d").get<double>(), h.at("depth").get<double>()});
    r.label.manufacturable = j.at("manufacturable").get<bool>();
    for (const json& v : j.at("violations"))
        r.label.violations.push_back(dfm_violation_from_string(v.get<std::string>()));
    r.split = split_from_string(j.at("split").get<std::string>());
    if (j.contains("vox")) r.voxel_path = j.at("vox").get<std::string>();
    return r;
}

} // namespace

void write_manifest(const Manifest& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    ojson header;
    header["format"] = kFormat;
    header["spec"] = spec_json(m.spec);
    header["records"] = m.records.size();
    header["skipped"] = m.skipped;
    out << header.dump() << '\n';
    for (const SampleRecord& r : m.records) out << record_json(r).dump() << '\n';
    out.close();
    if (!out) throw IoError("write failed for '" + path + "'");
}

Manifest read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("'" + path + "': empty manifest");

    Manifest m;
    std::size_t expected = 0;
    try {
        const json header = json::parse(line);
        if (header.at("format").get<std::string>() != kFormat)
            throw SchemaError("'" + path + "': unsupported manifest format");
        m.spec = spec_from_json(header.at("spec"));
        expected = header.at("records").get<std::size_t>();
        m.skipped = header.at("skipped").get<int>();
    } catch (const json::exception&) {
        throw SchemaError("'" + path + "': malformed manifest header");
    }

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            m.records.push_back(record_from_json(json::parse(line)));
        } catch (const json::exception&) {
            std::ostringstream msg;
            msg << "'" << path << "' line " << lineno << ": malformed record";
            throw FormatError(msg.str());
        }
    }
    if (m.records.size() != expected) {
        std::ostringstream msg;
        msg << "'" << path << "': header announces " << expected << " records, found "
            << m.records.size();
        throw FormatError(msg.str());
    }
    return m;
}

std::vector<std::string> verify_labels(const Manifest& m) {
    std::vector<std::string> bad;
    for (const SampleRecord& r : m.records)
        if (dfm_classify(r.part) != r.label) bad.push_back(r.id);
    return bad;
}

std::string dataset_spec_to_json(const DatasetSpec& spec) { return spec_json(spec).dump(); }

DatasetSpec dataset_spec_from_json(const std::string& text) {
    try {
        return spec_from_json(json::parse(text));
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed dataset spec: ") + e.what());
    }
}

} // namespace voxdfm
