#include "voxdfm/nn/checkpoint.hpp"

#include "voxdfm/errors.hpp"

#include <json.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <type_traits>

namespace voxdfm::nn {

namespace {

static_assert(std::endian::native == std::endian::little);

constexpr char kMagic[] = "VDFM-NET/1";
constexpr std::size_t kMagicLen = sizeof(kMagic) - 1;
constexpr std::uint32_t kMaxDescriptor = 1u << 20;

using nlohmann::json;

json arch_json(const Network<float>& net) {
    json layers = json::array();
    for (const Layer<float>& layer : net.layers) {
        std::visit(detail::overloaded{
                       [&](const Conv3d<float>& l) {
                           layers.push_back({{"type", "conv3d"},
                                             {"in_ch", l.in_ch},
                                             {"out_ch", l.out_ch},
                                             {"k", l.k}});
                       },
                       [&](const BatchNorm<float>& l) {
                           layers.push_back({{"type", "batchnorm"},
                                             {"channels", l.channels},
                                             {"momentum", l.momentum},
                                             {"eps", l.eps}});
                       },
                       [&](const MaxPool3d<float>&) {
                           layers.push_back({{"type", "maxpool"}});
                       },
                       [&](const Dense<float>& l) {
                           layers.push_back({{"type", "dense"},
                                             {"in_features", l.in_features},
                                             {"units", l.units}});
                       },
                       [&](const Output<float>& l) {
                           layers.push_back({{"type", "output"}, {"in_features", l.in_features}});
                       },
                   },
                   layer);
    }
    return json{{"layers", layers}};
}

Network<float> network_from_json(const json& doc) {
    Network<float> net;
    for (const json& l : doc.at("layers")) {
        const std::string type = l.at("type").get<std::string>();
        if (type == "conv3d") {
            net.layers.push_back(Conv3d<float>(l.at("in_ch").get<int>(),
                                               l.at("out_ch").get<int>(), l.at("k").get<int>()));
        } else if (type == "batchnorm") {
            net.layers.push_back(BatchNorm<float>(l.at("channels").get<int>(),
                                                  l.at("momentum").get<double>(),
                                                  l.at("eps").get<double>()));
        } else if (type == "maxpool") {
            net.layers.push_back(MaxPool3d<float>{});
        } else if (type == "dense") {
            net.layers.push_back(
                Dense<float>(l.at("in_features").get<int>(), l.at("units").get<int>()));
        } else if (type == "output") {
            net.layers.push_back(Output<float>(l.at("in_features").get<int>()));
        } else {
            throw FormatError("unknown layer type '" + type + "' in checkpoint");
        }
    }
    if (net.layers.empty()) throw FormatError("checkpoint describes an empty network");
    return net;
}

// Serialization order: per layer, parameters then batchnorm running stats.
template <typename Net>
auto tensor_list(Net& net) {
    using Ptr = std::conditional_t<std::is_const_v<Net>, const Tensor<float>*, Tensor<float>*>;
    std::vector<Ptr> out;
    for (auto& layer : net.layers) {
        std::visit(
            [&](auto& l) {
                using L = std::remove_cvref_t<decltype(l)>;
                if constexpr (std::is_same_v<L, Conv3d<float>> ||
                              std::is_same_v<L, Dense<float>> ||
                              std::is_same_v<L, Output<float>>) {
                    out.push_back(&l.w);
                    out.push_back(&l.b);
                } else if constexpr (std::is_same_v<L, BatchNorm<float>>) {
                    out.push_back(&l.gamma);
                    out.push_back(&l.beta);
                    out.push_back(&l.running_mean);
                    out.push_back(&l.running_var);
                }
            },
            layer);
    }
    return out;
}

} // namespace

void save_network(const Network<float>& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");

    out.write(kMagic, static_cast<std::streamsize>(kMagicLen));
    const std::string desc = arch_json(net).dump();
    const std::uint32_t len = static_cast<std::uint32_t>(desc.size());
    out.write(reinterpret_cast<const char*>(&len), sizeof len);
    out.write(desc.data(), static_cast<std::streamsize>(desc.size()));
    for (const Tensor<float>* t : tensor_list(net))
        out.write(reinterpret_cast<const char*>(t->data.data()),
                  static_cast<std::streamsize>(t->size() * sizeof(float)));
    out.close();
    if (!out) throw IoError("write failed for '" + path + "'");
}

Network<float> load_network(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");

    char magic[kMagicLen];
    in.read(magic, static_cast<std::streamsize>(kMagicLen));
    if (!in || std::memcmp(magic, kMagic, kMagicLen) != 0)
        throw FormatError("'" + path + "' is not a network checkpoint");

    std::uint32_t len = 0;
    in.read(reinterpret_cast<char*>(&len), sizeof len);
    if (!in || len == 0 || len > kMaxDescriptor)
        throw FormatError("'" + path + "': bad architecture descriptor length");
    std::string desc(len, '\0');
    in.read(desc.data(), static_cast<std::streamsize>(len));
    if (!in) throw FormatError("'" + path + "': truncated architecture descriptor");

    Network<float> net;
    try {
        net = network_from_json(json::parse(desc));
    } catch (const json::exception&) {
        throw FormatError("'" + path + "': malformed architecture descriptor");
    } catch (const ShapeMismatch&) {
        throw FormatError("'" + path + "': invalid layer configuration");
    }

    for (Tensor<float>* t : tensor_list(net)) {
        const std::streamsize bytes =
            static_cast<std::streamsize>(t->size() * sizeof(float));
        in.read(reinterpret_cast<char*>(t->data.data()), bytes);
        if (in.gcount() != bytes) throw FormatError("'" + path + "': truncated parameters");
    }
    if (in.peek() != std::ifstream::traits_type::eof())
        throw FormatError("'" + path + "': trailing bytes after parameters");
    return net;
}

} // namespace voxdfm::nn
