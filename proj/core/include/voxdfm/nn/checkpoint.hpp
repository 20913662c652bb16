#pragma once

#include "voxdfm/nn/network.hpp"

#include <string>

namespace voxdfm::nn {

// Checkpoint file: magic "VDFM-NET/1", a length-prefixed JSON architecture
// descriptor, then every parameter and batchnorm running-statistic tensor
// as little-endian f32 in layer order. Round trips bit-exactly.
void save_network(const Network<float>& net, const std::string& path);
Network<float> load_network(const std::string& path);

} // namespace voxdfm::nn
