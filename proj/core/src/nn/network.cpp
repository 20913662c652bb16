#include "voxdfm/nn/network.hpp"

namespace voxdfm::nn {

ArchConfig default_arch(EncodingKind kind, int grid) {
    ArchConfig a;
    a.grid = grid;
    a.input_channels = channel_count(kind);
    // Occupancy alone gets the wide-first kernel stack; normal-augmented
    // inputs use the narrower one.
    a.kernels = kind == EncodingKind::OccupancyOnly ? std::array<int, 3>{8, 4, 2}
                                                    : std::array<int, 3>{6, 3, 2};
    return a;
}

} // namespace voxdfm::nn
