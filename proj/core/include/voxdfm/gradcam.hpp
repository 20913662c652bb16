#pragma once

#include "voxdfm/nn/network.hpp"
#include "voxdfm/voxelgrid.hpp"

#include <array>
#include <string>

namespace voxdfm {

// The class a localization map explains. The score behind the map is the
// pre-sigmoid logit for Manufacturable and its negation for
// NonManufacturable; working on the logit keeps gradients alive where the
// sigmoid saturates.
enum class CamClass { Manufacturable, NonManufacturable };

const char* to_string(CamClass c);
CamClass cam_class_from_string(const std::string& s);

// Class-discriminative localization volume: ReLU of the sum of the last
// conv layer's activation maps, each weighted by the spatial mean of the
// class-score gradient over that map. Values are >= 0 by construction.
struct CamVolume {
    CamClass source_class = CamClass::NonManufacturable;
    std::array<int, 3> feature_dims{};  // map dims before any resampling
    int pool_size = 0;                  // voxels averaged into each weight
    nn::Tensor<float> values;           // [D, H, W], current resolution
};

// The pure math on given maps and gradients, both [F, D, H, W]. Exposed
// separately so hand-built fixtures can pin the weighting and the ReLU.
CamVolume cam_from_maps(const nn::Tensor<float>& maps, const nn::Tensor<float>& grads,
                        CamClass c);

// Runs the network in inference mode on one sample [C, D, H, W] and
// evaluates the map at the last conv layer. Throws NoConvLayer.
CamVolume grad_cam(nn::Network<float>& net, const nn::Tensor<float>& input, CamClass c);

// Corner-aligned trilinear resampling of a [D, H, W] volume; sampling at
// the source dims reproduces the input exactly. Source dims must be >= 2
// (a single slice has no interpolation direction).
nn::Tensor<float> trilinear_resample(const nn::Tensor<float>& volume,
                                     const std::array<int, 3>& target_dims);

// Two-channel overlay on the occupancy grid's spec: channel 0 the
// occupancy (bit-identical pass-through), channel 1 the activation
// max-normalized to 1 (an all-zero map stays zero). The cam must already
// be resampled to the grid dims.
VoxelGrid composite(const VoxelGrid& occ, const CamVolume& cam);

} // namespace voxdfm
