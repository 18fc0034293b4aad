#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sa/graph.hpp"

namespace sa {

// Shared architecture description. The encoder is a chain of
// conv(3x3, same) + batchnorm + relu + maxpool stages; the homogeneous
// head flattens into FC(fc_hidden) -> ReLU -> FC(outputs); decoders
// mirror the encoder with bilinear-upsample + skip-concat + conv stages.
struct NetworkSpec {
    int input_size = 32;
    int input_channels = 1;
    std::vector<int> encoder_widths = {16, 32, 64};
    int fc_hidden = 1024;
    int outputs = 2;
    int kernel = 3;
};

NetworkSpec network_spec_from_json(const nlohmann::json& j);
nlohmann::json network_spec_to_json(const NetworkSpec& spec);

// Homogeneous regression network (the reflectance-map path): encoder plus
// fully connected head. Outputs are linear (regression targets).
LayerGraph build_brdfnet(const NetworkSpec& spec);

// One full analysis-synthesis network per output parameter type, trained
// separately: a 6-output homogeneous head and two spatially varying
// decoders ending in sigmoid without batchnorm.
struct SvbrdfNets {
    LayerGraph homogeneous;
    LayerGraph diffuse;
    LayerGraph normal;
};

SvbrdfNets build_svbrdfnet(const NetworkSpec& spec);

}  // namespace sa
