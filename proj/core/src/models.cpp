#include "sa/models.hpp"

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace sa {

namespace {

void validate_spec(const NetworkSpec& spec, bool needs_head) {
    if (spec.encoder_widths.empty())
        throw std::invalid_argument("network spec: encoder_widths must be non-empty");
    if (spec.input_size < 4) throw std::invalid_argument("network spec: input_size too small");
    if (spec.kernel % 2 == 0 || spec.kernel < 1)
        throw std::invalid_argument("network spec: kernel must be odd");
    int size = spec.input_size;
    for (size_t i = 0; i < spec.encoder_widths.size(); ++i) {
        if (spec.encoder_widths[i] <= 0)
            throw std::invalid_argument("network spec: widths must be positive");
        if (size % 2 != 0)
            throw std::invalid_argument("network spec: input_size not divisible by 2^stages");
        size /= 2;
    }
    if (size < 1) throw std::invalid_argument("network spec: too many encoder stages");
    if (needs_head && (spec.fc_hidden <= 0 || spec.outputs <= 0))
        throw std::invalid_argument("network spec: fc_hidden and outputs must be positive");
}

// conv -> bn -> relu (+ pool); returns {prepool, postpool} node ids.
struct StageIds {
    int prepool;
    int postpool;
};

StageIds add_encoder_stage(LayerGraph& g, const std::string& prefix, int input, int in_ch,
                           int out_ch, int kernel) {
    int c = g.add_conv(prefix + ".conv", input, in_ch, out_ch, kernel);
    int b = g.add_batchnorm(prefix + ".bn", c, out_ch);
    int r = g.add_relu(prefix + ".relu", b);
    int p = g.add_pool(prefix + ".pool", r);
    return {r, p};
}

}  // namespace

NetworkSpec network_spec_from_json(const nlohmann::json& j) {
    NetworkSpec spec;
    spec.input_size = j.value("input_size", spec.input_size);
    spec.input_channels = j.value("input_channels", spec.input_channels);
    if (j.contains("encoder_widths"))
        spec.encoder_widths = j.at("encoder_widths").get<std::vector<int>>();
    spec.fc_hidden = j.value("fc_hidden", spec.fc_hidden);
    spec.outputs = j.value("outputs", spec.outputs);
    spec.kernel = j.value("kernel", spec.kernel);
    return spec;
}

nlohmann::json network_spec_to_json(const NetworkSpec& spec) {
    return {{"input_size", spec.input_size},     {"input_channels", spec.input_channels},
            {"encoder_widths", spec.encoder_widths}, {"fc_hidden", spec.fc_hidden},
            {"outputs", spec.outputs},           {"kernel", spec.kernel}};
}

LayerGraph build_brdfnet(const NetworkSpec& spec) {
    validate_spec(spec, /*needs_head=*/true);
    LayerGraph g;
    int cur = g.add_input("input");
    int ch = spec.input_channels;
    int size = spec.input_size;
    for (size_t i = 0; i < spec.encoder_widths.size(); ++i) {
        StageIds ids = add_encoder_stage(g, "enc" + std::to_string(i + 1), cur, ch,
                                         spec.encoder_widths[i], spec.kernel);
        cur = ids.postpool;
        ch = spec.encoder_widths[i];
        size /= 2;
    }
    int features = ch * size * size;
    int f1 = g.add_fc("head.fc1", cur, features, spec.fc_hidden);
    int r = g.add_relu("head.relu", f1);
    int f2 = g.add_fc("head.fc2", r, spec.fc_hidden, spec.outputs);
    g.set_output(f2);
    return g;
}

namespace {

LayerGraph build_decoder_net(const NetworkSpec& spec, int out_channels) {
    LayerGraph g;
    int cur = g.add_input("input");
    int ch = spec.input_channels;
    const auto& widths = spec.encoder_widths;
    std::vector<int> skips(widths.size());
    for (size_t i = 0; i < widths.size(); ++i) {
        StageIds ids =
            add_encoder_stage(g, "enc" + std::to_string(i + 1), cur, ch, widths[i], spec.kernel);
        skips[i] = ids.prepool;
        cur = ids.postpool;
        ch = widths[i];
    }
    // Mirror the encoder: upsample, concatenate the matching analysis
    // feature map, then conv + bn + relu.
    for (int s = static_cast<int>(widths.size()) - 1; s >= 0; --s) {
        std::string prefix = "dec" + std::to_string(s + 1);
        int up = g.add_upsample(prefix + ".up", cur);
        int cat = g.add_concat(prefix + ".cat", up, skips[s]);
        int conv = g.add_conv(prefix + ".conv", cat, ch + widths[s], widths[s], spec.kernel);
        int bn = g.add_batchnorm(prefix + ".bn", conv, widths[s]);
        cur = g.add_relu(prefix + ".relu", bn);
        ch = widths[s];
    }
    int out_conv = g.add_conv("out.conv", cur, ch, out_channels, spec.kernel);
    int sig = g.add_sigmoid("out.sigmoid", out_conv);
    g.set_output(sig);
    return g;
}

}  // namespace

SvbrdfNets build_svbrdfnet(const NetworkSpec& spec) {
    if (spec.input_channels != 3)
        throw std::invalid_argument("svbrdfnet: requires RGB input");
    validate_spec(spec, /*needs_head=*/true);

    SvbrdfNets nets;
    NetworkSpec head_spec = spec;
    head_spec.outputs = 6;  // log-relative specular albedo + log roughness per channel
    nets.homogeneous = build_brdfnet(head_spec);
    nets.diffuse = build_decoder_net(spec, 3);
    nets.normal = build_decoder_net(spec, 3);
    return nets;
}

}  // namespace sa
