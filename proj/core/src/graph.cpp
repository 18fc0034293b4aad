#include "sa/graph.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sa/common.hpp"
#include "sa/io.hpp"

namespace sa {

std::string layer_kind_name(LayerKind k) {
    switch (k) {
        case LayerKind::kInput: return "input";
        case LayerKind::kConv: return "conv";
        case LayerKind::kPool: return "pool";
        case LayerKind::kFC: return "fc";
        case LayerKind::kBatchNorm: return "batchnorm";
        case LayerKind::kReLU: return "relu";
        case LayerKind::kSigmoid: return "sigmoid";
        case LayerKind::kUpsample: return "upsample";
        case LayerKind::kConcat: return "concat";
    }
    throw std::logic_error("unknown layer kind");
}

LayerKind layer_kind_from_name(const std::string& s) {
    for (LayerKind k : {LayerKind::kInput, LayerKind::kConv, LayerKind::kPool, LayerKind::kFC,
                        LayerKind::kBatchNorm, LayerKind::kReLU, LayerKind::kSigmoid,
                        LayerKind::kUpsample, LayerKind::kConcat})
        if (layer_kind_name(k) == s) return k;
    throw std::invalid_argument("unknown layer kind: " + s);
}

int LayerGraph::add_node(Node&& node) {
    for (const Node& n : nodes_)
        if (n.name == node.name)
            throw std::invalid_argument("duplicate node name: " + node.name);
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size()) - 1;
}

void LayerGraph::check_input_index(int input) const {
    if (input < 0 || input >= static_cast<int>(nodes_.size()))
        throw std::invalid_argument("node input index out of range (inputs must be added first)");
}

int LayerGraph::add_input(const std::string& name) {
    if (!nodes_.empty()) throw std::invalid_argument("input node must be added first");
    Node n;
    n.name = name;
    n.kind = LayerKind::kInput;
    return add_node(std::move(n));
}

int LayerGraph::add_conv(const std::string& name, int input, int in_ch, int out_ch, int ksize) {
    check_input_index(input);
    Node n;
    n.name = name;
    n.kind = LayerKind::kConv;
    n.inputs = {input};
    n.conv = Conv2d(in_ch, out_ch, ksize);
    return add_node(std::move(n));
}

int LayerGraph::add_pool(const std::string& name, int input) {
    check_input_index(input);
    Node n;
    n.name = name;
    n.kind = LayerKind::kPool;
    n.inputs = {input};
    return add_node(std::move(n));
}

int LayerGraph::add_fc(const std::string& name, int input, int in_features, int out_features) {
    check_input_index(input);
    Node n;
    n.name = name;
    n.kind = LayerKind::kFC;
    n.inputs = {input};
    n.fc = FullyConnected(in_features, out_features);
    return add_node(std::move(n));
}

int LayerGraph::add_batchnorm(const std::string& name, int input, int channels) {
    check_input_index(input);
    Node n;
    n.name = name;
    n.kind = LayerKind::kBatchNorm;
    n.inputs = {input};
    n.bn = BatchNorm(channels);
    return add_node(std::move(n));
}

int LayerGraph::add_relu(const std::string& name, int input) {
    check_input_index(input);
    Node n;
    n.name = name;
    n.kind = LayerKind::kReLU;
    n.inputs = {input};
    return add_node(std::move(n));
}

int LayerGraph::add_sigmoid(const std::string& name, int input) {
    check_input_index(input);
    Node n;
    n.name = name;
    n.kind = LayerKind::kSigmoid;
    n.inputs = {input};
    return add_node(std::move(n));
}

int LayerGraph::add_upsample(const std::string& name, int input) {
    check_input_index(input);
    Node n;
    n.name = name;
    n.kind = LayerKind::kUpsample;
    n.inputs = {input};
    return add_node(std::move(n));
}

int LayerGraph::add_concat(const std::string& name, int input_a, int input_b) {
    check_input_index(input_a);
    check_input_index(input_b);
    Node n;
    n.name = name;
    n.kind = LayerKind::kConcat;
    n.inputs = {input_a, input_b};
    return add_node(std::move(n));
}

void LayerGraph::set_output(int node) {
    check_input_index(node);
    output_ = node;
}

int LayerGraph::find_node(const std::string& name) const {
    for (size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].name == name) return static_cast<int>(i);
    return -1;
}

void LayerGraph::init_weights(Rng& rng) {
    for (Node& n : nodes_) {
        if (n.kind == LayerKind::kConv) {
            double bound = std::sqrt(6.0 / (n.conv.in_ch * n.conv.ksize * n.conv.ksize));
            for (float& w : n.conv.weight.data)
                w = static_cast<float>(rng.uniform(-bound, bound));
            for (float& b : n.conv.bias.data) b = 0.0f;
        } else if (n.kind == LayerKind::kFC) {
            double bound = std::sqrt(6.0 / n.fc.in_features);
            for (float& w : n.fc.weight.data)
                w = static_cast<float>(rng.uniform(-bound, bound));
            for (float& b : n.fc.bias.data) b = 0.0f;
        }
    }
}

Tensor LayerGraph::forward(const Tensor& input, bool train, Activations* acts,
                           const std::map<int, Tensor>* overrides) {
    if (nodes_.empty() || nodes_[0].kind != LayerKind::kInput)
        throw std::logic_error("graph has no input node");
    if (output_ < 0) throw std::logic_error("graph has no output node");

    Activations local;
    Activations& a = acts ? *acts : local;
    a.out.assign(nodes_.size(), Tensor());
    a.bn_cache.assign(nodes_.size(), BatchNormCache());
    a.argmax.assign(nodes_.size(), {});
    a.train = train;
    a.valid = true;

    for (size_t i = 0; i < nodes_.size(); ++i) {
        Node& n = nodes_[i];
        try {
            switch (n.kind) {
                case LayerKind::kInput: a.out[i] = input; break;
                case LayerKind::kConv: a.out[i] = n.conv.forward(a.out[n.inputs[0]]); break;
                case LayerKind::kPool:
                    a.out[i] = n.pool.forward(a.out[n.inputs[0]], &a.argmax[i]);
                    break;
                case LayerKind::kFC: a.out[i] = n.fc.forward(a.out[n.inputs[0]]); break;
                case LayerKind::kBatchNorm:
                    a.out[i] = n.bn.forward(a.out[n.inputs[0]], train, &a.bn_cache[i]);
                    break;
                case LayerKind::kReLU: a.out[i] = n.relu.forward(a.out[n.inputs[0]]); break;
                case LayerKind::kSigmoid: a.out[i] = n.sigmoid.forward(a.out[n.inputs[0]]); break;
                case LayerKind::kUpsample: a.out[i] = n.up.forward(a.out[n.inputs[0]]); break;
                case LayerKind::kConcat:
                    a.out[i] = n.concat.forward(a.out[n.inputs[0]], a.out[n.inputs[1]]);
                    break;
            }
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("node '" + n.name + "': " + e.what());
        }
        if (overrides) {
            auto it = overrides->find(static_cast<int>(i));
            if (it != overrides->end()) a.out[i] = it->second;
        }
        debug_check_finite(a.out[i], n.name.c_str());
    }
    return a.out[output_];
}

Tensor LayerGraph::backward(const Activations& a, const Tensor& dout) {
    if (!a.valid) throw std::logic_error("backward called before forward");
    std::vector<Tensor> grad(nodes_.size());
    auto accumulate = [&](int idx, Tensor&& g) {
        if (grad[idx].size() == 0) {
            grad[idx] = std::move(g);
        } else {
            for (size_t k = 0; k < grad[idx].data.size(); ++k) grad[idx].data[k] += g.data[k];
        }
    };
    accumulate(output_, Tensor(dout));

    for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
        Node& n = nodes_[i];
        if (grad[i].size() == 0) continue;  // node not on any path to the output
        const Tensor& dy = grad[i];
        switch (n.kind) {
            case LayerKind::kInput: break;
            case LayerKind::kConv:
                accumulate(n.inputs[0],
                           n.conv.backward(a.out[n.inputs[0]], dy, n.grad_w, n.grad_b));
                break;
            case LayerKind::kPool:
                accumulate(n.inputs[0],
                           n.pool.backward(dy, a.argmax[i], a.out[n.inputs[0]].shape));
                break;
            case LayerKind::kFC:
                accumulate(n.inputs[0], n.fc.backward(a.out[n.inputs[0]], dy, n.grad_w, n.grad_b));
                break;
            case LayerKind::kBatchNorm:
                accumulate(n.inputs[0], n.bn.backward(dy, a.bn_cache[i], n.grad_w, n.grad_b));
                break;
            case LayerKind::kReLU:
                accumulate(n.inputs[0], n.relu.backward(a.out[n.inputs[0]], dy));
                break;
            case LayerKind::kSigmoid:
                accumulate(n.inputs[0], n.sigmoid.backward(a.out[i], dy));
                break;
            case LayerKind::kUpsample:
                accumulate(n.inputs[0], n.up.backward(dy, a.out[n.inputs[0]].shape));
                break;
            case LayerKind::kConcat: {
                auto [da, db] = n.concat.backward(dy, a.out[n.inputs[0]].c());
                accumulate(n.inputs[0], std::move(da));
                accumulate(n.inputs[1], std::move(db));
                break;
            }
        }
    }
    return grad[0].size() ? grad[0] : Tensor();
}

void LayerGraph::zero_grads() {
    for (Node& n : nodes_) {
        switch (n.kind) {
            case LayerKind::kConv:
                n.grad_w = Tensor::zeros_like(n.conv.weight);
                n.grad_b = Tensor::zeros_like(n.conv.bias);
                break;
            case LayerKind::kFC:
                n.grad_w = Tensor::zeros_like(n.fc.weight);
                n.grad_b = Tensor::zeros_like(n.fc.bias);
                break;
            case LayerKind::kBatchNorm:
                n.grad_w = Tensor::zeros_like(n.bn.gamma);
                n.grad_b = Tensor::zeros_like(n.bn.beta);
                break;
            default: break;
        }
    }
}

std::vector<ParamRef> LayerGraph::params() {
    std::vector<ParamRef> refs;
    for (Node& n : nodes_) {
        switch (n.kind) {
            case LayerKind::kConv:
                refs.push_back({n.name + ".weight", &n.conv.weight, &n.grad_w});
                refs.push_back({n.name + ".bias", &n.conv.bias, &n.grad_b});
                break;
            case LayerKind::kFC:
                refs.push_back({n.name + ".weight", &n.fc.weight, &n.grad_w});
                refs.push_back({n.name + ".bias", &n.fc.bias, &n.grad_b});
                break;
            case LayerKind::kBatchNorm:
                refs.push_back({n.name + ".gamma", &n.bn.gamma, &n.grad_w});
                refs.push_back({n.name + ".beta", &n.bn.beta, &n.grad_b});
                break;
            default: break;
        }
    }
    return refs;
}

void LayerGraph::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    nlohmann::json nodes = nlohmann::json::array();
    for (const Node& n : nodes_) {
        nlohmann::json jn = {{"name", n.name},
                             {"kind", layer_kind_name(n.kind)},
                             {"inputs", n.inputs}};
        if (n.kind == LayerKind::kConv)
            jn["cfg"] = {{"in_ch", n.conv.in_ch}, {"out_ch", n.conv.out_ch}, {"ksize", n.conv.ksize}};
        else if (n.kind == LayerKind::kFC)
            jn["cfg"] = {{"in_features", n.fc.in_features}, {"out_features", n.fc.out_features}};
        else if (n.kind == LayerKind::kBatchNorm)
            jn["cfg"] = {{"channels", n.bn.channels}};
        nodes.push_back(jn);
    }
    nlohmann::json manifest = {{"format", "selfaug-checkpoint"},
                               {"version", 1},
                               {"nodes", nodes},
                               {"output", output_}};
    io::save_json(dir / "arch.json", manifest);

    for (const Node& n : nodes_) {
        if (n.kind == LayerKind::kConv) {
            io::write_tensor(dir / (n.name + ".weight.satn"), n.conv.weight);
            io::write_tensor(dir / (n.name + ".bias.satn"), n.conv.bias);
        } else if (n.kind == LayerKind::kFC) {
            io::write_tensor(dir / (n.name + ".weight.satn"), n.fc.weight);
            io::write_tensor(dir / (n.name + ".bias.satn"), n.fc.bias);
        } else if (n.kind == LayerKind::kBatchNorm) {
            io::write_tensor(dir / (n.name + ".gamma.satn"), n.bn.gamma);
            io::write_tensor(dir / (n.name + ".beta.satn"), n.bn.beta);
            io::write_tensor(dir / (n.name + ".running_mean.satn"), n.bn.running_mean);
            io::write_tensor(dir / (n.name + ".running_var.satn"), n.bn.running_var);
        }
    }
}

LayerGraph LayerGraph::load(const std::filesystem::path& dir) {
    nlohmann::json manifest = io::load_json(dir / "arch.json");
    if (manifest.value("format", "") != "selfaug-checkpoint")
        throw std::runtime_error("not a checkpoint directory: " + dir.string());

    LayerGraph g;
    for (const auto& jn : manifest.at("nodes")) {
        std::string name = jn.at("name");
        LayerKind kind = layer_kind_from_name(jn.at("kind"));
        std::vector<int> inputs = jn.value("inputs", std::vector<int>{});
        switch (kind) {
            case LayerKind::kInput: g.add_input(name); break;
            case LayerKind::kConv:
                g.add_conv(name, inputs[0], jn.at("cfg").at("in_ch"), jn.at("cfg").at("out_ch"),
                           jn.at("cfg").at("ksize"));
                break;
            case LayerKind::kPool: g.add_pool(name, inputs[0]); break;
            case LayerKind::kFC:
                g.add_fc(name, inputs[0], jn.at("cfg").at("in_features"),
                         jn.at("cfg").at("out_features"));
                break;
            case LayerKind::kBatchNorm:
                g.add_batchnorm(name, inputs[0], jn.at("cfg").at("channels"));
                break;
            case LayerKind::kReLU: g.add_relu(name, inputs[0]); break;
            case LayerKind::kSigmoid: g.add_sigmoid(name, inputs[0]); break;
            case LayerKind::kUpsample: g.add_upsample(name, inputs[0]); break;
            case LayerKind::kConcat: g.add_concat(name, inputs[0], inputs[1]); break;
        }
    }
    g.set_output(manifest.at("output"));

    for (Node& n : g.nodes_) {
        if (n.kind == LayerKind::kConv) {
            n.conv.weight = io::read_tensor_f32(dir / (n.name + ".weight.satn"));
            n.conv.bias = io::read_tensor_f32(dir / (n.name + ".bias.satn"));
        } else if (n.kind == LayerKind::kFC) {
            n.fc.weight = io::read_tensor_f32(dir / (n.name + ".weight.satn"));
            n.fc.bias = io::read_tensor_f32(dir / (n.name + ".bias.satn"));
        } else if (n.kind == LayerKind::kBatchNorm) {
            n.bn.gamma = io::read_tensor_f32(dir / (n.name + ".gamma.satn"));
            n.bn.beta = io::read_tensor_f32(dir / (n.name + ".beta.satn"));
            n.bn.running_mean = io::read_tensor_f32(dir / (n.name + ".running_mean.satn"));
            n.bn.running_var = io::read_tensor_f32(dir / (n.name + ".running_var.satn"));
        }
    }
    return g;
}

}  // namespace sa
