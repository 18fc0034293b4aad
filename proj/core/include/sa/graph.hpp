#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sa/layers.hpp"
#include "sa/tensor.hpp"

namespace sa {

class Rng;

enum class LayerKind { kInput, kConv, kPool, kFC, kBatchNorm, kReLU, kSigmoid, kUpsample, kConcat };

std::string layer_kind_name(LayerKind k);
LayerKind layer_kind_from_name(const std::string& s);

struct ParamRef {
    std::string name;
    Tensor* value = nullptr;
    Tensor* grad = nullptr;
};

// Acyclic graph of named layer nodes; inputs always precede consumers so
// plain index order is a topological order. Supports the skip-connection
// pattern (one encoder feature consumed by both pool and concat).
class LayerGraph {
  public:
    struct Node {
        std::string name;
        LayerKind kind = LayerKind::kInput;
        std::vector<int> inputs;
        Conv2d conv;
        FullyConnected fc;
        BatchNorm bn;
        MaxPool2 pool;
        ReLU relu;
        Sigmoid sigmoid;
        BilinearUp2 up;
        Concat concat;
        Tensor grad_w, grad_b;  // conv/fc: weight/bias, bn: gamma/beta
    };

    // Per-forward cache of everything backward needs.
    struct Activations {
        std::vector<Tensor> out;
        std::vector<BatchNormCache> bn_cache;
        std::vector<std::vector<int>> argmax;
        bool train = false;
        bool valid = false;
    };

    int add_input(const std::string& name);
    int add_conv(const std::string& name, int input, int in_ch, int out_ch, int ksize = 3);
    int add_pool(const std::string& name, int input);
    int add_fc(const std::string& name, int input, int in_features, int out_features);
    int add_batchnorm(const std::string& name, int input, int channels);
    int add_relu(const std::string& name, int input);
    int add_sigmoid(const std::string& name, int input);
    int add_upsample(const std::string& name, int input);
    int add_concat(const std::string& name, int input_a, int input_b);
    void set_output(int node);

    int output_node() const { return output_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    int find_node(const std::string& name) const;

    void init_weights(Rng& rng);

    // overrides, when given, replace the computed output of the named node
    // (test hook for skip-connection ablation).
    Tensor forward(const Tensor& input, bool train, Activations* acts = nullptr,
                   const std::map<int, Tensor>* overrides = nullptr);

    // Gradient of the loss w.r.t. every learnable parameter (accumulated
    // into the node grads) and the graph input (returned).
    Tensor backward(const Activations& acts, const Tensor& dout);

    void zero_grads();
    std::vector<ParamRef> params();

    void save(const std::filesystem::path& dir) const;
    static LayerGraph load(const std::filesystem::path& dir);

  private:
    int add_node(Node&& node);
    void check_input_index(int input) const;

    std::vector<Node> nodes_;
    int output_ = -1;
};

}  // namespace sa
