#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sa/graph.hpp"
#include "sa/tensor.hpp"

namespace sa {

struct MseLoss {
    double value = 0.0;
    Tensor grad;  // d(loss)/d(pred), same shape as pred
};

// Mean over all elements of the squared difference.
MseLoss mse_loss(const Tensor& pred, const Tensor& target);

struct AdamHyper {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Standard ADAM with bias correction; moment buffers are sized lazily on
// the first step and keyed by parameter order.
class Adam {
  public:
    Adam() = default;
    explicit Adam(AdamHyper hyper) : hyper_(hyper) {}

    void step(const std::vector<ParamRef>& params);

    int64_t step_count() const { return t_; }
    const AdamHyper& hyper() const { return hyper_; }

    void save(const std::filesystem::path& dir) const;
    void load(const std::filesystem::path& dir);

  private:
    AdamHyper hyper_;
    int64_t t_ = 0;
    std::vector<Tensor> m_, v_;
};

}  // namespace sa
