#include "sa/optim.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sa/io.hpp"

namespace sa {

MseLoss mse_loss(const Tensor& pred, const Tensor& target) {
    if (!pred.same_shape(target))
        throw std::invalid_argument("mse_loss: shape mismatch " + pred.shape_str() + " vs " +
                                    target.shape_str());
    MseLoss out;
    out.grad = Tensor::zeros_like(pred);
    const double inv_n = 1.0 / static_cast<double>(pred.size());
    double acc = 0.0;
    for (size_t i = 0; i < pred.data.size(); ++i) {
        double d = static_cast<double>(pred.data[i]) - target.data[i];
        acc += d * d;
        out.grad.data[i] = static_cast<float>(2.0 * d * inv_n);
    }
    out.value = acc * inv_n;
    return out;
}

void Adam::step(const std::vector<ParamRef>& params) {
    if (m_.empty()) {
        for (const ParamRef& p : params) {
            m_.push_back(Tensor::zeros_like(*p.value));
            v_.push_back(Tensor::zeros_like(*p.value));
        }
    }
    if (m_.size() != params.size())
        throw std::invalid_argument("adam: parameter count changed between steps");

    ++t_;
    const double bc1 = 1.0 - std::pow(hyper_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(hyper_.beta2, static_cast<double>(t_));
    for (size_t i = 0; i < params.size(); ++i) {
        Tensor& w = *params[i].value;
        const Tensor& g = *params[i].grad;
        if (!w.same_shape(g) || !w.same_shape(m_[i]))
            throw std::invalid_argument("adam: shape mismatch for " + params[i].name);
        for (size_t k = 0; k < w.data.size(); ++k) {
            double grad = g.data[k];
            double m = hyper_.beta1 * m_[i].data[k] + (1.0 - hyper_.beta1) * grad;
            double v = hyper_.beta2 * v_[i].data[k] + (1.0 - hyper_.beta2) * grad * grad;
            m_[i].data[k] = static_cast<float>(m);
            v_[i].data[k] = static_cast<float>(v);
            double mhat = m / bc1;
            double vhat = v / bc2;
            w.data[k] = static_cast<float>(w.data[k] - hyper_.lr * mhat / (std::sqrt(vhat) + hyper_.eps));
        }
    }
}

void Adam::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    nlohmann::json j = {{"t", t_},
                        {"lr", hyper_.lr},
                        {"beta1", hyper_.beta1},
                        {"beta2", hyper_.beta2},
                        {"eps", hyper_.eps},
                        {"count", m_.size()}};
    io::save_json(dir / "adam.json", j);
    for (size_t i = 0; i < m_.size(); ++i) {
        io::write_tensor(dir / ("adam.m" + std::to_string(i) + ".satn"), m_[i]);
        io::write_tensor(dir / ("adam.v" + std::to_string(i) + ".satn"), v_[i]);
    }
}

void Adam::load(const std::filesystem::path& dir) {
    nlohmann::json j = io::load_json(dir / "adam.json");
    t_ = j.at("t");
    hyper_.lr = j.at("lr");
    hyper_.beta1 = j.at("beta1");
    hyper_.beta2 = j.at("beta2");
    hyper_.eps = j.at("eps");
    size_t count = j.at("count");
    m_.clear();
    v_.clear();
    for (size_t i = 0; i < count; ++i) {
        m_.push_back(io::read_tensor_f32(dir / ("adam.m" + std::to_string(i) + ".satn")));
        v_.push_back(io::read_tensor_f32(dir / ("adam.v" + std::to_string(i) + ".satn")));
    }
}

}  // namespace sa
