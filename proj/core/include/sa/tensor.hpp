#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace sa {

// Dense 4-D array, (batch, channel, height, width) row-major. Lower-rank
// data uses trailing singleton dims. float for training, double for the
// finite-difference gradient-check path.
template <typename T>
struct TensorT {
    std::array<int, 4> shape{0, 0, 0, 0};
    std::vector<T> data;

    TensorT() = default;
    TensorT(int n, int c, int h, int w, T fill = T(0))
        : shape{n, c, h, w}, data(static_cast<size_t>(n) * c * h * w, fill) {
        if (n <= 0 || c <= 0 || h <= 0 || w <= 0)
            throw std::invalid_argument("Tensor: non-positive dims");
    }

    static TensorT zeros_like(const TensorT& o) {
        return TensorT(o.shape[0], o.shape[1], o.shape[2], o.shape[3]);
    }

    int n() const { return shape[0]; }
    int c() const { return shape[1]; }
    int h() const { return shape[2]; }
    int w() const { return shape[3]; }

    size_t size() const { return data.size(); }

    T& at(int n_, int c_, int h_, int w_) {
        return data[((static_cast<size_t>(n_) * shape[1] + c_) * shape[2] + h_) * shape[3] + w_];
    }
    T at(int n_, int c_, int h_, int w_) const {
        return data[((static_cast<size_t>(n_) * shape[1] + c_) * shape[2] + h_) * shape[3] + w_];
    }

    bool same_shape(const TensorT& o) const { return shape == o.shape; }

    std::string shape_str() const {
        return "(" + std::to_string(shape[0]) + "," + std::to_string(shape[1]) + "," +
               std::to_string(shape[2]) + "," + std::to_string(shape[3]) + ")";
    }

    template <typename U>
    TensorT<U> cast() const {
        TensorT<U> out(shape[0], shape[1], shape[2], shape[3]);
        for (size_t i = 0; i < data.size(); ++i) out.data[i] = static_cast<U>(data[i]);
        return out;
    }
};

using Tensor = TensorT<float>;
using TensorD = TensorT<double>;

template <typename T>
bool all_finite(const TensorT<T>& t) {
    for (T v : t.data)
        if (!std::isfinite(static_cast<double>(v))) return false;
    return true;
}

// Debug-mode NaN hook: cheap no-op in release builds.
template <typename T>
void debug_check_finite(const TensorT<T>& t, const char* where) {
#ifndef NDEBUG
    if (!all_finite(t)) throw std::runtime_error(std::string("non-finite values after ") + where);
#else
    (void)t;
    (void)where;
#endif
}

}  // namespace sa
