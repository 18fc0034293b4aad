#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sa/common.hpp"
#include "sa/tensor.hpp"

// Layer math, templated on the scalar type: float for training, double for
// the finite-difference gradient checks. Backward routines accumulate (+=)
// into the supplied parameter-gradient tensors.

namespace sa {

template <typename T>
struct Conv2dT {
    int in_ch = 0, out_ch = 0, ksize = 3;
    TensorT<T> weight;  // (out_ch, in_ch, k, k)
    TensorT<T> bias;    // (out_ch, 1, 1, 1)

    Conv2dT() = default;
    Conv2dT(int in_c, int out_c, int k)
        : in_ch(in_c), out_ch(out_c), ksize(k),
          weight(out_c, in_c, k, k), bias(out_c, 1, 1, 1) {
        if (k % 2 == 0) throw std::invalid_argument("conv: kernel size must be odd");
    }

    TensorT<T> forward(const TensorT<T>& x) const {
        if (x.c() != in_ch)
            throw std::invalid_argument("conv: expected " + std::to_string(in_ch) +
                                        " input channels, got " + std::to_string(x.c()));
        const int N = x.n(), H = x.h(), W = x.w(), pad = ksize / 2;
        TensorT<T> y(N, out_ch, H, W);
        for (int n = 0; n < N; ++n)
            for (int oc = 0; oc < out_ch; ++oc) {
                T b = bias.data[oc];
                T* ybase = &y.at(n, oc, 0, 0);
                for (int i = 0; i < H * W; ++i) ybase[i] = b;
                for (int ic = 0; ic < in_ch; ++ic)
                    for (int kh = 0; kh < ksize; ++kh)
                        for (int kw = 0; kw < ksize; ++kw) {
                            T wv = weight.at(oc, ic, kh, kw);
                            int oh0 = std::max(0, pad - kh), oh1 = std::min(H, H + pad - kh);
                            int ow0 = std::max(0, pad - kw), ow1 = std::min(W, W + pad - kw);
                            for (int oh = oh0; oh < oh1; ++oh) {
                                const T* xrow = &x.at(n, ic, oh + kh - pad, 0) + (kw - pad);
                                T* yrow = &y.at(n, oc, oh, 0);
                                for (int ow = ow0; ow < ow1; ++ow) yrow[ow] += wv * xrow[ow];
                            }
                        }
            }
        return y;
    }

    TensorT<T> backward(const TensorT<T>& x, const TensorT<T>& dy, TensorT<T>& dweight,
                        TensorT<T>& dbias) const {
        const int N = x.n(), H = x.h(), W = x.w(), pad = ksize / 2;
        TensorT<T> dx = TensorT<T>::zeros_like(x);
        for (int n = 0; n < N; ++n)
            for (int oc = 0; oc < out_ch; ++oc) {
                const T* dybase = &dy.at(n, oc, 0, 0);
                T acc = T(0);
                for (int i = 0; i < H * W; ++i) acc += dybase[i];
                dbias.data[oc] += acc;
                for (int ic = 0; ic < in_ch; ++ic)
                    for (int kh = 0; kh < ksize; ++kh)
                        for (int kw = 0; kw < ksize; ++kw) {
                            T wv = weight.at(oc, ic, kh, kw);
                            T dw = T(0);
                            int oh0 = std::max(0, pad - kh), oh1 = std::min(H, H + pad - kh);
                            int ow0 = std::max(0, pad - kw), ow1 = std::min(W, W + pad - kw);
                            for (int oh = oh0; oh < oh1; ++oh) {
                                const T* xrow = &x.at(n, ic, oh + kh - pad, 0) + (kw - pad);
                                T* dxrow = &dx.at(n, ic, oh + kh - pad, 0) + (kw - pad);
                                const T* dyrow = &dy.at(n, oc, oh, 0);
                                for (int ow = ow0; ow < ow1; ++ow) {
                                    dw += dyrow[ow] * xrow[ow];
                                    dxrow[ow] += wv * dyrow[ow];
                                }
                            }
                            dweight.at(oc, ic, kh, kw) += dw;
                        }
            }
        return dx;
    }
};

// 2x2 max pooling, stride 2. Requires even spatial dims.
template <typename T>
struct MaxPool2T {
    TensorT<T> forward(const TensorT<T>& x, std::vector<int>* argmax) const {
        if (x.h() % 2 != 0 || x.w() % 2 != 0)
            throw std::invalid_argument("maxpool: spatial dims must be even");
        const int N = x.n(), C = x.c(), OH = x.h() / 2, OW = x.w() / 2;
        TensorT<T> y(N, C, OH, OW);
        if (argmax) argmax->assign(y.size(), 0);
        size_t o = 0;
        for (int n = 0; n < N; ++n)
            for (int c = 0; c < C; ++c)
                for (int oh = 0; oh < OH; ++oh)
                    for (int ow = 0; ow < OW; ++ow, ++o) {
                        int best_h = 2 * oh, best_w = 2 * ow;
                        T best = x.at(n, c, best_h, best_w);
                        for (int dh = 0; dh < 2; ++dh)
                            for (int dw = 0; dw < 2; ++dw) {
                                T v = x.at(n, c, 2 * oh + dh, 2 * ow + dw);
                                if (v > best) {
                                    best = v;
                                    best_h = 2 * oh + dh;
                                    best_w = 2 * ow + dw;
                                }
                            }
                        y.data[o] = best;
                        if (argmax)
                            (*argmax)[o] = (best_h * x.w() + best_w);
                    }
        return y;
    }

    TensorT<T> backward(const TensorT<T>& dy, const std::vector<int>& argmax,
                        const std::array<int, 4>& in_shape) const {
        TensorT<T> dx(in_shape[0], in_shape[1], in_shape[2], in_shape[3]);
        const int C = in_shape[1];
        size_t o = 0;
        size_t plane = static_cast<size_t>(in_shape[2]) * in_shape[3];
        for (int n = 0; n < dy.n(); ++n)
            for (int c = 0; c < C; ++c) {
                T* dxp = dx.data.data() + (static_cast<size_t>(n) * C + c) * plane;
                for (int i = 0; i < dy.h() * dy.w(); ++i, ++o) dxp[argmax[o]] += dy.data[o];
            }
        return dx;
    }
};

// Fully connected; flattens whatever (C, H, W) it is given.
template <typename T>
struct FullyConnectedT {
    int in_features = 0, out_features = 0;
    TensorT<T> weight;  // (out, in, 1, 1)
    TensorT<T> bias;    // (out, 1, 1, 1)

    FullyConnectedT() = default;
    FullyConnectedT(int in_f, int out_f)
        : in_features(in_f), out_features(out_f), weight(out_f, in_f, 1, 1), bias(out_f, 1, 1, 1) {}

    TensorT<T> forward(const TensorT<T>& x) const {
        const int N = x.n(), F = x.c() * x.h() * x.w();
        if (F != in_features)
            throw std::invalid_argument("fc: expected " + std::to_string(in_features) +
                                        " features, got " + std::to_string(F));
        TensorT<T> y(N, out_features, 1, 1);
        for (int n = 0; n < N; ++n) {
            const T* xv = &x.data[static_cast<size_t>(n) * F];
            for (int o = 0; o < out_features; ++o) {
                const T* wrow = &weight.data[static_cast<size_t>(o) * F];
                T acc = bias.data[o];
                for (int i = 0; i < F; ++i) acc += wrow[i] * xv[i];
                y.at(n, o, 0, 0) = acc;
            }
        }
        return y;
    }

    TensorT<T> backward(const TensorT<T>& x, const TensorT<T>& dy, TensorT<T>& dweight,
                        TensorT<T>& dbias) const {
        const int N = x.n(), F = in_features;
        TensorT<T> dx = TensorT<T>::zeros_like(x);
        for (int n = 0; n < N; ++n) {
            const T* xv = &x.data[static_cast<size_t>(n) * F];
            T* dxv = &dx.data[static_cast<size_t>(n) * F];
            for (int o = 0; o < out_features; ++o) {
                T g = dy.at(n, o, 0, 0);
                dbias.data[o] += g;
                const T* wrow = &weight.data[static_cast<size_t>(o) * F];
                T* dwrow = &dweight.data[static_cast<size_t>(o) * F];
                for (int i = 0; i < F; ++i) {
                    dwrow[i] += g * xv[i];
                    dxv[i] += g * wrow[i];
                }
            }
        }
        return dx;
    }
};

template <typename T>
struct BatchNormCacheT {
    std::vector<T> mean, invstd;
    TensorT<T> xhat;
    bool train = false;
};

// Per-channel batch normalization over (N, H, W). Biased batch variance is
// used both for normalization and the running estimate.
template <typename T>
struct BatchNormT {
    int channels = 0;
    double momentum = 0.1;
    double eps = 1e-5;
    TensorT<T> gamma, beta;                  // learnable
    TensorT<T> running_mean, running_var;    // buffers

    BatchNormT() = default;
    explicit BatchNormT(int c)
        : channels(c), gamma(1, c, 1, 1, T(1)), beta(1, c, 1, 1),
          running_mean(1, c, 1, 1), running_var(1, c, 1, 1, T(1)) {}

    TensorT<T> forward(const TensorT<T>& x, bool train, BatchNormCacheT<T>* cache) {
        if (x.c() != channels)
            throw std::invalid_argument("batchnorm: expected " + std::to_string(channels) +
                                        " channels, got " + std::to_string(x.c()));
        const int N = x.n(), C = x.c(), HW = x.h() * x.w();
        const size_t m = static_cast<size_t>(N) * HW;
        TensorT<T> y = TensorT<T>::zeros_like(x);
        if (cache) {
            cache->train = train;
            cache->mean.assign(C, T(0));
            cache->invstd.assign(C, T(0));
        }
        for (int c = 0; c < C; ++c) {
            T mu, var;
            if (train) {
                T s = T(0), s2 = T(0);
                for (int n = 0; n < N; ++n) {
                    const T* xp = &x.at(n, c, 0, 0);
                    for (int i = 0; i < HW; ++i) {
                        s += xp[i];
                        s2 += xp[i] * xp[i];
                    }
                }
                mu = s / T(m);
                var = s2 / T(m) - mu * mu;
                if (var < T(0)) var = T(0);
                running_mean.data[c] =
                    T((1.0 - momentum) * running_mean.data[c] + momentum * mu);
                running_var.data[c] =
                    T((1.0 - momentum) * running_var.data[c] + momentum * var);
            } else {
                mu = running_mean.data[c];
                var = running_var.data[c];
            }
            T invstd = T(1) / std::sqrt(var + T(eps));
            if (cache) {
                cache->mean[c] = mu;
                cache->invstd[c] = invstd;
            }
            T g = gamma.data[c], b = beta.data[c];
            for (int n = 0; n < N; ++n) {
                const T* xp = &x.at(n, c, 0, 0);
                T* yp = &y.at(n, c, 0, 0);
                for (int i = 0; i < HW; ++i) yp[i] = g * (xp[i] - mu) * invstd + b;
            }
        }
        if (cache) {
            cache->xhat = TensorT<T>::zeros_like(x);
            for (int c = 0; c < C; ++c) {
                T mu = cache->mean[c], invstd = cache->invstd[c];
                for (int n = 0; n < N; ++n) {
                    const T* xp = &x.at(n, c, 0, 0);
                    T* hp = &cache->xhat.at(n, c, 0, 0);
                    for (int i = 0; i < HW; ++i) hp[i] = (xp[i] - mu) * invstd;
                }
            }
        }
        return y;
    }

    TensorT<T> backward(const TensorT<T>& dy, const BatchNormCacheT<T>& cache, TensorT<T>& dgamma,
                        TensorT<T>& dbeta) const {
        const int N = dy.n(), C = dy.c(), HW = dy.h() * dy.w();
        const T m = T(static_cast<double>(N) * HW);
        TensorT<T> dx = TensorT<T>::zeros_like(dy);
        for (int c = 0; c < C; ++c) {
            T sum_dy = T(0), sum_dyx = T(0);
            for (int n = 0; n < N; ++n) {
                const T* dyp = &dy.at(n, c, 0, 0);
                const T* hp = &cache.xhat.at(n, c, 0, 0);
                for (int i = 0; i < HW; ++i) {
                    sum_dy += dyp[i];
                    sum_dyx += dyp[i] * hp[i];
                }
            }
            dgamma.data[c] += sum_dyx;
            dbeta.data[c] += sum_dy;
            T g = gamma.data[c], invstd = cache.invstd[c];
            if (cache.train) {
                for (int n = 0; n < N; ++n) {
                    const T* dyp = &dy.at(n, c, 0, 0);
                    const T* hp = &cache.xhat.at(n, c, 0, 0);
                    T* dxp = &dx.at(n, c, 0, 0);
                    for (int i = 0; i < HW; ++i)
                        dxp[i] = g * invstd / m * (m * dyp[i] - sum_dy - hp[i] * sum_dyx);
                }
            } else {
                for (int n = 0; n < N; ++n) {
                    const T* dyp = &dy.at(n, c, 0, 0);
                    T* dxp = &dx.at(n, c, 0, 0);
                    for (int i = 0; i < HW; ++i) dxp[i] = g * invstd * dyp[i];
                }
            }
        }
        return dx;
    }
};

template <typename T>
struct ReLUT {
    TensorT<T> forward(const TensorT<T>& x) const {
        TensorT<T> y = x;
        for (T& v : y.data)
            if (v < T(0)) v = T(0);
        return y;
    }
    TensorT<T> backward(const TensorT<T>& x, const TensorT<T>& dy) const {
        TensorT<T> dx = dy;
        for (size_t i = 0; i < dx.data.size(); ++i)
            if (x.data[i] <= T(0)) dx.data[i] = T(0);
        return dx;
    }
};

template <typename T>
struct SigmoidT {
    TensorT<T> forward(const TensorT<T>& x) const {
        TensorT<T> y = x;
        for (T& v : y.data) v = T(1) / (T(1) + std::exp(-v));
        return y;
    }
    TensorT<T> backward(const TensorT<T>& y, const TensorT<T>& dy) const {
        TensorT<T> dx = dy;
        for (size_t i = 0; i < dx.data.size(); ++i)
            dx.data[i] = dy.data[i] * y.data[i] * (T(1) - y.data[i]);
        return dx;
    }
};

// Bilinear 2x upsampling with half-pixel centers (source coordinate
// s = (d + 0.5)/2 - 0.5, edge-clamped).
template <typename T>
struct BilinearUp2T {
    static void taps(int d, int in_size, int& i0, int& i1, T& w1) {
        double s = (d + 0.5) / 2.0 - 0.5;
        int f = static_cast<int>(std::floor(s));
        double frac = s - f;
        i0 = clamp(f, 0, in_size - 1);
        i1 = clamp(f + 1, 0, in_size - 1);
        w1 = T(frac);
    }

    TensorT<T> forward(const TensorT<T>& x) const {
        const int N = x.n(), C = x.c(), H = x.h(), W = x.w();
        TensorT<T> y(N, C, 2 * H, 2 * W);
        for (int oy = 0; oy < 2 * H; ++oy) {
            int y0, y1;
            T wy;
            taps(oy, H, y0, y1, wy);
            for (int ox = 0; ox < 2 * W; ++ox) {
                int x0, x1;
                T wx;
                taps(ox, W, x0, x1, wx);
                for (int n = 0; n < N; ++n)
                    for (int c = 0; c < C; ++c) {
                        T v = (T(1) - wy) * ((T(1) - wx) * x.at(n, c, y0, x0) +
                                             wx * x.at(n, c, y0, x1)) +
                              wy * ((T(1) - wx) * x.at(n, c, y1, x0) + wx * x.at(n, c, y1, x1));
                        y.at(n, c, oy, ox) = v;
                    }
            }
        }
        return y;
    }

    TensorT<T> backward(const TensorT<T>& dy, const std::array<int, 4>& in_shape) const {
        const int N = in_shape[0], C = in_shape[1], H = in_shape[2], W = in_shape[3];
        TensorT<T> dx(N, C, H, W);
        for (int oy = 0; oy < 2 * H; ++oy) {
            int y0, y1;
            T wy;
            taps(oy, H, y0, y1, wy);
            for (int ox = 0; ox < 2 * W; ++ox) {
                int x0, x1;
                T wx;
                taps(ox, W, x0, x1, wx);
                for (int n = 0; n < N; ++n)
                    for (int c = 0; c < C; ++c) {
                        T g = dy.at(n, c, oy, ox);
                        dx.at(n, c, y0, x0) += (T(1) - wy) * (T(1) - wx) * g;
                        dx.at(n, c, y0, x1) += (T(1) - wy) * wx * g;
                        dx.at(n, c, y1, x0) += wy * (T(1) - wx) * g;
                        dx.at(n, c, y1, x1) += wy * wx * g;
                    }
            }
        }
        return dx;
    }
};

// Channel-wise concatenation of two inputs with equal spatial dims.
template <typename T>
struct ConcatT {
    TensorT<T> forward(const TensorT<T>& a, const TensorT<T>& b) const {
        if (a.n() != b.n() || a.h() != b.h() || a.w() != b.w())
            throw std::invalid_argument("concat: spatial/batch dims must match");
        TensorT<T> y(a.n(), a.c() + b.c(), a.h(), a.w());
        const int HW = a.h() * a.w();
        for (int n = 0; n < a.n(); ++n) {
            for (int c = 0; c < a.c(); ++c)
                std::copy_n(&a.at(n, c, 0, 0), HW, &y.at(n, c, 0, 0));
            for (int c = 0; c < b.c(); ++c)
                std::copy_n(&b.at(n, c, 0, 0), HW, &y.at(n, a.c() + c, 0, 0));
        }
        return y;
    }
    std::pair<TensorT<T>, TensorT<T>> backward(const TensorT<T>& dy, int a_channels) const {
        const int HW = dy.h() * dy.w();
        TensorT<T> da(dy.n(), a_channels, dy.h(), dy.w());
        TensorT<T> db(dy.n(), dy.c() - a_channels, dy.h(), dy.w());
        for (int n = 0; n < dy.n(); ++n) {
            for (int c = 0; c < a_channels; ++c)
                std::copy_n(&dy.at(n, c, 0, 0), HW, &da.at(n, c, 0, 0));
            for (int c = 0; c < db.c(); ++c)
                std::copy_n(&dy.at(n, a_channels + c, 0, 0), HW, &db.at(n, c, 0, 0));
        }
        return {std::move(da), std::move(db)};
    }
};

using Conv2d = Conv2dT<float>;
using MaxPool2 = MaxPool2T<float>;
using FullyConnected = FullyConnectedT<float>;
using BatchNorm = BatchNormT<float>;
using BatchNormCache = BatchNormCacheT<float>;
using ReLU = ReLUT<float>;
using Sigmoid = SigmoidT<float>;
using BilinearUp2 = BilinearUp2T<float>;
using Concat = ConcatT<float>;

}  // namespace sa
