#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "sa/common.hpp"
#include "sa/image.hpp"

namespace sa {

// Isotropic Ward model. Channel count is 1 (monochrome homogeneous path)
// or 3 (spatially varying path).
struct WardBrdf {
    int channels = 1;
    std::array<double, 3> rho_d{};  // diffuse albedo, [0, 1]
    std::array<double, 3> rho_s{};  // specular albedo, [0, 1]
    std::array<double, 3> alpha{};  // specular roughness, (0, 1]

    static WardBrdf mono(double rd, double rs, double a) {
        WardBrdf b;
        b.channels = 1;
        b.rho_d[0] = rd;
        b.rho_s[0] = rs;
        b.alpha[0] = a;
        return b;
    }
    static WardBrdf rgb(std::array<double, 3> rd, std::array<double, 3> rs,
                        std::array<double, 3> a) {
        return WardBrdf{3, rd, rs, a};
    }
};

// Reduced SVBRDF: per-pixel diffuse albedo and normals, homogeneous
// specular albedo and roughness.
struct SvbrdfMaps {
    Image diffuse;   // H x W x 3, values in [0, 1]
    Image normals;   // H x W x 3, unit vectors with positive z
    std::array<double, 3> rho_s{};
    std::array<double, 3> alpha{};
    std::string id;
};

// Network-side parameterization: relative diffuse albedo with
// avg(rho_d_rel) = 0.5 over all channels and pixels, log-relative specular
// albedo, log roughness, and normals encoded into [0, 1] via (n + 1) / 2.
struct RelativeParams {
    Image rho_d_rel;
    std::array<double, 3> rho_s_logrel{};
    std::array<double, 3> alpha_log{};
    Image normals_enc;
};

// Homogeneous-path parameterization: specular albedo relative to the
// diffuse albedo (plain ratio), log roughness.
struct BrdfNetParams {
    int channels = 1;
    std::array<double, 3> rho_s_rel{};
    std::array<double, 3> alpha_log{};
};

struct DirectionPair {
    Vec3 wi;  // toward the light
    Vec3 wo;  // toward the viewer
    Vec3 n;   // surface normal
};

struct ClampCounter {
    int64_t clamped = 0;
};

// Ward BRDF value per channel:
//   rho_d/pi + rho_s * exp(-tan^2(delta)/alpha^2)
//              / (4*pi*alpha^2 * sqrt((wi.n)(wo.n)))
// with h = (wi+wo)/|wi+wo| and cos(delta) = h.n. Returns 0 below the
// horizon so shading loops can sum over full texel sets. Throws
// std::domain_error for alpha <= 0.
std::array<double, 3> eval_ward(const WardBrdf& brdf, const DirectionPair& dirs);

// Relative parameterization with scale s = 2 * avg(rho_d); any uniform
// scaling of (rho_d, rho_s) leaves the result unchanged.
std::pair<RelativeParams, double> normalize_svbrdf(const SvbrdfMaps& maps);

BrdfNetParams normalize_brdfnet(const WardBrdf& brdf);

// Inverses. The albedo choice supplies the absolute scale lost in
// normalization; out-of-range results clamp into [0, 1] and count.
SvbrdfMaps denormalize_svbrdf(const RelativeParams& rel, double scale_s,
                              ClampCounter* counter = nullptr);
WardBrdf denormalize_brdfnet(const BrdfNetParams& params, double rho_d_choice,
                             ClampCounter* counter = nullptr);

Image encode_normals(const Image& normals);
// Decoded normals are renormalized to unit length; z is kept positive.
Image decode_normals(const Image& encoded);

inline double clamp_alpha(double a) { return clamp(a, kAlphaMin, kAlphaMax); }

}  // namespace sa
