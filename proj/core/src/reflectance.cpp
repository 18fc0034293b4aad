#include "sa/reflectance.hpp"

#include <cmath>
#include <stdexcept>

namespace sa {

std::array<double, 3> eval_ward(const WardBrdf& brdf, const DirectionPair& dirs) {
    for (int c = 0; c < brdf.channels; ++c)
        if (brdf.alpha[c] <= 0.0) throw std::domain_error("eval_ward: alpha must be > 0");

    std::array<double, 3> out{};
    double cos_i = dot(dirs.wi, dirs.n);
    double cos_o = dot(dirs.wo, dirs.n);
    if (cos_i <= 0.0 || cos_o <= 0.0) return out;

    Vec3 h = dirs.wi + dirs.wo;
    double hlen = length(h);
    double cos_delta = dot(h, dirs.n) / hlen;
    double cos2 = cos_delta * cos_delta;
    // Bounded, branch-free near delta -> 90 degrees.
    double tan2 = (1.0 - cos2) / std::max(cos2, 1e-12);
    double geom = std::sqrt(cos_i * cos_o);

    for (int c = 0; c < brdf.channels; ++c) {
        double a2 = brdf.alpha[c] * brdf.alpha[c];
        double spec = brdf.rho_s[c] * std::exp(-tan2 / a2) / (4.0 * kPi * a2 * geom);
        out[c] = brdf.rho_d[c] / kPi + spec;
    }
    return out;
}

std::pair<RelativeParams, double> normalize_svbrdf(const SvbrdfMaps& maps) {
    double avg = image_mean(maps.diffuse);
    if (avg <= 0.0) throw std::invalid_argument("normalize_svbrdf: zero diffuse mean");
    double s = 2.0 * avg;

    RelativeParams rel;
    rel.rho_d_rel = maps.diffuse;
    for (float& v : rel.rho_d_rel.data) v = static_cast<float>(v / s);
    for (int c = 0; c < 3; ++c) {
        if (maps.rho_s[c] <= 0.0)
            throw std::invalid_argument("normalize_svbrdf: rho_s must be > 0 for log transform");
        rel.rho_s_logrel[c] = std::log(maps.rho_s[c] / s);
        rel.alpha_log[c] = std::log(maps.alpha[c]);
    }
    rel.normals_enc = encode_normals(maps.normals);
    return {rel, s};
}

BrdfNetParams normalize_brdfnet(const WardBrdf& brdf) {
    BrdfNetParams p;
    p.channels = brdf.channels;
    for (int c = 0; c < brdf.channels; ++c) {
        if (brdf.rho_d[c] <= 0.0)
            throw std::invalid_argument("normalize_brdfnet: rho_d must be > 0");
        p.rho_s_rel[c] = brdf.rho_s[c] / brdf.rho_d[c];
        p.alpha_log[c] = std::log(brdf.alpha[c]);
    }
    return p;
}

namespace {

double clamp_unit(double v, ClampCounter* counter) {
    if (v < 0.0 || v > 1.0) {
        if (counter) ++counter->clamped;
        return clamp(v, 0.0, 1.0);
    }
    return v;
}

}  // namespace

SvbrdfMaps denormalize_svbrdf(const RelativeParams& rel, double scale_s, ClampCounter* counter) {
    if (scale_s <= 0.0) throw std::invalid_argument("denormalize_svbrdf: scale must be > 0");
    SvbrdfMaps maps;
    maps.diffuse = rel.rho_d_rel;
    for (float& v : maps.diffuse.data)
        v = static_cast<float>(clamp_unit(static_cast<double>(v) * scale_s, counter));
    for (int c = 0; c < 3; ++c) {
        maps.rho_s[c] = clamp_unit(std::exp(rel.rho_s_logrel[c]) * scale_s, counter);
        maps.alpha[c] = std::exp(rel.alpha_log[c]);
    }
    maps.normals = decode_normals(rel.normals_enc);
    return maps;
}

WardBrdf denormalize_brdfnet(const BrdfNetParams& params, double rho_d_choice,
                             ClampCounter* counter) {
    WardBrdf b;
    b.channels = params.channels;
    for (int c = 0; c < params.channels; ++c) {
        b.rho_d[c] = clamp_unit(rho_d_choice, counter);
        b.rho_s[c] = clamp_unit(params.rho_s_rel[c] * rho_d_choice, counter);
        b.alpha[c] = std::exp(params.alpha_log[c]);
    }
    return b;
}

Image encode_normals(const Image& normals) {
    Image enc = normals;
    for (float& v : enc.data) v = 0.5f * (v + 1.0f);
    return enc;
}

Image decode_normals(const Image& encoded) {
    Image out = encoded;
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            double nx = 2.0 * out.at(y, x, 0) - 1.0;
            double ny = 2.0 * out.at(y, x, 1) - 1.0;
            double nz = std::max(2.0 * out.at(y, x, 2) - 1.0, 1e-4);
            double len = std::sqrt(nx * nx + ny * ny + nz * nz);
            out.at(y, x, 0) = static_cast<float>(nx / len);
            out.at(y, x, 1) = static_cast<float>(ny / len);
            out.at(y, x, 2) = static_cast<float>(nz / len);
        }
    }
    return out;
}

}  // namespace sa
