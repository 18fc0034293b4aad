#include "sa/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sa/io.hpp"

namespace sa {

std::array<double, 3> shade(const WardBrdf& brdf, const Vec3& n, const Vec3& wo,
                            const EnvironmentMap& env) {
    const Image& rad = env.radiance;
    std::array<double, 3> acc{};
    for (int r = 0; r < rad.height; ++r) {
        double dw = texel_solid_angle(rad.height, rad.width, r);
        for (int c = 0; c < rad.width; ++c) {
            Vec3 wi = texel_direction(rad.height, rad.width, r, c);
            double cos_i = dot(wi, n);
            if (cos_i <= 0.0) continue;
            std::array<double, 3> f = eval_ward(brdf, {wi, wo, n});
            double w = cos_i * dw;
            for (int ch = 0; ch < rad.channels; ++ch) acc[ch] += f[ch] * rad.at(r, c, ch) * w;
        }
    }
    return acc;
}

RenderedImage render_sphere(const WardBrdf& brdf, const EnvironmentMap& env, int resolution) {
    if (resolution < 16) throw std::invalid_argument("render_sphere: resolution must be >= 16");
    validate_env(env);
    if (env.channels() != brdf.channels)
        throw std::invalid_argument("render_sphere: env/brdf channel mismatch");

    RenderedImage out;
    out.pixels = Image(resolution, resolution, brdf.channels);
    out.prov.env_id = env.id;
    const Vec3 wo{0.0, 0.0, 1.0};
    for (int r = 0; r < resolution; ++r) {
        double y = 1.0 - 2.0 * (r + 0.5) / resolution;
        for (int c = 0; c < resolution; ++c) {
            double x = 2.0 * (c + 0.5) / resolution - 1.0;
            double rr = x * x + y * y;
            if (rr >= 1.0) continue;
            Vec3 n{x, y, std::sqrt(1.0 - rr)};
            std::array<double, 3> L = shade(brdf, n, wo, env);
            for (int ch = 0; ch < brdf.channels; ++ch)
                out.pixels.at(r, c, ch) = static_cast<float>(L[ch]);
        }
    }
    return out;
}

RenderedImage render_planar(const SvbrdfMaps& maps, const EnvironmentMap& env,
                            int rotation_texels) {
    validate_env(env);
    if (env.channels() != 3) throw std::invalid_argument("render_planar: env must be RGB");
    if (!maps.diffuse.same_shape(maps.normals))
        throw std::invalid_argument("render_planar: diffuse/normal shape mismatch");

    EnvironmentMap lit = rotate_texels(env, rotation_texels);
    RenderedImage out;
    out.pixels = Image(maps.diffuse.height, maps.diffuse.width, 3);
    out.prov.env_id = env.id;
    out.prov.rotation_texels = rotation_texels;
    out.prov.params_id = maps.id;
    const Vec3 wo{0.0, 0.0, 1.0};
    WardBrdf b;
    b.channels = 3;
    b.rho_s = maps.rho_s;
    b.alpha = maps.alpha;
    for (int y = 0; y < maps.diffuse.height; ++y) {
        for (int x = 0; x < maps.diffuse.width; ++x) {
            Vec3 n{maps.normals.at(y, x, 0), maps.normals.at(y, x, 1), maps.normals.at(y, x, 2)};
            for (int ch = 0; ch < 3; ++ch) b.rho_d[ch] = maps.diffuse.at(y, x, ch);
            std::array<double, 3> L = shade(b, n, wo, lit);
            for (int ch = 0; ch < 3; ++ch) out.pixels.at(y, x, ch) = static_cast<float>(L[ch]);
        }
    }
    return out;
}

double luminance(const Image& img, int y, int x) {
    if (img.channels == 1) return img.at(y, x, 0);
    return 0.2126 * img.at(y, x, 0) + 0.7152 * img.at(y, x, 1) + 0.0722 * img.at(y, x, 2);
}

void finalize(RenderedImage& image, const FinalizeOptions& opts) {
    if (image.finalized) throw std::logic_error("finalize: image already finalized");
    Image& px = image.pixels;

    double k = opts.fixed_scale;
    if (opts.mode == ExposureMode::kAuto) {
        std::vector<double> lum;
        lum.reserve(static_cast<size_t>(px.height) * px.width);
        for (int y = 0; y < px.height; ++y)
            for (int x = 0; x < px.width; ++x) {
                double l = luminance(px, y, x);
                if (l > 0.0) lum.push_back(l);
            }
        if (lum.empty()) {
            k = 1.0;
            image.prov.exposure_fallback = true;
        } else {
            std::sort(lum.begin(), lum.end());
            size_t idx = static_cast<size_t>(
                std::ceil(0.99 * static_cast<double>(lum.size())) - 1.0);
            k = 1.0 / lum[idx];
        }
    }

    bool clipped = false;
    for (float& v : px.data) {
        double scaled = static_cast<double>(v) * k;
        if (scaled > 1.0) {
            scaled = 1.0;
            clipped = true;
        }
        v = static_cast<float>(scaled);
    }
    if (opts.gamma_encode) {
        for (float& v : px.data) v = static_cast<float>(std::pow(static_cast<double>(v), 1.0 / 2.2));
        image.prov.gamma_encoded = true;
    }
    image.prov.exposure = k;
    image.prov.clamped = clipped;
    image.finalized = true;
}

double image_mse(const RenderedImage& a, const RenderedImage& b) {
    if (!a.pixels.same_shape(b.pixels)) throw std::invalid_argument("image_mse: shape mismatch");
    if (a.finalized != b.finalized || a.prov.gamma_encoded != b.prov.gamma_encoded)
        throw std::invalid_argument("image_mse: finalization mode mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < a.pixels.data.size(); ++i) {
        double d = static_cast<double>(a.pixels.data[i]) - b.pixels.data[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.pixels.data.size());
}

Image gamma_encode_image(const Image& img) {
    Image out = img;
    for (float& v : out.data) v = static_cast<float>(std::pow(std::max(0.0, static_cast<double>(v)), 1.0 / 2.2));
    return out;
}

Image gamma_decode_image(const Image& img) {
    Image out = img;
    for (float& v : out.data) v = static_cast<float>(std::pow(std::max(0.0, static_cast<double>(v)), 2.2));
    return out;
}

void save_image(const std::filesystem::path& path, const RenderedImage& img) {
    io::write_image_blob(path, "SAIM", img.pixels);
    nlohmann::json side = {{"params_id", img.prov.params_id},
                           {"env_id", img.prov.env_id},
                           {"rotation_texels", img.prov.rotation_texels},
                           {"seed", img.prov.seed},
                           {"exposure", img.prov.exposure},
                           {"clamped", img.prov.clamped},
                           {"gamma_encoded", img.prov.gamma_encoded},
                           {"finalized", img.finalized}};
    io::save_json(path.string() + ".json", side);
}

RenderedImage load_image(const std::filesystem::path& path) {
    RenderedImage img;
    img.pixels = io::read_image_blob(path, "SAIM");
    std::filesystem::path side = path.string() + ".json";
    if (std::filesystem::exists(side)) {
        nlohmann::json j = io::load_json(side);
        img.prov.params_id = j.value("params_id", "");
        img.prov.env_id = j.value("env_id", "");
        img.prov.rotation_texels = j.value("rotation_texels", 0);
        img.prov.seed = j.value("seed", 0ull);
        img.prov.exposure = j.value("exposure", 1.0);
        img.prov.clamped = j.value("clamped", false);
        img.prov.gamma_encoded = j.value("gamma_encoded", false);
        img.finalized = j.value("finalized", false);
    }
    return img;
}

void export_png(const std::filesystem::path& path, const RenderedImage& img) {
    Image encoded = img.prov.gamma_encoded ? img.pixels : gamma_encode_image(img.pixels);
    std::vector<uint8_t> bytes(encoded.data.size());
    for (size_t i = 0; i < encoded.data.size(); ++i)
        bytes[i] = static_cast<uint8_t>(
            std::lround(clamp(static_cast<double>(encoded.data[i]), 0.0, 1.0) * 255.0));
    io::write_png(path, bytes, encoded.width, encoded.height, encoded.channels);
}

}  // namespace sa
