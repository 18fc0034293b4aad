#include "sa/lighting.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sa/io.hpp"

namespace sa {

void validate_env(const EnvironmentMap& env) {
    const Image& r = env.radiance;
    if (r.height < 4) throw std::invalid_argument("env: height must be >= 4");
    if (r.width != 2 * r.height) throw std::invalid_argument("env: width must equal 2*height");
    if (r.channels != 1 && r.channels != 3)
        throw std::invalid_argument("env: channels must be 1 or 3");
    for (float v : r.data)
        if (!std::isfinite(v) || v < 0.0f)
            throw std::invalid_argument("env: radiance must be finite and non-negative");
}

Vec3 texel_direction(int height, int width, int row, int col) {
    double theta = kPi * (row + 0.5) / height;
    double phi = kTwoPi * (col + 0.5) / width;
    double st = std::sin(theta);
    return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

double texel_solid_angle(int height, int width, int row) {
    double theta = kPi * (row + 0.5) / height;
    return (kTwoPi / width) * (kPi / height) * std::sin(theta);
}

std::array<double, 3> irradiance(const EnvironmentMap& env, const Vec3& n) {
    const Image& rad = env.radiance;
    std::array<double, 3> acc{};
    for (int r = 0; r < rad.height; ++r) {
        double dw = texel_solid_angle(rad.height, rad.width, r);
        for (int c = 0; c < rad.width; ++c) {
            double cos_t = dot(texel_direction(rad.height, rad.width, r, c), n);
            if (cos_t <= 0.0) continue;
            double w = cos_t * dw;
            for (int ch = 0; ch < rad.channels; ++ch) acc[ch] += rad.at(r, c, ch) * w;
        }
    }
    return acc;
}

EnvironmentMap white_balance(const EnvironmentMap& env) {
    if (env.channels() != 3) throw std::invalid_argument("white_balance: requires 3 channels");
    std::array<double, 3> s = irradiance(env, {0.0, 0.0, 1.0});
    for (int c = 0; c < 3; ++c)
        if (s[c] <= 0.0) throw std::invalid_argument("white_balance: zero channel irradiance");
    double target = (s[0] + s[1] + s[2]) / 3.0;

    EnvironmentMap out = env;
    for (int c = 0; c < 3; ++c) {
        double scale = target / s[c];
        size_t pixels = static_cast<size_t>(out.radiance.height) * out.radiance.width;
        for (size_t p = 0; p < pixels; ++p)
            out.radiance.data[p * 3 + c] =
                static_cast<float>(out.radiance.data[p * 3 + c] * scale);
    }
    out.white_balanced = true;
    return out;
}

EnvironmentMap generate_probe(uint64_t seed, const ProbeSpec& spec) {
    if (spec.height < 4) throw std::invalid_argument("probe: height must be >= 4");
    if (spec.channels != 1 && spec.channels != 3)
        throw std::invalid_argument("probe: channels must be 1 or 3");
    if (spec.num_lobes < 0) throw std::invalid_argument("probe: num_lobes must be >= 0");

    Rng rng(seed, /*stream=*/0x5ae5u);
    int H = spec.height, W = 2 * spec.height, C = spec.channels;

    struct Lobe {
        Vec3 axis;
        double sharpness;
        std::array<double, 3> intensity;
    };
    std::vector<Lobe> lobes(static_cast<size_t>(spec.num_lobes));
    std::array<double, 3> ambient{};
    for (int c = 0; c < C; ++c)
        ambient[c] = rng.uniform(spec.ambient_range[0], spec.ambient_range[1]);
    for (Lobe& lobe : lobes) {
        double z = rng.uniform(-1.0, 1.0);
        double phi = rng.uniform(0.0, kTwoPi);
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        lobe.axis = {r * std::cos(phi), r * std::sin(phi), z};
        lobe.sharpness = rng.uniform(spec.sharpness_range[0], spec.sharpness_range[1]);
        for (int c = 0; c < C; ++c)
            lobe.intensity[c] = rng.uniform(spec.intensity_range[0], spec.intensity_range[1]);
    }

    EnvironmentMap env;
    env.radiance = Image(H, W, C);
    env.seed = seed;
    env.id = "probe-" + std::to_string(seed);
    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            Vec3 d = texel_direction(H, W, r, c);
            for (int ch = 0; ch < C; ++ch) {
                double v = ambient[ch];
                for (const Lobe& lobe : lobes)
                    v += lobe.intensity[ch] * std::exp(lobe.sharpness * (dot(d, lobe.axis) - 1.0));
                env.radiance.at(r, c, ch) = static_cast<float>(v);
            }
        }
    }
    if (C == 3) env = white_balance(env);
    env.id = "probe-" + std::to_string(seed);
    env.seed = seed;
    return env;
}

int angle_to_texels(double angle, int width) {
    if (!std::isfinite(angle)) throw std::invalid_argument("rotate: angle must be finite");
    long shift = std::lround(angle / kTwoPi * width);
    long m = shift % width;
    if (m < 0) m += width;
    return static_cast<int>(m);
}

EnvironmentMap rotate_texels(const EnvironmentMap& env, int texel_shift) {
    int W = env.width();
    int shift = ((texel_shift % W) + W) % W;
    EnvironmentMap out = env;
    if (shift == 0) return out;
    for (int r = 0; r < env.height(); ++r)
        for (int c = 0; c < W; ++c) {
            int src = (c - shift + W) % W;
            for (int ch = 0; ch < env.channels(); ++ch)
                out.radiance.at(r, c, ch) = env.radiance.at(r, src, ch);
        }
    return out;
}

EnvironmentMap rotate(const EnvironmentMap& env, double angle) {
    return rotate_texels(env, angle_to_texels(angle, env.width()));
}

void save_env(const std::filesystem::path& path, const EnvironmentMap& env) {
    io::write_image_blob(path, "SAEM", env.radiance);
    nlohmann::json side = {
        {"id", env.id}, {"seed", env.seed}, {"white_balanced", env.white_balanced}};
    io::save_json(path.string() + ".json", side);
}

EnvironmentMap load_env(const std::filesystem::path& path) {
    EnvironmentMap env;
    env.radiance = io::read_image_blob(path, "SAEM");
    std::filesystem::path side = path.string() + ".json";
    if (std::filesystem::exists(side)) {
        nlohmann::json j = io::load_json(side);
        env.id = j.value("id", "");
        env.seed = j.value("seed", 0ull);
        env.white_balanced = j.value("white_balanced", false);
    }
    return env;
}

}  // namespace sa
