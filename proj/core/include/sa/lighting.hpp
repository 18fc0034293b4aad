#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include "sa/common.hpp"
#include "sa/image.hpp"

namespace sa {

// Equirectangular HDR radiance field covering the full sphere.
// Conventions: polar angle theta measured from +z, azimuth phi from +x
// toward +y; texel (r, c) sits at theta = pi*(r+0.5)/H, phi = 2*pi*(c+0.5)/W;
// W = 2H always.
struct EnvironmentMap {
    Image radiance;  // H x W x C, C = 1 or 3
    bool white_balanced = false;
    std::string id;
    uint64_t seed = 0;

    int height() const { return radiance.height; }
    int width() const { return radiance.width; }
    int channels() const { return radiance.channels; }
};

struct ProbeSpec {
    int channels = 1;
    int height = 16;  // width is 2 * height
    int num_lobes = 3;
    std::array<double, 2> sharpness_range{4.0, 60.0};
    std::array<double, 2> ambient_range{0.05, 0.3};
    std::array<double, 2> intensity_range{0.5, 4.0};
};

void validate_env(const EnvironmentMap& env);

Vec3 texel_direction(int height, int width, int row, int col);
// Solid angle of one texel in row `row`: (2pi/W) * (pi/H) * sin(theta_row).
double texel_solid_angle(int height, int width, int row);

// Cosine-weighted hemispherical integral of the discrete map around n,
// one term per texel. Deterministic; quadrature error is O(1/H^2).
std::array<double, 3> irradiance(const EnvironmentMap& env, const Vec3& n);

// Scales each channel so the upward irradiance is color neutral while
// preserving the mean of the three channel irradiances. RGB maps only.
EnvironmentMap white_balance(const EnvironmentMap& env);

// Ambient level plus num_lobes von Mises-Fisher-style lobes with seeded
// axes, sharpness and per-channel intensity; white-balanced when C = 3.
EnvironmentMap generate_probe(uint64_t seed, const ProbeSpec& spec);

// Rotation about the vertical (+z) axis, snapped to the nearest texel
// multiple so total radiance is preserved exactly.
EnvironmentMap rotate(const EnvironmentMap& env, double angle);
EnvironmentMap rotate_texels(const EnvironmentMap& env, int texel_shift);

int angle_to_texels(double angle, int width);

void save_env(const std::filesystem::path& path, const EnvironmentMap& env);
EnvironmentMap load_env(const std::filesystem::path& path);

}  // namespace sa
