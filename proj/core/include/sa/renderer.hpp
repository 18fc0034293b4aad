#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "sa/image.hpp"
#include "sa/lighting.hpp"
#include "sa/reflectance.hpp"

namespace sa {

struct RenderProvenance {
    std::string params_id;
    std::string env_id;
    int rotation_texels = 0;
    uint64_t seed = 0;
    double exposure = 1.0;  // applied scale k
    bool clamped = false;
    bool gamma_encoded = false;
    bool exposure_fallback = false;  // all-zero input, k forced to 1
};

struct RenderedImage {
    Image pixels;  // linear radiance until finalize, then [0, 1]
    RenderProvenance prov;
    bool finalized = false;
};

enum class ExposureMode { kAuto, kFixed };

struct FinalizeOptions {
    ExposureMode mode = ExposureMode::kAuto;
    double fixed_scale = 1.0;
    bool gamma_encode = false;
};

// Shared shading kernel: radiance toward wo at a surface point with
// normal n, one term per environment texel.
std::array<double, 3> shade(const WardBrdf& brdf, const Vec3& n, const Vec3& wo,
                            const EnvironmentMap& env);

// Orthographic sphere exemplar (the homogeneous-path network input).
// Camera looks along -z, wo = +z everywhere; background pixels are 0.
RenderedImage render_sphere(const WardBrdf& brdf, const EnvironmentMap& env, int resolution);

// Fronto-parallel planar sample with per-pixel diffuse albedo and normals,
// homogeneous specular component, lighting rotated by rotation_texels.
RenderedImage render_planar(const SvbrdfMaps& maps, const EnvironmentMap& env,
                            int rotation_texels);

// Auto-exposure scales by k = 1/p99(luminance over foreground pixels)
// (nearest-rank percentile; foreground = luminance > 0), then clamps to
// [0, 1] and optionally gamma-encodes (1/2.2). k lands in provenance.
void finalize(RenderedImage& image, const FinalizeOptions& opts);

double image_mse(const RenderedImage& a, const RenderedImage& b);

double luminance(const Image& img, int y, int x);

Image gamma_encode_image(const Image& img);
Image gamma_decode_image(const Image& img);

void save_image(const std::filesystem::path& path, const RenderedImage& img);
RenderedImage load_image(const std::filesystem::path& path);

// 8-bit PNG export for human inspection; gamma-encodes unless the image
// already is.
void export_png(const std::filesystem::path& path, const RenderedImage& img);

}  // namespace sa
