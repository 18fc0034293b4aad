#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sa/image.hpp"
#include "sa/tensor.hpp"

namespace sa::io {

// Binary containers, all little-endian:
//
//   SAEM (environment map) / SAIM (rendered image):
//     char magic[4], u32 version=1, u32 height, u32 width, u32 channels,
//     f32 data[h*w*c] row-major (y, x, c). A JSON sidecar at <path>.json
//     carries identity/provenance.
//
//   SATN (tensor):
//     char magic[4]="SATN", u32 version=1, u32 dtype (0=f32, 1=f64),
//     u32 ndim, u32 dims[ndim], data.

void write_image_blob(const std::filesystem::path& path, const char magic[4], const Image& img);
Image read_image_blob(const std::filesystem::path& path, const char magic[4]);

void write_tensor(const std::filesystem::path& path, const Tensor& t);
void write_tensor(const std::filesystem::path& path, const TensorD& t);
Tensor read_tensor_f32(const std::filesystem::path& path);
TensorD read_tensor_f64(const std::filesystem::path& path);

void save_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json load_json(const std::filesystem::path& path);

std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path);

// 8-bit PNG, channels 1 (gray) or 3 (rgb); values expected already encoded.
void write_png(const std::filesystem::path& path, const std::vector<uint8_t>& pixels, int width,
               int height, int channels);

}  // namespace sa::io
