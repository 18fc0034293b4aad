#include <cstring>
#include <fstream>
#include <stdexcept>

#include <zlib.h>

#include "sa/io.hpp"

namespace sa::io {

namespace {

void put_u32_be(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

void put_chunk(std::vector<uint8_t>& out, const char type[4], const std::vector<uint8_t>& payload) {
    put_u32_be(out, static_cast<uint32_t>(payload.size()));
    size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), payload.begin(), payload.end());
    uint32_t crc = crc32(0, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start));
    put_u32_be(out, crc);
}

}  // namespace

void write_png(const std::filesystem::path& path, const std::vector<uint8_t>& pixels, int width,
               int height, int channels) {
    if (channels != 1 && channels != 3) throw std::invalid_argument("write_png: channels must be 1 or 3");
    if (pixels.size() != static_cast<size_t>(width) * height * channels)
        throw std::invalid_argument("write_png: pixel buffer size mismatch");

    // One filter byte (0 = none) per scanline.
    std::vector<uint8_t> raw;
    raw.reserve(pixels.size() + height);
    size_t stride = static_cast<size_t>(width) * channels;
    for (int y = 0; y < height; ++y) {
        raw.push_back(0);
        raw.insert(raw.end(), pixels.begin() + y * stride, pixels.begin() + (y + 1) * stride);
    }

    uLongf comp_len = compressBound(static_cast<uLong>(raw.size()));
    std::vector<uint8_t> comp(comp_len);
    if (compress2(comp.data(), &comp_len, raw.data(), static_cast<uLong>(raw.size()), 9) != Z_OK)
        throw std::runtime_error("write_png: deflate failed");
    comp.resize(comp_len);

    std::vector<uint8_t> ihdr;
    put_u32_be(ihdr, static_cast<uint32_t>(width));
    put_u32_be(ihdr, static_cast<uint32_t>(height));
    ihdr.push_back(8);                                    // bit depth
    ihdr.push_back(channels == 1 ? 0 : 2);                // gray / truecolor
    ihdr.push_back(0);                                    // deflate
    ihdr.push_back(0);                                    // filter method
    ihdr.push_back(0);                                    // no interlace

    std::vector<uint8_t> out = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    put_chunk(out, "IHDR", ihdr);
    put_chunk(out, "IDAT", comp);
    put_chunk(out, "IEND", {});

    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace sa::io
