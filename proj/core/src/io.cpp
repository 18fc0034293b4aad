#include "sa/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

static_assert(std::endian::native == std::endian::little,
              "container I/O assumes a little-endian host");

namespace sa::io {

namespace {

void write_u32(std::ostream& os, uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

uint32_t read_u32(std::istream& is) {
    uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
    return is;
}

void check_magic(std::istream& is, const char magic[4], const std::filesystem::path& path) {
    char got[4];
    is.read(got, 4);
    if (!is || std::memcmp(got, magic, 4) != 0)
        throw std::runtime_error("bad magic in " + path.string() + " (expected " +
                                 std::string(magic, 4) + ")");
}

}  // namespace

void write_image_blob(const std::filesystem::path& path, const char magic[4], const Image& img) {
    auto os = open_out(path);
    os.write(magic, 4);
    write_u32(os, 1);
    write_u32(os, static_cast<uint32_t>(img.height));
    write_u32(os, static_cast<uint32_t>(img.width));
    write_u32(os, static_cast<uint32_t>(img.channels));
    os.write(reinterpret_cast<const char*>(img.data.data()),
             static_cast<std::streamsize>(img.data.size() * sizeof(float)));
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

Image read_image_blob(const std::filesystem::path& path, const char magic[4]) {
    auto is = open_in(path);
    check_magic(is, magic, path);
    uint32_t version = read_u32(is);
    if (version != 1) throw std::runtime_error("unsupported version in " + path.string());
    uint32_t h = read_u32(is), w = read_u32(is), c = read_u32(is);
    if (h == 0 || w == 0 || c == 0 || h > 1u << 16 || w > 1u << 16 || c > 16)
        throw std::runtime_error("implausible dims in " + path.string());
    Image img(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c));
    is.read(reinterpret_cast<char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size() * sizeof(float)));
    if (!is) throw std::runtime_error("truncated file: " + path.string());
    return img;
}

namespace {

template <typename T>
void write_tensor_impl(const std::filesystem::path& path, const TensorT<T>& t, uint32_t dtype) {
    auto os = open_out(path);
    os.write("SATN", 4);
    write_u32(os, 1);
    write_u32(os, dtype);
    write_u32(os, 4);
    for (int d : t.shape) write_u32(os, static_cast<uint32_t>(d));
    os.write(reinterpret_cast<const char*>(t.data.data()),
             static_cast<std::streamsize>(t.data.size() * sizeof(T)));
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

template <typename T>
TensorT<T> read_tensor_impl(const std::filesystem::path& path, uint32_t want_dtype) {
    auto is = open_in(path);
    check_magic(is, "SATN", path);
    uint32_t version = read_u32(is);
    if (version != 1) throw std::runtime_error("unsupported version in " + path.string());
    uint32_t dtype = read_u32(is);
    if (dtype != want_dtype) throw std::runtime_error("dtype mismatch in " + path.string());
    uint32_t ndim = read_u32(is);
    if (ndim != 4) throw std::runtime_error("expected 4-D tensor in " + path.string());
    std::array<int, 4> dims{};
    for (int i = 0; i < 4; ++i) dims[i] = static_cast<int>(read_u32(is));
    TensorT<T> t(dims[0], dims[1], dims[2], dims[3]);
    is.read(reinterpret_cast<char*>(t.data.data()),
            static_cast<std::streamsize>(t.data.size() * sizeof(T)));
    if (!is) throw std::runtime_error("truncated file: " + path.string());
    return t;
}

}  // namespace

void write_tensor(const std::filesystem::path& path, const Tensor& t) {
    write_tensor_impl(path, t, 0);
}

void write_tensor(const std::filesystem::path& path, const TensorD& t) {
    write_tensor_impl(path, t, 1);
}

Tensor read_tensor_f32(const std::filesystem::path& path) {
    return read_tensor_impl<float>(path, 0);
}

TensorD read_tensor_f64(const std::filesystem::path& path) {
    return read_tensor_impl<double>(path, 1);
}

void save_json(const std::filesystem::path& path, const nlohmann::json& j) {
    auto os = open_out(path);
    os << j.dump(2) << "\n";
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

nlohmann::json load_json(const std::filesystem::path& path) {
    auto is = open_in(path);
    nlohmann::json j;
    is >> j;
    return j;
}

std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path) {
    auto is = open_in(path);
    is.seekg(0, std::ios::end);
    std::vector<uint8_t> bytes(static_cast<size_t>(is.tellg()));
    is.seekg(0);
    is.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    return bytes;
}

}  // namespace sa::io
