#include "morphtest/idx.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>

namespace morphtest {

namespace {

constexpr std::uint32_t kImageMagic = 2051;
constexpr std::uint32_t kLabelMagic = 2049;

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::IoFailure, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes;
}

std::vector<std::uint8_t> gunzip(const std::vector<std::uint8_t>& in, const std::filesystem::path& path) {
    z_stream zs{};
    // 16 + MAX_WBITS selects gzip header decoding.
    if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) fail(Errc::IoFailure, "inflateInit failed");
    std::vector<std::uint8_t> out;
    out.resize(in.size() * 4 + 1024);
    zs.next_in = const_cast<Bytef*>(in.data());
    zs.avail_in = static_cast<uInt>(in.size());
    std::size_t written = 0;
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        if (written == out.size()) out.resize(out.size() * 2);
        zs.next_out = out.data() + written;
        zs.avail_out = static_cast<uInt>(out.size() - written);
        rc = inflate(&zs, Z_NO_FLUSH);
        written = out.size() - zs.avail_out;
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            fail(Errc::TruncatedFile, "corrupt gzip stream in " + path.string());
        }
    }
    inflateEnd(&zs);
    out.resize(written);
    return out;
}

std::vector<std::uint8_t> read_maybe_gzipped(const std::filesystem::path& path) {
    std::vector<std::uint8_t> bytes = read_file(path);
    if (bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b) return gunzip(bytes, path);
    return bytes;
}

std::uint32_t read_u32_be(const std::vector<std::uint8_t>& b, std::size_t off) {
    return (static_cast<std::uint32_t>(b[off]) << 24) | (static_cast<std::uint32_t>(b[off + 1]) << 16) |
           (static_cast<std::uint32_t>(b[off + 2]) << 8) | static_cast<std::uint32_t>(b[off + 3]);
}

void write_u32_be(std::ofstream& out, std::uint32_t v) {
    const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
                           static_cast<char>(v)};
    out.write(bytes, 4);
}

}  // namespace

std::vector<GrayImage> load_idx_images(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = read_maybe_gzipped(path);
    if (bytes.size() < 16) fail(Errc::TruncatedFile, "IDX image header short in " + path.string());
    if (read_u32_be(bytes, 0) != kImageMagic) {
        fail(Errc::WrongMagic, "expected IDX image magic 2051 in " + path.string());
    }
    const std::uint32_t count = read_u32_be(bytes, 4);
    const std::uint32_t rows = read_u32_be(bytes, 8);
    const std::uint32_t cols = read_u32_be(bytes, 12);
    if (rows < 1 || cols < 1) fail(Errc::DimensionMismatch, "zero image dimension in " + path.string());
    const std::size_t per_image = static_cast<std::size_t>(rows) * cols;
    if (bytes.size() < 16 + per_image * count) {
        fail(Errc::TruncatedFile, "IDX image payload short in " + path.string());
    }
    std::vector<GrayImage> images;
    images.reserve(count);
    std::size_t off = 16;
    for (std::uint32_t i = 0; i < count; ++i, off += per_image) {
        GrayImage img(static_cast<int>(cols), static_cast<int>(rows));
        std::memcpy(img.data.data(), bytes.data() + off, per_image);
        images.push_back(std::move(img));
    }
    return images;
}

std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = read_maybe_gzipped(path);
    if (bytes.size() < 8) fail(Errc::TruncatedFile, "IDX label header short in " + path.string());
    if (read_u32_be(bytes, 0) != kLabelMagic) {
        fail(Errc::WrongMagic, "expected IDX label magic 2049 in " + path.string());
    }
    const std::uint32_t count = read_u32_be(bytes, 4);
    if (bytes.size() < 8 + static_cast<std::size_t>(count)) {
        fail(Errc::TruncatedFile, "IDX label payload short in " + path.string());
    }
    std::vector<std::uint8_t> labels(bytes.begin() + 8, bytes.begin() + 8 + count);
    for (std::uint8_t v : labels) {
        if (v > 9) fail(Errc::LabelOutOfRange, "label " + std::to_string(v) + " in " + path.string());
    }
    return labels;
}

void write_idx_images(const std::vector<GrayImage>& images, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::IoFailure, "cannot open " + path.string() + " for writing");
    const int rows = images.empty() ? 0 : images.front().height;
    const int cols = images.empty() ? 0 : images.front().width;
    write_u32_be(out, kImageMagic);
    write_u32_be(out, static_cast<std::uint32_t>(images.size()));
    write_u32_be(out, static_cast<std::uint32_t>(rows));
    write_u32_be(out, static_cast<std::uint32_t>(cols));
    for (const GrayImage& img : images) {
        if (img.height != rows || img.width != cols) {
            fail(Errc::DimensionMismatch, "mixed image sizes writing " + path.string());
        }
        out.write(reinterpret_cast<const char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
    }
    if (!out) fail(Errc::IoFailure, "short write to " + path.string());
}

void write_idx_labels(const std::vector<std::uint8_t>& labels, const std::filesystem::path& path) {
    for (std::uint8_t v : labels) {
        if (v > 9) fail(Errc::LabelOutOfRange, "label " + std::to_string(v));
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::IoFailure, "cannot open " + path.string() + " for writing");
    write_u32_be(out, kLabelMagic);
    write_u32_be(out, static_cast<std::uint32_t>(labels.size()));
    out.write(reinterpret_cast<const char*>(labels.data()), static_cast<std::streamsize>(labels.size()));
    if (!out) fail(Errc::IoFailure, "short write to " + path.string());
}

}  // namespace morphtest
