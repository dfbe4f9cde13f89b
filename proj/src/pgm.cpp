#include "morphtest/pgm.hpp"

#include <cctype>
#include <fstream>
#include <string>

namespace morphtest {

namespace {

// Next whitespace-delimited token, treating '#' as a comment until end of line.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

int parse_int(const std::string& tok, const std::filesystem::path& path) {
    if (tok.empty()) fail(Errc::TruncatedFile, "missing header token in " + path.string());
    try {
        return std::stoi(tok);
    } catch (const std::exception&) {
        fail(Errc::UnsupportedFormat, "bad header token '" + tok + "' in " + path.string());
    }
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::IoFailure, "cannot open " + path.string());

    const std::string magic = next_token(in);
    if (magic != "P5") {
        fail(Errc::UnsupportedFormat, "expected binary PGM (P5), got '" + magic + "' in " + path.string());
    }
    const int width = parse_int(next_token(in), path);
    const int height = parse_int(next_token(in), path);
    const int maxval = parse_int(next_token(in), path);
    if (width < 1 || height < 1) fail(Errc::DimensionMismatch, "bad dimensions in " + path.string());
    if (maxval != 255) fail(Errc::MaxvalNot255, "maxval " + std::to_string(maxval) + " in " + path.string());
    // The token reader consumed the single whitespace byte after maxval.

    GrayImage img(width, height);
    in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
    if (static_cast<std::size_t>(in.gcount()) != img.data.size()) {
        fail(Errc::TruncatedFile, "pixel payload short in " + path.string());
    }
    return img;
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::IoFailure, "cannot open " + path.string() + " for writing");
    out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
    if (!out) fail(Errc::IoFailure, "short write to " + path.string());
}

}  // namespace morphtest
