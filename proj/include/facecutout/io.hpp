#pragma once

#include <charconv>
#include <cstdint>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <png.h>

#include <nlohmann/json.hpp>

#include "facecutout/error.hpp"
#include "facecutout/geometry.hpp"
#include "facecutout/image.hpp"

namespace facecutout::io {

namespace fs = std::filesystem;

inline std::vector<std::uint8_t> read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_bytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(Errc::Io, "short write to '" + path.string() + "'");
}

inline std::string read_text(const fs::path& path) {
    const auto bytes = read_bytes(path);
    return {bytes.begin(), bytes.end()};
}

inline void write_text(const fs::path& path, std::string_view text) {
    write_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

// ---------------------------------------------------------------------------
// PNG

namespace detail {

// libpng reports errors by longjmp; these helpers keep only trivially
// destructible state alive across setjmp and translate failures afterwards.
struct PngIo {
    const std::uint8_t* data = nullptr;
    std::size_t size = 0;
    std::size_t pos = 0;
    std::vector<std::uint8_t>* sink = nullptr;
    char message[256] = {};
};

inline void png_read_fn(png_structp png, png_bytep out, png_size_t len) {
    auto* io = static_cast<PngIo*>(png_get_io_ptr(png));
    if (io->pos + len > io->size) png_error(png, "truncated PNG");
    std::memcpy(out, io->data + io->pos, len);
    io->pos += len;
}

inline void png_write_fn(png_structp png, png_bytep in, png_size_t len) {
    auto* io = static_cast<PngIo*>(png_get_io_ptr(png));
    io->sink->insert(io->sink->end(), in, in + len);
}

inline void png_flush_fn(png_structp) {}

[[noreturn]] inline void png_error_fn(png_structp png, png_const_charp msg) {
    auto* io = static_cast<PngIo*>(png_get_error_ptr(png));
    std::snprintf(io->message, sizeof io->message, "%s", msg);
    png_longjmp(png, 1);
}

inline void png_warning_fn(png_structp, png_const_charp) {}

inline bool encode_rows(PngIo& io, int width, int height, int channels, const std::uint8_t* pixels) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &io, png_error_fn, png_warning_fn);
    if (!png) return false;
    png_infop info = png_create_info_struct(png);
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        return false;
    }
    png_set_write_fn(png, &io, png_write_fn, png_flush_fn);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 6);
    png_write_info(png, info);
    const std::size_t stride = static_cast<std::size_t>(width) * static_cast<std::size_t>(channels);
    for (int y = 0; y < height; ++y) {
        png_write_row(png, const_cast<png_bytep>(pixels + static_cast<std::size_t>(y) * stride));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

// Encodes 8-bit rows; `channels` is 1 (gray) or 3 (RGB). Output depends only on the pixels.
inline std::vector<std::uint8_t> encode_png(int width, int height, int channels, const std::uint8_t* pixels) {
    std::vector<std::uint8_t> out;
    PngIo io;
    io.sink = &out;
    if (!encode_rows(io, width, height, channels, pixels)) {
        throw Error(Errc::Io, std::string("PNG encode failed: ") + io.message);
    }
    return out;
}

struct PngHeader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    int width = 0;
    int height = 0;
};

// Reads the header and configures 8-bit RGB output.
inline bool decode_header(PngIo& io, PngHeader& h) {
    h.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &io, png_error_fn, png_warning_fn);
    if (!h.png) return false;
    h.info = png_create_info_struct(h.png);
    if (!h.info || setjmp(png_jmpbuf(h.png))) return false;
    png_set_read_fn(h.png, &io, png_read_fn);
    png_read_info(h.png, h.info);
    h.width = static_cast<int>(png_get_image_width(h.png, h.info));
    h.height = static_cast<int>(png_get_image_height(h.png, h.info));
    const int color = png_get_color_type(h.png, h.info);
    const int depth = png_get_bit_depth(h.png, h.info);
    if (depth == 16) png_set_strip_16(h.png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(h.png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(h.png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(h.png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(h.png);
    if (png_get_valid(h.png, h.info, PNG_INFO_tRNS)) png_set_strip_alpha(h.png);
    png_set_interlace_handling(h.png);
    png_read_update_info(h.png, h.info);
    if (png_get_rowbytes(h.png, h.info) != static_cast<std::size_t>(h.width) * 3) {
        std::snprintf(io.message, sizeof io.message, "unsupported PNG layout");
        return false;
    }
    return true;
}

inline bool decode_rows(PngHeader& h, png_bytepp rows) {
    if (setjmp(png_jmpbuf(h.png))) return false;
    png_read_image(h.png, rows);
    png_read_end(h.png, nullptr);
    return true;
}

} // namespace detail

inline std::vector<std::uint8_t> encode_png(const RgbImage& image) {
    return detail::encode_png(image.width(), image.height(), 3, image.bytes().data());
}

// Mask as 8-bit grayscale, 0 / 255.
inline std::vector<std::uint8_t> encode_png(const BinaryMask& mask) {
    std::vector<std::uint8_t> gray(mask.size());
    const auto bits = mask.bits();
    for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = bits[i] ? 255 : 0;
    return detail::encode_png(mask.width(), mask.height(), 1, gray.data());
}

/// Decodes any 8/16-bit PNG to 8-bit RGB (alpha dropped, gray replicated).
inline RgbImage decode_png(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) throw Error(Errc::Io, "not a PNG stream");
    detail::PngIo io;
    io.data = bytes.data();
    io.size = bytes.size();
    detail::PngHeader h;
    struct Guard {
        detail::PngHeader& h;
        ~Guard() { png_destroy_read_struct(&h.png, &h.info, nullptr); }
    } guard{h};
    if (!detail::decode_header(io, h)) throw Error(Errc::Io, std::string("PNG decode failed: ") + io.message);
    if (h.width <= 0 || h.height <= 0) throw Error(Errc::EmptyImage, "PNG has no pixels");
    RgbImage image(h.width, h.height);
    std::vector<png_bytep> rows(static_cast<std::size_t>(h.height));
    for (int y = 0; y < h.height; ++y) rows[static_cast<std::size_t>(y)] = image.pixel(0, y);
    if (!detail::decode_rows(h, rows.data())) throw Error(Errc::Io, std::string("PNG decode failed: ") + io.message);
    return image;
}

inline RgbImage read_png(const fs::path& path) { return decode_png(read_bytes(path)); }

inline void write_png(const fs::path& path, const RgbImage& image) { write_bytes(path, encode_png(image)); }

inline void write_png(const fs::path& path, const BinaryMask& mask) { write_bytes(path, encode_png(mask)); }

// Any channel >= 128 counts as set.
inline BinaryMask read_mask_png(const fs::path& path) {
    const RgbImage img = read_png(path);
    BinaryMask mask(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const auto* p = img.pixel(x, y);
            if (p[0] >= 128 || p[1] >= 128 || p[2] >= 128) mask.set(x, y);
        }
    }
    return mask;
}

// ---------------------------------------------------------------------------
// Landmark sidecars: {"points": [[x, y], ... 68 pairs]}

inline Landmarks68 parse_landmarks(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::Parse, std::string("landmark JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("points") || !doc["points"].is_array()) {
        throw Error(Errc::Parse, "landmark JSON needs a \"points\" array");
    }
    const auto& arr = doc["points"];
    if (arr.size() != Landmarks68::kCount) {
        throw Error(Errc::Parse, "expected 68 landmark pairs, got " + std::to_string(arr.size()));
    }
    std::vector<Point2> pts;
    pts.reserve(Landmarks68::kCount);
    for (const auto& pair : arr) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
            throw Error(Errc::Parse, "landmark entries must be [x, y] numbers");
        }
        pts.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    try {
        return Landmarks68(pts);
    } catch (const Error& e) {
        throw Error(Errc::Parse, e.what());
    }
}

inline std::string format_landmarks(const Landmarks68& lm) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : lm.points()) arr.push_back({p.x, p.y});
    return nlohmann::json{{"points", arr}}.dump() + "\n";
}

inline fs::path sidecar_path(const fs::path& image) {
    fs::path p = image;
    p += ".landmarks.json";
    return p;
}

// ---------------------------------------------------------------------------
// CSV. Comma separated, optional double quotes with "" escapes, first row is the header.

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw Error(Errc::Parse, "CSV is missing column '" + std::string(name) + "'");
    }

    std::optional<std::size_t> find_column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        return std::nullopt;
    }
};

inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw Error(Errc::Parse, "unterminated quote in CSV line");
    fields.push_back(std::move(cur));
    return fields;
}

inline CsvTable parse_csv(std::string_view text) {
    CsvTable table;
    std::size_t start = 0;
    bool first = true;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (first) {
            table.header = std::move(fields);
            first = false;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw Error(Errc::Parse, "CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                                         std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    if (first) throw Error(Errc::Parse, "CSV has no header");
    return table;
}

inline CsvTable read_csv(const fs::path& path) { return parse_csv(read_text(path)); }

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string format_csv(const CsvTable& table) {
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << csv_field(row[i]);
        }
        out << '\n';
    };
    emit(table.header);
    for (const auto& r : table.rows) emit(r);
    return out.str();
}

inline long parse_long(const std::string& s, std::string_view what) {
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(Errc::Parse, "bad " + std::string(what) + " '" + s + "'");
}

inline double parse_double(const std::string& s, std::string_view what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(Errc::Parse, "bad " + std::string(what) + " '" + s + "'");
}

// Shortest round-trip decimal form.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace facecutout::io
