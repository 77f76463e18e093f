#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <png.h>

#include "cvxseg/field.hpp"
#include "cvxseg/image.hpp"

namespace cvxseg {

namespace detail {

inline std::runtime_error io_error(const std::string& path, const std::string& why) {
    return std::runtime_error("cannot load '" + path + "': " + why);
}

// Next header token of a PNM file, skipping whitespace and # comments.
inline std::string pnm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (!std::isspace(c)) {
            tok.push_back(static_cast<char>(c));
            while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#')
                tok.push_back(static_cast<char>(in.get()));
            return tok;
        }
    }
    return tok;
}

inline Image load_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error(path, "file not readable");
    std::string magic = pnm_token(in);
    int channels;
    bool ascii;
    if (magic == "P5") { channels = 1; ascii = false; }
    else if (magic == "P6") { channels = 3; ascii = false; }
    else if (magic == "P2") { channels = 1; ascii = true; }
    else if (magic == "P3") { channels = 3; ascii = true; }
    else throw io_error(path, "unsupported PNM magic '" + magic + "'");

    int w, h, maxval;
    try {
        w = std::stoi(pnm_token(in));
        h = std::stoi(pnm_token(in));
        maxval = std::stoi(pnm_token(in));
    } catch (const std::exception&) {
        throw io_error(path, "malformed PNM header");
    }
    if (w < 1 || h < 1) throw io_error(path, "bad dimensions");
    if (maxval < 1 || maxval > 255) throw io_error(path, "only 8-bit PNM supported");

    Image img(w, h, channels);
    const std::size_t n = img.data.size();
    if (ascii) {
        for (std::size_t i = 0; i < n; ++i) {
            std::string tok = pnm_token(in);
            if (tok.empty()) throw io_error(path, "truncated pixel data");
            img.data[i] = std::stod(tok);
        }
    } else {
        std::vector<unsigned char> raw(n);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n)
            throw io_error(path, "truncated pixel data");
        for (std::size_t i = 0; i < n; ++i) img.data[i] = raw[i];
    }
    return img;
}

struct PngCloser {
    std::FILE* fp = nullptr;
    ~PngCloser() { if (fp) std::fclose(fp); }
};

inline Image load_png(const std::string& path) {
    PngCloser file{std::fopen(path.c_str(), "rb")};
    if (!file.fp) throw io_error(path, "file not readable");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw io_error(path, "libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw io_error(path, "libpng init failed");
    }
    std::vector<png_bytep> rows;
    std::vector<unsigned char> raw;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw io_error(path, "corrupt or unsupported PNG");
    }
    png_init_io(png, file.fp);
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info);
    png_uint_32 h = png_get_image_height(png, info);
    int color = png_get_color_type(png, info);
    int depth = png_get_bit_depth(png, info);

    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS))
        png_set_strip_alpha(png);
    png_read_update_info(png, info);

    int channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw io_error(path, "unsupported channel count");
    }
    raw.resize(static_cast<std::size_t>(w) * h * channels);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = raw.data() + static_cast<std::size_t>(y) * w * channels;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    Image img(static_cast<int>(w), static_cast<int>(h), channels);
    for (std::size_t i = 0; i < raw.size(); ++i) img.data[i] = raw[i];
    return img;
}

inline void save_png(const Image& img, const std::string& path) {
    PngCloser file{std::fopen(path.c_str(), "wb")};
    if (!file.fp) throw std::runtime_error("cannot write '" + path + "'");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("libpng init failed");
    }
    std::vector<unsigned char> raw(img.data.size());
    std::vector<png_bytep> rows(img.height);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("PNG write failed for '" + path + "'");
    }
    png_init_io(png, file.fp);
    png_set_IHDR(png, info, img.width, img.height, 8,
                 img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    for (std::size_t i = 0; i < raw.size(); ++i)
        raw[i] = static_cast<unsigned char>(std::clamp(img.data[i], 0.0, 255.0) + 0.5);
    for (int y = 0; y < img.height; ++y)
        rows[y] = raw.data() + static_cast<std::size_t>(y) * img.width * img.channels;
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

inline void save_pnm(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << (img.channels == 1 ? "P5" : "P6") << "\n"
        << img.width << " " << img.height << "\n255\n";
    std::vector<unsigned char> raw(img.data.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        raw[i] = static_cast<unsigned char>(std::clamp(img.data[i], 0.0, 255.0) + 0.5);
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

inline bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace detail

/// Load an 8-bit PGM/PPM/PNG image, dispatching on the file's magic bytes.
inline Image load_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw detail::io_error(path, "file not readable");
    char magic[2] = {0, 0};
    probe.read(magic, 2);
    probe.close();
    if (magic[0] == 'P') return detail::load_pnm(path);
    if (static_cast<unsigned char>(magic[0]) == 0x89 && magic[1] == 'P')
        return detail::load_png(path);
    throw detail::io_error(path, "unsupported format (PGM/PPM/PNG expected)");
}

/// Save by extension: .pgm/.ppm (binary PNM) or .png.
inline void save_image(const Image& img, const std::string& path) {
    if (detail::has_suffix(path, ".png"))
        detail::save_png(img, path);
    else if (detail::has_suffix(path, ".pgm") || detail::has_suffix(path, ".ppm"))
        detail::save_pnm(img, path);
    else
        throw std::runtime_error("unsupported output extension for '" + path +
                                 "' (use .pgm, .ppm or .png)");
}

/// Write u as an 8-bit mask: object (u=0) -> 0, background -> 255.
inline void write_mask(const BinaryField& u, const std::string& path) {
    Image img(u.width(), u.height(), 1);
    for (std::size_t i = 0; i < u.size(); ++i) img.data[i] = u[i] ? 255.0 : 0.0;
    save_image(img, path);
}

/// Read a mask back into the indicator convention: zero bytes -> object (0),
/// anything else -> background (1).
inline BinaryField load_mask(const std::string& path) {
    Image img = load_image(path);
    if (img.channels != 1)
        throw detail::io_error(path, "mask must be single channel");
    BinaryField u(img.width, img.height);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = img.data[i] != 0.0 ? 1 : 0;
    return u;
}

/// Label rasters: nonzero pixels of each mask are the labeled sets.
inline std::pair<PixelSet, PixelSet> load_labels(const std::string& fg_path,
                                                 const std::string& bg_path,
                                                 int width, int height) {
    auto collect = [&](const std::string& path) {
        Image m = load_image(path);
        if (m.channels != 1) throw detail::io_error(path, "label mask must be single channel");
        if (m.width != width || m.height != height)
            throw detail::io_error(path, "label mask dimensions do not match image");
        PixelSet out;
        for (int y = 0; y < m.height; ++y)
            for (int x = 0; x < m.width; ++x)
                if (m.at(x, y) != 0.0) out.push_back({x, y});
        return out;
    };
    PixelSet fg = collect(fg_path);
    if (fg.empty()) throw detail::io_error(fg_path, "no labeled object pixels");
    PixelSet bg = collect(bg_path);
    return {std::move(fg), std::move(bg)};
}

/// RGB copy of the input with the object perimeter painted red.
inline Image make_overlay(const Image& img, const BinaryField& u) {
    if (img.width != u.width() || img.height != u.height())
        throw std::invalid_argument("overlay dimensions do not match");
    Image out(img.width, img.height, 3);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            Color c = img.pixel(x, y);
            if (img.channels == 1) c = {c[0], c[0], c[0]};
            for (int k = 0; k < 3; ++k) out.at(x, y, k) = c[k];
        }
    for (const Pixel& p : boundary_extract(u)) {
        out.at(p.x, p.y, 0) = 255.0;
        out.at(p.x, p.y, 1) = 0.0;
        out.at(p.x, p.y, 2) = 0.0;
    }
    return out;
}

}  // namespace cvxseg
