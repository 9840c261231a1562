#ifndef HSCRAN_IMAGE_HPP
#define HSCRAN_IMAGE_HPP

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#if defined(HSCRAN_HAVE_PNG)
#include <png.h>
#endif

#include "hscran/error.hpp"

namespace hscran {

/// 8-bit RGB, row-major, channel-interleaved.
struct ImageFrame {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> data;

    static constexpr std::size_t channels = 3;

    ImageFrame() = default;
    ImageFrame(std::size_t w, std::size_t h, std::uint8_t fill = 0) : width(w), height(h), data(w * h * 3, fill) {}

    std::size_t samples() const noexcept { return width * height * channels; }
    bool valid() const noexcept { return data.size() == samples(); }

    std::uint8_t& at(std::size_t x, std::size_t y, std::size_t c) { return data[(y * width + x) * 3 + c]; }
    std::uint8_t at(std::size_t x, std::size_t y, std::size_t c) const { return data[(y * width + x) * 3 + c]; }

    friend bool operator==(const ImageFrame&, const ImageFrame&) = default;
};

namespace detail {

inline std::string ppm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

} // namespace detail

/// Binary PPM (P6), maxval 255.
inline ImageFrame read_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    if (detail::ppm_token(in) != "P6") throw Error(ErrorCode::Io, path.string() + ": not a binary PPM");
    std::size_t w = 0, h = 0, maxval = 0;
    try {
        w = std::stoul(detail::ppm_token(in));
        h = std::stoul(detail::ppm_token(in));
        maxval = std::stoul(detail::ppm_token(in));
    } catch (const std::exception&) {
        throw Error(ErrorCode::Io, path.string() + ": malformed PPM header");
    }
    if (maxval != 255) throw Error(ErrorCode::Io, path.string() + ": only maxval 255 is supported");
    ImageFrame img(w, h);
    in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.data.size()))
        throw Error(ErrorCode::Io, path.string() + ": truncated PPM data");
    return img;
}

inline void write_ppm(const std::filesystem::path& path, const ImageFrame& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string());
    out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
    if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

constexpr bool png_supported() noexcept {
#if defined(HSCRAN_HAVE_PNG)
    return true;
#else
    return false;
#endif
}

#if defined(HSCRAN_HAVE_PNG)

inline ImageFrame read_png(const std::filesystem::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str()))
        throw Error(ErrorCode::Io, path.string() + ": " + image.message);
    image.format = PNG_FORMAT_RGB;
    ImageFrame img(image.width, image.height);
    if (!png_image_finish_read(&image, nullptr, img.data.data(), 0, nullptr)) {
        png_image_free(&image);
        throw Error(ErrorCode::Io, path.string() + ": " + image.message);
    }
    return img;
}

inline void write_png(const std::filesystem::path& path, const ImageFrame& img) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width);
    image.height = static_cast<png_uint_32>(img.height);
    image.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&image, path.c_str(), 0, img.data.data(), 0, nullptr))
        throw Error(ErrorCode::Io, path.string() + ": " + image.message);
}

#endif

/// Dispatches on extension: .png (when built with libpng), anything else as PPM.
inline ImageFrame read_image(const std::filesystem::path& path) {
    if (path.extension() == ".png") {
#if defined(HSCRAN_HAVE_PNG)
        return read_png(path);
#else
        throw Error(ErrorCode::Io, "PNG support not built; convert " + path.string() + " to PPM");
#endif
    }
    return read_ppm(path);
}

inline void write_image(const std::filesystem::path& path, const ImageFrame& img) {
    if (path.extension() == ".png") {
#if defined(HSCRAN_HAVE_PNG)
        return write_png(path, img);
#else
        throw Error(ErrorCode::Io, "PNG support not built");
#endif
    }
    write_ppm(path, img);
}

} // namespace hscran

#endif // HSCRAN_IMAGE_HPP
