#ifndef HSCRAN_IQ_FILE_HPP
#define HSCRAN_IQ_FILE_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <vector>

#include "hscran/error.hpp"
#include "hscran/types.hpp"

namespace hscran {

// Raw SDR capture format: little-endian interleaved float32 I/Q pairs, no header.

namespace detail {

inline std::uint32_t to_le(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::big) return __builtin_bswap32(v);
    return v;
}

} // namespace detail

inline std::vector<std::uint8_t> encode_iq(std::span<const cplx> samples) {
    std::vector<std::uint8_t> out(samples.size() * 8);
    std::uint8_t* p = out.data();
    for (const auto& s : samples) {
        for (float f : {static_cast<float>(s.real()), static_cast<float>(s.imag())}) {
            const std::uint32_t w = detail::to_le(std::bit_cast<std::uint32_t>(f));
            std::memcpy(p, &w, 4);
            p += 4;
        }
    }
    return out;
}

inline std::vector<cplx> decode_iq(std::span<const std::uint8_t> bytes) {
    if (bytes.size() % 8 != 0) throw Error(ErrorCode::LengthMismatch, "IQ data is not a whole number of float32 pairs");
    std::vector<cplx> out(bytes.size() / 8);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint32_t w[2];
        std::memcpy(w, bytes.data() + 8 * i, 8);
        out[i] = {std::bit_cast<float>(detail::to_le(w[0])), std::bit_cast<float>(detail::to_le(w[1]))};
    }
    return out;
}

inline void write_iq(const std::filesystem::path& path, std::span<const cplx> samples) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot open " + path.string());
    const auto bytes = encode_iq(samples);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

inline std::vector<cplx> read_iq(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return decode_iq(bytes);
}

} // namespace hscran

#endif // HSCRAN_IQ_FILE_HPP
