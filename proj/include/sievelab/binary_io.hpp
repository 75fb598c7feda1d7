#pragma once

// Little-endian binary encoding shared by the family and instance file formats.

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string_view>

#include "sievelab/errors.hpp"

namespace sievelab::binary {

inline void write_u64(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> bytes{};
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(bytes.data(), bytes.size());
}

inline void write_f64(std::ostream& out, double v) { write_u64(out, std::bit_cast<std::uint64_t>(v)); }

inline void write_f64s(std::ostream& out, std::span<const double> values) {
    for (double v : values) write_f64(out, v);
}

inline void write_magic(std::ostream& out, std::string_view magic, std::uint64_t version) {
    out.write(magic.data(), static_cast<std::streamsize>(magic.size()));
    write_u64(out, version);
}

inline std::uint64_t read_u64(std::istream& in) {
    std::array<char, 8> bytes{};
    if (!in.read(bytes.data(), bytes.size())) throw ConfigError("binary input truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
    return v;
}

inline double read_f64(std::istream& in) { return std::bit_cast<double>(read_u64(in)); }

inline void expect_magic(std::istream& in, std::string_view magic, std::uint64_t version) {
    std::array<char, 16> buf{};
    if (magic.size() > buf.size() || !in.read(buf.data(), static_cast<std::streamsize>(magic.size())) ||
        std::string_view(buf.data(), magic.size()) != magic) {
        throw ConfigError("binary input: bad magic, expected " + std::string(magic));
    }
    if (read_u64(in) != version) throw ConfigError("binary input: unsupported version");
}

}  // namespace sievelab::binary
