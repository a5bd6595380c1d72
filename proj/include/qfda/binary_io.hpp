#pragma once

// Little-endian scalar I/O for the library's binary file formats.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

#include "qfda/errors.hpp"

namespace qfda::binary {

template <typename T>
    requires std::is_arithmetic_v<T>
void write_le(std::ostream& out, T value) {
    std::array<unsigned char, sizeof(T)> bytes{};
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
    requires std::is_arithmetic_v<T>
T read_le(std::istream& in) {
    std::array<unsigned char, sizeof(T)> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T)))
        throw FormatError("unexpected end of binary file");
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

inline void write_magic(std::ostream& out, const char (&magic)[9]) { out.write(magic, 8); }

inline void expect_magic(std::istream& in, const char (&magic)[9], const std::string& what) {
    char got[8];
    if (!in.read(got, 8) || std::memcmp(got, magic, 8) != 0)
        throw FormatError(what + ": bad magic, expected " + std::string(magic, 8));
}

}  // namespace qfda::binary
