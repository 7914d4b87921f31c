#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace ensim {

using Bytes16 = std::array<std::uint8_t, 16>;

std::string to_hex(std::span<const std::uint8_t> bytes);

/// Parses a hex string of exactly 32 chars into 16 bytes. Throws
/// std::invalid_argument on bad length or non-hex characters.
Bytes16 bytes16_from_hex(const std::string& hex);

inline void put_u32_be(std::uint8_t* out, std::uint32_t v) {
  out[0] = static_cast<std::uint8_t>(v >> 24);
  out[1] = static_cast<std::uint8_t>(v >> 16);
  out[2] = static_cast<std::uint8_t>(v >> 8);
  out[3] = static_cast<std::uint8_t>(v);
}

inline void put_u64_be(std::uint8_t* out, std::uint64_t v) {
  put_u32_be(out, static_cast<std::uint32_t>(v >> 32));
  put_u32_be(out + 4, static_cast<std::uint32_t>(v));
}

}  // namespace ensim
