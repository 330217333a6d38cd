#include "fefet/encoding.hpp"

#include <string>

#include "fefet/error.hpp"

namespace fefet {

namespace {

void check_bpc(int bits_per_cell) {
  if (bits_per_cell < 1 || bits_per_cell > 8)
    throw DomainError("encoding: bits_per_cell must be in [1, 8]");
}

}  // namespace

Levels encode_levels(std::span<const std::uint8_t> bits, int bits_per_cell) {
  check_bpc(bits_per_cell);
  const std::size_t n = static_cast<std::size_t>(bits_per_cell);
  Levels levels((bits.size() + n - 1) / n, 0);
  for (std::size_t c = 0; c < levels.size(); ++c) {
    unsigned v = 0;
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t i = c * n + b;
      v = (v << 1) | (i < bits.size() ? (bits[i] & 1U) : 0U);
    }
    levels[c] = static_cast<std::uint8_t>(v);
  }
  return levels;
}

Bits decode_levels(std::span<const std::uint8_t> levels, int bits_per_cell) {
  check_bpc(bits_per_cell);
  const std::size_t n = static_cast<std::size_t>(bits_per_cell);
  const unsigned max_level = (1U << n) - 1;
  Bits bits(levels.size() * n);
  for (std::size_t c = 0; c < levels.size(); ++c) {
    if (levels[c] > max_level)
      throw DomainError("decode_levels: level " + std::to_string(levels[c]) + " out of range");
    for (std::size_t b = 0; b < n; ++b)
      bits[c * n + b] = static_cast<std::uint8_t>((levels[c] >> (n - 1 - b)) & 1U);
  }
  return bits;
}

Bits bytes_to_bits(std::span<const std::uint8_t> bytes) {
  Bits bits(bytes.size() * 8);
  for (std::size_t i = 0; i < bytes.size(); ++i)
    for (int b = 0; b < 8; ++b)
      bits[i * 8 + static_cast<std::size_t>(b)] = static_cast<std::uint8_t>((bytes[i] >> (7 - b)) & 1U);
  return bits;
}

std::vector<std::uint8_t> bits_to_bytes(std::span<const std::uint8_t> bits) {
  std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] & 1U) bytes[i / 8] |= static_cast<std::uint8_t>(1U << (7 - i % 8));
  return bytes;
}

}  // namespace fefet
