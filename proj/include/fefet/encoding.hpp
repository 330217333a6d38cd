#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fefet {

// Bit strings are stored one bit per byte (values 0/1).
using Bits = std::vector<std::uint8_t>;
using Levels = std::vector<std::uint8_t>;

/// Consecutive groups of `bits_per_cell` bits, MSB first, become one level.
/// The tail is zero-padded to a whole cell.
Levels encode_levels(std::span<const std::uint8_t> bits, int bits_per_cell);

/// Inverse of encode_levels; returns levels.size() * bits_per_cell bits.
Bits decode_levels(std::span<const std::uint8_t> levels, int bits_per_cell);

Bits bytes_to_bits(std::span<const std::uint8_t> bytes);  // MSB first per byte
std::vector<std::uint8_t> bits_to_bytes(std::span<const std::uint8_t> bits);

}  // namespace fefet
