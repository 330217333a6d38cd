#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fefet {

// Per-tensor affine 8-bit quantization: value = scale * (code - zero_point).
struct QuantizedTensor {
  std::vector<std::uint8_t> codes;  // row-major
  std::vector<std::int64_t> shape;
  double scale = 0.0;
  std::int64_t zero_point = 0;

  std::size_t size() const { return codes.size(); }
};

/// scale = (max - min) / 255, zero_point = round(-min / scale). A constant
/// tensor c gets all-zero codes with scale |c| and zero_point -sign(c), so it
/// dequantizes exactly.
QuantizedTensor quantize_affine(std::span<const float> values, std::vector<std::int64_t> shape);
QuantizedTensor quantize_affine(std::span<const float> values);

std::vector<float> dequantize(const QuantizedTensor& q);

}  // namespace fefet
