#include "fefet/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fefet/error.hpp"

namespace fefet {

QuantizedTensor quantize_affine(std::span<const float> values, std::vector<std::int64_t> shape) {
  const std::int64_t n = std::accumulate(shape.begin(), shape.end(), std::int64_t{1},
                                         std::multiplies<>());
  if (n != static_cast<std::int64_t>(values.size()))
    throw DomainError("quantize_affine: shape does not match value count");
  QuantizedTensor q;
  q.shape = std::move(shape);
  q.codes.assign(values.size(), 0);
  if (values.empty()) return q;
  for (float v : values)
    if (!std::isfinite(v)) throw DomainError("quantize_affine: non-finite value");

  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  if (hi == lo) {
    q.scale = std::abs(lo);
    q.zero_point = lo > 0.0 ? -1 : (lo < 0.0 ? 1 : 0);
    return q;
  }
  q.scale = (hi - lo) / 255.0;
  q.zero_point = static_cast<std::int64_t>(std::nearbyint(-lo / q.scale));
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double code = std::nearbyint(values[i] / q.scale) + static_cast<double>(q.zero_point);
    q.codes[i] = static_cast<std::uint8_t>(std::clamp(code, 0.0, 255.0));
  }
  return q;
}

QuantizedTensor quantize_affine(std::span<const float> values) {
  return quantize_affine(values, {static_cast<std::int64_t>(values.size())});
}

std::vector<float> dequantize(const QuantizedTensor& q) {
  std::vector<float> out(q.codes.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<float>(q.scale * static_cast<double>(static_cast<std::int64_t>(q.codes[i]) -
                                                              q.zero_point));
  return out;
}

}  // namespace fefet
