#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace fefet {

// Raw little-endian f32 tensor described by a JSON manifest:
//   {"dtype": "f32", "shape": [d0, d1, ...], "data": "<path>"}
// A relative data path is resolved against the manifest's directory.
struct Tensor {
  std::vector<std::int64_t> shape;
  std::vector<float> values;
};

Tensor read_tensor(const std::filesystem::path& manifest);

/// Writes the data file next to the manifest as <stem>.f32.
void write_tensor(const std::filesystem::path& manifest, const Tensor& tensor);

}  // namespace fefet
