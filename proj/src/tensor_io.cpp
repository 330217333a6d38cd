#include "fefet/tensor_io.hpp"

#include <bit>
#include <fstream>

#include "json.hpp"

#include "fefet/error.hpp"

namespace fefet {

namespace fs = std::filesystem;

namespace {

std::int64_t element_count(const std::vector<std::int64_t>& shape) {
  std::int64_t n = 1;
  for (std::int64_t d : shape) {
    if (d < 0) throw InputError("tensor shape has a negative dimension");
    n *= d;
  }
  return n;
}

}  // namespace

Tensor read_tensor(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw InputError("cannot open tensor manifest " + manifest.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(manifest.string() + ": " + e.what());
  }
  if (!j.is_object() || j.value("dtype", "") != "f32" || !j.contains("shape") ||
      !j["shape"].is_array() || !j.contains("data") || !j["data"].is_string())
    throw InputError(manifest.string() +
                     ": expected {\"dtype\":\"f32\",\"shape\":[...],\"data\":\"<path>\"}");
  Tensor t;
  for (const auto& d : j["shape"]) {
    if (!d.is_number_integer()) throw InputError(manifest.string() + ": non-integer shape entry");
    t.shape.push_back(d.get<std::int64_t>());
  }
  fs::path data = j["data"].get<std::string>();
  if (data.is_relative()) data = manifest.parent_path() / data;

  const std::int64_t n = element_count(t.shape);
  std::ifstream raw(data, std::ios::binary);
  if (!raw) throw InputError("cannot open tensor data " + data.string());
  std::vector<unsigned char> bytes(static_cast<std::size_t>(n) * 4);
  raw.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (raw.gcount() != static_cast<std::streamsize>(bytes.size()) || raw.peek() != EOF)
    throw InputError(data.string() + ": expected exactly " + std::to_string(n) + " f32 values");

  t.values.resize(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    const unsigned char* b = &bytes[i * 4];
    const std::uint32_t u = std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 |
                            std::uint32_t{b[2]} << 16 | std::uint32_t{b[3]} << 24;
    t.values[i] = std::bit_cast<float>(u);
  }
  return t;
}

void write_tensor(const fs::path& manifest, const Tensor& tensor) {
  if (element_count(tensor.shape) != static_cast<std::int64_t>(tensor.values.size()))
    throw DomainError("write_tensor: shape does not match value count");
  const fs::path data_name = manifest.stem().string() + ".f32";
  const fs::path data = manifest.parent_path() / data_name;

  std::ofstream raw(data, std::ios::binary);
  if (!raw) throw InputError("cannot write " + data.string());
  for (float v : tensor.values) {
    const auto u = std::bit_cast<std::uint32_t>(v);
    const char b[4] = {static_cast<char>(u & 0xff), static_cast<char>((u >> 8) & 0xff),
                       static_cast<char>((u >> 16) & 0xff), static_cast<char>((u >> 24) & 0xff)};
    raw.write(b, 4);
  }

  nlohmann::ordered_json j;
  j["dtype"] = "f32";
  j["shape"] = tensor.shape;
  j["data"] = data_name.string();
  std::ofstream out(manifest);
  if (!out) throw InputError("cannot write " + manifest.string());
  out << j.dump(2) << '\n';
}

}  // namespace fefet
