#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fefet/classifier.hpp"
#include "fefet/encoding.hpp"
#include "fefet/fault.hpp"
#include "fefet/graph.hpp"
#include "fefet/memory.hpp"
#include "fefet/quantize.hpp"

namespace fefet {

struct StoreReport {
  std::uint64_t n_bits = 0;
  std::uint64_t n_cells = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t level_errors = 0;
  ConfusionMatrix confusion;  // raw counts per (programmed, sensed) level

  double bit_error_rate() const;
  double level_error_rate() const;
};

struct StoreResult {
  Bits bits;
  StoreReport report;
};

/// encode -> program/sense one cell per level (cell index = position) ->
/// decode. Padding bits of the last cell are dropped from the output.
StoreResult store_and_readback(std::span<const std::uint8_t> bits, const MemoryConfig& config,
                               std::uint64_t master_seed);

// Data stored in the memory plus the metric used to judge the readback.
class Workload {
 public:
  virtual ~Workload() = default;
  virtual std::string name() const = 0;
  virtual const Bits& payload() const = 0;
  /// Metric on the fault-free payload.
  virtual double baseline() const = 0;
  virtual double score(std::span<const std::uint8_t> readback, std::uint64_t master_seed) const = 0;
};

// Dense adjacency matrix scored by BFS distance agreement.
class GraphWorkload final : public Workload {
 public:
  GraphWorkload(Graph golden, std::uint32_t n_queries);
  std::string name() const override { return "graph"; }
  const Bits& payload() const override { return bits_; }
  double baseline() const override { return 1.0; }
  double score(std::span<const std::uint8_t> readback, std::uint64_t master_seed) const override;
  const Graph& graph() const { return golden_; }

 private:
  Graph golden_;
  std::uint32_t n_queries_;
  Bits bits_;
};

// 8-bit quantized linear classifier weights scored by test accuracy.
class ClassifierWorkload final : public Workload {
 public:
  ClassifierWorkload(Dataset data, const Eigen::MatrixXd& weights);
  std::string name() const override { return "classifier"; }
  const Bits& payload() const override { return bits_; }
  double baseline() const override { return baseline_; }
  double score(std::span<const std::uint8_t> readback, std::uint64_t master_seed) const override;
  const QuantizedTensor& quantized() const { return q_; }
  /// Accuracy of the unquantized weights.
  double float_accuracy() const { return float_accuracy_; }

 private:
  double accuracy_of(const QuantizedTensor& q) const;

  Dataset data_;
  QuantizedTensor q_;
  Bits bits_;
  double float_accuracy_ = 0.0;
  double baseline_ = 0.0;
};

struct InjectionReport {
  std::string workload;
  StoreReport store;
  double metric_before = 0.0;
  double metric_after = 0.0;
  double relative_error = 0.0;  // 1 - after / before
};

InjectionReport inject(const Workload& workload, const MemoryConfig& config,
                       std::uint64_t master_seed);

/// Seed of replicate r; replicate 0 is the master seed itself.
std::uint64_t replicate_seed(std::uint64_t master_seed, int replicate);

/// Mean relative error over replicates.
double mean_relative_error(const Workload& workload, const MemoryConfig& config, int replicates,
                           std::uint64_t master_seed);

struct MinsizeRow {
  int bits_per_cell = 1;
  Scheme scheme = Scheme::kWriteVerify;
  std::string workload;
  std::optional<int> min_domains;  // empty: no grid point passed
  std::vector<std::pair<int, double>> evaluated;  // (domains, mean relative error)
};

/// The (scheme, bpc) rows reported by min_cell_size_sweep.
std::vector<std::pair<Scheme, int>> minsize_rows();

/// For each row, the smallest grid size whose mean relative error over
/// replicates is below epsilon. The grid is scanned in ascending order and
/// stops at the first pass.
std::vector<MinsizeRow> min_cell_size_sweep(const Workload& workload, const MemoryConfig& base,
                                            std::vector<int> domain_grid, double epsilon,
                                            int replicates, std::uint64_t master_seed);

inline constexpr const char* kMinsizeCsvHeader = "bpc,scheme,workload,min_domains";

void write_minsize_csv(std::ostream& os, std::span<const MinsizeRow> rows);

}  // namespace fefet
