#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fefet/memory.hpp"

namespace fefet {

// Read-fault statistics of one memory configuration: entry (j, k) is the
// probability that a cell programmed to level j reads back as level k.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(int n_levels);

  void tally(int programmed, int sensed);

  int n_levels() const { return n_levels_; }
  std::uint64_t count(int j, int k) const { return counts_[index(j, k)]; }
  std::uint64_t row_total(int j) const;
  double p(int j, int k) const;
  std::uint64_t samples_per_level() const;

  // Average over programmed levels of the probability mass read below
  // (above) the programmed level.
  double below_diag_mass() const;
  double above_diag_mass() const;
  double mean_fault_rate() const;

 private:
  std::size_t index(int j, int k) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_levels_) +
           static_cast<std::size_t>(k);
  }

  int n_levels_ = 0;
  std::vector<std::uint64_t> counts_;
};

/// Programs `samples_per_level` fresh cells to each level, senses each with
/// ADC instance (cell_index mod n_instances) and tallies the outcomes.
ConfusionMatrix confusion_matrix(const MemoryConfig& config, std::uint64_t samples_per_level,
                                 std::uint64_t master_seed);

/// max_j (1 - p[j][j]).
double max_fault_rate(const ConfusionMatrix& m);

struct ShmooRow {
  int n_domains = 0;
  int bits_per_cell = 0;
  Scheme scheme = Scheme::kWriteVerify;
  double max_fault_rate = 0.0;
  double mean_fault_rate = 0.0;
  double below_diag_mass = 0.0;
  double above_diag_mass = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

struct ShmooGrid {
  std::vector<int> domains{20, 50, 100, 150, 200, 250, 300, 400, 500};
  std::vector<int> bits{1, 2, 3};
  std::vector<Scheme> schemes{Scheme::kSinglePulse, Scheme::kWriteVerify};
};

/// Cartesian sweep of confusion_matrix over the grid, domains outermost,
/// then bits, then scheme. Each point starts from `base` with the swept
/// fields overridden.
std::vector<ShmooRow> shmoo(const MemoryConfig& base, const ShmooGrid& grid,
                            std::uint64_t samples_per_level, std::uint64_t master_seed);

inline constexpr const char* kShmooCsvHeader =
    "n_domains,bpc,scheme,max_fault,mean_fault,below_mass,above_mass,samples,seed";

void write_shmoo_csv(std::ostream& os, std::span<const ShmooRow> rows);

}  // namespace fefet
