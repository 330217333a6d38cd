#pragma once

#include <cstdint>
#include <vector>

#include "fefet/memory.hpp"

namespace fefet {

// Fixed log-spaced current bins over [i_low / 2, 2 * i_high].
struct CurrentHistogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::uint64_t> counts;

  CurrentHistogram() = default;
  CurrentHistogram(double i_low, double i_high, int n_bins = 64);

  void add(double current);
  int bin_of(double current) const;
  double edge(int k) const;  // k in [0, n_bins]
  int n_bins() const { return static_cast<int>(counts.size()); }
  int occupied_bins() const;
};

struct LevelStats {
  int level = 0;
  double target = 0.0;
  TargetWindow window;
  std::uint64_t n_cells = 0;
  CurrentHistogram histogram;
  double mean_current = 0.0;
  double sd_current = 0.0;
  double min_current = 0.0;
  double max_current = 0.0;
  double mean_set_pulses = 0.0;
  int max_set_pulses = 0;
  double mean_soft_resets = 0.0;
  int max_soft_resets = 0;
  double mean_pulses = 0.0;
  double failure_rate = 0.0;
  double mean_latency = 0.0;  // s
  double mean_energy = 0.0;   // J per cell
};

struct PopulationStats {
  std::vector<LevelStats> levels;
  std::uint64_t n_cells_per_level = 0;
  std::uint64_t seed = 0;
  ProgramTiming timing;
  // Uniformly distributed data: every level written equally often.
  double mean_pulses = 0.0;
  double mean_latency = 0.0;
  double mean_energy = 0.0;
  double failure_rate = 0.0;
};

/// Programs `n_cells` fresh cells to every level and summarizes the result.
/// Cell index for (level j, sample i) is j * n_cells + i.
PopulationStats population_stats(const MemoryConfig& config, std::uint64_t n_cells = 1500,
                                 std::uint64_t master_seed = 0);

}  // namespace fefet
