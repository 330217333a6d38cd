#include "fefet/population.hpp"

#include <algorithm>
#include <cmath>

namespace fefet {

CurrentHistogram::CurrentHistogram(double i_low, double i_high, int n_bins)
    : lo(0.5 * i_low), hi(2.0 * i_high), counts(static_cast<std::size_t>(n_bins), 0) {}

int CurrentHistogram::bin_of(double current) const {
  const int n = n_bins();
  if (current <= lo) return 0;
  const int k = static_cast<int>(std::floor(n * std::log(current / lo) / std::log(hi / lo)));
  return std::clamp(k, 0, n - 1);
}

void CurrentHistogram::add(double current) { ++counts[static_cast<std::size_t>(bin_of(current))]; }

double CurrentHistogram::edge(int k) const {
  return lo * std::pow(hi / lo, static_cast<double>(k) / n_bins());
}

int CurrentHistogram::occupied_bins() const {
  return static_cast<int>(std::count_if(counts.begin(), counts.end(),
                                        [](std::uint64_t c) { return c > 0; }));
}

PopulationStats population_stats(const MemoryConfig& config, std::uint64_t n_cells,
                                 std::uint64_t master_seed) {
  const MemoryModel model(config, master_seed);
  const int n_levels = config.n_levels();

  std::vector<CellJob> jobs;
  jobs.reserve(n_cells * static_cast<std::uint64_t>(n_levels));
  for (int j = 0; j < n_levels; ++j)
    for (std::uint64_t i = 0; i < n_cells; ++i)
      jobs.push_back({static_cast<std::uint64_t>(j) * n_cells + i, j});
  const std::vector<CellOutcome> out = run_cells(model, jobs);

  PopulationStats stats;
  stats.n_cells_per_level = n_cells;
  stats.seed = master_seed;
  stats.timing = model.programmer().timing();
  const LevelMap& map = model.programmer().levels();

  // Serial reduction in job order keeps floating-point sums reproducible.
  for (int j = 0; j < n_levels; ++j) {
    LevelStats s;
    s.level = j;
    s.target = map.targets[static_cast<std::size_t>(j)];
    s.window = map.windows[static_cast<std::size_t>(j)];
    s.n_cells = n_cells;
    s.histogram = CurrentHistogram(config.device.i_low, config.device.i_high);
    s.min_current = config.device.i_high;
    s.max_current = config.device.i_low;
    double sum_i = 0.0, sum_i2 = 0.0, sum_lat = 0.0, sum_e = 0.0;
    std::uint64_t sum_set = 0, sum_soft = 0, failures = 0;
    for (std::uint64_t i = 0; i < n_cells; ++i) {
      const ProgramResult& r = out[static_cast<std::size_t>(j) * n_cells + i].result;
      s.histogram.add(r.final_current);
      sum_i += r.final_current;
      sum_i2 += r.final_current * r.final_current;
      s.min_current = std::min(s.min_current, r.final_current);
      s.max_current = std::max(s.max_current, r.final_current);
      sum_set += static_cast<std::uint64_t>(r.n_set_pulses);
      sum_soft += static_cast<std::uint64_t>(r.n_soft_resets);
      s.max_set_pulses = std::max(s.max_set_pulses, r.n_set_pulses);
      s.max_soft_resets = std::max(s.max_soft_resets, r.n_soft_resets);
      if (!r.success) ++failures;
      sum_lat += r.latency;
      sum_e += r.energy;
    }
    const double n = static_cast<double>(n_cells);
    if (n_cells > 0) {
      s.mean_current = sum_i / n;
      s.sd_current = std::sqrt(std::max(0.0, sum_i2 / n - s.mean_current * s.mean_current));
      s.mean_set_pulses = static_cast<double>(sum_set) / n;
      s.mean_soft_resets = static_cast<double>(sum_soft) / n;
      s.mean_pulses = static_cast<double>(sum_set + sum_soft) / n;
      s.failure_rate = static_cast<double>(failures) / n;
      s.mean_latency = sum_lat / n;
      s.mean_energy = sum_e / n;
    }
    stats.mean_pulses += s.mean_pulses / n_levels;
    stats.mean_energy += s.mean_energy / n_levels;
    stats.failure_rate += s.failure_rate / n_levels;
    stats.levels.push_back(std::move(s));
  }
  stats.mean_latency = stats.timing.latency(stats.mean_pulses);
  return stats;
}

}  // namespace fefet
