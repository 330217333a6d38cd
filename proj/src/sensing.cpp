#include "fefet/sensing.hpp"

#include <algorithm>
#include <cmath>

#include "fefet/error.hpp"
#include "fefet/rng.hpp"

namespace fefet {

void AdcConfig::validate() const {
  if (bits_per_cell < 1 || bits_per_cell > 3)
    throw ConfigError("adc: bits_per_cell must be 1, 2 or 3");
  if (!(i_low > 0.0 && i_low < i_high)) throw ConfigError("adc: need 0 < i_low < i_high");
  if (!(sigma_rel >= 0.0)) throw ConfigError("adc: sigma_rel must be >= 0");
  if (n_instances < 1) throw ConfigError("adc: n_instances must be >= 1");
}

std::vector<double> nominal_thresholds(const AdcConfig& cfg) {
  cfg.validate();
  const int n_levels = cfg.n_levels();
  const double rho = std::pow(cfg.i_high / cfg.i_low, 1.0 / n_levels);
  std::vector<double> t(static_cast<std::size_t>(n_levels - 1));
  for (int k = 1; k < n_levels; ++k) t[k - 1] = cfg.i_low * std::pow(rho, k);
  return t;
}

std::vector<double> target_levels(const AdcConfig& cfg) {
  std::vector<double> t = nominal_thresholds(cfg);
  t.push_back(cfg.i_high);
  std::vector<double> levels(static_cast<std::size_t>(cfg.n_levels()));
  levels[0] = cfg.i_low;
  for (std::size_t j = 1; j < levels.size(); ++j) levels[j] = std::sqrt(t[j - 1] * t[j]);
  return levels;
}

std::vector<double> sample_adc(const AdcConfig& cfg, std::uint64_t master_seed,
                               std::uint64_t instance_index) {
  std::vector<double> row = nominal_thresholds(cfg);
  if (cfg.sigma_rel == 0.0) return row;
  Rng rng = make_rng(master_seed, instance_index, Stream::kAdc);
  std::normal_distribution<double> eps(0.0, cfg.sigma_rel);
  for (double& t : row) t *= 1.0 + eps(rng);
  std::sort(row.begin(), row.end());
  return row;
}

ThresholdSet make_threshold_set(const AdcConfig& cfg, std::uint64_t master_seed) {
  ThresholdSet set;
  set.nominal = nominal_thresholds(cfg);
  set.sampled.reserve(static_cast<std::size_t>(cfg.n_instances));
  for (int i = 0; i < cfg.n_instances; ++i)
    set.sampled.push_back(sample_adc(cfg, master_seed, static_cast<std::uint64_t>(i)));
  return set;
}

int sense(std::span<const double> thresholds, double current) {
  // Rows are sorted, so the count of thresholds below the current is a
  // lower_bound position.
  const auto it = std::lower_bound(thresholds.begin(), thresholds.end(), current);
  return static_cast<int>(it - thresholds.begin());
}

}  // namespace fefet
