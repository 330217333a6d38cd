#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fefet {

// Flash-style multi-level sense circuit: a cell current is compared against
// 2^n - 1 reference currents in parallel.
struct AdcConfig {
  int bits_per_cell = 2;
  double i_low = 4.0;   // uA
  double i_high = 64.0;  // uA
  double sigma_rel = 0.05 / 3.0;
  int n_instances = 64;

  void validate() const;
  int n_levels() const { return 1 << bits_per_cell; }
};

struct ThresholdSet {
  std::vector<double> nominal;
  std::vector<std::vector<double>> sampled;  // [instance][k]
};

/// Geometrically spaced reference currents T_k = i_low * rho^k, k = 1..2^n-1,
/// rho = (i_high / i_low)^(1 / 2^n). With sigma proportional to T_k the
/// gap-to-sigma ratio is the same for every adjacent pair.
std::vector<double> nominal_thresholds(const AdcConfig& cfg);

/// Programming targets: L_0 = i_low, L_j = sqrt(T_j * T_{j+1}) with T_{2^n} = i_high.
std::vector<double> target_levels(const AdcConfig& cfg);

/// One physical ADC instance: nominal thresholds perturbed by i.i.d.
/// proportional Gaussian offsets, sorted ascending. Static per instance.
std::vector<double> sample_adc(const AdcConfig& cfg, std::uint64_t master_seed,
                               std::uint64_t instance_index);

ThresholdSet make_threshold_set(const AdcConfig& cfg, std::uint64_t master_seed);

/// Number of thresholds strictly below `current`.
int sense(std::span<const double> thresholds, double current);

}  // namespace fefet
