#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fefet/rng.hpp"

namespace fefet {

// Area of one ferroelectric domain (10 nm x 10 nm), in m^2.
inline constexpr double kDomainArea = 100e-18;

struct DeviceParams {
  int n_domains = 150;
  double vc_median = 1.0;     // V
  double vc_sigma_ln = 0.03;  // log-normal spread of coercive voltage
  double tau0 = 1e-9;         // s
  double alpha = 18.0;
  double beta = 2.0;
  double i_low = 4.0;   // uA, all domains RESET
  double i_high = 64.0;  // uA, all domains SET
  // false selects the deterministic limit: domain i switches once its
  // accumulated hazard u^beta reaches the (i + 1/2)/N quantile of Exp(1).
  bool stochastic_switching = true;

  void validate() const;
};

enum class Polarization : std::uint8_t { kReset = 0, kSet = 1 };

// Positive amplitude drives domains toward SET, negative toward RESET.
struct Pulse {
  double amplitude = 0.0;  // V
  double duration = 0.0;   // s
};

inline constexpr Pulse kHardResetPulse{-4.0, 1e-6};

/// Conditional probability that a domain which survived an accumulated
/// normalized dose `u_prev` switches during a further increment `delta_u`
/// under the nucleation-limited law P(u) = 1 - exp(-u^beta).
double switch_probability(double u_prev, double delta_u, double beta);

/// Switching time constant of a domain with coercive voltage `vc` under a
/// pulse of magnitude |amplitude|.
double switching_time(const DeviceParams& params, double vc, double amplitude);

/// One FeFET cell: a set of independently switching binary domains with
/// per-domain coercive voltages drawn once at construction.
class FeFETCell {
 public:
  FeFETCell(const DeviceParams& params, std::uint64_t master_seed,
            std::uint64_t cell_index);

  void apply_pulse(const Pulse& pulse);
  void hard_reset();

  double read_current() const;
  int n_set() const { return n_set_; }
  int n_domains() const { return static_cast<int>(state_.size()); }

  const DeviceParams& params() const { return params_; }
  std::span<const Polarization> domain_state() const { return state_; }
  std::span<const double> domain_vc() const { return vc_; }
  std::span<const double> domain_dose() const { return dose_; }

  bool operator==(const FeFETCell& other) const;

 private:
  void ensure_rates(double abs_amplitude);

  DeviceParams params_;
  std::vector<Polarization> state_;
  std::vector<double> vc_;
  std::vector<double> dose_;
  std::vector<double> hazard_quantile_;  // deterministic mode only
  int n_set_ = 0;
  Rng rng_;

  // 1/tau per domain for the most recent |amplitude|; derived data only.
  double rate_amplitude_ = 0.0;
  std::vector<double> inv_tau_;
};

FeFETCell new_cell(const DeviceParams& params, std::uint64_t master_seed,
                   std::uint64_t cell_index);

}  // namespace fefet
