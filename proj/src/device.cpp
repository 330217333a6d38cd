#include "fefet/device.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fefet/error.hpp"

namespace fefet {

void DeviceParams::validate() const {
  if (n_domains < 1) throw ConfigError("device: n_domains must be >= 1");
  if (!(tau0 > 0.0)) throw ConfigError("device: tau0 must be > 0");
  if (!(beta > 0.0)) throw ConfigError("device: beta must be > 0");
  if (!(vc_median > 0.0)) throw ConfigError("device: vc_median must be > 0");
  if (!(vc_sigma_ln >= 0.0)) throw ConfigError("device: vc_sigma_ln must be >= 0");
  if (!(i_low > 0.0 && i_low < i_high))
    throw ConfigError("device: need 0 < i_low < i_high");
}

double switch_probability(double u_prev, double delta_u, double beta) {
  if (!(u_prev >= 0.0) || !(delta_u >= 0.0) || !(beta > 0.0))
    throw DomainError("switch_probability: negative dose or non-positive beta");
  if (delta_u == 0.0) return 0.0;
  double hazard;
  if (beta == 2.0) {
    hazard = delta_u * (2.0 * u_prev + delta_u);
  } else {
    hazard = std::pow(u_prev + delta_u, beta) - std::pow(u_prev, beta);
  }
  return -std::expm1(-hazard);
}

double switching_time(const DeviceParams& params, double vc, double amplitude) {
  return params.tau0 * std::exp(params.alpha * vc / std::abs(amplitude));
}

FeFETCell::FeFETCell(const DeviceParams& params, std::uint64_t master_seed,
                     std::uint64_t cell_index)
    : params_(params),
      state_(static_cast<std::size_t>(params.n_domains), Polarization::kReset),
      vc_(static_cast<std::size_t>(params.n_domains), params.vc_median),
      dose_(static_cast<std::size_t>(params.n_domains), 0.0),
      rng_(make_rng(master_seed, cell_index, Stream::kSwitching)) {
  params_.validate();
  if (params_.vc_sigma_ln > 0.0) {
    Rng vc_rng = make_rng(master_seed, cell_index, Stream::kCoerciveVoltage);
    std::normal_distribution<double> z(0.0, 1.0);
    for (double& vc : vc_) vc = params_.vc_median * std::exp(params_.vc_sigma_ln * z(vc_rng));
  }
  if (!params_.stochastic_switching) {
    const double n = static_cast<double>(vc_.size());
    hazard_quantile_.resize(vc_.size());
    for (std::size_t i = 0; i < vc_.size(); ++i)
      hazard_quantile_[i] = -std::log1p(-(static_cast<double>(i) + 0.5) / n);
  }
}

void FeFETCell::ensure_rates(double abs_amplitude) {
  if (abs_amplitude == rate_amplitude_ && !inv_tau_.empty()) return;
  inv_tau_.resize(vc_.size());
  for (std::size_t i = 0; i < vc_.size(); ++i)
    inv_tau_[i] = 1.0 / switching_time(params_, vc_[i], abs_amplitude);
  rate_amplitude_ = abs_amplitude;
}

void FeFETCell::apply_pulse(const Pulse& pulse) {
  if (!(pulse.duration > 0.0)) throw DomainError("apply_pulse: duration must be > 0");
  if (pulse.amplitude == 0.0) return;
  ensure_rates(std::abs(pulse.amplitude));

  const Polarization target =
      pulse.amplitude > 0.0 ? Polarization::kSet : Polarization::kReset;
  const int delta_set = target == Polarization::kSet ? 1 : -1;
  for (std::size_t i = 0; i < state_.size(); ++i) {
    if (state_[i] == target) {
      // Aligned domains lose any dose accumulated toward the other polarity.
      dose_[i] = 0.0;
      continue;
    }
    const double du = pulse.duration * inv_tau_[i];
    bool flips;
    if (params_.stochastic_switching) {
      flips = uniform01(rng_) < switch_probability(dose_[i], du, params_.beta);
    } else {
      flips = std::pow(dose_[i] + du, params_.beta) >= hazard_quantile_[i];
    }
    if (flips) {
      state_[i] = target;
      dose_[i] = 0.0;
      n_set_ += delta_set;
    } else {
      dose_[i] += du;
    }
  }
}

void FeFETCell::hard_reset() {
  apply_pulse(kHardResetPulse);
  std::fill(dose_.begin(), dose_.end(), 0.0);
}

double FeFETCell::read_current() const {
  const double frac = static_cast<double>(n_set_) / static_cast<double>(state_.size());
  return params_.i_low + frac * (params_.i_high - params_.i_low);
}

bool FeFETCell::operator==(const FeFETCell& other) const {
  return state_ == other.state_ && vc_ == other.vc_ && dose_ == other.dose_ &&
         n_set_ == other.n_set_ && rng_ == other.rng_;
}

FeFETCell new_cell(const DeviceParams& params, std::uint64_t master_seed,
                   std::uint64_t cell_index) {
  return FeFETCell(params, master_seed, cell_index);
}

}  // namespace fefet
