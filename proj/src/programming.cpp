#include "fefet/programming.hpp"

#include <cmath>
#include <string>

#include "fefet/error.hpp"

namespace fefet {

std::string_view scheme_name(Scheme scheme) {
  return scheme == Scheme::kSinglePulse ? "single" : "verify";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "single") return Scheme::kSinglePulse;
  if (name == "verify") return Scheme::kWriteVerify;
  throw ConfigError("unknown programming scheme '" + std::string(name) +
                    "' (expected single|verify)");
}

void WriteVerifyScheme::validate() const {
  if (!(v_set > 0.0 && v_soft_reset < 0.0))
    throw ConfigError("program: need v_set > 0 > v_soft_reset");
  if (!(pulse_duration > 0.0)) throw ConfigError("program: pulse duration must be > 0");
  if (max_soft_resets < 0) throw ConfigError("program: max_soft_resets must be >= 0");
  if (max_total_pulses < 1) throw ConfigError("program: max_total_pulses must be >= 1");
  if (!(window_frac > 0.0 && window_frac < 1.0))
    throw ConfigError("program: window_frac must lie in (0, 1)");
  if (!(t_verify >= 0.0)) throw ConfigError("program: t_verify must be >= 0");
}

LevelMap LevelMap::build(const AdcConfig& adc, double window_frac) {
  LevelMap map;
  map.thresholds = nominal_thresholds(adc);
  map.targets = target_levels(adc);
  map.windows.resize(map.targets.size());
  const auto n = map.targets.size();
  for (std::size_t j = 1; j < n; ++j) {
    const double below = map.thresholds[j - 1];
    const double above = j + 1 < n ? map.thresholds[j] : adc.i_high;
    const double l = map.targets[j];
    map.windows[j] = {l - window_frac * (l - below), l + window_frac * (above - l)};
  }
  map.windows[0] = {adc.i_low, adc.i_low};
  return map;
}

double nominal_switched_fraction(const DeviceParams& params, double amplitude,
                                 double duration) {
  if (amplitude <= 0.0) return 0.0;
  const double u = duration / switching_time(params, params.vc_median, amplitude);
  return switch_probability(0.0, u, params.beta);
}

SinglePulseScheme calibrate_single_pulse(const DeviceParams& params,
                                         std::span<const double> targets,
                                         double pulse_duration) {
  constexpr double kMaxAmplitude = 6.0;
  constexpr double kTolerance = 1e-4;  // V

  for (std::size_t j = 1; j < targets.size(); ++j)
    if (!(targets[j] > targets[j - 1]))
      throw ConfigError("calibrate_single_pulse: targets must be strictly increasing");

  SinglePulseScheme scheme;
  scheme.pulse_duration = pulse_duration;
  scheme.amplitude_per_level.assign(targets.size(), 0.0);
  for (std::size_t j = 1; j < targets.size(); ++j) {
    const double f = (targets[j] - params.i_low) / (params.i_high - params.i_low);
    if (f <= 0.0) continue;
    if (f >= 1.0 || nominal_switched_fraction(params, kMaxAmplitude, pulse_duration) < f)
      throw CalibrationError(static_cast<int>(j),
                             "calibrate_single_pulse: level " + std::to_string(j) +
                                 " unreachable with amplitudes up to 6 V");
    double lo = 0.0;
    double hi = kMaxAmplitude;
    while (hi - lo > kTolerance) {
      const double mid = 0.5 * (lo + hi);
      if (nominal_switched_fraction(params, mid, pulse_duration) < f)
        lo = mid;
      else
        hi = mid;
    }
    scheme.amplitude_per_level[j] = 0.5 * (lo + hi);
  }
  return scheme;
}

namespace {

void check_level(int level, int n_levels) {
  if (level < 0 || level >= n_levels)
    throw DomainError("program: level " + std::to_string(level) + " out of range [0, " +
                      std::to_string(n_levels - 1) + "]");
}

}  // namespace

ProgramResult program_single_pulse(FeFETCell& cell, int level,
                                   const SinglePulseScheme& scheme,
                                   const CellElectrical& electrical) {
  check_level(level, static_cast<int>(scheme.amplitude_per_level.size()));
  const int n = cell.n_domains();
  ProgramResult r;
  cell.hard_reset();
  r.energy = electrical.pulse_energy(n, kHardResetPulse.amplitude);
  if (level > 0) {
    const double v = scheme.amplitude_per_level[static_cast<std::size_t>(level)];
    if (v > 0.0) cell.apply_pulse({v, scheme.pulse_duration});
    r.n_set_pulses = 1;
    r.energy += electrical.pulse_energy(n, v);
  }
  r.success = true;
  r.final_current = cell.read_current();
  r.latency = scheme.timing().latency(r.n_set_pulses);
  return r;
}

ProgramResult program_write_verify(FeFETCell& cell, int level,
                                   const WriteVerifyScheme& scheme,
                                   const LevelMap& levels,
                                   const CellElectrical& electrical) {
  check_level(level, levels.n_levels());
  const int n = cell.n_domains();
  const double e_set = electrical.pulse_energy(n, scheme.v_set);
  const double e_soft = electrical.pulse_energy(n, scheme.v_soft_reset);

  ProgramResult r;
  cell.hard_reset();
  r.energy = electrical.pulse_energy(n, kHardResetPulse.amplitude);
  if (level == 0) {
    r.success = true;
  } else {
    const TargetWindow w = levels.windows[static_cast<std::size_t>(level)];
    while (true) {
      const double current = cell.read_current();
      if (w.contains(current)) {
        r.success = true;
        break;
      }
      if (r.n_soft_resets >= scheme.max_soft_resets ||
          r.n_pulses() >= scheme.max_total_pulses)
        break;
      if (current < w.lo) {
        cell.apply_pulse({scheme.v_set, scheme.pulse_duration});
        ++r.n_set_pulses;
        r.energy += e_set;
      } else {
        cell.apply_pulse({scheme.v_soft_reset, scheme.pulse_duration});
        ++r.n_soft_resets;
        r.energy += e_soft;
      }
    }
  }
  r.final_current = cell.read_current();
  r.latency = scheme.timing().latency(r.n_pulses());
  return r;
}

Programmer::Programmer(const DeviceParams& device, const AdcConfig& adc,
                       const ProgramConfig& config)
    : config_(config), levels_(LevelMap::build(adc, config.verify.window_frac)) {
  device.validate();
  config_.verify.validate();
  if (!(config_.single_pulse_duration > 0.0))
    throw ConfigError("program: single-pulse duration must be > 0");
  if (config_.scheme == Scheme::kSinglePulse)
    single_ = calibrate_single_pulse(device, levels_.targets, config_.single_pulse_duration);
}

ProgramResult Programmer::program(FeFETCell& cell, int level) const {
  if (config_.scheme == Scheme::kSinglePulse)
    return program_single_pulse(cell, level, single_, config_.electrical);
  return program_write_verify(cell, level, config_.verify, levels_, config_.electrical);
}

ProgramTiming Programmer::timing() const {
  if (config_.scheme == Scheme::kSinglePulse)
    return {kHardResetPulse.duration, config_.single_pulse_duration};
  return config_.verify.timing();
}

}  // namespace fefet
