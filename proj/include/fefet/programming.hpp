#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fefet/device.hpp"
#include "fefet/sensing.hpp"

namespace fefet {

enum class Scheme { kSinglePulse, kWriteVerify };

std::string_view scheme_name(Scheme scheme);
Scheme parse_scheme(std::string_view name);

// Gate-stack electrical constants used for per-pulse write energy.
struct CellElectrical {
  double gate_cap_factor = 1.73;  // FeFET gate cap relative to plain CMOS
  double c_ox = 0.02;             // F/m^2
  double eta_drv = 2.0;           // driver inefficiency

  double gate_capacitance(int n_domains) const {
    return gate_cap_factor * c_ox * n_domains * kDomainArea;
  }
  double pulse_energy(int n_domains, double amplitude) const {
    return eta_drv * gate_capacitance(n_domains) * amplitude * amplitude;
  }
};

// Write latency of one cell as a function of the number of programming
// pulses. Shared by per-cell results and the array model.
struct ProgramTiming {
  double hard_reset = kHardResetPulse.duration;
  double pulse_period = 100e-9;

  double latency(double n_pulses) const { return hard_reset + n_pulses * pulse_period; }
};

struct SinglePulseScheme {
  std::vector<double> amplitude_per_level;  // [0] unused: level 0 is the hard-reset state
  double pulse_duration = 500e-9;

  ProgramTiming timing() const { return {kHardResetPulse.duration, pulse_duration}; }
};

struct WriteVerifyScheme {
  double v_set = 2.45;
  double v_soft_reset = -3.0;
  double pulse_duration = 100e-9;
  int max_soft_resets = 10;
  int max_total_pulses = 64;
  double window_frac = 0.4;
  double t_verify = 0.0;

  void validate() const;
  ProgramTiming timing() const {
    return {kHardResetPulse.duration, pulse_duration + t_verify};
  }
};

struct TargetWindow {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double current) const { return current >= lo && current <= hi; }
};

// Nominal thresholds, programming targets and verify windows for one ADC
// configuration. Window j spans window_frac of the distance from L_j to each
// neighbouring nominal threshold (i_high stands in above the top level).
struct LevelMap {
  std::vector<double> thresholds;
  std::vector<double> targets;
  std::vector<TargetWindow> windows;

  static LevelMap build(const AdcConfig& adc, double window_frac);
  int n_levels() const { return static_cast<int>(targets.size()); }
};

struct ProgramResult {
  bool success = false;
  double final_current = 0.0;  // uA
  int n_set_pulses = 0;
  int n_soft_resets = 0;
  double latency = 0.0;  // s
  double energy = 0.0;   // J

  int n_pulses() const { return n_set_pulses + n_soft_resets; }
};

/// Expected switched fraction of a cell whose domains all sit at the median
/// coercive voltage after one pulse from the fully reset state.
double nominal_switched_fraction(const DeviceParams& params, double amplitude,
                                 double duration);

/// Per-level single-pulse amplitudes found by bisection over (0, 6] V.
/// Throws CalibrationError if a level cannot be reached.
SinglePulseScheme calibrate_single_pulse(const DeviceParams& params,
                                         std::span<const double> targets,
                                         double pulse_duration = 500e-9);

class CalibrationError : public std::runtime_error {
 public:
  CalibrationError(int level, const std::string& what)
      : std::runtime_error(what), level_(level) {}
  int level() const { return level_; }

 private:
  int level_;
};

ProgramResult program_single_pulse(FeFETCell& cell, int level,
                                   const SinglePulseScheme& scheme,
                                   const CellElectrical& electrical = {});

ProgramResult program_write_verify(FeFETCell& cell, int level,
                                   const WriteVerifyScheme& scheme,
                                   const LevelMap& levels,
                                   const CellElectrical& electrical = {});

struct ProgramConfig {
  Scheme scheme = Scheme::kWriteVerify;
  WriteVerifyScheme verify;
  double single_pulse_duration = 500e-9;
  CellElectrical electrical;
};

// Calibrated programming engine for one (device, ADC, scheme) combination.
class Programmer {
 public:
  Programmer(const DeviceParams& device, const AdcConfig& adc, const ProgramConfig& config);

  ProgramResult program(FeFETCell& cell, int level) const;

  Scheme scheme() const { return config_.scheme; }
  const ProgramConfig& config() const { return config_; }
  const LevelMap& levels() const { return levels_; }
  const SinglePulseScheme& single_pulse() const { return single_; }
  ProgramTiming timing() const;

 private:
  ProgramConfig config_;
  LevelMap levels_;
  SinglePulseScheme single_;
};

}  // namespace fefet
