#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "fefet/population.hpp"
#include "fefet/programming.hpp"
#include "fefet/sensing.hpp"

namespace fefet {

// Analytical AND-array model: lumped/distributed RC delays, switched
// capacitance energies and per-block areas. The constants are free
// parameters of the model, not extracted from circuit simulation.
struct PeripheralConstants {
  double layout_factor = 1.5;             // cell footprint / ferroelectric area
  double wire_res_per_um = 2.0;           // ohm/um, local wires
  double wire_cap_per_um = 0.2e-15;       // F/um
  double drain_cap_factor = 0.25;         // bitline junction cap / gate cap
  double v_wordline_read = 1.0;           // V
  double v_bitline_read = 0.2;            // V
  double sense_swing = 0.05;              // V developed before sensing
  double wl_driver_resistance = 500.0;    // ohm
  double decoder_stage_delay = 20e-12;    // s per logic stage
  double decoder_energy_per_row_bit = 2e-15;  // J per address bit per access
  double sense_amp_delay = 0.4e-9;        // s
  double comparator_energy = 60e-15;      // J per comparator per read
  double global_wire_delay_per_mm = 0.12e-9;   // s/mm, repeated wire
  double global_wire_energy_per_mm = 0.15e-12; // J per bit per mm
  double row_decoder_area_per_row = 0.05;  // um^2
  double comparator_area = 0.5;           // um^2
  double encoder_area_per_bit = 0.25;     // um^2
  double write_driver_area = 0.5;         // um^2 per sensed column
  double column_mux_area = 0.02;          // um^2 per column
  double bank_control_area = 50.0;        // um^2 per bank
  double routing_area_overhead = 0.02;    // fraction of block area
  double write_driver_energy = 20e-15;    // J per cell per write
};

// Average write cost of one cell for uniformly distributed data, taken from
// a programming population run.
struct WriteProfile {
  ProgramTiming timing;
  double mean_pulses = 0.0;
  double mean_cell_energy = 0.0;  // J

  static WriteProfile from(const PopulationStats& stats);
};

struct Organization {
  int subarray_rows = 512;
  int subarray_cols = 512;
  int n_banks = 1;

  bool operator==(const Organization&) const = default;
};

struct ArrayConfig {
  std::uint64_t capacity_bits = 4ULL * 8 * 1024 * 1024;
  int word_width = 64;
  int bits_per_cell = 2;
  int n_domains = 150;
  AdcConfig adc;
  CellElectrical electrical;
  WriteProfile write;
  PeripheralConstants periph;
  std::optional<Organization> organization;  // empty: sweep

  void validate() const;
};

struct ArrayMetrics {
  Organization organization;
  double area_mm2 = 0.0;
  double cell_area_mm2 = 0.0;
  double read_latency_ns = 0.0;
  double read_energy_pj_per_bit = 0.0;
  double set_latency_us = 0.0;
  double set_energy_pj_per_bit = 0.0;
  double density_mb_per_mm2 = 0.0;
  std::uint64_t n_subarrays = 0;

  double read_edp() const { return read_latency_ns * read_energy_pj_per_bit; }
};

enum class OptTarget { kReadLatency, kReadEnergy, kReadEdp, kArea };

std::string_view opt_target_name(OptTarget target);
OptTarget parse_opt_target(std::string_view name);

/// Footprint of one cell in um^2.
double cell_geometry(int n_domains, double layout_factor = 1.5);

/// Array configuration for a memory setup and its programming statistics.
ArrayConfig make_array_config(const MemoryConfig& memory, const PopulationStats& stats,
                              std::uint64_t capacity_bits, int word_width = 64);

/// Throws InfeasibleError when the organization cannot hold the capacity.
ArrayMetrics evaluate_array(const ArrayConfig& cfg, const Organization& org);
ArrayMetrics evaluate_array(const ArrayConfig& cfg);

double objective(const ArrayMetrics& m, OptTarget target);

/// Every feasible organization with rows, cols in {128..2048} (powers of two)
/// and power-of-two bank counts up to the subarray count.
std::vector<ArrayMetrics> sweep_array(const ArrayConfig& cfg);

/// Minimizes the target over sweep_array; ties go to smaller area, then
/// fewer banks.
ArrayMetrics optimize_array(const ArrayConfig& cfg, OptTarget target);

}  // namespace fefet
