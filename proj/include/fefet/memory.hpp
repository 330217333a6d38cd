#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fefet/device.hpp"
#include "fefet/programming.hpp"
#include "fefet/sensing.hpp"

namespace fefet {

// Device, sense circuit and programming scheme of one memory configuration.
struct MemoryConfig {
  DeviceParams device;
  AdcConfig adc;
  ProgramConfig program;

  void validate() const;
  int bits_per_cell() const { return adc.bits_per_cell; }
  int n_levels() const { return adc.n_levels(); }
};

// Every device, ADC and programming variance set to zero.
MemoryConfig zero_variance(MemoryConfig cfg);

// `base` with cell size, bits per cell and programming scheme overridden.
MemoryConfig with_point(MemoryConfig base, int n_domains, int bits_per_cell, Scheme scheme);

struct CellJob {
  std::uint64_t cell_index = 0;
  int level = 0;
};

struct CellOutcome {
  int sensed_level = 0;
  ProgramResult result;
};

// A memory configuration bound to a master seed: ADC instances are sampled
// once, and each cell index maps to a fixed device sample and sense circuit.
class MemoryModel {
 public:
  MemoryModel(const MemoryConfig& config, std::uint64_t master_seed);

  /// new_cell -> program -> sense for one cell.
  CellOutcome run(const CellJob& job) const;

  const MemoryConfig& config() const { return config_; }
  const Programmer& programmer() const { return programmer_; }
  const ThresholdSet& thresholds() const { return thresholds_; }
  std::uint64_t seed() const { return seed_; }

 private:
  MemoryConfig config_;
  std::uint64_t seed_;
  Programmer programmer_;
  ThresholdSet thresholds_;
};

/// Reference kernel: jobs processed in order on the calling thread.
void run_cells_serial(const MemoryModel& model, std::span<const CellJob> jobs,
                      std::span<CellOutcome> out);

/// OpenMP kernel. Each job writes only its own output slot, so results are
/// identical to run_cells_serial for any thread count.
void run_cells_parallel(const MemoryModel& model, std::span<const CellJob> jobs,
                        std::span<CellOutcome> out);

std::vector<CellOutcome> run_cells(const MemoryModel& model, std::span<const CellJob> jobs);

void set_thread_count(int n);
int thread_count();

}  // namespace fefet
