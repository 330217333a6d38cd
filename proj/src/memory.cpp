#include "fefet/memory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fefet/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fefet {

void MemoryConfig::validate() const {
  device.validate();
  adc.validate();
  program.verify.validate();
  if (adc.i_low != device.i_low || adc.i_high != device.i_high)
    throw ConfigError("adc current range must match the device i_low/i_high");
}

MemoryConfig zero_variance(MemoryConfig cfg) {
  cfg.device.vc_sigma_ln = 0.0;
  cfg.device.stochastic_switching = false;
  cfg.adc.sigma_rel = 0.0;
  return cfg;
}

MemoryConfig with_point(MemoryConfig base, int n_domains, int bits_per_cell, Scheme scheme) {
  base.device.n_domains = n_domains;
  base.adc.bits_per_cell = bits_per_cell;
  base.program.scheme = scheme;
  return base;
}

MemoryModel::MemoryModel(const MemoryConfig& config, std::uint64_t master_seed)
    : config_(config),
      seed_(master_seed),
      programmer_(config.device, config.adc, config.program),
      thresholds_(make_threshold_set(config.adc, master_seed)) {
  config_.validate();
}

CellOutcome MemoryModel::run(const CellJob& job) const {
  FeFETCell cell(config_.device, seed_, job.cell_index);
  CellOutcome out;
  out.result = programmer_.program(cell, job.level);
  const auto& row =
      thresholds_.sampled[job.cell_index % thresholds_.sampled.size()];
  out.sensed_level = sense(row, out.result.final_current);
  return out;
}

namespace {

// Validated up front: an exception escaping an OpenMP region terminates.
void check_jobs(const MemoryModel& model, std::span<const CellJob> jobs,
                std::span<CellOutcome> out) {
  if (jobs.size() != out.size())
    throw DomainError("run_cells: output span size mismatch");
  const int n_levels = model.config().n_levels();
  for (const CellJob& job : jobs)
    if (job.level < 0 || job.level >= n_levels)
      throw DomainError("run_cells: level " + std::to_string(job.level) + " out of range");
}

}  // namespace

void run_cells_serial(const MemoryModel& model, std::span<const CellJob> jobs,
                      std::span<CellOutcome> out) {
  check_jobs(model, jobs, out);
  for (std::size_t i = 0; i < jobs.size(); ++i) out[i] = model.run(jobs[i]);
}

void run_cells_parallel(const MemoryModel& model, std::span<const CellJob> jobs,
                        std::span<CellOutcome> out) {
  check_jobs(model, jobs, out);
  const auto n = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) out[i] = model.run(jobs[i]);
}

std::vector<CellOutcome> run_cells(const MemoryModel& model, std::span<const CellJob> jobs) {
  std::vector<CellOutcome> out(jobs.size());
  run_cells_parallel(model, jobs, out);
  return out;
}

void set_thread_count(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace fefet
