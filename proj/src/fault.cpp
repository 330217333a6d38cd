#include "fefet/fault.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "fefet/error.hpp"
#include "fefet/report.hpp"

namespace fefet {

ConfusionMatrix::ConfusionMatrix(int n_levels)
    : n_levels_(n_levels),
      counts_(static_cast<std::size_t>(n_levels) * static_cast<std::size_t>(n_levels), 0) {}

void ConfusionMatrix::tally(int programmed, int sensed) {
  if (programmed < 0 || programmed >= n_levels_ || sensed < 0 || sensed >= n_levels_)
    throw std::out_of_range("ConfusionMatrix::tally: level out of range");
  ++counts_[index(programmed, sensed)];
}

std::uint64_t ConfusionMatrix::row_total(int j) const {
  std::uint64_t total = 0;
  for (int k = 0; k < n_levels_; ++k) total += count(j, k);
  return total;
}

double ConfusionMatrix::p(int j, int k) const {
  const std::uint64_t total = row_total(j);
  if (total == 0) return j == k ? 1.0 : 0.0;
  return static_cast<double>(count(j, k)) / static_cast<double>(total);
}

std::uint64_t ConfusionMatrix::samples_per_level() const {
  return n_levels_ > 0 ? row_total(0) : 0;
}

double ConfusionMatrix::below_diag_mass() const {
  double mass = 0.0;
  for (int j = 0; j < n_levels_; ++j)
    for (int k = 0; k < j; ++k) mass += p(j, k);
  return n_levels_ > 0 ? mass / n_levels_ : 0.0;
}

double ConfusionMatrix::above_diag_mass() const {
  double mass = 0.0;
  for (int j = 0; j < n_levels_; ++j)
    for (int k = j + 1; k < n_levels_; ++k) mass += p(j, k);
  return n_levels_ > 0 ? mass / n_levels_ : 0.0;
}

double ConfusionMatrix::mean_fault_rate() const {
  double sum = 0.0;
  for (int j = 0; j < n_levels_; ++j) sum += 1.0 - p(j, j);
  return n_levels_ > 0 ? sum / n_levels_ : 0.0;
}

ConfusionMatrix confusion_matrix(const MemoryConfig& config, std::uint64_t samples_per_level,
                                 std::uint64_t master_seed) {
  if (samples_per_level < 1)
    throw DomainError("confusion_matrix: samples_per_level must be >= 1");
  const MemoryModel model(config, master_seed);
  const int n_levels = config.n_levels();
  std::vector<CellJob> jobs;
  jobs.reserve(samples_per_level * static_cast<std::uint64_t>(n_levels));
  for (int j = 0; j < n_levels; ++j)
    for (std::uint64_t i = 0; i < samples_per_level; ++i)
      jobs.push_back({static_cast<std::uint64_t>(j) * samples_per_level + i, j});
  const std::vector<CellOutcome> out = run_cells(model, jobs);

  ConfusionMatrix m(n_levels);
  for (std::size_t i = 0; i < jobs.size(); ++i) m.tally(jobs[i].level, out[i].sensed_level);
  return m;
}

double max_fault_rate(const ConfusionMatrix& m) {
  double worst = 0.0;
  for (int j = 0; j < m.n_levels(); ++j) worst = std::max(worst, 1.0 - m.p(j, j));
  return worst;
}

std::vector<ShmooRow> shmoo(const MemoryConfig& base, const ShmooGrid& grid,
                            std::uint64_t samples_per_level, std::uint64_t master_seed) {
  if (grid.domains.empty() || grid.bits.empty() || grid.schemes.empty())
    throw DomainError("shmoo: grids must be non-empty");
  std::vector<ShmooRow> rows;
  for (int n_domains : grid.domains) {
    for (int bits : grid.bits) {
      for (Scheme scheme : grid.schemes) {
        const MemoryConfig cfg = with_point(base, n_domains, bits, scheme);
        const ConfusionMatrix m = confusion_matrix(cfg, samples_per_level, master_seed);
        rows.push_back({n_domains, bits, scheme, max_fault_rate(m), m.mean_fault_rate(),
                        m.below_diag_mass(), m.above_diag_mass(), samples_per_level,
                        master_seed});
      }
    }
  }
  return rows;
}

void write_shmoo_csv(std::ostream& os, std::span<const ShmooRow> rows) {
  os << kShmooCsvHeader << '\n';
  for (const ShmooRow& r : rows) {
    os << r.n_domains << ',' << r.bits_per_cell << ',' << scheme_name(r.scheme) << ','
       << format_real(r.max_fault_rate) << ',' << format_real(r.mean_fault_rate) << ','
       << format_real(r.below_diag_mass) << ',' << format_real(r.above_diag_mass) << ','
       << r.samples << ',' << r.seed << '\n';
  }
}

}  // namespace fefet
