#include "fefet/array.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <tuple>

#include "fefet/error.hpp"

namespace fefet {

namespace {

int ceil_log2(std::uint64_t x) {
  return x <= 1 ? 0 : static_cast<int>(std::bit_width(x - 1));
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

constexpr double kBytesPerMb = 1024.0 * 1024.0;

}  // namespace

WriteProfile WriteProfile::from(const PopulationStats& stats) {
  return {stats.timing, stats.mean_pulses, stats.mean_energy};
}

void ArrayConfig::validate() const {
  if (word_width < 1) throw ConfigError("array: word_width must be >= 1");
  if (capacity_bits == 0 || capacity_bits % static_cast<std::uint64_t>(word_width) != 0)
    throw ConfigError("array: capacity must be a positive multiple of the word width");
  if (bits_per_cell < 1 || bits_per_cell > 3)
    throw ConfigError("array: bits_per_cell must be 1, 2 or 3");
  if (n_domains < 1) throw ConfigError("array: n_domains must be >= 1");
  if (!(periph.layout_factor > 0.0)) throw ConfigError("array: layout_factor must be > 0");
}

std::string_view opt_target_name(OptTarget target) {
  switch (target) {
    case OptTarget::kReadLatency: return "read_latency";
    case OptTarget::kReadEnergy: return "read_energy";
    case OptTarget::kReadEdp: return "read_edp";
    case OptTarget::kArea: return "area";
  }
  return "read_edp";
}

OptTarget parse_opt_target(std::string_view name) {
  for (OptTarget t : {OptTarget::kReadLatency, OptTarget::kReadEnergy, OptTarget::kReadEdp,
                      OptTarget::kArea})
    if (opt_target_name(t) == name) return t;
  throw ConfigError("unknown optimization target '" + std::string(name) +
                    "' (expected read_latency|read_energy|read_edp|area)");
}

double cell_geometry(int n_domains, double layout_factor) {
  if (n_domains < 1) throw DomainError("cell_geometry: n_domains must be >= 1");
  return n_domains * kDomainArea * 1e12 * layout_factor;
}

ArrayConfig make_array_config(const MemoryConfig& memory, const PopulationStats& stats,
                              std::uint64_t capacity_bits, int word_width) {
  ArrayConfig cfg;
  cfg.capacity_bits = capacity_bits;
  cfg.word_width = word_width;
  cfg.bits_per_cell = memory.bits_per_cell();
  cfg.n_domains = memory.device.n_domains;
  cfg.adc = memory.adc;
  cfg.electrical = memory.program.electrical;
  cfg.write = WriteProfile::from(stats);
  return cfg;
}

ArrayMetrics evaluate_array(const ArrayConfig& cfg, const Organization& org) {
  cfg.validate();
  const PeripheralConstants& k = cfg.periph;
  const auto bpc = static_cast<std::uint64_t>(cfg.bits_per_cell);
  const std::uint64_t cells_per_word = ceil_div(static_cast<std::uint64_t>(cfg.word_width), bpc);
  const std::uint64_t total_cells = ceil_div(cfg.capacity_bits, bpc);
  if (org.subarray_rows < 1 || org.subarray_cols < 1 || org.n_banks < 1)
    throw InfeasibleError("array: organization dimensions must be positive");
  const auto rows = static_cast<std::uint64_t>(org.subarray_rows);
  const auto cols = static_cast<std::uint64_t>(org.subarray_cols);
  if (cols < cells_per_word)
    throw InfeasibleError("array: subarray narrower than one word");
  if (rows * cols > total_cells)
    throw InfeasibleError("array: subarray larger than the capacity");
  const std::uint64_t n_sub = ceil_div(total_cells, rows * cols);
  const auto n_banks = static_cast<std::uint64_t>(org.n_banks);
  if (n_banks > n_sub) throw InfeasibleError("array: more banks than subarrays");
  const std::uint64_t sub_per_bank = ceil_div(n_sub, n_banks);

  const double a_cell = cell_geometry(cfg.n_domains, k.layout_factor);  // um^2
  const double pitch = std::sqrt(a_cell);                                // um
  const double c_gate = cfg.electrical.gate_capacitance(cfg.n_domains);
  const double c_drain = k.drain_cap_factor * c_gate;
  const int n_levels = 1 << cfg.bits_per_cell;
  const std::vector<double> thresholds = nominal_thresholds(cfg.adc);
  const std::vector<double> targets = target_levels(cfg.adc);
  double mean_target = 0.0;
  for (double t : targets) mean_target += t / static_cast<double>(targets.size());

  // Area, um^2.
  const double sub_periph =
      static_cast<double>(rows) * k.row_decoder_area_per_row +
      static_cast<double>(cells_per_word) *
          ((n_levels - 1) * k.comparator_area + cfg.bits_per_cell * k.encoder_area_per_bit +
           k.write_driver_area) +
      static_cast<double>(cols) * k.column_mux_area;
  const double block = static_cast<double>(rows * cols) * a_cell + sub_periph;
  const double bank = static_cast<double>(sub_per_bank) * block + k.bank_control_area;
  const double total_um2 = static_cast<double>(n_banks) * bank * (1.0 + k.routing_area_overhead);

  // Read path.
  const double c_wl = static_cast<double>(cols) * (c_gate + k.wire_cap_per_um * pitch);
  const double r_wl = static_cast<double>(cols) * pitch * k.wire_res_per_um;
  const double t_wl = 0.69 * k.wl_driver_resistance * c_wl + 0.38 * r_wl * c_wl;
  const double c_bl = static_cast<double>(rows) * (c_drain + k.wire_cap_per_um * pitch);
  const double r_bl = static_cast<double>(rows) * pitch * k.wire_res_per_um;
  const double i_sense = thresholds.front() * 1e-6;
  const double t_bl = c_bl * k.sense_swing / i_sense + 0.38 * r_bl * c_bl;
  const int address_bits = ceil_log2(rows) + ceil_log2(sub_per_bank) + ceil_log2(n_banks);
  const double t_dec = k.decoder_stage_delay * (address_bits + 2);
  const double t_sa = k.sense_amp_delay + k.decoder_stage_delay * cfg.bits_per_cell;
  // H-tree from the array edge to a subarray: about one array side.
  const double route_mm = std::sqrt(total_um2) * 1e-3;
  const double t_route = k.global_wire_delay_per_mm * route_mm;

  const double e_wl = c_wl * k.v_wordline_read * k.v_wordline_read;
  const double e_bl = static_cast<double>(cells_per_word) *
                      (c_bl * k.v_bitline_read * k.v_bitline_read +
                       mean_target * 1e-6 * k.v_bitline_read * t_bl);
  const double e_sa = static_cast<double>(cells_per_word) * (n_levels - 1) * k.comparator_energy;
  const double e_route = cfg.word_width * k.global_wire_energy_per_mm * route_mm;
  const double e_dec = k.decoder_energy_per_row_bit * address_bits;
  const double e_read = e_wl + e_bl + e_sa + e_route + e_dec;

  // Write path: every programming pulse also swings the selected wordline,
  // shared by the cells of one word. Pulse V^2 sums are recovered from the
  // per-cell gate energy.
  const double v2_sum = cfg.write.mean_cell_energy / (cfg.electrical.eta_drv * c_gate);
  const double e_wl_write = c_wl * v2_sum / static_cast<double>(cells_per_word);
  const double e_set_cell = cfg.write.mean_cell_energy + e_wl_write + k.write_driver_energy;

  ArrayMetrics m;
  m.organization = org;
  m.n_subarrays = n_sub;
  m.area_mm2 = total_um2 * 1e-6;
  m.cell_area_mm2 = static_cast<double>(total_cells) * a_cell * 1e-6;
  m.read_latency_ns = (t_dec + t_wl + t_bl + t_sa + t_route) * 1e9;
  m.read_energy_pj_per_bit = e_read / cfg.word_width * 1e12;
  m.set_latency_us = cfg.write.timing.latency(cfg.write.mean_pulses) * 1e6;
  m.set_energy_pj_per_bit = e_set_cell / cfg.bits_per_cell * 1e12;
  m.density_mb_per_mm2 = static_cast<double>(cfg.capacity_bits) / 8.0 / kBytesPerMb / m.area_mm2;
  return m;
}

ArrayMetrics evaluate_array(const ArrayConfig& cfg) {
  if (!cfg.organization) throw ConfigError("array: evaluate_array needs a fixed organization");
  return evaluate_array(cfg, *cfg.organization);
}

double objective(const ArrayMetrics& m, OptTarget target) {
  switch (target) {
    case OptTarget::kReadLatency: return m.read_latency_ns;
    case OptTarget::kReadEnergy: return m.read_energy_pj_per_bit;
    case OptTarget::kReadEdp: return m.read_edp();
    case OptTarget::kArea: return m.area_mm2;
  }
  return m.read_edp();
}

std::vector<ArrayMetrics> sweep_array(const ArrayConfig& cfg) {
  std::vector<ArrayMetrics> points;
  for (int rows = 128; rows <= 2048; rows *= 2) {
    for (int cols = 128; cols <= 2048; cols *= 2) {
      for (int banks = 1; banks <= (1 << 20); banks *= 2) {
        try {
          points.push_back(evaluate_array(cfg, {rows, cols, banks}));
        } catch (const InfeasibleError&) {
          break;  // larger bank counts are infeasible too
        }
      }
    }
  }
  return points;
}

ArrayMetrics optimize_array(const ArrayConfig& cfg, OptTarget target) {
  const std::vector<ArrayMetrics> points = sweep_array(cfg);
  if (points.empty()) throw InfeasibleError("array: no feasible organization");
  const ArrayMetrics* best = &points.front();
  auto key = [target](const ArrayMetrics& m) {
    return std::make_tuple(objective(m, target), m.area_mm2, m.organization.n_banks);
  };
  for (const ArrayMetrics& m : points)
    if (key(m) < key(*best)) best = &m;
  return *best;
}

}  // namespace fefet
