#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fefet/array.hpp"
#include "fefet/config.hpp"
#include "fefet/error.hpp"
#include "fefet/fault.hpp"
#include "fefet/injection.hpp"
#include "fefet/population.hpp"
#include "fefet/tensor_io.hpp"

namespace fefet {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  int threads = 0;
  // Overrides of config keys.
  std::optional<int> n_domains;
  std::optional<int> bits_per_cell;
  std::optional<std::string> scheme;
  // array
  std::optional<std::string> opt;
  // inject / minsize
  std::string workload = "graph";
  std::string graph_path;
  bool directed = false;
  std::string weights_path;
  std::string save_weights_path;
  std::optional<double> epsilon;
};

ExperimentConfig resolve_config(const Options& o) {
  ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.n_domains) cfg.memory.device.n_domains = *o.n_domains;
  if (o.bits_per_cell) cfg.memory.adc.bits_per_cell = *o.bits_per_cell;
  if (o.scheme) cfg.memory.program.scheme = parse_scheme(*o.scheme);
  if (o.opt) cfg.array.opt = parse_opt_target(*o.opt);
  if (o.epsilon) {
    if (!(*o.epsilon > 0.0)) throw ConfigError("--epsilon must be > 0");
    cfg.sweep.epsilon = *o.epsilon;
  }
  if (o.directed) cfg.workload.directed = true;
  try {
    cfg.memory.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

Json memory_json(const MemoryConfig& m) {
  Json j;
  j["n_domains"] = m.device.n_domains;
  j["bits_per_cell"] = m.bits_per_cell();
  j["scheme"] = scheme_name(m.program.scheme);
  return j;
}

Json histogram_json(const CurrentHistogram& h) {
  Json j;
  j["lo_ua"] = h.lo;
  j["hi_ua"] = h.hi;
  j["n_bins"] = h.n_bins();
  j["spacing"] = "log";
  j["counts"] = h.counts;
  return j;
}

std::string cmd_program_stats(const ExperimentConfig& cfg) {
  const PopulationStats st = population_stats(cfg.memory, cfg.population_cells, cfg.master_seed);
  Json j;
  j["command"] = "program-stats";
  j["seed"] = cfg.master_seed;
  j["memory"] = memory_json(cfg.memory);
  j["n_cells_per_level"] = st.n_cells_per_level;
  j["hard_reset_s"] = st.timing.hard_reset;
  j["pulse_period_s"] = st.timing.pulse_period;
  j["mean_pulses"] = st.mean_pulses;
  j["mean_latency_s"] = st.mean_latency;
  j["mean_energy_j"] = st.mean_energy;
  j["failure_rate"] = st.failure_rate;
  Json levels = Json::array();
  for (const LevelStats& l : st.levels) {
    Json e;
    e["level"] = l.level;
    e["target_ua"] = l.target;
    e["window_ua"] = {l.window.lo, l.window.hi};
    e["n_cells"] = l.n_cells;
    e["mean_current_ua"] = l.mean_current;
    e["sd_current_ua"] = l.sd_current;
    e["min_current_ua"] = l.min_current;
    e["max_current_ua"] = l.max_current;
    e["mean_set_pulses"] = l.mean_set_pulses;
    e["max_set_pulses"] = l.max_set_pulses;
    e["mean_soft_resets"] = l.mean_soft_resets;
    e["max_soft_resets"] = l.max_soft_resets;
    e["mean_pulses"] = l.mean_pulses;
    e["failure_rate"] = l.failure_rate;
    e["mean_latency_s"] = l.mean_latency;
    e["mean_energy_j"] = l.mean_energy;
    e["histogram"] = histogram_json(l.histogram);
    levels.push_back(std::move(e));
  }
  j["levels"] = std::move(levels);
  return j.dump(2) + "\n";
}

std::string cmd_shmoo(const ExperimentConfig& cfg) {
  const auto rows = shmoo(cfg.memory, cfg.sweep.shmoo, cfg.samples_per_level, cfg.master_seed);
  std::ostringstream os;
  write_shmoo_csv(os, rows);
  return os.str();
}

std::string cmd_array(const ExperimentConfig& cfg) {
  const PopulationStats st = population_stats(cfg.memory, cfg.population_cells, cfg.master_seed);
  ArrayConfig ac = make_array_config(cfg.memory, st, cfg.array.capacity_bytes * 8,
                                     cfg.array.word_width);
  ac.periph = cfg.array.periph;
  ac.organization = cfg.array.organization;
  const ArrayMetrics m = ac.organization ? evaluate_array(ac) : optimize_array(ac, cfg.array.opt);

  Json j;
  j["command"] = "array";
  j["seed"] = cfg.master_seed;
  j["memory"] = memory_json(cfg.memory);
  j["capacity_bytes"] = cfg.array.capacity_bytes;
  j["word_width"] = cfg.array.word_width;
  j["opt"] = ac.organization ? "fixed" : std::string(opt_target_name(cfg.array.opt));
  j["organization"] = {{"subarray_rows", m.organization.subarray_rows},
                       {"subarray_cols", m.organization.subarray_cols},
                       {"n_banks", m.organization.n_banks},
                       {"n_subarrays", m.n_subarrays}};
  j["area_mm2"] = m.area_mm2;
  j["cell_area_mm2"] = m.cell_area_mm2;
  j["density_mb_per_mm2"] = m.density_mb_per_mm2;
  j["read_latency_ns"] = m.read_latency_ns;
  j["read_energy_pj_per_bit"] = m.read_energy_pj_per_bit;
  j["read_edp"] = m.read_edp();
  j["set_latency_us"] = m.set_latency_us;
  j["set_energy_pj_per_bit"] = m.set_energy_pj_per_bit;
  j["mean_set_pulses"] = st.mean_pulses;
  return j.dump(2) + "\n";
}

Graph load_graph_file(const std::string& path, bool directed) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file " + path);
  try {
    return load_edge_list(in, directed);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::unique_ptr<GraphWorkload> make_graph_workload(const Options& o, const ExperimentConfig& cfg) {
  const WorkloadSection& w = cfg.workload;
  Graph g = o.graph_path.empty()
                ? erdos_renyi(w.graph_nodes, w.edge_prob, w.directed, w.dataset_seed)
                : load_graph_file(o.graph_path, w.directed);
  return std::make_unique<GraphWorkload>(std::move(g), w.n_queries);
}

std::unique_ptr<ClassifierWorkload> make_classifier_workload(const Options& o,
                                                             const ExperimentConfig& cfg) {
  const WorkloadSection& w = cfg.workload;
  Dataset data = make_blobs(w.blobs, w.dataset_seed);
  Eigen::MatrixXd weights;
  if (!o.weights_path.empty()) {
    const Tensor t = read_tensor(o.weights_path);
    if (t.shape.size() != 2 || t.shape[0] != w.blobs.dim || t.shape[1] != w.blobs.n_classes)
      throw InputError(o.weights_path + ": expected shape [" + std::to_string(w.blobs.dim) + ", " +
                       std::to_string(w.blobs.n_classes) + "]");
    weights.resize(t.shape[0], t.shape[1]);
    for (Eigen::Index r = 0; r < weights.rows(); ++r)
      for (Eigen::Index c = 0; c < weights.cols(); ++c)
        weights(r, c) = t.values[static_cast<std::size_t>(r * weights.cols() + c)];
  } else {
    weights = train_ridge(data, w.ridge_lambda);
  }
  if (!o.save_weights_path.empty()) {
    Tensor t;
    t.shape = {weights.rows(), weights.cols()};
    for (Eigen::Index r = 0; r < weights.rows(); ++r)
      for (Eigen::Index c = 0; c < weights.cols(); ++c)
        t.values.push_back(static_cast<float>(weights(r, c)));
    write_tensor(o.save_weights_path, t);
  }
  return std::make_unique<ClassifierWorkload>(std::move(data), weights);
}

std::unique_ptr<Workload> make_workload(const std::string& kind, const Options& o,
                                        const ExperimentConfig& cfg) {
  if (kind == "graph") return make_graph_workload(o, cfg);
  if (kind == "classifier") return make_classifier_workload(o, cfg);
  throw ConfigError("unknown workload '" + kind + "' (expected graph|classifier)");
}

std::string cmd_inject(const Options& o, const ExperimentConfig& cfg) {
  const auto workload = make_workload(o.workload, o, cfg);
  const InjectionReport r = inject(*workload, cfg.memory, cfg.master_seed);

  Json j;
  j["command"] = "inject";
  j["workload"] = r.workload;
  j["seed"] = cfg.master_seed;
  j["memory"] = memory_json(cfg.memory);
  if (const auto* g = dynamic_cast<const GraphWorkload*>(workload.get())) {
    j["n_nodes"] = g->graph().n_nodes();
    j["n_edges_bits"] = g->graph().n_set_bits();
    j["n_queries"] = std::min(cfg.workload.n_queries, g->graph().n_nodes());
  } else if (const auto* c = dynamic_cast<const ClassifierWorkload*>(workload.get())) {
    j["float_accuracy"] = c->float_accuracy();
    j["scale"] = c->quantized().scale;
    j["zero_point"] = c->quantized().zero_point;
  }
  j["n_bits"] = r.store.n_bits;
  j["n_cells"] = r.store.n_cells;
  j["bit_errors"] = r.store.bit_errors;
  j["bit_error_rate"] = r.store.bit_error_rate();
  j["level_errors"] = r.store.level_errors;
  j["level_error_rate"] = r.store.level_error_rate();
  Json confusion = Json::array();
  for (int a = 0; a < r.store.confusion.n_levels(); ++a) {
    Json row = Json::array();
    for (int b = 0; b < r.store.confusion.n_levels(); ++b) row.push_back(r.store.confusion.count(a, b));
    confusion.push_back(std::move(row));
  }
  j["confusion_counts"] = std::move(confusion);
  j["metric_before"] = r.metric_before;
  j["metric_after"] = r.metric_after;
  j["relative_error"] = r.relative_error;
  return j.dump(2) + "\n";
}

std::string cmd_minsize(const Options& o, const ExperimentConfig& cfg) {
  std::vector<std::string> kinds;
  if (o.workload == "all")
    kinds = {"graph", "classifier"};
  else
    kinds = {o.workload};
  std::vector<MinsizeRow> rows;
  for (const std::string& kind : kinds) {
    const auto workload = make_workload(kind, o, cfg);
    auto part = min_cell_size_sweep(*workload, cfg.memory, cfg.sweep.minsize_domains,
                                    cfg.sweep.epsilon, cfg.replicates, cfg.master_seed);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  std::ostringstream os;
  write_minsize_csv(os, rows);
  return os.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text << std::flush;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write output file " + path);
  f << text;
  if (!f) throw InputError("failed writing output file " + path);
}

int threads_from_env() {
  const char* env = std::getenv("FEFETSIM_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw ConfigError("FEFETSIM_THREADS must be a positive integer");
  return static_cast<int>(n);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"FeFET multi-level-cell memory simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path, "Experiment config (TOML)")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "Master seed (overrides master_seed)");
  app.add_option("--out", o.out_path, "Output file (default: stdout)");
  app.add_option("--threads", o.threads, "Worker threads (default: FEFETSIM_THREADS or all)")
      ->check(CLI::PositiveNumber);
  app.add_option("--domains", o.n_domains, "Override [device] n_domains")->check(CLI::PositiveNumber);
  app.add_option("--bpc", o.bits_per_cell, "Override [adc] bits_per_cell")->check(CLI::Range(1, 3));
  app.add_option("--scheme", o.scheme, "Override [program] scheme (single|verify)");

  auto* stats = app.add_subcommand("program-stats", "Per-level write statistics and histograms (JSON)");
  auto* shmoo_cmd = app.add_subcommand("shmoo", "Max read-fault rate over the sweep grid (CSV)");
  auto* array = app.add_subcommand("array", "Array area/latency/energy (JSON)");
  array->add_option("--opt", o.opt, "read_latency|read_energy|read_edp|area");
  auto* inject_cmd = app.add_subcommand("inject", "Fault injection into a workload (JSON)");
  inject_cmd->add_option("--workload", o.workload, "graph|classifier")
      ->check(CLI::IsMember({"graph", "classifier"}));
  inject_cmd->add_option("--graph", o.graph_path, "SNAP edge list (default: synthetic graph)");
  inject_cmd->add_flag("--directed", o.directed, "Treat the edge list as directed");
  inject_cmd->add_option("--weights", o.weights_path, "Weight tensor manifest (JSON)");
  inject_cmd->add_option("--save-weights", o.save_weights_path, "Write trained weights here");
  auto* minsize = app.add_subcommand("minsize", "Minimum cell size per scheme (CSV)");
  minsize->add_option("--workload", o.workload, "graph|classifier|all")
      ->check(CLI::IsMember({"graph", "classifier", "all"}));
  minsize->add_option("--graph", o.graph_path, "SNAP edge list (default: synthetic graph)");
  minsize->add_flag("--directed", o.directed, "Treat the edge list as directed");
  minsize->add_option("--weights", o.weights_path, "Weight tensor manifest (JSON)");
  minsize->add_option("--epsilon", o.epsilon, "Acceptable relative error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help;
    const int code = app.exit(e, help, help);
    (void)code;
    if (e.get_exit_code() == 0) {
      out << help.str();
      return kExitOk;
    }
    err << help.str();
    return kExitUsage;
  }

  try {
    if ((inject_cmd->parsed() || minsize->parsed()) && !o.seed)
      throw ConfigError("--seed is required for inject and minsize");
    const int threads = o.threads > 0 ? o.threads : threads_from_env();
    if (threads > 0) set_thread_count(threads);
    const ExperimentConfig cfg = resolve_config(o);

    std::string text;
    if (stats->parsed())
      text = cmd_program_stats(cfg);
    else if (shmoo_cmd->parsed())
      text = cmd_shmoo(cfg);
    else if (array->parsed())
      text = cmd_array(cfg);
    else if (inject_cmd->parsed())
      text = cmd_inject(o, cfg);
    else
      text = cmd_minsize(o, cfg);
    emit(text, o.out_path, out);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "invalid parameter: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const CalibrationError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace fefet
