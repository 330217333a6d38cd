#include "fefet/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "fefet/error.hpp"

namespace fefet {

namespace {

// ---- parser ----------------------------------------------------------------

class LineParser {
 public:
  LineParser(std::string_view s, const std::string& source, int line)
      : s_(s), source_(source), line_(line) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(source_ + ":" + std::to_string(line_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool at_end_or_comment() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  std::string key() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                s_[pos_] == '_' || s_[pos_] == '-'))
      ++pos_;
    if (pos_ == start) fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  TomlValue value() {
    skip_ws();
    TomlValue out;
    out.line = line_;
    const char c = peek();
    if (c == '"') {
      out.v = string();
    } else if (c == '[') {
      ++pos_;
      TomlArray arr;
      skip_ws();
      while (peek() != ']') {
        arr.push_back(value());
        skip_ws();
        if (peek() == ',') {
          ++pos_;
          skip_ws();
        } else if (peek() != ']') {
          fail("expected ',' or ']' in array");
        }
      }
      ++pos_;
      out.v = std::move(arr);
    } else {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '#' &&
             s_[pos_] != ' ' && s_[pos_] != '\t')
        ++pos_;
      out.v = scalar(s_.substr(start, pos_ - start));
    }
    return out;
  }

 private:
  std::string string() {
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      char c = s_[pos_++];
      if (c == '\\') {
        if (pos_ >= s_.size()) break;
        const char e = s_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      }
      out.push_back(c);
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  std::variant<std::int64_t, double, bool, std::string, TomlArray> scalar(std::string_view tok) {
    if (tok.empty()) fail("missing value");
    if (tok == "true") return true;
    if (tok == "false") return false;
    std::string clean;
    for (char ch : tok)
      if (ch != '_') clean.push_back(ch);
    const char* b = clean.data();
    const char* e = b + clean.size();
    if (*b == '+') ++b;
    if (clean.find_first_of(".eEinf") == std::string::npos) {
      std::int64_t i = 0;
      const auto r = std::from_chars(b, e, i);
      if (r.ec == std::errc() && r.ptr == e) return i;
    } else {
      double d = 0.0;
      const auto r = std::from_chars(b, e, d);
      if (r.ec == std::errc() && r.ptr == e) return d;
    }
    fail("invalid value '" + std::string(tok) + "'");
  }

  std::string_view s_;
  const std::string& source_;
  int line_;
  std::size_t pos_ = 0;
};

}  // namespace

TomlDocument parse_toml(std::string_view text, const std::string& source) {
  TomlDocument doc;
  doc[""];
  std::string section;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;
    ++line_no;

    LineParser p(line, source, line_no);
    if (p.at_end_or_comment()) continue;
    if (p.peek() == '[') {
      p.expect('[');
      section = p.key();
      p.expect(']');
      if (!p.at_end_or_comment()) p.fail("trailing characters after section header");
      if (doc.contains(section) && section != "") p.fail("duplicate section [" + section + "]");
      doc[section];
      continue;
    }
    const std::string key = p.key();
    p.expect('=');
    TomlValue v = p.value();
    if (!p.at_end_or_comment()) p.fail("trailing characters after value");
    auto& table = doc[section];
    if (table.contains(key)) p.fail("duplicate key '" + key + "'");
    table.emplace(key, std::move(v));
  }
  return doc;
}

namespace {

// ---- binding ---------------------------------------------------------------

class Binder {
 public:
  Binder(const std::string& source) : source_(source) {}

  [[noreturn]] void fail(const TomlValue& v, const std::string& key, const std::string& msg) const {
    throw ConfigError(source_ + ":" + std::to_string(v.line) + ": '" + key + "' " + msg);
  }

  double real(const TomlValue& v, const std::string& key) const {
    if (auto* i = std::get_if<std::int64_t>(&v.v)) return static_cast<double>(*i);
    if (auto* d = std::get_if<double>(&v.v)) return *d;
    fail(v, key, "must be a number");
  }

  std::int64_t integer(const TomlValue& v, const std::string& key) const {
    if (auto* i = std::get_if<std::int64_t>(&v.v)) return *i;
    fail(v, key, "must be an integer");
  }

  int small_int(const TomlValue& v, const std::string& key) const {
    const std::int64_t i = integer(v, key);
    if (i < -1'000'000'000 || i > 1'000'000'000) fail(v, key, "out of range");
    return static_cast<int>(i);
  }

  std::uint64_t count(const TomlValue& v, const std::string& key) const {
    const std::int64_t i = integer(v, key);
    if (i < 0) fail(v, key, "must be non-negative");
    return static_cast<std::uint64_t>(i);
  }

  bool boolean(const TomlValue& v, const std::string& key) const {
    if (auto* b = std::get_if<bool>(&v.v)) return *b;
    fail(v, key, "must be true or false");
  }

  std::string string(const TomlValue& v, const std::string& key) const {
    if (auto* s = std::get_if<std::string>(&v.v)) return *s;
    fail(v, key, "must be a string");
  }

  const TomlArray& array(const TomlValue& v, const std::string& key) const {
    if (auto* a = std::get_if<TomlArray>(&v.v)) {
      if (a->empty()) fail(v, key, "must not be empty");
      return *a;
    }
    fail(v, key, "must be an array");
  }

  std::vector<int> int_list(const TomlValue& v, const std::string& key) const {
    std::vector<int> out;
    for (const TomlValue& e : array(v, key)) out.push_back(small_int(e, key));
    return out;
  }

 private:
  const std::string& source_;
};

using Setter = std::function<void(const TomlValue&, const std::string&)>;
using SectionSpec = std::map<std::string, Setter>;

}  // namespace

ExperimentConfig config_from_toml(const TomlDocument& doc, const std::string& source) {
  ExperimentConfig cfg;
  const Binder b(source);
  DeviceParams& dev = cfg.memory.device;
  AdcConfig& adc = cfg.memory.adc;
  ProgramConfig& prog = cfg.memory.program;
  ArraySection& arr = cfg.array;
  PeripheralConstants& k = arr.periph;
  WorkloadSection& wl = cfg.workload;
  SweepSection& sw = cfg.sweep;
  std::optional<int> org_rows, org_cols, org_banks;
  std::optional<double> adc_i_low, adc_i_high;

#define REAL(field) [&](const TomlValue& v, const std::string& key) { field = b.real(v, key); }
#define INT(field) [&](const TomlValue& v, const std::string& key) { field = b.small_int(v, key); }

  std::map<std::string, SectionSpec> spec;
  spec[""] = {
      {"master_seed", [&](auto& v, auto& key) { cfg.master_seed = b.count(v, key); }},
      {"samples_per_level", [&](auto& v, auto& key) { cfg.samples_per_level = b.count(v, key); }},
      {"population_cells", [&](auto& v, auto& key) { cfg.population_cells = b.count(v, key); }},
      {"replicates", INT(cfg.replicates)},
  };
  spec["device"] = {
      {"n_domains", INT(dev.n_domains)},
      {"vc_median", REAL(dev.vc_median)},
      {"vc_sigma_ln", REAL(dev.vc_sigma_ln)},
      {"tau0", REAL(dev.tau0)},
      {"alpha", REAL(dev.alpha)},
      {"beta", REAL(dev.beta)},
      {"i_low", REAL(dev.i_low)},
      {"i_high", REAL(dev.i_high)},
      {"stochastic_switching",
       [&](auto& v, auto& key) { dev.stochastic_switching = b.boolean(v, key); }},
  };
  spec["adc"] = {
      {"bits_per_cell", INT(adc.bits_per_cell)},
      {"sigma_rel", REAL(adc.sigma_rel)},
      {"n_instances", INT(adc.n_instances)},
      {"i_low_ua", [&](auto& v, auto& key) { adc_i_low = b.real(v, key); }},
      {"i_high_ua", [&](auto& v, auto& key) { adc_i_high = b.real(v, key); }},
  };
  spec["program"] = {
      {"scheme",
       [&](auto& v, auto& key) {
         try {
           prog.scheme = parse_scheme(b.string(v, key));
         } catch (const ConfigError& e) {
           b.fail(v, key, e.what());
         }
       }},
      {"v_set", REAL(prog.verify.v_set)},
      {"v_soft_reset", REAL(prog.verify.v_soft_reset)},
      {"pulse_ns",
       [&](auto& v, auto& key) { prog.verify.pulse_duration = b.real(v, key) / 1e9; }},
      {"max_soft_resets", INT(prog.verify.max_soft_resets)},
      {"max_total_pulses", INT(prog.verify.max_total_pulses)},
      {"window_frac", REAL(prog.verify.window_frac)},
      {"t_verify_ns",
       [&](auto& v, auto& key) { prog.verify.t_verify = b.real(v, key) / 1e9; }},
      {"single_pulse_ns",
       [&](auto& v, auto& key) { prog.single_pulse_duration = b.real(v, key) / 1e9; }},
      {"gate_cap_factor", REAL(prog.electrical.gate_cap_factor)},
      {"c_ox", REAL(prog.electrical.c_ox)},
      {"eta_drv", REAL(prog.electrical.eta_drv)},
  };
  spec["array"] = {
      {"capacity_bytes", [&](auto& v, auto& key) { arr.capacity_bytes = b.count(v, key); }},
      {"capacity_mb",
       [&](auto& v, auto& key) {
         const double mb = b.real(v, key);
         if (!(mb > 0.0)) b.fail(v, key, "must be > 0");
         arr.capacity_bytes = static_cast<std::uint64_t>(mb * 1024.0 * 1024.0);
       }},
      {"word_width", INT(arr.word_width)},
      {"opt",
       [&](auto& v, auto& key) {
         try {
           arr.opt = parse_opt_target(b.string(v, key));
         } catch (const ConfigError& e) {
           b.fail(v, key, e.what());
         }
       }},
      {"subarray_rows", [&](auto& v, auto& key) { org_rows = b.small_int(v, key); }},
      {"subarray_cols", [&](auto& v, auto& key) { org_cols = b.small_int(v, key); }},
      {"n_banks", [&](auto& v, auto& key) { org_banks = b.small_int(v, key); }},
      {"layout_factor", REAL(k.layout_factor)},
      {"wire_res_per_um", REAL(k.wire_res_per_um)},
      {"wire_cap_per_um", REAL(k.wire_cap_per_um)},
      {"drain_cap_factor", REAL(k.drain_cap_factor)},
      {"v_wordline_read", REAL(k.v_wordline_read)},
      {"v_bitline_read", REAL(k.v_bitline_read)},
      {"sense_swing", REAL(k.sense_swing)},
      {"wl_driver_resistance", REAL(k.wl_driver_resistance)},
      {"decoder_stage_delay", REAL(k.decoder_stage_delay)},
      {"decoder_energy_per_row_bit", REAL(k.decoder_energy_per_row_bit)},
      {"sense_amp_delay", REAL(k.sense_amp_delay)},
      {"comparator_energy", REAL(k.comparator_energy)},
      {"global_wire_delay_per_mm", REAL(k.global_wire_delay_per_mm)},
      {"global_wire_energy_per_mm", REAL(k.global_wire_energy_per_mm)},
      {"row_decoder_area_per_row", REAL(k.row_decoder_area_per_row)},
      {"comparator_area", REAL(k.comparator_area)},
      {"encoder_area_per_bit", REAL(k.encoder_area_per_bit)},
      {"write_driver_area", REAL(k.write_driver_area)},
      {"column_mux_area", REAL(k.column_mux_area)},
      {"bank_control_area", REAL(k.bank_control_area)},
      {"routing_area_overhead", REAL(k.routing_area_overhead)},
      {"write_driver_energy", REAL(k.write_driver_energy)},
  };
  spec["workload"] = {
      {"n_queries",
       [&](auto& v, auto& key) { wl.n_queries = static_cast<std::uint32_t>(b.count(v, key)); }},
      {"graph_nodes",
       [&](auto& v, auto& key) { wl.graph_nodes = static_cast<std::uint32_t>(b.count(v, key)); }},
      {"edge_prob", REAL(wl.edge_prob)},
      {"directed", [&](auto& v, auto& key) { wl.directed = b.boolean(v, key); }},
      {"n_classes", INT(wl.blobs.n_classes)},
      {"dim", INT(wl.blobs.dim)},
      {"n_train", INT(wl.blobs.n_train)},
      {"n_test", INT(wl.blobs.n_test)},
      {"separation", REAL(wl.blobs.separation)},
      {"ridge_lambda", REAL(wl.ridge_lambda)},
      {"dataset_seed", [&](auto& v, auto& key) { wl.dataset_seed = b.count(v, key); }},
  };
  spec["sweep"] = {
      {"domains", [&](auto& v, auto& key) { sw.shmoo.domains = b.int_list(v, key); }},
      {"bits", [&](auto& v, auto& key) { sw.shmoo.bits = b.int_list(v, key); }},
      {"schemes",
       [&](auto& v, auto& key) {
         sw.shmoo.schemes.clear();
         for (const TomlValue& e : b.array(v, key)) {
           try {
             sw.shmoo.schemes.push_back(parse_scheme(b.string(e, key)));
           } catch (const ConfigError& err) {
             b.fail(e, key, err.what());
           }
         }
       }},
      {"minsize_domains", [&](auto& v, auto& key) { sw.minsize_domains = b.int_list(v, key); }},
      {"epsilon", REAL(sw.epsilon)},
  };
#undef REAL
#undef INT

  for (const auto& [section, table] : doc) {
    auto sec = spec.find(section);
    if (sec == spec.end()) throw ConfigError(source + ": unknown section [" + section + "]");
    for (const auto& [key, value] : table) {
      auto setter = sec->second.find(key);
      if (setter == sec->second.end())
        throw ConfigError(source + ":" + std::to_string(value.line) + ": unknown key '" + key +
                          "'" + (section.empty() ? "" : " in [" + section + "]"));
      setter->second(value, key);
    }
  }

  // The sense range is the device range; [adc] may restate it but not differ.
  if ((adc_i_low && *adc_i_low != dev.i_low) || (adc_i_high && *adc_i_high != dev.i_high))
    throw ConfigError(source + ": [adc] i_low_ua/i_high_ua must equal [device] i_low/i_high");
  adc.i_low = dev.i_low;
  adc.i_high = dev.i_high;
  if (org_rows || org_cols || org_banks) {
    Organization org;
    org.subarray_rows = org_rows.value_or(org.subarray_rows);
    org.subarray_cols = org_cols.value_or(org.subarray_cols);
    org.n_banks = org_banks.value_or(org.n_banks);
    arr.organization = org;
  }

  try {
    cfg.memory.validate();
  } catch (const std::exception& e) {
    throw ConfigError(source + ": " + e.what());
  }
  if (cfg.replicates < 1) throw ConfigError(source + ": replicates must be >= 1");
  if (cfg.samples_per_level < 1) throw ConfigError(source + ": samples_per_level must be >= 1");
  if (cfg.population_cells < 1) throw ConfigError(source + ": population_cells must be >= 1");
  if (!(sw.epsilon > 0.0)) throw ConfigError(source + ": [sweep] epsilon must be > 0");
  for (int d : sw.shmoo.domains)
    if (d < 1) throw ConfigError(source + ": [sweep] domains must be >= 1");
  for (int d : sw.minsize_domains)
    if (d < 1) throw ConfigError(source + ": [sweep] minsize_domains must be >= 1");
  for (int bpc : sw.shmoo.bits)
    if (bpc < 1 || bpc > 3) throw ConfigError(source + ": [sweep] bits must be 1, 2 or 3");
  if (wl.n_queries < 1) throw ConfigError(source + ": [workload] n_queries must be >= 1");
  if (!(wl.ridge_lambda > 0.0)) throw ConfigError(source + ": [workload] ridge_lambda must be > 0");
  return cfg;
}

ExperimentConfig parse_config(std::string_view text, const std::string& source) {
  return config_from_toml(parse_toml(text, source), source);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

}  // namespace fefet
