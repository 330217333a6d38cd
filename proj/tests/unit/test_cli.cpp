#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"

using namespace fefet;
using Json = nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fefetsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch() {
  static const auto dir = [] {
    const auto d = std::filesystem::temp_directory_path() / "fefet_cli_test";
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = scratch() / name;
  std::ofstream(path) << text;
  return path.string();
}

const std::string kZeroVariance =
    "[device]\nvc_sigma_ln = 0.0\nstochastic_switching = false\n[adc]\nsigma_rel = 0.0\n";

const std::string kFixture = std::string(FEFET_FIXTURE_DIR) + "/path4.txt";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"array", "--opt", "speed"}).code == 1);
  CHECK(run({"--bpc", "4", "array"}).code == 1);
  CHECK(run({"--config", "/nonexistent.toml", "array"}).code == 1);
  const Run no_seed = run({"inject", "--workload", "graph"});
  CHECK(no_seed.code == 1);
  CHECK(no_seed.err.find("--seed") != std::string::npos);
  const std::string bad = write_file("bad.toml", "[device]\nn_domain = 5\n");
  const Run r = run({"--config", bad, "array"});
  CHECK(r.code == 1);
  CHECK(r.err.find("bad.toml:2") != std::string::npos);
}

TEST_CASE("input errors exit 2") {
  const std::string broken = write_file("broken.txt", "# ok\n1 2\n3 four\n");
  const Run r = run({"--seed", "1", "inject", "--graph", broken});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);
  CHECK(run({"--seed", "1", "inject", "--graph", "/nonexistent/g.txt"}).code == 2);
  CHECK(run({"--seed", "1", "inject", "--workload", "classifier", "--weights",
             "/nonexistent/w.json"})
            .code == 2);
}

TEST_CASE("infeasible requests exit 3") {
  const std::string narrow = write_file("narrow.toml", "[array]\nsubarray_rows = 512\nsubarray_cols = 16\n");
  CHECK(run({"--config", narrow, "array"}).code == 3);
  const std::string weak =
      write_file("weak.toml", "population_cells = 10\n[program]\nscheme = \"single\"\nsingle_pulse_ns = 0.001\n");
  const Run r = run({"--config", weak, "program-stats"});
  CHECK(r.code == 3);
  CHECK(r.err.find("level") != std::string::npos);
}

TEST_CASE("inject on the 4-node fixture") {
  const std::string cfg = write_file("zero.toml", kZeroVariance);
  const Run r = run({"--config", cfg, "--seed", "5", "inject", "--graph", kFixture, "--directed"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["workload"] == "graph");
  CHECK(j["n_nodes"] == 4);
  CHECK(j["n_edges_bits"] == 4);
  CHECK(j["n_queries"] == 4);
  CHECK(j["n_bits"] == 16);
  CHECK(j["n_cells"] == 8);
  CHECK(j["bit_errors"] == 0);
  CHECK(j["level_errors"] == 0);
  // Row-major bits 0101 0010 0001 0000 pack into levels 1,1,0,2,0,1,0,0.
  CHECK(j["confusion_counts"] ==
        Json::parse("[[4,0,0,0],[0,3,0,0],[0,0,1,0],[0,0,0,0]]"));
  CHECK(j["metric_before"] == 1.0);
  CHECK(j["metric_after"] == 1.0);
  CHECK(j["relative_error"] == 0.0);

  const Run undirected = run({"--config", cfg, "--seed", "5", "inject", "--graph", kFixture});
  REQUIRE(undirected.code == 0);
  CHECK(Json::parse(undirected.out)["n_edges_bits"] == 8);
}

TEST_CASE("inject output is reproducible") {
  const std::vector<std::string> args{"--seed", "9", "--domains", "30", "inject"};
  const Run a = run(args);
  REQUIRE(a.code == 0);
  CHECK(run(args).out == a.out);
  std::vector<std::string> one = args, three = args;
  one.insert(one.begin(), {"--threads", "1"});
  three.insert(three.begin(), {"--threads", "3"});
  CHECK(run(one).out == a.out);
  CHECK(run(three).out == a.out);
  CHECK(run({"--seed", "10", "--domains", "30", "inject"}).out != a.out);
}

TEST_CASE("classifier weights roundtrip through a manifest") {
  const std::string cfg = write_file("small.toml", "[workload]\nn_train = 300\nn_test = 300\n");
  const std::string manifest = (scratch() / "weights.json").string();
  const Run saved = run({"--config", cfg, "--seed", "2", "inject", "--workload", "classifier",
                         "--save-weights", manifest});
  REQUIRE(saved.code == 0);
  const Run loaded = run({"--config", cfg, "--seed", "2", "inject", "--workload", "classifier",
                          "--weights", manifest});
  REQUIRE(loaded.code == 0);
  const Json a = Json::parse(saved.out), b = Json::parse(loaded.out);
  CHECK(a["metric_before"] == b["metric_before"]);
  CHECK(a["metric_after"] == b["metric_after"]);
  CHECK(a["bit_errors"] == b["bit_errors"]);

  const std::string wrong = write_file("wrong.json", R"({"dtype":"f32","shape":[3,3],"data":"weights.f32"})");
  CHECK(run({"--config", cfg, "--seed", "2", "inject", "--workload", "classifier", "--weights",
             wrong})
            .code == 2);
}

TEST_CASE("program-stats") {
  const std::string cfg = write_file("stats.toml", "population_cells = 200\n");
  const Run r = run({"--config", cfg, "program-stats"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["levels"].size() == 4);
  CHECK(j["levels"][0]["histogram"]["n_bins"] == 64);
  CHECK(run({"--config", cfg, "program-stats"}).out == r.out);
  CHECK(Json::parse(run({"--config", cfg, "--bpc", "3", "program-stats"}).out)["levels"].size() == 8);

  const std::string zero = write_file("zstats.toml", "population_cells = 200\n" + kZeroVariance);
  const Json z = Json::parse(run({"--config", zero, "program-stats"}).out);
  for (const auto& level : z["levels"]) {
    int occupied = 0;
    for (const auto& c : level["histogram"]["counts"]) occupied += c.get<int>() > 0;
    CHECK(occupied == 1);
  }
}

TEST_CASE("shmoo") {
  const std::string cfg = write_file("shmoo.toml", "samples_per_level = 5\n");
  const Run r = run({"--config", cfg, "shmoo"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "n_domains,bpc,scheme,max_fault,mean_fault,below_mass,above_mass,samples,seed");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 9 * 3 * 2);
  CHECK(run({"--config", cfg, "shmoo"}).out == r.out);

  const std::string out = (scratch() / "shmoo.csv").string();
  REQUIRE(run({"--config", cfg, "--out", out, "shmoo"}).code == 0);
  std::ifstream f(out, std::ios::binary);
  CHECK(std::string(std::istreambuf_iterator<char>(f), {}) == r.out);
}

TEST_CASE("array") {
  const std::string cfg = write_file("array.toml", "population_cells = 300\n");
  const Run edp = run({"--config", cfg, "array"});
  REQUIRE(edp.code == 0);
  const Json e = Json::parse(edp.out);
  CHECK(e["density_mb_per_mm2"].get<double>() > 8.0);
  CHECK(e["read_latency_ns"].get<double>() < 2.0);
  const Json a = Json::parse(run({"--config", cfg, "array", "--opt", "area"}).out);
  CHECK(a["area_mm2"].get<double>() <= e["area_mm2"].get<double>());
  CHECK(a["opt"] == "area");
}

TEST_CASE("minsize") {
  const std::string cfg = write_file(
      "minsize.toml",
      "replicates = 1\n[workload]\ngraph_nodes = 32\nn_queries = 4\n[sweep]\nminsize_domains = [100, 30]\n");
  const Run loose = run({"--config", cfg, "--seed", "1", "minsize", "--epsilon", "1.0"});
  REQUIRE(loose.code == 0);
  CHECK(loose.out ==
        "bpc,scheme,workload,min_domains\n1,single,graph,30\n1,verify,graph,30\n2,verify,graph,30\n"
        "3,verify,graph,30\n");
  const std::string tiny = write_file(
      "tiny.toml",
      "replicates = 1\n[workload]\ngraph_nodes = 32\nn_queries = 4\n[sweep]\nminsize_domains = [4]\n");
  const Run none = run({"--config", tiny, "--seed", "1", "minsize", "--epsilon", "1e-9"});
  REQUIRE(none.code == 0);
  CHECK(none.out.find("1,single,graph,none") != std::string::npos);
  CHECK(run({"--config", cfg, "--seed", "1", "minsize", "--epsilon", "0"}).code == 1);
}

}
