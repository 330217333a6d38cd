#include "fefet/injection.hpp"

#include <algorithm>
#include <ostream>

#include "fefet/error.hpp"
#include "fefet/rng.hpp"

namespace fefet {

namespace {

constexpr std::size_t kChunkCells = std::size_t{1} << 16;

double rate(std::uint64_t errors, std::uint64_t total) {
  return total == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(total);
}

}  // namespace

double StoreReport::bit_error_rate() const { return rate(bit_errors, n_bits); }
double StoreReport::level_error_rate() const { return rate(level_errors, n_cells); }

StoreResult store_and_readback(std::span<const std::uint8_t> bits, const MemoryConfig& config,
                               std::uint64_t master_seed) {
  const MemoryModel model(config, master_seed);
  const int bpc = config.bits_per_cell();
  const Levels levels = encode_levels(bits, bpc);

  StoreResult res;
  res.report.n_bits = bits.size();
  res.report.n_cells = levels.size();
  res.report.confusion = ConfusionMatrix(config.n_levels());
  Levels sensed(levels.size());

  // Chunked so the per-cell outcomes never need to exist all at once.
  std::vector<CellJob> jobs;
  std::vector<CellOutcome> out;
  for (std::size_t begin = 0; begin < levels.size(); begin += kChunkCells) {
    const std::size_t end = std::min(levels.size(), begin + kChunkCells);
    jobs.resize(end - begin);
    out.resize(end - begin);
    for (std::size_t i = begin; i < end; ++i) jobs[i - begin] = {i, levels[i]};
    run_cells_parallel(model, jobs, out);
    for (std::size_t i = begin; i < end; ++i) {
      const int got = out[i - begin].sensed_level;
      sensed[i] = static_cast<std::uint8_t>(got);
      res.report.confusion.tally(levels[i], got);
      res.report.level_errors += got != levels[i];
    }
  }

  res.bits = decode_levels(sensed, bpc);
  res.bits.resize(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) res.report.bit_errors += res.bits[i] != bits[i];
  return res;
}

GraphWorkload::GraphWorkload(Graph golden, std::uint32_t n_queries)
    : golden_(std::move(golden)), n_queries_(n_queries), bits_(golden_.to_bits()) {
  if (golden_.n_nodes() == 0) throw DomainError("GraphWorkload: empty graph");
  if (n_queries_ == 0) throw DomainError("GraphWorkload: n_queries must be >= 1");
}

double GraphWorkload::score(std::span<const std::uint8_t> readback,
                            std::uint64_t master_seed) const {
  const Graph faulty = Graph::from_bits(golden_.n_nodes(), readback);
  return graph_query_score(golden_, faulty, n_queries_, master_seed);
}

namespace {

std::vector<float> to_row_major(const Eigen::MatrixXd& w) {
  std::vector<float> v(static_cast<std::size_t>(w.size()));
  for (Eigen::Index r = 0; r < w.rows(); ++r)
    for (Eigen::Index c = 0; c < w.cols(); ++c)
      v[static_cast<std::size_t>(r * w.cols() + c)] = static_cast<float>(w(r, c));
  return v;
}

}  // namespace

ClassifierWorkload::ClassifierWorkload(Dataset data, const Eigen::MatrixXd& weights)
    : data_(std::move(data)) {
  if (weights.rows() != data_.train.x.cols() || weights.cols() != data_.n_classes)
    throw DomainError("ClassifierWorkload: weights must be dim x n_classes");
  const std::vector<float> flat = to_row_major(weights);
  q_ = quantize_affine(flat, {weights.rows(), weights.cols()});
  bits_ = bytes_to_bits(q_.codes);
  float_accuracy_ = classifier_accuracy(weights, data_.test);
  baseline_ = accuracy_of(q_);
}

double ClassifierWorkload::accuracy_of(const QuantizedTensor& q) const {
  const std::vector<float> flat = dequantize(q);
  const Eigen::Index rows = q.shape[0], cols = q.shape[1];
  Eigen::MatrixXd w(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = flat[static_cast<std::size_t>(r * cols + c)];
  return classifier_accuracy(w, data_.test);
}

double ClassifierWorkload::score(std::span<const std::uint8_t> readback,
                                 std::uint64_t /*master_seed*/) const {
  QuantizedTensor q = q_;
  q.codes = bits_to_bytes(readback);
  q.codes.resize(q_.codes.size());
  return accuracy_of(q);
}

InjectionReport inject(const Workload& workload, const MemoryConfig& config,
                       std::uint64_t master_seed) {
  StoreResult stored = store_and_readback(workload.payload(), config, master_seed);
  InjectionReport r;
  r.workload = workload.name();
  r.store = std::move(stored.report);
  r.metric_before = workload.baseline();
  if (!(r.metric_before > 0.0))
    throw DomainError("inject: baseline metric must be positive");
  r.metric_after = workload.score(stored.bits, master_seed);
  r.relative_error = 1.0 - r.metric_after / r.metric_before;
  return r;
}

std::uint64_t replicate_seed(std::uint64_t master_seed, int replicate) {
  if (replicate == 0) return master_seed;
  return mix_seed(master_seed, static_cast<std::uint64_t>(replicate), Stream::kReplicate);
}

double mean_relative_error(const Workload& workload, const MemoryConfig& config, int replicates,
                           std::uint64_t master_seed) {
  if (replicates < 1) throw DomainError("mean_relative_error: replicates must be >= 1");
  double sum = 0.0;
  for (int r = 0; r < replicates; ++r)
    sum += inject(workload, config, replicate_seed(master_seed, r)).relative_error;
  return sum / replicates;
}

std::vector<std::pair<Scheme, int>> minsize_rows() {
  return {{Scheme::kSinglePulse, 1},
          {Scheme::kWriteVerify, 1},
          {Scheme::kWriteVerify, 2},
          {Scheme::kWriteVerify, 3}};
}

std::vector<MinsizeRow> min_cell_size_sweep(const Workload& workload, const MemoryConfig& base,
                                            std::vector<int> domain_grid, double epsilon,
                                            int replicates, std::uint64_t master_seed) {
  if (!(epsilon > 0.0)) throw DomainError("min_cell_size_sweep: epsilon must be > 0");
  if (domain_grid.empty()) throw DomainError("min_cell_size_sweep: empty domain grid");
  std::sort(domain_grid.begin(), domain_grid.end());
  domain_grid.erase(std::unique(domain_grid.begin(), domain_grid.end()), domain_grid.end());

  std::vector<MinsizeRow> rows;
  for (const auto& [scheme, bpc] : minsize_rows()) {
    MinsizeRow row;
    row.bits_per_cell = bpc;
    row.scheme = scheme;
    row.workload = workload.name();
    for (int n_domains : domain_grid) {
      const MemoryConfig cfg = with_point(base, n_domains, bpc, scheme);
      const double err = mean_relative_error(workload, cfg, replicates, master_seed);
      row.evaluated.emplace_back(n_domains, err);
      if (err < epsilon) {
        row.min_domains = n_domains;
        break;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_minsize_csv(std::ostream& os, std::span<const MinsizeRow> rows) {
  os << kMinsizeCsvHeader << '\n';
  for (const MinsizeRow& r : rows) {
    os << r.bits_per_cell << ',' << scheme_name(r.scheme) << ',' << r.workload << ',';
    if (r.min_domains)
      os << *r.min_domains;
    else
      os << "none";
    os << '\n';
  }
}

}  // namespace fefet
