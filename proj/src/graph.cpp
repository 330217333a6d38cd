#include "fefet/graph.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>

#include "fefet/error.hpp"
#include "fefet/rng.hpp"

namespace fefet {

Graph::Graph(std::uint32_t n_nodes, bool directed)
    : n_(n_nodes),
      directed_(directed),
      words_((static_cast<std::uint64_t>(n_nodes) * n_nodes + 63) / 64, 0),
      ids_(n_nodes) {
  std::iota(ids_.begin(), ids_.end(), std::uint64_t{0});
}

bool Graph::has_edge(std::uint32_t u, std::uint32_t v) const {
  return get_bit(bit_index(u, v));
}

void Graph::add_edge(std::uint32_t u, std::uint32_t v) {
  if (u >= n_ || v >= n_) throw DomainError("Graph::add_edge: node out of range");
  set_bit(bit_index(u, v));
  if (!directed_) set_bit(bit_index(v, u));
}

std::uint64_t Graph::n_set_bits() const {
  std::uint64_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

Bits Graph::to_bits() const {
  const std::uint64_t n_bits = static_cast<std::uint64_t>(n_) * n_;
  Bits bits(n_bits);
  for (std::uint64_t i = 0; i < n_bits; ++i) bits[i] = get_bit(i) ? 1 : 0;
  return bits;
}

Graph Graph::from_bits(std::uint32_t n_nodes, std::span<const std::uint8_t> bits) {
  Graph g(n_nodes, true);
  const std::uint64_t n_bits = static_cast<std::uint64_t>(n_nodes) * n_nodes;
  if (bits.size() < n_bits) throw DomainError("Graph::from_bits: bit string too short");
  for (std::uint64_t i = 0; i < n_bits; ++i)
    if (bits[i] & 1U) g.set_bit(i);
  return g;
}

bool Graph::operator==(const Graph& other) const {
  return n_ == other.n_ && words_ == other.words_;
}

Graph load_edge_list(std::istream& in, bool directed) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string a, b, extra;
    fields >> a >> b;
    const bool ok = !b.empty() && !(fields >> extra);
    std::uint64_t u = 0, v = 0;
    auto parse = [](const std::string& s, std::uint64_t& out) {
      if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) return false;
      try {
        out = std::stoull(s);
      } catch (const std::exception&) {
        return false;
      }
      return true;
    };
    if (!ok || !parse(a, u) || !parse(b, v))
      throw InputError("edge list line " + std::to_string(line_no) +
                       ": expected two non-negative integer ids");
    edges.emplace_back(u, v);
  }
  if (edges.empty()) throw InputError("edge list contains no edges");

  std::vector<std::uint64_t> ids;
  ids.reserve(edges.size() * 2);
  for (const auto& [u, v] : edges) {
    ids.push_back(u);
    ids.push_back(v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() > std::numeric_limits<std::uint32_t>::max())
    throw InputError("edge list has too many nodes");

  auto compact = [&ids](std::uint64_t id) {
    return static_cast<std::uint32_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  Graph g(static_cast<std::uint32_t>(ids.size()), directed);
  for (const auto& [u, v] : edges) g.add_edge(compact(u), compact(v));
  g.set_original_ids(std::move(ids));
  return g;
}

Graph erdos_renyi(std::uint32_t n_nodes, double edge_prob, bool directed, std::uint64_t seed) {
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
    throw DomainError("erdos_renyi: edge probability must be in [0, 1]");
  Graph g(n_nodes, directed);
  Rng rng = make_rng(seed, 0, Stream::kGraph);
  for (std::uint32_t u = 0; u < n_nodes; ++u)
    for (std::uint32_t v = directed ? 0 : u + 1; v < n_nodes; ++v)
      if (u != v && uniform01(rng) < edge_prob) g.add_edge(u, v);
  return g;
}

Graph clustered_graph(std::uint32_t n_nodes, std::uint32_t n_clusters, double p_in,
                      double p_out, std::uint64_t seed) {
  if (n_clusters < 1 || n_clusters > std::max<std::uint32_t>(n_nodes, 1))
    throw DomainError("clustered_graph: cluster count must be in [1, n_nodes]");
  if (!(p_in >= 0.0 && p_in <= 1.0 && p_out >= 0.0 && p_out <= 1.0))
    throw DomainError("clustered_graph: probabilities must be in [0, 1]");
  Graph g(n_nodes, false);
  Rng rng = make_rng(seed, 1, Stream::kGraph);
  auto cluster = [&](std::uint32_t u) {
    return static_cast<std::uint64_t>(u) * n_clusters / n_nodes;
  };
  for (std::uint32_t u = 0; u < n_nodes; ++u)
    for (std::uint32_t v = u + 1; v < n_nodes; ++v)
      if (uniform01(rng) < (cluster(u) == cluster(v) ? p_in : p_out)) g.add_edge(u, v);
  return g;
}

std::vector<std::uint32_t> bfs_distances(const Graph& g, std::uint32_t source) {
  const std::uint32_t n = g.n_nodes();
  if (source >= n) throw DomainError("bfs_distances: source out of range");
  std::vector<std::uint32_t> dist(n, kUnreachable);
  std::vector<std::uint32_t> frontier{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const std::uint32_t u = frontier[head];
    for (std::uint32_t v = 0; v < n; ++v) {
      if (dist[v] == kUnreachable && g.has_edge(u, v)) {
        dist[v] = dist[u] + 1;
        frontier.push_back(v);
      }
    }
  }
  return dist;
}

double query_accuracy(const Graph& golden, const Graph& faulty, std::uint32_t source) {
  if (golden.n_nodes() != faulty.n_nodes())
    throw DomainError("query_accuracy: graphs differ in node count");
  const auto a = bfs_distances(golden, source);
  const auto b = bfs_distances(faulty, source);
  std::size_t match = 0;
  for (std::size_t i = 0; i < a.size(); ++i) match += a[i] == b[i];
  return static_cast<double>(match) / static_cast<double>(a.size());
}

std::vector<std::uint32_t> sample_sources(std::uint32_t n_nodes, std::uint32_t n_queries,
                                          std::uint64_t seed) {
  std::vector<std::uint32_t> all(n_nodes);
  std::iota(all.begin(), all.end(), 0U);
  if (n_queries >= n_nodes) return all;
  // Partial Fisher-Yates with our own uniform draw: std::sample's algorithm
  // is implementation-defined.
  Rng rng = make_rng(seed, 0, Stream::kQuerySources);
  for (std::uint32_t i = 0; i < n_queries; ++i) {
    const auto span = static_cast<double>(n_nodes - i);
    auto j = i + static_cast<std::uint32_t>(uniform01(rng) * span);
    std::swap(all[i], all[j]);
  }
  all.resize(n_queries);
  return all;
}

namespace {

void check_pair(const Graph& golden, const Graph& faulty, std::uint32_t n_queries) {
  if (golden.n_nodes() != faulty.n_nodes())
    throw DomainError("graph_query_score: graphs differ in node count");
  if (golden.n_nodes() == 0 || n_queries == 0)
    throw DomainError("graph_query_score: need at least one node and one query");
}

double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace

double graph_query_score_serial(const Graph& golden, const Graph& faulty,
                                std::uint32_t n_queries, std::uint64_t seed) {
  check_pair(golden, faulty, n_queries);
  const auto sources = sample_sources(golden.n_nodes(), n_queries, seed);
  std::vector<double> acc(sources.size());
  for (std::size_t q = 0; q < sources.size(); ++q)
    acc[q] = query_accuracy(golden, faulty, sources[q]);
  return mean(acc);
}

double graph_query_score(const Graph& golden, const Graph& faulty, std::uint32_t n_queries,
                         std::uint64_t seed) {
  check_pair(golden, faulty, n_queries);
  const auto sources = sample_sources(golden.n_nodes(), n_queries, seed);
  std::vector<double> acc(sources.size());
  const auto n = static_cast<std::int64_t>(sources.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t q = 0; q < n; ++q) acc[q] = query_accuracy(golden, faulty, sources[q]);
  return mean(acc);
}

}  // namespace fefet
