#pragma once

#include <cstdint>
#include <istream>
#include <limits>
#include <span>
#include <vector>

#include "fefet/encoding.hpp"

namespace fefet {

// Dense adjacency bit matrix, row-major: bit (u, v) is the edge u -> v.
// Undirected graphs are stored symmetric.
class Graph {
 public:
  Graph() = default;
  Graph(std::uint32_t n_nodes, bool directed);

  std::uint32_t n_nodes() const { return n_; }
  bool directed() const { return directed_; }

  bool has_edge(std::uint32_t u, std::uint32_t v) const;
  /// Sets u -> v, and v -> u for undirected graphs.
  void add_edge(std::uint32_t u, std::uint32_t v);
  std::uint64_t n_set_bits() const;

  /// Row-major bit string of length n^2.
  Bits to_bits() const;
  /// Interprets a row-major bit string as a directed adjacency matrix.
  static Graph from_bits(std::uint32_t n_nodes, std::span<const std::uint8_t> bits);

  /// Original node ids in compacted order (identity for generated graphs).
  const std::vector<std::uint64_t>& original_ids() const { return ids_; }
  void set_original_ids(std::vector<std::uint64_t> ids) { ids_ = std::move(ids); }

  /// Dense storage size in bytes, n^2 / 8.
  static double dense_bytes(std::uint64_t n_nodes) {
    return static_cast<double>(n_nodes) * static_cast<double>(n_nodes) / 8.0;
  }

  bool operator==(const Graph& other) const;

 private:
  std::uint64_t bit_index(std::uint32_t u, std::uint32_t v) const {
    return static_cast<std::uint64_t>(u) * n_ + v;
  }
  void set_bit(std::uint64_t i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
  bool get_bit(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }

  std::uint32_t n_ = 0;
  bool directed_ = true;
  std::vector<std::uint64_t> words_;
  std::vector<std::uint64_t> ids_;
};

/// SNAP edge list: '#' comment lines and "src dst" integer pairs. Ids are
/// compacted to 0..N-1 in ascending order of the original id.
Graph load_edge_list(std::istream& in, bool directed);

Graph erdos_renyi(std::uint32_t n_nodes, double edge_prob, bool directed, std::uint64_t seed);

/// Stochastic block model with equal-size clusters.
Graph clustered_graph(std::uint32_t n_nodes, std::uint32_t n_clusters, double p_in,
                      double p_out, std::uint64_t seed);

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// Hop distances from `source` over directed edges.
std::vector<std::uint32_t> bfs_distances(const Graph& g, std::uint32_t source);

/// Fraction of nodes whose distance from `source` agrees between the graphs.
double query_accuracy(const Graph& golden, const Graph& faulty, std::uint32_t source);

/// Sources sampled without replacement (all nodes if n_queries >= n).
std::vector<std::uint32_t> sample_sources(std::uint32_t n_nodes, std::uint32_t n_queries,
                                          std::uint64_t seed);

/// Mean query_accuracy over sampled sources. Parallel over queries.
double graph_query_score(const Graph& golden, const Graph& faulty, std::uint32_t n_queries,
                         std::uint64_t seed);
double graph_query_score_serial(const Graph& golden, const Graph& faulty,
                                std::uint32_t n_queries, std::uint64_t seed);

}  // namespace fefet
