#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gmc/ingest.hpp"

namespace gmc {

inline constexpr double kDefaultAlpha = 0.85;

/// Matrix-free Google matrix G = alpha*S + (1-alpha)/N * E.
///
/// Only the link part of S is stored, as a row-compressed matrix over
/// destinations so that G*v is a gather per row. Dangling columns (uniform
/// 1/N) and teleportation are applied analytically in apply().
class StochasticOperator {
 public:
  StochasticOperator(const SliceGraph& g, double alpha);

  double alpha() const { return alpha_; }
  std::size_t size() const { return n_; }
  std::size_t link_count() const { return sources_.size(); }

  bool is_dangling(NodeIndex j) const { return dangling_[j] != 0; }
  std::vector<NodeIndex> dangling_nodes() const;

  /// out = G * v. Rows are computed independently, so the result does not
  /// depend on `threads`.
  void apply(std::span<const double> v, std::span<double> out, int threads = 1) const;

  /// out = G^T * u.
  void apply_transpose(std::span<const double> u, std::span<double> out) const;

  /// Column sums of the stored link part of S (0 for dangling columns).
  std::vector<double> link_column_sums() const;

 private:
  double alpha_;
  std::size_t n_;
  std::vector<std::uint8_t> dangling_;
  std::vector<std::uint64_t> row_offsets_;  // by destination i
  std::vector<NodeIndex> sources_;          // column j of each stored S_ij
  std::vector<double> values_;              // S_ij = w_ij / sum_k w_kj
};

/// Throws std::invalid_argument for an empty graph or alpha outside (0,1).
StochasticOperator build_operator(const SliceGraph& g, double alpha = kDefaultAlpha);

/// Allocating form of StochasticOperator::apply; throws on size mismatch.
std::vector<double> apply(const StochasticOperator& op, std::span<const double> v, int threads = 1);

struct PowerOptions {
  double tol = 1e-12;  // L1 change between successive iterates
  int max_iter = 1000;
  int threads = 1;
};

struct RankResult {
  std::vector<double> probs;
  std::vector<NodeIndex> index;  // index[0] is the K=1 node
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Stationary vector of G by power iteration from the uniform vector.
/// Non-convergence is reported through RankResult::converged.
RankResult pagerank(const StochasticOperator& op, const PowerOptions& opts = {});

/// PageRank of the operator built on the inverted graph.
RankResult cheirank(const StochasticOperator& inverted_op, const PowerOptions& opts = {});

/// Decreasing-probability order, ties broken by ascending node index.
std::vector<NodeIndex> rank_indices(std::span<const double> probs);

/// 1-based rank of every node: positions[index[k]] = k + 1.
std::vector<std::uint32_t> rank_positions(std::span<const NodeIndex> index);

}  // namespace gmc
