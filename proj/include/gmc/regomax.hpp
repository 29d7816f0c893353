#pragma once

#include <span>
#include <utility>
#include <vector>

#include "gmc/google.hpp"

namespace gmc {

/// Ordered subset of nodes; its order fixes the row/column order of every
/// reduced matrix.
struct NodeSelection {
  std::vector<NodeIndex> nodes;

  /// Throws std::invalid_argument unless the indices are distinct, inside
  /// [0, n) and at least two.
  void validate(std::size_t n) const;
};

/// First `count` nodes of a ranking (K = 1 first).
NodeSelection top_selection(const RankResult& ranking, std::size_t count);

/// Row-major dense matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  double sum() const;
};

/// Block view of G split into a selection r and its complement s. All four
/// blocks are matrix-free and include the teleportation and dangling terms.
/// Vectors are compact: length N_r for the selection, N_s for the complement.
class BlockPartition {
 public:
  BlockPartition(const StochasticOperator& op, NodeSelection sel);

  std::size_t selected_size() const { return selected_.size(); }
  std::size_t complement_size() const { return complement_.size(); }
  const std::vector<NodeIndex>& selected() const { return selected_; }
  const std::vector<NodeIndex>& complement() const { return complement_; }

  /// (G_rr x, G_sr x) for x on the selection.
  std::pair<std::vector<double>, std::vector<double>> from_selected(std::span<const double> x) const;
  /// (G_rs x, G_ss x) for x on the complement.
  std::pair<std::vector<double>, std::vector<double>> from_complement(std::span<const double> x) const;

  std::vector<double> rr(std::span<const double> x) const { return from_selected(x).first; }
  std::vector<double> sr(std::span<const double> x) const { return from_selected(x).second; }
  std::vector<double> rs(std::span<const double> x) const { return from_complement(x).first; }
  std::vector<double> ss(std::span<const double> x) const { return from_complement(x).second; }
  /// G_ss^T x.
  std::vector<double> ss_transpose(std::span<const double> x) const;

 private:
  std::vector<double> embed(std::span<const double> x, const std::vector<NodeIndex>& where) const;
  std::vector<double> restrict_to(std::span<const double> full, const std::vector<NodeIndex>& where) const;

  const StochasticOperator* op_;
  std::vector<NodeIndex> selected_;
  std::vector<NodeIndex> complement_;
};

BlockPartition partition(const StochasticOperator& op, const NodeSelection& sel);

struct EigenOptions {
  double tol = 1e-13;         // target L1 residual
  double accept_tol = 1e-10;  // residual that must be reached before giving up
  int max_iter = 100000;
};

/// Leading eigenpair of G_ss. `right` sums to 1 and left . right = 1.
struct Eigenpair {
  double lambda = 0.0;
  double leak = 0.0;  // 1 - lambda, measured as the mass G_rs moves into the selection
  std::vector<double> right;
  std::vector<double> left;
  double residual_right = 0.0;
  double residual_left = 0.0;
  int iterations = 0;
};

/// Throws std::runtime_error when the residuals stay above accept_tol.
Eigenpair leading_eigenpair(const BlockPartition& blocks, const EigenOptions& opts = {});

struct ComponentWeights {
  double r = 0.0;
  double rr = 0.0;
  double pr = 0.0;
  double qr = 0.0;
  double qrd = 0.0;
  double qrnd = 0.0;
};

struct ReducedMatrices {
  std::vector<NodeIndex> nodes;
  DenseMatrix g_r, g_rr, g_pr, g_qr, g_qrd, g_qrnd;
  ComponentWeights weights;
  double lambda_c = 0.0;
  int series_terms = 0;  // longest series over all columns
};

struct ReducedOptions {
  double tol = 1e-10;  // series stops once the added term is below tol * |partial sum|
  int max_terms = 10000;
  EigenOptions eigen{};
  int threads = 1;  // columns are computed concurrently
};

/// G_R = G_rr + G_rs (1 - G_ss)^-1 G_sr, split into the direct block G_rr,
/// the projector part G_pr = G_rs psi_R psi_L G_sr / (1 - lambda_c) and the
/// deflated series G_qr = G_rs sum_l (Q G_ss Q)^l Q G_sr with Q = 1 - psi_R psi_L.
ReducedMatrices reduced_google(const StochasticOperator& op, const NodeSelection& sel, const ReducedOptions& opts = {});

/// Block sums divided by N_r.
ComponentWeights component_weights(const ReducedMatrices& rm);

}  // namespace gmc
