#include "gmc/regomax.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gmc/parallel.hpp"

namespace gmc {

namespace {

double l1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct PowerOutcome {
  std::vector<double> vec;  // sums to 1
  double ratio = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

// Power iteration for a non-negative operator, normalizing to unit sum.
template <class Op>
PowerOutcome power_iterate(Op&& op, std::size_t n, const EigenOptions& opts, const char* which) {
  PowerOutcome out;
  out.vec.assign(n, 1.0 / static_cast<double>(n));
  double best = INFINITY;
  int since_best = 0;
  while (true) {
    std::vector<double> y = op(out.vec);
    out.ratio = std::accumulate(y.begin(), y.end(), 0.0);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res += std::abs(y[i] - out.ratio * out.vec[i]);
    out.residual = res;
    if (res <= opts.tol) break;
    if (res < 0.5 * best) {
      best = res;
      since_best = 0;
    } else if (++since_best > 200 && best <= opts.accept_tol) {
      break;  // stagnated at round-off level
    }
    if (out.iterations >= opts.max_iter) {
      if (res <= opts.accept_tol) break;
      throw std::runtime_error(std::string("leading eigenvector (") + which + ") of the complement block did not converge in " +
                               std::to_string(opts.max_iter) + " iterations (residual " + std::to_string(res) +
                               "); raise the iteration budget");
    }
    if (!(out.ratio > 0.0)) throw std::runtime_error("complement block annihilated the iterate");
    for (std::size_t i = 0; i < n; ++i) out.vec[i] = y[i] / out.ratio;
    ++out.iterations;
  }
  return out;
}

}  // namespace

void NodeSelection::validate(std::size_t n) const {
  if (nodes.size() < 2) throw std::invalid_argument("selection needs at least two nodes");
  std::vector<std::uint8_t> seen(n, 0);
  for (NodeIndex u : nodes) {
    if (u >= n) throw std::invalid_argument("selected node " + std::to_string(u) + " out of range");
    if (seen[u]++) throw std::invalid_argument("selected node " + std::to_string(u) + " repeated");
  }
}

NodeSelection top_selection(const RankResult& ranking, std::size_t count) {
  if (count > ranking.index.size()) throw std::invalid_argument("selection larger than the network");
  return {{ranking.index.begin(), ranking.index.begin() + static_cast<std::ptrdiff_t>(count)}};
}

double DenseMatrix::sum() const { return std::accumulate(data.begin(), data.end(), 0.0); }

BlockPartition::BlockPartition(const StochasticOperator& op, NodeSelection sel) : op_(&op) {
  sel.validate(op.size());
  selected_ = std::move(sel.nodes);
  std::vector<std::uint8_t> in_sel(op.size(), 0);
  for (NodeIndex u : selected_) in_sel[u] = 1;
  for (NodeIndex u = 0; u < op.size(); ++u)
    if (!in_sel[u]) complement_.push_back(u);
}

std::vector<double> BlockPartition::embed(std::span<const double> x, const std::vector<NodeIndex>& where) const {
  if (x.size() != where.size()) throw std::invalid_argument("block vector has the wrong length");
  std::vector<double> full(op_->size(), 0.0);
  for (std::size_t k = 0; k < where.size(); ++k) full[where[k]] = x[k];
  return full;
}

std::vector<double> BlockPartition::restrict_to(std::span<const double> full, const std::vector<NodeIndex>& where) const {
  std::vector<double> out(where.size());
  for (std::size_t k = 0; k < where.size(); ++k) out[k] = full[where[k]];
  return out;
}

std::pair<std::vector<double>, std::vector<double>> BlockPartition::from_selected(std::span<const double> x) const {
  const auto y = gmc::apply(*op_, embed(x, selected_));
  return {restrict_to(y, selected_), restrict_to(y, complement_)};
}

std::pair<std::vector<double>, std::vector<double>> BlockPartition::from_complement(std::span<const double> x) const {
  const auto y = gmc::apply(*op_, embed(x, complement_));
  return {restrict_to(y, selected_), restrict_to(y, complement_)};
}

std::vector<double> BlockPartition::ss_transpose(std::span<const double> x) const {
  const auto full = embed(x, complement_);
  std::vector<double> y(op_->size());
  op_->apply_transpose(full, y);
  return restrict_to(y, complement_);
}

BlockPartition partition(const StochasticOperator& op, const NodeSelection& sel) { return {op, sel}; }

Eigenpair leading_eigenpair(const BlockPartition& blocks, const EigenOptions& opts) {
  const std::size_t ns = blocks.complement_size();
  if (ns == 0) throw std::invalid_argument("complement is empty");

  auto right = power_iterate([&](const std::vector<double>& v) { return blocks.ss(v); }, ns, opts, "right");
  auto left = power_iterate([&](const std::vector<double>& v) { return blocks.ss_transpose(v); }, ns, opts, "left");

  Eigenpair e;
  e.iterations = right.iterations + left.iterations;
  e.residual_right = right.residual;
  e.residual_left = left.residual;
  const auto into_selection = blocks.rs(right.vec);
  e.leak = std::accumulate(into_selection.begin(), into_selection.end(), 0.0);
  e.lambda = 1.0 - e.leak;
  const double overlap = dot(left.vec, right.vec);
  for (double& x : left.vec) x /= overlap;
  e.right = std::move(right.vec);
  e.left = std::move(left.vec);
  return e;
}

ReducedMatrices reduced_google(const StochasticOperator& op, const NodeSelection& sel, const ReducedOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  const BlockPartition blocks(op, sel);
  const std::size_t nr = blocks.selected_size();
  const std::size_t ns = blocks.complement_size();

  ReducedMatrices rm;
  rm.nodes = blocks.selected();
  rm.g_r = rm.g_rr = rm.g_pr = rm.g_qr = rm.g_qrd = rm.g_qrnd = DenseMatrix(nr, nr);

  Eigenpair eig;
  std::vector<double> rank_inflow;  // G_rs psi_R
  if (ns > 0) {
    eig = leading_eigenpair(blocks, opts.eigen);
    if (eig.leak <= 1e-12) throw std::runtime_error("complement absorbs all probability (lambda_c >= 1 - 1e-12)");
    rank_inflow = blocks.rs(eig.right);
    rm.lambda_c = eig.lambda;
  }

  std::vector<int> terms(nr, 0);
  parallel_chunks(
      nr, opts.threads,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
          std::vector<double> unit(nr, 0.0);
          unit[j] = 1.0;
          auto [direct, to_rest] = blocks.from_selected(unit);
          std::vector<double> pr(nr, 0.0);
          std::vector<double> qr(nr, 0.0);

          if (ns > 0) {
            const double c = dot(eig.left, to_rest);
            for (std::size_t i = 0; i < nr; ++i) pr[i] = rank_inflow[i] * c / eig.leak;

            std::vector<double> term = std::move(to_rest);
            for (std::size_t k = 0; k < ns; ++k) term[k] -= c * eig.right[k];
            std::vector<double> partial = term;
            for (int l = 0; l < opts.max_terms; ++l) {
              auto [out_r, out_s] = blocks.from_complement(term);
              for (std::size_t i = 0; i < nr; ++i) qr[i] += out_r[i];
              terms[j] = l + 1;
              const double proj = dot(eig.left, out_s);
              for (std::size_t k = 0; k < ns; ++k) out_s[k] -= proj * eig.right[k];
              const double norm = l1(out_s);
              if (norm == 0.0 || norm < opts.tol * l1(partial)) break;
              for (std::size_t k = 0; k < ns; ++k) partial[k] += out_s[k];
              term = std::move(out_s);
            }
          }
          for (std::size_t i = 0; i < nr; ++i) {
            rm.g_rr(i, j) = direct[i];
            rm.g_pr(i, j) = pr[i];
            rm.g_qr(i, j) = qr[i];
            rm.g_r(i, j) = direct[i] + pr[i] + qr[i];
            (i == j ? rm.g_qrd : rm.g_qrnd)(i, j) = qr[i];
          }
        }
      },
      1);

  rm.series_terms = nr ? *std::max_element(terms.begin(), terms.end()) : 0;
  rm.weights = component_weights(rm);
  return rm;
}

ComponentWeights component_weights(const ReducedMatrices& rm) {
  const double nr = static_cast<double>(rm.g_r.rows);
  return {rm.g_r.sum() / nr,  rm.g_rr.sum() / nr,  rm.g_pr.sum() / nr,
          rm.g_qr.sum() / nr, rm.g_qrd.sum() / nr, rm.g_qrnd.sum() / nr};
}

}  // namespace gmc
