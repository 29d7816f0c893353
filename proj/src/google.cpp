#include "gmc/google.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gmc/parallel.hpp"

namespace gmc {

StochasticOperator::StochasticOperator(const SliceGraph& g, double alpha)
    : alpha_(alpha), n_(g.node_count()), dangling_(n_, 0), row_offsets_(n_ + 1, 0) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (n_ == 0) throw std::invalid_argument("empty graph");

  std::vector<double> out_weight(n_, 0.0);
  for (NodeIndex j = 0; j < n_; ++j) {
    for (double w : g.weights(j)) out_weight[j] += w;
    dangling_[j] = g.targets(j).empty() ? 1 : 0;
  }
  for (NodeIndex i : g.all_targets()) ++row_offsets_[i + 1];
  std::partial_sum(row_offsets_.begin(), row_offsets_.end(), row_offsets_.begin());

  sources_.resize(g.edge_count());
  values_.resize(g.edge_count());
  std::vector<std::uint64_t> cursor(row_offsets_.begin(), row_offsets_.end() - 1);
  for (NodeIndex j = 0; j < n_; ++j) {
    const auto ts = g.targets(j);
    const auto ws = g.weights(j);
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const auto slot = cursor[ts[k]]++;
      sources_[slot] = j;
      values_[slot] = ws[k] / out_weight[j];
    }
  }
}

std::vector<NodeIndex> StochasticOperator::dangling_nodes() const {
  std::vector<NodeIndex> out;
  for (NodeIndex j = 0; j < n_; ++j)
    if (dangling_[j]) out.push_back(j);
  return out;
}

void StochasticOperator::apply(std::span<const double> v, std::span<double> out, int threads) const {
  if (v.size() != n_ || out.size() != n_) throw std::invalid_argument("dimension mismatch in apply");
  const double mass = chunked_sum(v, threads);
  const double dangling_mass = chunked_sum(n_, threads, [&](std::size_t j) { return dangling_[j] ? v[j] : 0.0; });
  const double n = static_cast<double>(n_);
  const double base = (alpha_ * dangling_mass + (1.0 - alpha_) * mass) / n;

  parallel_chunks(n_, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double acc = 0.0;
      for (auto k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) acc += values_[k] * v[sources_[k]];
      out[i] = alpha_ * acc + base;
    }
  });
}

void StochasticOperator::apply_transpose(std::span<const double> u, std::span<double> out) const {
  if (u.size() != n_ || out.size() != n_) throw std::invalid_argument("dimension mismatch in apply_transpose");
  const double share = chunked_sum(u) / static_cast<double>(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (auto k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) out[sources_[k]] += values_[k] * u[i];
  for (std::size_t j = 0; j < n_; ++j)
    out[j] = alpha_ * out[j] + (alpha_ * (dangling_[j] ? 1.0 : 0.0) + (1.0 - alpha_)) * share;
}

std::vector<double> StochasticOperator::link_column_sums() const {
  std::vector<double> sums(n_, 0.0);
  for (std::size_t k = 0; k < sources_.size(); ++k) sums[sources_[k]] += values_[k];
  return sums;
}

StochasticOperator build_operator(const SliceGraph& g, double alpha) { return {g, alpha}; }

std::vector<double> apply(const StochasticOperator& op, std::span<const double> v, int threads) {
  std::vector<double> out(op.size());
  op.apply(v, out, threads);
  return out;
}

RankResult pagerank(const StochasticOperator& op, const PowerOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  const std::size_t n = op.size();
  RankResult result;
  std::vector<double> current(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);

  while (result.iterations < opts.max_iter) {
    op.apply(current, next, opts.threads);
    const double norm = chunked_sum(next, opts.threads);
    parallel_chunks(n, opts.threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) next[i] /= norm;
    });
    result.residual = chunked_sum(n, opts.threads, [&](std::size_t i) { return std::abs(next[i] - current[i]); });
    current.swap(next);
    ++result.iterations;
    if (result.residual <= opts.tol) {
      result.converged = true;
      break;
    }
  }
  result.probs = std::move(current);
  result.index = rank_indices(result.probs);
  return result;
}

RankResult cheirank(const StochasticOperator& inverted_op, const PowerOptions& opts) {
  return pagerank(inverted_op, opts);
}

std::vector<NodeIndex> rank_indices(std::span<const double> probs) {
  std::vector<NodeIndex> order(probs.size());
  std::iota(order.begin(), order.end(), NodeIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) { return probs[a] > probs[b]; });
  return order;
}

std::vector<std::uint32_t> rank_positions(std::span<const NodeIndex> index) {
  std::vector<std::uint32_t> pos(index.size());
  for (std::size_t k = 0; k < index.size(); ++k) pos[index[k]] = static_cast<std::uint32_t>(k + 1);
  return pos;
}

}  // namespace gmc
