#include "gmc/contagion.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "gmc/parallel.hpp"

namespace gmc {

std::vector<double> balance(std::span<const double> pagerank, std::span<const double> cheirank) {
  if (pagerank.size() != cheirank.size()) throw std::invalid_argument("rank vectors differ in length");
  std::vector<double> b(pagerank.size());
  for (std::size_t u = 0; u < b.size(); ++u) {
    const double p = pagerank[u];
    const double ps = cheirank[u];
    if (!(p > 0.0) || !(ps > 0.0)) throw std::invalid_argument("rank probabilities must be strictly positive");
    b[u] = (ps - p) / (ps + p);
  }
  return b;
}

ContagionState ContagionState::initial(std::size_t n, double kappa) {
  ContagionState s;
  s.kappa = kappa;
  s.bankrupt_at.assign(n, 0);
  return s;
}

std::vector<std::uint8_t> ContagionState::bankrupt_mask(int upto) const {
  std::vector<std::uint8_t> mask(bankrupt_at.size());
  for (std::size_t u = 0; u < mask.size(); ++u) mask[u] = bankrupt_at[u] != 0 && bankrupt_at[u] <= upto;
  return mask;
}

double ContagionState::fraction_at(int t) const {
  if (t <= 0 || history.empty()) return 0.0;
  return history[std::min<std::size_t>(static_cast<std::size_t>(t), history.size()) - 1];
}

SliceGraph prune_ingoing(const SliceGraph& g, std::span<const std::uint8_t> bankrupt) {
  const std::size_t n = g.node_count();
  std::vector<std::uint64_t> offsets(n + 1, 0);
  std::vector<NodeIndex> targets;
  std::vector<double> weights;
  targets.reserve(g.edge_count());
  weights.reserve(g.edge_count());
  for (NodeIndex j = 0; j < n; ++j) {
    const auto ts = g.targets(j);
    const auto ws = g.weights(j);
    for (std::size_t k = 0; k < ts.size(); ++k) {
      if (bankrupt[ts[k]]) continue;
      targets.push_back(ts[k]);
      weights.push_back(ws[k]);
    }
    offsets[j + 1] = targets.size();
  }
  return SliceGraph::from_csr(g.shared_ids(), std::move(offsets), std::move(targets), std::move(weights));
}

ContagionState contagion_step(const SliceGraph& g, const ContagionState& state, const ContagionOptions& opts,
                              StepTrace* trace) {
  const std::size_t n = g.node_count();
  if (state.size() != n) throw std::invalid_argument("contagion state does not match graph");

  const auto mask = state.bankrupt_mask();
  SliceGraph pruned = state.bankrupt_count == 0 ? g : prune_ingoing(g, mask);
  RankResult p = pagerank(build_operator(pruned, opts.alpha), opts.power);
  RankResult ps = cheirank(build_operator(invert_graph(pruned), opts.alpha), opts.power);
  std::vector<double> b = balance(p.probs, ps.probs);

  ContagionState next = state;
  ++next.tau;
  std::vector<NodeIndex> fresh;
  for (NodeIndex u = 0; u < n; ++u) {
    if (!mask[u] && b[u] <= -state.kappa) {
      next.bankrupt_at[u] = next.tau;
      fresh.push_back(u);
    }
  }
  next.bankrupt_count += fresh.size();
  next.new_bankrupt.push_back(fresh.size());
  next.history.push_back(static_cast<double>(next.bankrupt_count) / static_cast<double>(n));

  if (trace) {
    trace->pruned = std::move(pruned);
    trace->pagerank = std::move(p);
    trace->cheirank = std::move(ps);
    trace->balance = std::move(b);
    trace->newly_bankrupt = std::move(fresh);
  }
  return next;
}

ContagionState run_contagion(const SliceGraph& g, double kappa, int tau_max, const ContagionOptions& opts) {
  if (tau_max < 1) throw std::invalid_argument("tau_max must be at least 1");
  ContagionState state = ContagionState::initial(g.node_count(), kappa);
  while (state.tau < tau_max) {
    state = contagion_step(g, state, opts);
    if (state.new_bankrupt.back() == 0) break;
  }
  return state;
}

SweepTable kappa_sweep(const SliceGraph& g, std::span<const double> kappas, std::span<const int> taus,
                       const SweepOptions& opts) {
  if (kappas.empty()) throw std::invalid_argument("kappa grid is empty");
  if (taus.empty()) throw std::invalid_argument("no tau checkpoints");
  const int tau_max = *std::max_element(taus.begin(), taus.end());

  SweepTable table;
  table.kappas.assign(kappas.begin(), kappas.end());
  table.taus.assign(taus.begin(), taus.end());
  table.fractions.assign(kappas.size() * taus.size(), 0.0);

  ContagionOptions inner = opts.contagion;
  if (opts.threads > 1) inner.power.threads = 1;
  std::mutex callback_lock;
  parallel_chunks(
      kappas.size(), opts.threads,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t row = begin; row < end; ++row) {
          const ContagionState run = run_contagion(g, kappas[row], tau_max, inner);
          for (std::size_t c = 0; c < taus.size(); ++c) table.fractions[row * taus.size() + c] = run.fraction_at(taus[c]);
          if (opts.on_run) {
            std::scoped_lock lock(callback_lock);
            opts.on_run(row, run);
          }
        }
      },
      1);
  return table;
}

std::vector<double> kappa_grid(double min, double max, double step) {
  if (!(step > 0.0) || max < min) throw std::invalid_argument("invalid kappa grid");
  const auto steps = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9));
  std::vector<double> grid;
  // snapped to 1e-12 so that 0.1 + 2 * 0.1 prints as 0.3
  for (std::size_t i = 0; i <= steps; ++i) grid.push_back(std::round((min + static_cast<double>(i) * step) * 1e12) / 1e12);
  if (max - grid.back() > 1e-9 * std::max(1.0, std::abs(max)))
    grid.push_back(max);
  else
    grid.back() = max;
  return grid;
}

std::vector<MonotonicityViolation> monotonicity_violations(const SweepTable& table) {
  std::vector<MonotonicityViolation> out;
  for (std::size_t c = 0; c < table.taus.size(); ++c)
    for (std::size_t r = 0; r + 1 < table.kappas.size(); ++r)
      if (table.kappas[r] < table.kappas[r + 1] && table.at(r + 1, c) > table.at(r, c))
        out.push_back({table.taus[c], table.kappas[r], table.kappas[r + 1], table.at(r, c), table.at(r + 1, c)});
  return out;
}

}  // namespace gmc
