#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gmc/google.hpp"
#include "gmc/ingest.hpp"

namespace gmc {

/// B_u = (P*_u - P_u) / (P*_u + P_u). Throws if any entry is not strictly positive.
std::vector<double> balance(std::span<const double> pagerank, std::span<const double> cheirank);

/// Cascade progress. A user marked bankrupt at iteration tau stays bankrupt.
struct ContagionState {
  double kappa = 0.0;
  int tau = 0;
  std::vector<std::int32_t> bankrupt_at;  // 0 while safe, else the iteration of bankruptcy
  std::size_t bankrupt_count = 0;
  std::vector<double> history;            // W_c after each completed iteration
  std::vector<std::size_t> new_bankrupt;  // newly bankrupt count per iteration

  static ContagionState initial(std::size_t n, double kappa);

  std::size_t size() const { return bankrupt_at.size(); }
  bool is_bankrupt(NodeIndex u) const { return bankrupt_at[u] != 0; }
  /// 1 for users bankrupt at or before iteration `tau`.
  std::vector<std::uint8_t> bankrupt_mask(int tau) const;
  std::vector<std::uint8_t> bankrupt_mask() const { return bankrupt_mask(tau); }
  /// W_c at iteration `tau`; after an early fixed point the last value holds.
  double fraction_at(int tau) const;
};

struct ContagionOptions {
  double alpha = kDefaultAlpha;
  PowerOptions power{};
};

/// Intermediate quantities of one iteration, for inspection and tests.
struct StepTrace {
  SliceGraph pruned;
  RankResult pagerank;
  RankResult cheirank;
  std::vector<double> balance;
  std::vector<NodeIndex> newly_bankrupt;
};

/// Removes every edge j->u whose target u is marked in `bankrupt`.
SliceGraph prune_ingoing(const SliceGraph& g, std::span<const std::uint8_t> bankrupt);

/// One cascade round on the original graph `g`: prune the ingoing links of
/// current bankrupts, recompute PageRank and CheiRank, mark every safe user
/// with B_u <= -kappa.
ContagionState contagion_step(const SliceGraph& g, const ContagionState& state, const ContagionOptions& opts = {},
                              StepTrace* trace = nullptr);

/// Steps until `tau_max` iterations are done or no user goes bankrupt.
ContagionState run_contagion(const SliceGraph& g, double kappa, int tau_max, const ContagionOptions& opts = {});

/// W_c(kappa, tau) for every kappa of a grid at each checkpoint tau.
struct SweepTable {
  std::vector<double> kappas;
  std::vector<int> taus;
  std::vector<double> fractions;  // row-major, kappas x taus

  double at(std::size_t kappa_row, std::size_t tau_col) const { return fractions[kappa_row * taus.size() + tau_col]; }
};

/// A pair of adjacent grid points where W_c increases with kappa.
struct MonotonicityViolation {
  int tau;
  double kappa_low;
  double kappa_high;
  double fraction_low;
  double fraction_high;
};

struct SweepOptions {
  ContagionOptions contagion{};
  int threads = 1;  // cascades of distinct kappa values run concurrently
  /// Called once per finished cascade, serialized, with the kappa row index.
  std::function<void(std::size_t, const ContagionState&)> on_run;
};

SweepTable kappa_sweep(const SliceGraph& g, std::span<const double> kappas, std::span<const int> taus,
                       const SweepOptions& opts = {});

/// Inclusive grid min, min+step, ..., max (the endpoint snaps to max).
std::vector<double> kappa_grid(double min, double max, double step);

std::vector<MonotonicityViolation> monotonicity_violations(const SweepTable& table);

}  // namespace gmc
