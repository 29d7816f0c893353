#include "gmc/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "gmc/google.hpp"

namespace gmc {

LogBins::LogBins(std::size_t n, std::size_t cells) : n_(n) {
  if (cells < 1) throw std::invalid_argument("need at least one cell");
  if (n < 1) throw std::invalid_argument("need at least one rank");
  // a single user still gets a non-degenerate axis [1, 2]
  const double log_top = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  edges_.resize(cells + 1);
  for (std::size_t c = 0; c <= cells; ++c)
    edges_[c] = std::exp(log_top * static_cast<double>(c) / static_cast<double>(cells));
  edges_.front() = 1.0;
  edges_.back() = static_cast<double>(std::max<std::size_t>(n, 2));
}

std::size_t LogBins::bin(std::size_t rank) const {
  if (rank < 1 || rank > n_) throw std::out_of_range("rank outside 1..N");
  const std::size_t c = cells();
  const double r = static_cast<double>(rank);
  auto b = static_cast<std::size_t>(
      std::min(static_cast<double>(c - 1), std::floor(static_cast<double>(c) * std::log(r) / std::log(edges_.back()))));
  while (b > 0 && r < edges_[b]) --b;
  while (b + 1 < c && r >= edges_[b + 1]) ++b;
  return b;
}

namespace {

DensityGrid tally(std::span<const NodeIndex> k_index, std::span<const NodeIndex> kstar_index,
                  std::span<const std::uint8_t> bankrupt, std::size_t cells, std::vector<std::uint64_t>& hits) {
  if (k_index.size() != kstar_index.size()) throw std::invalid_argument("rank orders differ in length");
  const std::size_t n = k_index.size();
  const LogBins bins(n, cells);
  const auto k = rank_positions(k_index);
  const auto ks = rank_positions(kstar_index);

  DensityGrid grid;
  grid.cells = cells;
  grid.edges = bins.edges();
  grid.counts.assign(cells * cells, 0);
  hits.assign(cells * cells, 0);
  for (std::size_t u = 0; u < n; ++u) {
    const std::size_t cell = bins.bin(ks[u]) * cells + bins.bin(k[u]);
    ++grid.counts[cell];
    if (!bankrupt.empty() && bankrupt[u]) ++hits[cell];
  }
  return grid;
}

}  // namespace

DensityGrid density_grid(std::span<const NodeIndex> k_index, std::span<const NodeIndex> kstar_index,
                         std::size_t cells) {
  std::vector<std::uint64_t> unused;
  DensityGrid grid = tally(k_index, kstar_index, {}, cells, unused);
  grid.values.assign(grid.counts.begin(), grid.counts.end());
  return grid;
}

DensityGrid crisis_map(std::span<const NodeIndex> k_index, std::span<const NodeIndex> kstar_index,
                       std::span<const std::uint8_t> bankrupt, std::size_t cells) {
  if (bankrupt.size() != k_index.size()) throw std::invalid_argument("bankrupt mask has the wrong length");
  std::vector<std::uint64_t> hits;
  DensityGrid grid = tally(k_index, kstar_index, bankrupt, cells, hits);
  grid.signed_ratio = true;
  grid.values.resize(grid.counts.size());
  for (std::size_t c = 0; c < grid.counts.size(); ++c) {
    const auto total = static_cast<double>(grid.counts[c]);
    grid.values[c] = grid.counts[c] == 0 ? DensityGrid::kEmpty : (2.0 * static_cast<double>(hits[c]) - total) / total;
  }
  return grid;
}

std::vector<double> integrated_fraction(std::span<const std::uint8_t> bankrupt, std::span<const NodeIndex> index) {
  if (bankrupt.size() != index.size()) throw std::invalid_argument("bankrupt mask has the wrong length");
  const auto n = static_cast<double>(index.size());
  std::vector<double> curve(index.size());
  std::size_t count = 0;
  for (std::size_t k = 0; k < index.size(); ++k) {
    count += bankrupt[index[k]] ? 1 : 0;
    curve[k] = static_cast<double>(count) / n;
  }
  return curve;
}

FitResult powerlaw_fit(std::span<const double> k, std::span<const double> w, double k_min, double k_max) {
  if (k.size() != w.size()) throw std::invalid_argument("K and W differ in length");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] >= k_min && k[i] <= k_max && k[i] > 0.0 && w[i] > 0.0) {
      xs.push_back(std::log(k[i]));
      ys.push_back(std::log(w[i]));
    }
  }
  const std::size_t n = xs.size();
  if (n < 3) throw std::invalid_argument("power-law fit needs at least 3 positive points in range");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("power-law fit needs distinct K values");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    rss += r * r;
  }
  const double s2 = rss / static_cast<double>(n - 2);
  const double se_slope = std::sqrt(s2 / sxx);
  const double se_intercept = std::sqrt(s2 * (1.0 / static_cast<double>(n) + mx * mx / sxx));

  FitResult fit;
  fit.beta = slope;
  fit.mu = std::exp(-intercept);
  fit.stderr_beta = se_slope;
  fit.stderr_mu = fit.mu * se_intercept;
  fit.k_min = k_min;
  fit.k_max = k_max;
  fit.points = n;
  return fit;
}

FitResult powerlaw_fit(std::span<const double> curve, double k_min, double k_max) {
  std::vector<double> k(curve.size());
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = static_cast<double>(i + 1);
  return powerlaw_fit(k, curve, k_min, k_max);
}

OccurrenceTable topk_occurrence(std::span<const SliceRanking> slices, std::size_t k, std::size_t m) {
  if (k < 1 || m < 1) throw std::invalid_argument("k and m must be positive");
  std::map<std::string, OccurrenceRow> by_id;
  for (std::size_t s = 0; s < slices.size(); ++s) {
    const auto& ids = slices[s].ids;
    for (std::size_t r = 0; r < std::min(k, ids.size()); ++r) {
      auto& row = by_id[ids[r]];
      if (row.ranks.empty()) {
        row.id = ids[r];
        row.ranks.resize(slices.size());
        row.best_rank = r + 1;
      }
      row.ranks[s] = r + 1;
      ++row.appearances;
      row.best_rank = std::min(row.best_rank, r + 1);
    }
  }

  OccurrenceTable table;
  for (const auto& s : slices) table.labels.push_back(s.label);
  for (auto& [id, row] : by_id) table.rows.push_back(std::move(row));
  std::sort(table.rows.begin(), table.rows.end(), [](const OccurrenceRow& a, const OccurrenceRow& b) {
    if (a.appearances != b.appearances) return a.appearances > b.appearances;
    if (a.best_rank != b.best_rank) return a.best_rank < b.best_rank;
    return a.id < b.id;
  });
  if (table.rows.size() > m) table.rows.resize(m);
  return table;
}

}  // namespace gmc
