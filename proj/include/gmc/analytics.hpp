#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gmc/ingest.hpp"

namespace gmc {

/// Log-equidistant binning of ranks 1..n into `cells` bins. Rank 1 falls in
/// the first bin and rank n in the last (upper edge inclusive).
class LogBins {
 public:
  LogBins(std::size_t n, std::size_t cells);
  std::size_t cells() const { return edges_.size() - 1; }
  std::size_t bin(std::size_t rank) const;
  const std::vector<double>& edges() const { return edges_; }

 private:
  std::size_t n_;
  std::vector<double> edges_;
};

/// C x C grid over the (K, K*) plane. Row = K* bin, column = K bin.
struct DensityGrid {
  static constexpr double kEmpty = std::numeric_limits<double>::quiet_NaN();

  std::size_t cells = 0;
  std::vector<double> edges;         // shared by both axes, length cells + 1
  std::vector<std::uint64_t> counts;  // users per cell
  std::vector<double> values;        // counts, or the signed crisis ratio (kEmpty where no user)
  bool signed_ratio = false;

  double value(std::size_t row, std::size_t col) const { return values[row * cells + col]; }
  std::uint64_t count(std::size_t row, std::size_t col) const { return counts[row * cells + col]; }
};

/// Users per cell. `k_index` / `kstar_index` are rank orders (index[0] = K 1).
DensityGrid density_grid(std::span<const NodeIndex> k_index, std::span<const NodeIndex> kstar_index,
                         std::size_t cells = 200);

/// (2 N_u,cell - N_cell) / N_cell per nonempty cell, kEmpty elsewhere.
DensityGrid crisis_map(std::span<const NodeIndex> k_index, std::span<const NodeIndex> kstar_index,
                       std::span<const std::uint8_t> bankrupt, std::size_t cells = 200);

/// W_c(K) = |{u bankrupt : K_u <= K}| / N, element K-1 for K = 1..N.
std::vector<double> integrated_fraction(std::span<const std::uint8_t> bankrupt, std::span<const NodeIndex> index);

struct FitResult {
  double mu = 0.0;
  double beta = 0.0;
  double stderr_mu = 0.0;
  double stderr_beta = 0.0;
  double k_min = 0.0;
  double k_max = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares of log W on log K over points with
/// k_min <= K <= k_max and W > 0; W = K^beta / mu.
FitResult powerlaw_fit(std::span<const double> k, std::span<const double> w, double k_min, double k_max);

/// Same, for a curve sampled at K = 1..curve.size().
FitResult powerlaw_fit(std::span<const double> curve, double k_min, double k_max);

struct SliceRanking {
  std::string label;
  std::vector<std::string> ids;  // in rank order, at least the top k
};

struct OccurrenceRow {
  std::string id;
  std::size_t appearances = 0;
  std::size_t best_rank = 0;
  std::vector<std::optional<std::size_t>> ranks;  // per slice; nullopt when outside the top k
};

struct OccurrenceTable {
  std::vector<std::string> labels;
  std::vector<OccurrenceRow> rows;
};

/// The `m` users appearing most often in the per-slice top `k`; ties go to
/// the better best-ever rank, then to the smaller id.
OccurrenceTable topk_occurrence(std::span<const SliceRanking> slices, std::size_t k, std::size_t m);

}  // namespace gmc
