#include "gmc/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace gmc {

namespace {

// Transforms of raw engine output are written out by hand: the standard
// distributions are implementation-defined, the engine sequence is not.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double open01() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(open01() * static_cast<double>(n)) % n; }
  double pareto(double exponent) { return std::pow(open01(), -1.0 / (exponent - 1.0)); }
  double normal() {
    const double r = std::sqrt(-2.0 * std::log(open01()));
    return r * std::cos(2.0 * std::numbers::pi * open01());
  }

 private:
  std::mt19937_64 engine_;
};

std::vector<double> cumulative(const std::vector<double>& w) {
  std::vector<double> c(w.size());
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) c[i] = (s += w[i]);
  return c;
}

NodeIndex pick(const std::vector<double>& cum, Sampler& rng) {
  const double target = rng.open01() * cum.back();
  const auto it = std::lower_bound(cum.begin(), cum.end(), target);
  return static_cast<NodeIndex>(std::min<std::ptrdiff_t>(it - cum.begin(), static_cast<std::ptrdiff_t>(cum.size()) - 1));
}

}  // namespace

std::vector<SynthEdge> synth_edges(const SynthOptions& opts) {
  if (opts.nodes < 2) throw std::invalid_argument("synthetic network needs at least two nodes");
  if (opts.edges < opts.nodes) throw std::invalid_argument("need at least one transaction per node");
  if (!(opts.degree_exponent > 1.0) || !(opts.amount_exponent > 1.0))
    throw std::invalid_argument("Pareto exponents must exceed 1");

  Sampler rng(opts.seed);
  const std::size_t n = opts.nodes;
  std::vector<double> out_fit(n), in_fit(n);
  for (std::size_t u = 0; u < n; ++u) {
    out_fit[u] = rng.pareto(opts.degree_exponent);
    in_fit[u] = out_fit[u] * std::exp(opts.imbalance * rng.normal());
  }
  const auto out_cum = cumulative(out_fit);
  const auto in_cum = cumulative(in_fit);
  const TimeWindow window = quarter_window(opts.year, opts.quarter);
  const auto span = static_cast<std::uint64_t>(window.end - window.begin);

  std::vector<SynthEdge> edges;
  edges.reserve(opts.edges);
  for (std::size_t e = 0; e < opts.edges; ++e) {
    const NodeIndex src = e < n ? static_cast<NodeIndex>(e) : pick(out_cum, rng);
    NodeIndex dst = pick(in_cum, rng);
    while (dst == src) dst = pick(in_cum, rng);
    const double amount = 0.01 * rng.pareto(opts.amount_exponent);
    const auto ts = window.begin + static_cast<std::int64_t>(rng.below(span));
    edges.push_back({src, dst, amount, ts});
  }
  return edges;
}

std::vector<TransactionRecord> synth_transactions(const SynthOptions& opts) {
  const auto edges = synth_edges(opts);
  std::vector<TransactionRecord> records;
  records.reserve(edges.size());
  for (const auto& e : edges)
    records.push_back({"u" + std::to_string(e.src), "u" + std::to_string(e.dst), e.amount, e.timestamp});
  return records;
}

SliceGraph synth_graph(const SynthOptions& opts) {
  const auto raw = synth_edges(opts);
  constexpr auto kUnseen = static_cast<NodeIndex>(-1);
  std::vector<NodeIndex> dense(opts.nodes, kUnseen);
  auto ids = std::make_shared<IdMap>();
  auto intern = [&](NodeIndex u) {
    if (dense[u] == kUnseen) dense[u] = ids->intern("u" + std::to_string(u));
    return dense[u];
  };
  std::vector<WeightedEdge> edges;
  edges.reserve(raw.size());
  for (const auto& e : raw) {
    const NodeIndex s = intern(e.src);
    const NodeIndex d = intern(e.dst);
    edges.push_back({s, d, e.amount});
  }
  return SliceGraph::from_edges(std::move(ids), std::move(edges));
}

void write_transactions(std::ostream& out, std::span<const TransactionRecord> records) {
  out << "src,dst,amount,timestamp\n";
  char buf[64];
  for (const auto& r : records) {
    const auto end = std::to_chars(buf, buf + sizeof buf, r.amount).ptr;
    out << r.src << ',' << r.dst << ',' << std::string_view(buf, static_cast<std::size_t>(end - buf)) << ','
        << r.timestamp << '\n';
  }
}

}  // namespace gmc
