#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gmc/ingest.hpp"

namespace gmc {

/// Seeded scale-free transaction generator (Chung-Lu style). Every user pays
/// at least once; further payers are drawn proportionally to an out-fitness
/// and payees proportionally to an in-fitness. Fitnesses follow a Pareto law
/// with density exponent `degree_exponent`, so both degree tails decay as
/// k^-degree_exponent. The in-fitness is the out-fitness times a log-normal
/// factor of width `imbalance`, which controls how far users sit from the
/// K = K* diagonal.
struct SynthOptions {
  std::size_t nodes = 10000;
  std::size_t edges = 50000;
  double degree_exponent = 3.0;
  double imbalance = 0.6;
  double amount_exponent = 2.0;  // Pareto density exponent of transferred amounts
  std::uint64_t seed = 1;
  int year = 2013;
  int quarter = 1;
};

struct SynthEdge {
  NodeIndex src;
  NodeIndex dst;
  double amount;
  std::int64_t timestamp;
};

/// Raw generator output; node u is labelled "u<u>".
std::vector<SynthEdge> synth_edges(const SynthOptions& opts);

std::vector<TransactionRecord> synth_transactions(const SynthOptions& opts);

/// Equivalent to build_graph(synth_transactions(opts)) without materializing
/// string records.
SliceGraph synth_graph(const SynthOptions& opts);

/// Writes `src,dst,amount,timestamp` lines with a header.
void write_transactions(std::ostream& out, std::span<const TransactionRecord> records);

}  // namespace gmc
