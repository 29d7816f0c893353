#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gmc {

using NodeIndex = std::uint32_t;

/// One timestamped transfer between two users.
struct TransactionRecord {
  std::string src;
  std::string dst;
  double amount = 0.0;
  std::int64_t timestamp = 0;  // seconds since epoch, UTC

  bool operator==(const TransactionRecord&) const = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(what + " at line " + std::to_string(line)), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Reads a `src,dst,amount,timestamp` edge list (comma or tab separated).
/// A first line whose amount field is not numeric is treated as a header.
/// Blank lines and lines starting with '#' are skipped.
std::vector<TransactionRecord> parse_transactions(std::istream& in);

/// Half-open UTC interval [start, end) of a calendar quarter, in epoch seconds.
struct TimeWindow {
  std::int64_t begin;
  std::int64_t end;
  bool contains(std::int64_t t) const { return t >= begin && t < end; }
};
TimeWindow quarter_window(int year, int quarter);

std::vector<TransactionRecord> slice_by_quarter(std::span<const TransactionRecord> records, int year,
                                                int quarter);

/// Dense index <-> external id bijection. Indices follow first appearance.
class IdMap {
 public:
  NodeIndex intern(std::string_view id);
  std::optional<NodeIndex> find(std::string_view id) const;
  const std::string& name(NodeIndex i) const { return names_[i]; }
  std::size_t size() const { return names_.size(); }
  std::span<const std::string> names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeIndex> index_;
};

struct WeightedEdge {
  NodeIndex src;
  NodeIndex dst;
  double weight;
};

enum class WeightMode { amount, count };

struct BuildOptions {
  bool drop_self_loops = true;
  WeightMode weight = WeightMode::amount;
};

/// Weighted directed graph in compressed sparse row form, rows indexed by the
/// source node. Immutable once built; copies share the id map.
class SliceGraph {
 public:
  SliceGraph();

  /// Aggregates parallel edges by summing weights (in input order) and drops
  /// non-positive weights, and self-loops unless `keep_self_loops`.
  static SliceGraph from_edges(std::shared_ptr<const IdMap> ids, std::vector<WeightedEdge> edges,
                               bool keep_self_loops = false);

  /// Adopts already-aggregated CSR arrays; throws std::invalid_argument when
  /// they are inconsistent.
  static SliceGraph from_csr(std::shared_ptr<const IdMap> ids, std::vector<std::uint64_t> offsets,
                             std::vector<NodeIndex> targets, std::vector<double> weights);

  std::size_t node_count() const { return offsets_.size() - 1; }
  std::size_t edge_count() const { return targets_.size(); }

  std::span<const NodeIndex> targets(NodeIndex src) const {
    return {targets_.data() + offsets_[src], targets_.data() + offsets_[src + 1]};
  }
  std::span<const double> weights(NodeIndex src) const {
    return {weights_.data() + offsets_[src], weights_.data() + offsets_[src + 1]};
  }

  std::span<const std::uint64_t> offsets() const { return offsets_; }
  std::span<const NodeIndex> all_targets() const { return targets_; }
  std::span<const double> all_weights() const { return weights_; }

  const IdMap& ids() const { return *ids_; }
  const std::shared_ptr<const IdMap>& shared_ids() const { return ids_; }

  double total_weight() const;

  bool operator==(const SliceGraph& other) const;

 private:
  std::shared_ptr<const IdMap> ids_;
  std::vector<std::uint64_t> offsets_;
  std::vector<NodeIndex> targets_;
  std::vector<double> weights_;
};

SliceGraph build_graph(std::span<const TransactionRecord> records, const BuildOptions& opts = {});

/// Same nodes, every edge j->i becomes i->j with the same weight.
SliceGraph invert_graph(const SliceGraph& g);

/// Version-tagged binary CSR dump (layout documented in README.md).
void write_graph(std::ostream& out, const SliceGraph& g);
SliceGraph read_graph(std::istream& in);
bool is_graph_dump(std::istream& in);

}  // namespace gmc
