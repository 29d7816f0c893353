#include "gmc/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <numeric>

namespace gmc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    fields.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::vector<TransactionRecord> parse_transactions(std::istream& in) {
  std::vector<TransactionRecord> records;
  std::string raw;
  std::size_t line_no = 0;
  char delim = 0;
  bool first_data_line = true;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (delim == 0) delim = line.find('\t') != std::string_view::npos ? '\t' : ',';

    const auto fields = split(line, delim);
    if (fields.size() != 4) throw ParseError(line_no, "malformed line (expected 4 fields)");

    double amount = 0.0;
    const bool numeric_amount = parse_number(fields[2], amount);
    if (first_data_line) {
      first_data_line = false;
      if (!numeric_amount) continue;  // header
    }
    if (!numeric_amount || !std::isfinite(amount))
      throw ParseError(line_no, "malformed amount '" + std::string(fields[2]) + "'");
    if (amount < 0.0) throw ParseError(line_no, "negative amount");

    std::int64_t ts = 0;
    if (!parse_number(fields[3], ts))
      throw ParseError(line_no, "malformed timestamp '" + std::string(fields[3]) + "'");
    if (fields[0].empty() || fields[1].empty()) throw ParseError(line_no, "empty node id");

    records.push_back({std::string(fields[0]), std::string(fields[1]), amount, ts});
  }
  return records;
}

TimeWindow quarter_window(int year, int quarter) {
  if (quarter < 1 || quarter > 4) throw std::invalid_argument("quarter must be in 1..4");
  using namespace std::chrono;
  const auto first_month = static_cast<unsigned>(3 * (quarter - 1) + 1);
  const sys_days begin{std::chrono::year{year} / month{first_month} / day{1}};
  const sys_days end = quarter == 4 ? sys_days{std::chrono::year{year + 1} / January / day{1}}
                                    : sys_days{std::chrono::year{year} / month{first_month + 3} / day{1}};
  return {duration_cast<seconds>(begin.time_since_epoch()).count(),
          duration_cast<seconds>(end.time_since_epoch()).count()};
}

std::vector<TransactionRecord> slice_by_quarter(std::span<const TransactionRecord> records, int year,
                                                int quarter) {
  const TimeWindow window = quarter_window(year, quarter);
  std::vector<TransactionRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [&](const TransactionRecord& r) { return window.contains(r.timestamp); });
  return out;
}

NodeIndex IdMap::intern(std::string_view id) {
  auto [it, inserted] = index_.try_emplace(std::string(id), static_cast<NodeIndex>(names_.size()));
  if (inserted) names_.push_back(it->first);
  return it->second;
}

std::optional<NodeIndex> IdMap::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SliceGraph::SliceGraph() : ids_(std::make_shared<IdMap>()), offsets_(1, 0) {}

SliceGraph SliceGraph::from_edges(std::shared_ptr<const IdMap> ids, std::vector<WeightedEdge> edges,
                                  bool keep_self_loops) {
  const std::size_t n = ids->size();
  std::erase_if(edges, [&](const WeightedEdge& e) {
    if (e.src >= n || e.dst >= n) throw std::out_of_range("edge endpoint outside id map");
    return !(e.weight > 0.0) || (!keep_self_loops && e.src == e.dst);
  });
  // stable: parallel edges are summed in input order
  std::stable_sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });

  SliceGraph g;
  g.ids_ = std::move(ids);
  g.offsets_.assign(n + 1, 0);
  for (std::size_t k = 0; k < edges.size();) {
    const WeightedEdge& head = edges[k];
    double w = 0.0;
    for (; k < edges.size() && edges[k].src == head.src && edges[k].dst == head.dst; ++k) w += edges[k].weight;
    g.targets_.push_back(head.dst);
    g.weights_.push_back(w);
    ++g.offsets_[head.src + 1];
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  return g;
}

SliceGraph SliceGraph::from_csr(std::shared_ptr<const IdMap> ids, std::vector<std::uint64_t> offsets,
                                std::vector<NodeIndex> targets, std::vector<double> weights) {
  if (offsets.size() != ids->size() + 1 || offsets.front() != 0 || offsets.back() != targets.size() ||
      weights.size() != targets.size())
    throw std::invalid_argument("inconsistent CSR arrays");
  for (std::size_t j = 0; j + 1 < offsets.size(); ++j) {
    if (offsets[j] > offsets[j + 1]) throw std::invalid_argument("CSR offsets not monotone");
    for (auto k = offsets[j]; k < offsets[j + 1]; ++k) {
      if (targets[k] >= ids->size()) throw std::invalid_argument("CSR target out of range");
      if (k > offsets[j] && targets[k] <= targets[k - 1])
        throw std::invalid_argument("CSR row not strictly sorted");
      if (!(weights[k] > 0.0) || !std::isfinite(weights[k]))
        throw std::invalid_argument("CSR weight must be positive");
    }
  }
  SliceGraph g;
  g.ids_ = std::move(ids);
  g.offsets_ = std::move(offsets);
  g.targets_ = std::move(targets);
  g.weights_ = std::move(weights);
  return g;
}

double SliceGraph::total_weight() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

bool SliceGraph::operator==(const SliceGraph& other) const {
  return offsets_ == other.offsets_ && targets_ == other.targets_ && weights_ == other.weights_ &&
         std::ranges::equal(ids_->names(), other.ids_->names());
}

SliceGraph build_graph(std::span<const TransactionRecord> records, const BuildOptions& opts) {
  auto ids = std::make_shared<IdMap>();
  std::vector<WeightedEdge> edges;
  edges.reserve(records.size());
  for (const auto& r : records) {
    const NodeIndex s = ids->intern(r.src);
    const NodeIndex d = ids->intern(r.dst);
    if (opts.weight == WeightMode::count || r.amount > 0.0) edges.push_back({s, d, opts.weight == WeightMode::count ? 1.0 : r.amount});
  }
  return SliceGraph::from_edges(std::move(ids), std::move(edges), !opts.drop_self_loops);
}

SliceGraph invert_graph(const SliceGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::uint64_t> offsets(n + 1, 0);
  for (NodeIndex t : g.all_targets()) ++offsets[t + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());

  std::vector<NodeIndex> targets(g.edge_count());
  std::vector<double> weights(g.edge_count());
  std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
  // rows are visited in ascending source order, so each inverted row comes out sorted
  for (NodeIndex j = 0; j < n; ++j) {
    const auto ts = g.targets(j);
    const auto ws = g.weights(j);
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const auto slot = cursor[ts[k]]++;
      targets[slot] = j;
      weights[slot] = ws[k];
    }
  }
  return SliceGraph::from_csr(g.shared_ids(), std::move(offsets), std::move(targets), std::move(weights));
}

}  // namespace gmc
