#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "gmc/analytics.hpp"
#include "gmc/contagion.hpp"
#include "gmc/google.hpp"
#include "gmc/regomax.hpp"
#include "gmc/synth.hpp"
#include "output.hpp"

namespace gmc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

BuildOptions build_options(const RunConfig& cfg) {
  BuildOptions b;
  b.drop_self_loops = !cfg.keep_self_loops;
  if (cfg.weight == "count")
    b.weight = WeightMode::count;
  else if (cfg.weight != "amount")
    throw std::invalid_argument("--weight must be 'amount' or 'count'");
  return b;
}

PowerOptions power_options(const RunConfig& cfg) { return {cfg.tol, cfg.max_iter, cfg.threads}; }

std::ifstream open_input(const std::string& path) {
  if (!fs::exists(path)) throw MissingInput(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return in;
}

std::vector<TransactionRecord> load_records(const RunConfig& cfg) {
  auto in = open_input(cfg.input);
  if (is_graph_dump(in)) throw std::invalid_argument(cfg.input + " is a graph dump; this command needs a transaction file");
  return parse_transactions(in);
}

struct Ranks {
  RankResult pagerank;
  RankResult cheirank;
};

Ranks compute_ranks(const SliceGraph& g, const RunConfig& cfg) {
  return {gmc::pagerank(build_operator(g, cfg.alpha), power_options(cfg)),
          cheirank(build_operator(invert_graph(g), cfg.alpha), power_options(cfg))};
}

json rank_summary(const RankResult& r) {
  return {{"iterations", r.iterations}, {"residual", r.residual}, {"converged", r.converged}};
}

std::string kappa_label(double kappa) { return format_number(kappa); }

template <class Row>
void write_tsv(const fs::path& path, const json& config, const std::string& header, Row&& rows) {
  write_atomic(path, [&](std::ostream& out) {
    write_config_header(out, config);
    out << header << '\n';
    rows(out);
  });
}

std::string quarter_label(int year, int quarter) { return std::to_string(year) + "Q" + std::to_string(quarter); }

std::pair<int, int> parse_quarter_label(const std::string& label) {
  const auto q = label.find('Q');
  if (q == std::string::npos || q + 2 != label.size()) throw std::invalid_argument("bad slice label '" + label + "' (want YYYYQn)");
  return {std::stoi(label.substr(0, q)), std::stoi(label.substr(q + 1))};
}

std::pair<int, int> quarter_of(std::int64_t ts) {
  using namespace std::chrono;
  const year_month_day ymd{floor<days>(sys_seconds{seconds{ts}})};
  return {static_cast<int>(ymd.year()), static_cast<int>((static_cast<unsigned>(ymd.month()) - 1) / 3 + 1)};
}

}  // namespace

json config_json(const RunConfig& cfg, const std::string& command) {
  json j;
  j["command"] = command;
  j["input"] = cfg.input;
  j["slice"] = cfg.year && cfg.quarter ? json(quarter_label(*cfg.year, *cfg.quarter)) : json("all");
  j["keep_self_loops"] = cfg.keep_self_loops;
  j["weight"] = cfg.weight;
  j["alpha"] = cfg.alpha;
  j["tol"] = cfg.tol;
  j["max_iter"] = cfg.max_iter;
  if (command == "contagion" || command == "density" || command == "fit") j["tau_max"] = cfg.tau_max;
  if (command == "contagion") {
    j["kappa_min"] = cfg.kappa_min;
    j["kappa_max"] = cfg.kappa_max;
    j["kappa_step"] = cfg.kappa_step;
  }
  if (command == "regomax") {
    j["nr"] = cfg.nr;
    j["select"] = cfg.select;
    j["select_all"] = cfg.select_all;
    j["regomax_tol"] = cfg.regomax_tol;
  }
  if (command == "density") {
    j["cells"] = cfg.cells;
    j["crisis_kappas"] = cfg.crisis_kappas;
  }
  if (command == "fit") {
    j["kappas"] = cfg.fit_kappas;
    j["k_min"] = cfg.k_min;
    j["k_max"] = cfg.k_max;
    j["curve"] = cfg.curve;
  }
  if (command == "occurrence") {
    j["top_k"] = cfg.top_k;
    j["top_m"] = cfg.top_m;
    j["slices"] = cfg.slices;
  }
  if (command == "synth") {
    j = json{{"command", command},
             {"nodes", cfg.nodes},
             {"edges", cfg.edges},
             {"degree_exponent", cfg.degree_exponent},
             {"imbalance", cfg.imbalance},
             {"seed", cfg.seed}};
    if (cfg.year && cfg.quarter) j["slice"] = quarter_label(*cfg.year, *cfg.quarter);
  }
  j["threads"] = cfg.threads;
  j["out"] = cfg.out;
  return j;
}

SliceGraph load_graph(const RunConfig& cfg) {
  auto in = open_input(cfg.input);
  if (is_graph_dump(in)) {
    if (cfg.year || cfg.quarter) throw std::invalid_argument("--year/--quarter apply to transaction files only");
    return read_graph(in);
  }
  auto records = parse_transactions(in);
  if (cfg.year.has_value() != cfg.quarter.has_value())
    throw std::invalid_argument("--year and --quarter must be given together");
  if (cfg.year) records = slice_by_quarter(records, *cfg.year, *cfg.quarter);
  return build_graph(records, build_options(cfg));
}

void cmd_ingest(const RunConfig& cfg) {
  const SliceGraph g = load_graph(cfg);
  const StochasticOperator op = build_operator(g, cfg.alpha);
  write_atomic(fs::path(cfg.out) / "graph.gmcsr", [&](std::ostream& out) { write_graph(out, g); });
  write_json(fs::path(cfg.out) / "ingest.json", {{"config", config_json(cfg, "ingest")},
                                                 {"nodes", g.node_count()},
                                                 {"edges", g.edge_count()},
                                                 {"total_weight", g.total_weight()},
                                                 {"dangling", op.dangling_nodes().size()}});
}

void cmd_rank(const RunConfig& cfg) {
  const SliceGraph g = load_graph(cfg);
  const Ranks r = compute_ranks(g, cfg);
  const json config = config_json(cfg, "rank");
  const auto kstar = rank_positions(r.cheirank.index);
  write_tsv(fs::path(cfg.out) / "rank.tsv", config, "node_id\tK\tP\tK*\tP*", [&](std::ostream& out) {
    for (std::size_t k = 0; k < r.pagerank.index.size(); ++k) {
      const NodeIndex u = r.pagerank.index[k];
      out << g.ids().name(u) << '\t' << k + 1 << '\t' << format_number(r.pagerank.probs[u]) << '\t' << kstar[u] << '\t'
          << format_number(r.cheirank.probs[u]) << '\n';
    }
  });
  write_json(fs::path(cfg.out) / "rank.json", {{"config", config},
                                               {"nodes", g.node_count()},
                                               {"edges", g.edge_count()},
                                               {"pagerank", rank_summary(r.pagerank)},
                                               {"cheirank", rank_summary(r.cheirank)}});
}

void cmd_contagion(const RunConfig& cfg) {
  if (cfg.tau_max < 1) throw std::invalid_argument("--tau-max must be at least 1");
  const SliceGraph g = load_graph(cfg);
  const json config = config_json(cfg, "contagion");
  const fs::path out_dir(cfg.out);
  const auto kappas = kappa_grid(cfg.kappa_min, cfg.kappa_max, cfg.kappa_step);
  std::vector<int> taus(static_cast<std::size_t>(cfg.tau_max));
  std::iota(taus.begin(), taus.end(), 1);

  std::vector<json> runs(kappas.size());
  SweepOptions opts;
  opts.contagion = {cfg.alpha, power_options(cfg)};
  opts.threads = cfg.threads;
  opts.on_run = [&](std::size_t row, const ContagionState& s) {
    const std::string label = kappa_label(kappas[row]);
    write_tsv(out_dir / "runs" / ("kappa_" + label + ".tsv"), config, "tau\tW_c\tn_new_bankrupt", [&](std::ostream& out) {
      for (std::size_t t = 0; t < s.history.size(); ++t)
        out << t + 1 << '\t' << format_number(s.history[t]) << '\t' << s.new_bankrupt[t] << '\n';
    });
    std::vector<NodeIndex> order;
    for (NodeIndex u = 0; u < s.size(); ++u)
      if (s.is_bankrupt(u)) order.push_back(u);
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeIndex a, NodeIndex b) { return s.bankrupt_at[a] < s.bankrupt_at[b]; });
    write_tsv(out_dir / "bankrupt" / ("kappa_" + label + ".tsv"), config, "node_id\ttau", [&](std::ostream& out) {
      for (NodeIndex u : order) out << g.ids().name(u) << '\t' << s.bankrupt_at[u] << '\n';
    });
    runs[row] = {{"kappa", kappas[row]},
                 {"iterations", s.tau},
                 {"fixed_point", s.new_bankrupt.back() == 0},
                 {"final_W_c", s.history.back()}};
  };
  const SweepTable table = kappa_sweep(g, kappas, taus, opts);

  write_tsv(out_dir / "sweep.tsv", config, "kappa\ttau\tW_c", [&](std::ostream& out) {
    for (std::size_t r = 0; r < kappas.size(); ++r)
      for (std::size_t c = 0; c < taus.size(); ++c)
        out << format_number(kappas[r]) << '\t' << taus[c] << '\t' << format_number(table.at(r, c)) << '\n';
  });
  json violations = json::array();
  for (const auto& v : monotonicity_violations(table))
    violations.push_back({{"tau", v.tau},
                          {"kappa_low", v.kappa_low},
                          {"kappa_high", v.kappa_high},
                          {"W_c_low", v.fraction_low},
                          {"W_c_high", v.fraction_high}});
  write_json(out_dir / "contagion.json",
             {{"config", config}, {"nodes", g.node_count()}, {"runs", runs}, {"kappa_monotonicity_violations", violations}});
}

void cmd_regomax(const RunConfig& cfg) {
  const SliceGraph g = load_graph(cfg);
  const StochasticOperator op = build_operator(g, cfg.alpha);
  const RankResult pr = gmc::pagerank(op, power_options(cfg));

  NodeSelection sel;
  if (cfg.select_all) {
    sel.nodes = pr.index;
  } else if (!cfg.select.empty()) {
    for (const auto& id : cfg.select) {
      const auto u = g.ids().find(id);
      if (!u) throw std::invalid_argument("unknown node id in --select: " + id);
      sel.nodes.push_back(*u);
    }
  } else {
    sel = top_selection(pr, cfg.nr);
  }

  ReducedOptions ropts;
  ropts.tol = cfg.regomax_tol;
  ropts.threads = cfg.threads;
  const ReducedMatrices rm = reduced_google(op, sel, ropts);

  std::vector<std::string> labels;
  for (NodeIndex u : rm.nodes) labels.push_back(g.ids().name(u));
  const json config = config_json(cfg, "regomax");
  const std::vector<std::pair<std::string, const DenseMatrix*>> blocks = {
      {"G_R", &rm.g_r}, {"G_rr", &rm.g_rr}, {"G_pr", &rm.g_pr}, {"G_qr", &rm.g_qr}, {"G_qrd", &rm.g_qrd}, {"G_qrnd", &rm.g_qrnd}};

  json matrices = json::object();
  json minima = json::object();
  for (const auto& [name, m] : blocks) {
    json rows = json::array();
    for (std::size_t i = 0; i < m->rows; ++i)
      rows.push_back(std::vector<double>(m->data.begin() + static_cast<std::ptrdiff_t>(i * m->cols),
                                         m->data.begin() + static_cast<std::ptrdiff_t>((i + 1) * m->cols)));
    matrices[name] = rows;
    minima[name] = *std::min_element(m->data.begin(), m->data.end());
    write_atomic(fs::path(cfg.out) / (name + ".tsv"), [&](std::ostream& out) {
      write_config_header(out, config);
      write_matrix(out, *m, labels);
    });
  }
  const auto& w = rm.weights;
  write_json(fs::path(cfg.out) / "regomax.json",
             {{"config", config},
              {"nodes", labels},
              {"lambda_c", rm.lambda_c},
              {"series_terms", rm.series_terms},
              {"weights", {{"W_R", w.r}, {"W_rr", w.rr}, {"W_pr", w.pr}, {"W_qr", w.qr}, {"W_qrd", w.qrd}, {"W_qrnd", w.qrnd}}},
              {"min_entry", minima},
              {"matrices", matrices}});
}

void cmd_density(const RunConfig& cfg) {
  const SliceGraph g = load_graph(cfg);
  const Ranks r = compute_ranks(g, cfg);
  const json config = config_json(cfg, "density");
  const fs::path out_dir(cfg.out);

  const DensityGrid density = density_grid(r.pagerank.index, r.cheirank.index, cfg.cells);
  auto sidecar = [&](const DensityGrid& grid) {
    return json{{"config", config},
                {"nodes", g.node_count()},
                {"cells", grid.cells},
                {"layout", "row = K* bin, column = K bin"},
                {"bin_edges", grid.edges}};
  };
  write_atomic(out_dir / "density.tsv", [&](std::ostream& out) {
    write_config_header(out, config);
    write_grid(out, density);
  });
  write_json(out_dir / "density.json", sidecar(density));

  for (double kappa : cfg.crisis_kappas) {
    const ContagionState s = run_contagion(g, kappa, cfg.tau_max, {cfg.alpha, power_options(cfg)});
    for (int tau = 1; tau <= cfg.tau_max; ++tau) {
      const auto grid = crisis_map(r.pagerank.index, r.cheirank.index, s.bankrupt_mask(tau), cfg.cells);
      const std::string stem = "crisis_kappa_" + kappa_label(kappa) + "_tau_" + std::to_string(tau);
      write_atomic(out_dir / "crisis" / (stem + ".tsv"), [&](std::ostream& out) {
        write_config_header(out, config);
        write_grid(out, grid);
      });
      auto doc = sidecar(grid);
      doc["kappa"] = kappa;
      doc["tau"] = tau;
      doc["empty_cell"] = "nan";
      write_json(out_dir / "crisis" / (stem + ".json"), doc);
    }
  }
}

void cmd_fit(const RunConfig& cfg) {
  const json config = config_json(cfg, "fit");
  const fs::path out_dir(cfg.out);
  auto fit_json = [&](std::span<const double> curve) -> json {
    try {
      const FitResult f = powerlaw_fit(curve, cfg.k_min, cfg.k_max);
      return {{"mu", f.mu},       {"beta", f.beta},   {"stderr_mu", f.stderr_mu}, {"stderr_beta", f.stderr_beta},
              {"k_min", f.k_min}, {"k_max", f.k_max}, {"points", f.points}};
    } catch (const std::invalid_argument& e) {
      return {{"error", e.what()}};
    }
  };

  json fits = json::array();
  if (!cfg.curve.empty()) {
    auto in = open_input(cfg.curve);
    std::vector<double> ks, ws;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 'K') continue;
      std::istringstream fields(line);
      double k = 0, w = 0;
      if (!(fields >> k >> w)) throw std::runtime_error("malformed curve line: " + line);
      ks.push_back(k);
      ws.push_back(w);
    }
    json entry{{"curve", cfg.curve}};
    try {
      const FitResult f = powerlaw_fit(ks, ws, cfg.k_min, cfg.k_max);
      entry["fit"] = {{"mu", f.mu},       {"beta", f.beta},   {"stderr_mu", f.stderr_mu}, {"stderr_beta", f.stderr_beta},
                      {"k_min", f.k_min}, {"k_max", f.k_max}, {"points", f.points}};
    } catch (const std::invalid_argument& e) {
      entry["fit"] = {{"error", e.what()}};
    }
    fits.push_back(entry);
  } else {
    const SliceGraph g = load_graph(cfg);
    const Ranks r = compute_ranks(g, cfg);
    for (double kappa : cfg.fit_kappas) {
      const ContagionState s = run_contagion(g, kappa, cfg.tau_max, {cfg.alpha, power_options(cfg)});
      const auto mask = s.bankrupt_mask(cfg.tau_max);
      json entry{{"kappa", kappa}, {"bankrupt", s.bankrupt_count}};
      for (const auto& [name, index] : {std::pair{"pagerank", &r.pagerank.index}, std::pair{"cheirank", &r.cheirank.index}}) {
        const auto curve = integrated_fraction(mask, *index);
        write_tsv(out_dir / ("curve_kappa_" + kappa_label(kappa) + "_" + name + ".tsv"), config, "K\tW_c",
                  [&](std::ostream& out) {
                    for (std::size_t k = 0; k < curve.size(); ++k) out << k + 1 << '\t' << format_number(curve[k]) << '\n';
                  });
        entry[name] = fit_json(curve);
      }
      fits.push_back(entry);
    }
  }
  write_json(out_dir / "fit.json", {{"config", config}, {"fits", fits}});
}

void cmd_occurrence(const RunConfig& cfg) {
  const auto records = load_records(cfg);
  std::vector<std::pair<int, int>> quarters;
  if (!cfg.slices.empty()) {
    for (const auto& label : cfg.slices) quarters.push_back(parse_quarter_label(label));
  } else {
    std::set<std::pair<int, int>> seen;
    for (const auto& r : records) seen.insert(quarter_of(r.timestamp));
    quarters.assign(seen.begin(), seen.end());
  }

  std::vector<SliceRanking> by_pagerank, by_cheirank;
  for (const auto& [year, quarter] : quarters) {
    const auto slice = slice_by_quarter(records, year, quarter);
    const std::string label = quarter_label(year, quarter);
    if (slice.empty()) {
      by_pagerank.push_back({label, {}});
      by_cheirank.push_back({label, {}});
      continue;
    }
    const SliceGraph g = build_graph(slice, build_options(cfg));
    const Ranks r = compute_ranks(g, cfg);
    auto head = [&](const RankResult& rr) {
      std::vector<std::string> ids;
      for (std::size_t k = 0; k < std::min(cfg.top_k, rr.index.size()); ++k) ids.push_back(g.ids().name(rr.index[k]));
      return ids;
    };
    by_pagerank.push_back({label, head(r.pagerank)});
    by_cheirank.push_back({label, head(r.cheirank)});
  }

  const json config = config_json(cfg, "occurrence");
  for (const auto& [name, slices] : {std::pair{"pagerank", &by_pagerank}, std::pair{"cheirank", &by_cheirank}}) {
    const OccurrenceTable table = topk_occurrence(*slices, cfg.top_k, cfg.top_m);
    std::string header = "user\tnode_id\tappearances\tbest_rank";
    for (const auto& l : table.labels) header += "\t" + l;
    write_tsv(fs::path(cfg.out) / (std::string("occurrence_") + name + ".tsv"), config, header, [&](std::ostream& out) {
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        out << i + 1 << '\t' << row.id << '\t' << row.appearances << '\t' << row.best_rank;
        for (const auto& rank : row.ranks) {
          out << '\t';
          if (rank)
            out << *rank;
          else
            out << '-';
        }
        out << '\n';
      }
    });
  }
}

void cmd_synth(const RunConfig& cfg) {
  SynthOptions o;
  o.nodes = cfg.nodes;
  o.edges = cfg.edges;
  o.degree_exponent = cfg.degree_exponent;
  o.imbalance = cfg.imbalance;
  o.seed = cfg.seed;
  if (cfg.year) o.year = *cfg.year;
  if (cfg.quarter) o.quarter = *cfg.quarter;
  const auto records = synth_transactions(o);
  write_atomic(cfg.out, [&](std::ostream& out) {
    write_config_header(out, config_json(cfg, "synth"));
    write_transactions(out, records);
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Google matrix ranking, contagion cascades and reduced Google matrices of transaction networks", "gmc"};
  app.set_config("--config", "", "TOML/INI file with option defaults (command-line flags take precedence)");
  app.require_subcommand(1);

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "Transaction edge list (src,dst,amount,timestamp) or graph dump")->required();
    sub->add_option("--year", cfg.year, "Calendar year of the quarter slice");
    sub->add_option("--quarter", cfg.quarter, "Quarter 1..4 of the slice")->check(CLI::Range(1, 4));
    sub->add_flag("--keep-self-loops", cfg.keep_self_loops, "Keep u->u transactions");
    sub->add_option("--weight", cfg.weight, "Edge weight: amount or count")->check(CLI::IsMember({"amount", "count"}));
  };
  auto add_rank = [&](CLI::App* sub) {
    sub->add_option("--alpha", cfg.alpha, "Damping factor")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--tol", cfg.tol, "L1 convergence threshold of the power iteration");
    sub->add_option("--max-iter", cfg.max_iter, "Power iteration budget");
    sub->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto add_out = [&](CLI::App* sub, const char* what) { sub->add_option("--out", cfg.out, what)->required(); };
  auto add_tau = [&](CLI::App* sub) {
    sub->add_option("--tau-max", cfg.tau_max, "Cascade iterations")->check(CLI::PositiveNumber);
  };

  std::map<CLI::App*, void (*)(const RunConfig&)> handlers;

  auto* ingest = app.add_subcommand("ingest", "Parse, slice and dump the transaction graph");
  add_input(ingest);
  add_rank(ingest);
  add_out(ingest, "Output directory");
  handlers[ingest] = cmd_ingest;

  auto* rank = app.add_subcommand("rank", "PageRank and CheiRank with K / K* indices");
  add_input(rank);
  add_rank(rank);
  add_out(rank, "Output directory");
  handlers[rank] = cmd_rank;

  auto* contagion = app.add_subcommand("contagion", "Bankruptcy cascades over a kappa grid");
  add_input(contagion);
  add_rank(contagion);
  add_tau(contagion);
  contagion->add_option("--kappa-min", cfg.kappa_min, "Smallest threshold");
  contagion->add_option("--kappa-max", cfg.kappa_max, "Largest threshold");
  contagion->add_option("--kappa-step", cfg.kappa_step, "Grid step")->check(CLI::PositiveNumber);
  add_out(contagion, "Output directory");
  handlers[contagion] = cmd_contagion;

  auto* regomax = app.add_subcommand("regomax", "Reduced Google matrix of a node selection");
  add_input(regomax);
  add_rank(regomax);
  regomax->add_option("--nr", cfg.nr, "Number of top PageRank nodes to select");
  regomax->add_option("--select", cfg.select, "Explicit node ids (comma separated)")->delimiter(',');
  regomax->add_flag("--select-all", cfg.select_all, "Select every node (PageRank order)");
  regomax->add_option("--regomax-tol", cfg.regomax_tol, "Relative truncation threshold of the series");
  add_out(regomax, "Output directory");
  handlers[regomax] = cmd_regomax;

  auto* density = app.add_subcommand("density", "User density and crisis maps on the (K, K*) plane");
  add_input(density);
  add_rank(density);
  add_tau(density);
  density->add_option("--cells", cfg.cells, "Cells per axis")->check(CLI::PositiveNumber);
  density->add_option("--crisis-kappa", cfg.crisis_kappas, "Thresholds for crisis maps (repeatable)");
  add_out(density, "Output directory");
  handlers[density] = cmd_density;

  auto* fit = app.add_subcommand("fit", "Integrated bankrupt fractions and power-law fits");
  fit->add_option("--input", cfg.input, "Transaction edge list or graph dump");
  fit->add_option("--year", cfg.year, "Calendar year of the quarter slice");
  fit->add_option("--quarter", cfg.quarter, "Quarter 1..4 of the slice")->check(CLI::Range(1, 4));
  fit->add_flag("--keep-self-loops", cfg.keep_self_loops, "Keep u->u transactions");
  fit->add_option("--weight", cfg.weight, "Edge weight: amount or count")->check(CLI::IsMember({"amount", "count"}));
  add_rank(fit);
  add_tau(fit);
  fit->add_option("--kappa", cfg.fit_kappas, "Thresholds (repeatable)");
  fit->add_option("--k-min", cfg.k_min, "Lower end of the fit range");
  fit->add_option("--k-max", cfg.k_max, "Upper end of the fit range");
  fit->add_option("--curve", cfg.curve, "Fit an existing K<TAB>W_c curve instead of running cascades");
  add_out(fit, "Output directory");
  handlers[fit] = cmd_fit;

  auto* occurrence = app.add_subcommand("occurrence", "Most frequent top-k users across quarter slices");
  occurrence->add_option("--input", cfg.input, "Transaction edge list")->required();
  occurrence->add_flag("--keep-self-loops", cfg.keep_self_loops, "Keep u->u transactions");
  occurrence->add_option("--weight", cfg.weight, "Edge weight: amount or count")->check(CLI::IsMember({"amount", "count"}));
  add_rank(occurrence);
  occurrence->add_option("--slices", cfg.slices, "Quarter labels such as 2013Q1 (default: every quarter present)")
      ->delimiter(',');
  occurrence->add_option("--top-k", cfg.top_k, "Rank cutoff per slice")->check(CLI::PositiveNumber);
  occurrence->add_option("--top-m", cfg.top_m, "Users reported")->check(CLI::PositiveNumber);
  add_out(occurrence, "Output directory");
  handlers[occurrence] = cmd_occurrence;

  auto* synth = app.add_subcommand("synth", "Seeded synthetic scale-free transaction file");
  synth->add_option("--nodes", cfg.nodes, "Users");
  synth->add_option("--edges", cfg.edges, "Transactions");
  synth->add_option("--degree-exponent", cfg.degree_exponent, "Degree distribution tail exponent");
  synth->add_option("--imbalance", cfg.imbalance, "Log-normal spread between in- and out-activity");
  synth->add_option("--seed", cfg.seed, "Random seed");
  synth->add_option("--year", cfg.year, "Year of the generated timestamps");
  synth->add_option("--quarter", cfg.quarter, "Quarter of the generated timestamps")->check(CLI::Range(1, 4));
  add_out(synth, "Output file");
  handlers[synth] = cmd_synth;

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    for (auto* sub : app.get_subcommands()) handlers.at(sub)(cfg);
  } catch (const MissingInput& e) {
    err << "gmc: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "gmc: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace gmc::cli
