#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gmc/ingest.hpp"

namespace gmc::cli {

/// Effective settings of one invocation. Defaults match the reference setup
/// where there is one (alpha 0.85, tau up to 10, 20 selected users, 200 cells).
struct RunConfig {
  std::string input;
  std::optional<int> year;
  std::optional<int> quarter;
  bool keep_self_loops = false;
  std::string weight = "amount";

  double alpha = 0.85;
  double tol = 1e-12;
  int max_iter = 1000;

  double kappa_min = 0.0;
  double kappa_max = 1.0;
  double kappa_step = 0.01;
  int tau_max = 10;

  std::size_t nr = 20;
  std::vector<std::string> select;
  bool select_all = false;
  double regomax_tol = 1e-10;

  std::size_t cells = 200;
  std::vector<double> crisis_kappas;

  std::vector<double> fit_kappas{0.15, 0.3};
  double k_min = 10;
  double k_max = 1e5;
  std::string curve;

  std::size_t top_k = 100;
  std::size_t top_m = 20;
  std::vector<std::string> slices;

  std::size_t nodes = 10000;
  std::size_t edges = 50000;
  double degree_exponent = 3.0;
  double imbalance = 0.6;
  std::uint64_t seed = 1;

  int threads = 1;
  std::string out;
};

nlohmann::json config_json(const RunConfig& cfg, const std::string& command);

/// Raised when --input names a file that does not exist (exit code 2).
class MissingInput : public std::runtime_error {
 public:
  explicit MissingInput(const std::string& path) : std::runtime_error("input file not found: " + path) {}
};

/// Edge list (sliced to --year/--quarter when given) or binary graph dump.
SliceGraph load_graph(const RunConfig& cfg);

void cmd_ingest(const RunConfig& cfg);
void cmd_rank(const RunConfig& cfg);
void cmd_contagion(const RunConfig& cfg);
void cmd_regomax(const RunConfig& cfg);
void cmd_density(const RunConfig& cfg);
void cmd_fit(const RunConfig& cfg);
void cmd_occurrence(const RunConfig& cfg);
void cmd_synth(const RunConfig& cfg);

/// Parses `args` (without the program name) and runs the subcommand.
/// Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gmc::cli
