#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "gmc/analytics.hpp"
#include "gmc/regomax.hpp"

namespace gmc::cli {

/// Shortest round-trip decimal form; identical input gives identical bytes.
std::string format_number(double x);

/// Writes through a temporary sibling file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// First line of every TSV output: "# gmc <command> <config json>".
void write_config_header(std::ostream& out, const nlohmann::json& config);

/// Tab-separated rows of a grid; empty crisis-map cells print as "nan".
void write_grid(std::ostream& out, const DensityGrid& grid);

/// Matrix with a leading column and header row of node ids.
void write_matrix(std::ostream& out, const DenseMatrix& m, const std::vector<std::string>& labels);

}  // namespace gmc::cli
