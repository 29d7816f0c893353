#include "output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace gmc::cli {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto end = std::to_chars(buf, buf + sizeof buf, x).ptr;
  return {buf, end};
}

void write_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    body(out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  write_atomic(path, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
}

void write_config_header(std::ostream& out, const nlohmann::json& config) {
  out << "# gmc " << config.value("command", "") << ' ' << config.dump() << '\n';
}

void write_grid(std::ostream& out, const DensityGrid& grid) {
  for (std::size_t r = 0; r < grid.cells; ++r) {
    for (std::size_t c = 0; c < grid.cells; ++c) {
      if (c) out << '\t';
      out << format_number(grid.value(r, c));
    }
    out << '\n';
  }
}

void write_matrix(std::ostream& out, const DenseMatrix& m, const std::vector<std::string>& labels) {
  out << "node_id";
  for (const auto& l : labels) out << '\t' << l;
  out << '\n';
  for (std::size_t i = 0; i < m.rows; ++i) {
    out << labels[i];
    for (std::size_t j = 0; j < m.cols; ++j) out << '\t' << format_number(m(i, j));
    out << '\n';
  }
}

}  // namespace gmc::cli
