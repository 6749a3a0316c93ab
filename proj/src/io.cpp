#include "prandtl_lab/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "prandtl_lab/errors.hpp"

namespace prandtl_lab {

std::string format_number(double v) {
  if (v == 0.0) return "0";
  return fmt::format("{:.12g}", v);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError(fmt::format("cannot create directory {}: {}", path.parent_path().string(), ec.message()));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  out << text;
  out.flush();
  if (!out) throw IoError(fmt::format("write failed for {}", path.string()));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string diagnostics_csv(const std::vector<DiagnosticsReport>& reports,
                            const std::string& config_line) {
  std::string out = "# config: " + config_line + "\n";
  for (std::size_t k = 0; k < kDiagnosticsColumns.size(); ++k)
    out += (k ? "," : "") + kDiagnosticsColumns[k];
  out += "\n";
  for (const auto& r : reports)
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", format_number(r.t), format_number(r.E),
                       format_number(r.calE), format_number(r.calD), format_number(r.A),
                       format_number(r.c_mono), format_number(r.C_mono),
                       format_number(r.curv_delta), r.verdict.label());
  return out;
}

std::string physical_snapshot_csv(const PrandtlState& s) {
  const auto& g = s.grid;
  std::string out = fmt::format("# t={} Lx={} Ymax={} Nx={} Ny={}\n", format_number(s.t),
                                format_number(g.Lx()), format_number(g.Ymax()), g.Nx(), g.Ny());
  out += "x,y,utilde,u,v,du_dy\n";
  for (std::size_t i = 0; i < g.Nx(); ++i)
    for (std::size_t j = 0; j < g.y.size(); ++j)
      out += fmt::format("{},{},{},{},{},{}\n", format_number(g.x.node(i)), format_number(g.y.node(j)),
                         format_number(s.utilde(i, j)), format_number(s.u(i, j)),
                         format_number(s.v(i, j)), format_number(s.uy(i, j)));
  return out;
}

std::string crocco_snapshot_csv(const CroccoState& c) {
  const auto& g = c.grid;
  std::string out = fmt::format("# t={} Lxi={} Neta={}\n", format_number(c.t),
                                format_number(g.xi.length), g.Neta());
  out += "xi,eta,w,dw_deta,dw_dxi\n";
  for (std::size_t i = 0; i < g.Nxi(); ++i)
    for (std::size_t k = 0; k < g.eta.size(); ++k)
      out += fmt::format("{},{},{},{},{}\n", format_number(g.xi.node(i)), format_number(g.eta.node(k)),
                         format_number(c.w(i, k)), format_number(c.dw_deta(i, k)),
                         format_number(c.dw_dxi(i, k)));
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t k = 0; k < columns.size(); ++k)
    if (columns[k] == name) return k;
  throw CsvError(fmt::format("missing column '{}'", name));
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  const std::string& cell = rows[row][col];
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end || cell.empty())
    throw CsvError(fmt::format("row {}: column '{}' holds non-numeric value '{}'", row_lines[row],
                               columns[col], cell),
                   row_lines[row]);
  return v;
}

CsvTable parse_csv(const std::string& text, const std::string& source) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line.substr(1));
      continue;
    }
    auto fields = split(line);
    if (!have_header) {
      t.columns = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.columns.size())
      throw CsvError(fmt::format("{}: row {} has {} fields, expected {}", source, lineno,
                                 fields.size(), t.columns.size()),
                     lineno);
    t.rows.push_back(std::move(fields));
    t.row_lines.push_back(lineno);
  }
  if (!have_header) throw CsvError(fmt::format("{}: no header row", source));
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  return parse_csv(read_text(path), path.filename().string());
}

}  // namespace prandtl_lab
