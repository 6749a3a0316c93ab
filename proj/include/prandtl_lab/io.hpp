#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "prandtl_lab/crocco.hpp"
#include "prandtl_lab/diagnostics.hpp"
#include "prandtl_lab/prandtl_solver.hpp"

namespace prandtl_lab {

// Columns of the diagnostics CSV, in order.
inline const std::vector<std::string> kDiagnosticsColumns = {
    "t", "E", "calE", "calD", "A", "c_mono", "C_mono", "curv_delta", "verdict"};

// Fixed-precision rendering used by every artifact so reruns are byte-identical.
std::string format_number(double v);

// Writes text atomically enough for a single owner; throws IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

std::string diagnostics_csv(const std::vector<DiagnosticsReport>& reports,
                            const std::string& config_line);

// Header "# t=.. Lx=.. Ymax=.. Nx=.. Ny=..", columns x,y,utilde,u,v,du_dy.
std::string physical_snapshot_csv(const PrandtlState& s);
// Header "# t=.. Lxi=.. Neta=..", columns xi,eta,w,dw_deta,dw_dxi.
std::string crocco_snapshot_csv(const CroccoState& c);

struct CsvTable {
  std::vector<std::string> comments;  // lines starting with '#', without the marker
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_lines;  // 1-based file line of each row

  // Index of a column; throws CsvError naming the column when missing.
  std::size_t column(const std::string& name) const;
  // Numeric value of a cell; throws CsvError with the row's file line.
  double number(std::size_t row, std::size_t col) const;
};

// Parses comma-separated text with one header row. Rows with the wrong
// number of fields raise CsvError carrying the file line.
CsvTable parse_csv(const std::string& text, const std::string& source = "csv");
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace prandtl_lab
