#include "homog/io/csv.hpp"

#include <cstdio>
#include <fstream>

#include "homog/error.hpp"

namespace homog::io {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header.size()) throw Error("CSV row width does not match the header");
  rows.push_back(std::move(row));
}

std::string CsvTable::render() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

void write_csv(const CsvTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot open for writing");
  out << table.render();
  out.close();
  if (!out) throw Error(path.string() + ": write failed");
}

CsvTable convergence_table(const ConvergenceReport& report) {
  CsvTable t{{"variant", "eps", "sup_error"}, {}};
  for (const auto& s : report.series)
    for (const auto& p : s.points) t.add({s.variant.name(), format_double(p.eps), format_double(p.error)});
  return t;
}

CsvTable convergence_summary(const ConvergenceReport& report) {
  CsvTable t{{"variant", "status", "rate", "intercept", "residual", "sign"}, {}};
  for (const auto& s : report.series) {
    const bool fitted = s.status == FitStatus::Fitted;
    t.add({s.variant.name(), to_string(s.status), fitted ? format_double(s.fit.rate) : "nan",
           fitted ? format_double(s.fit.intercept) : "nan",
           fitted ? format_double(s.fit.max_residual) : "nan", std::to_string(s.variant.sign)});
  }
  return t;
}

CsvTable solution_table(const SolutionField& field) {
  CsvTable t{{"x", "value", "provenance"}, {}};
  for (std::size_t i = 0; i < field.grid.size(); ++i)
    t.add({format_double(field.grid[i]), format_double(field.values[i]), to_string(field.provenance)});
  return t;
}

CsvTable cell_mass_csv(const CellMassTable& table) {
  CsvTable t{{"cell_index", "cell_lo", "cell_hi", "mc_mass", "exact_mass", "z"}, {}};
  for (const auto& r : table.rows)
    t.add({std::to_string(r.cell_index), format_double(r.lo), format_double(r.hi),
           format_double(r.mc_mass), format_double(r.exact_mass), format_double(r.z)});
  return t;
}

}  // namespace homog::io
