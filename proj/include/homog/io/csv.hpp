#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "homog/convergence.hpp"
#include "homog/fk.hpp"

namespace homog::io {

/// Shortest decimal that survives a round trip: 17 significant digits.
std::string format_double(double x);

/// Header plus rows of already formatted cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string render() const;
};

/// Writes the table; I/O failures raise Error naming the path.
void write_csv(const CsvTable& table, const std::filesystem::path& path);

/// variant,eps,sup_error ordered by variant then decreasing eps.
CsvTable convergence_table(const ConvergenceReport& report);
/// variant,status,rate,intercept,residual,sign.
CsvTable convergence_summary(const ConvergenceReport& report);
/// x,value,provenance.
CsvTable solution_table(const SolutionField& field);
/// cell_index,cell_lo,cell_hi,mc_mass,exact_mass,z.
CsvTable cell_mass_csv(const CellMassTable& table);

}  // namespace homog::io
