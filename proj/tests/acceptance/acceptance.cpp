// One PASS/FAIL line per acceptance criterion. Every tolerance, ladder and
// sample size is fixed here. Pass criterion numbers as arguments to run a subset.
// Exit status is nonzero if any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "homog/averaging.hpp"
#include "homog/convergence.hpp"
#include "homog/fk.hpp"
#include "homog/homsolver.hpp"

using namespace homog;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

// Criterion 1 and 2.
constexpr double kRawRuntime = 10.0;
constexpr double kCorrectedRuntime = 30.0;
constexpr double kCorrectedGain = 10.0;
// Criterion 3 and 4.
constexpr double kMomentTol = 1e-12;
// Criterion 5.
constexpr double kDefectTol = 1e-10;
// Criterion 6.
constexpr double kCepsTol = 1e-10;
constexpr double kExpansionTol = 1e-12;
// Criterion 7.
constexpr std::size_t kOracleFine = 20000;
constexpr std::size_t kOracleCoarse = 10000;
constexpr double kOracleTol = 1e-6;
constexpr double kOracleRatioMin = 3.5;
constexpr double kOracleRatioMax = 4.5;
// Criterion 8.
constexpr std::uint64_t kFkPaths = 100000;
constexpr double kFkDt = 1e-5;
constexpr double kFkHorizon = 0.25;
constexpr double kZMax = 4.0;
constexpr double kFkRuntime = 300.0;
// Criterion 9.
constexpr std::uint64_t kCellPaths = 100000;
constexpr double kCellHorizon = 0.05;
constexpr double kCellDt = 2e-5;
// Criterion 10.
constexpr double kSemigroupTol = 1e-10;
constexpr double kContractionTol = 1e-8;
constexpr double kBootstrapEps = 1.0 / 16;
constexpr double kBootstrapT = 1.0;
constexpr double kDeltaDt = 1e-5;
constexpr std::uint64_t kDeltaPaths = 4000;
constexpr std::uint64_t kSeed = 20240601;

PeriodicCoefficient main_coefficient() {
  return PeriodicCoefficient::from_reciprocal(FunctionSpec::trig(2.0, {0.0}, {1.0}));
}
PeriodicCoefficient symmetric_coefficient() {
  return PeriodicCoefficient::from_reciprocal(FunctionSpec::trig(2.0, {1.0}, {0.0}));
}
FunctionSpec sin_pi() { return FunctionSpec::trig(0.0, {0.0}, {1.0}, 2.0); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double fitted_rate(const ConvergenceReport& r, ErrorKind kind) {
  const auto* s = r.find(kind);
  return (s && s->status == FitStatus::Fitted) ? s->fit.rate : std::nan("");
}

double error_at(const ConvergenceReport& r, ErrorKind kind, double eps) {
  for (const auto& p : r.find(kind)->points)
    if (p.eps == eps) return p.error;
  return std::nan("");
}

Outcome raw_rate() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<ErrorVariant> vs{ErrorVariant::raw()};
  const auto r = sweep(main_coefficient(), sin_pi(), default_eps_ladder(), vs);
  const double rate = fitted_rate(r, ErrorKind::Raw);
  const double secs = seconds_since(t0);
  return {rate >= kRawRateMin && rate <= kRawRateMax && secs < kRawRuntime,
          fmt("raw rate %.4f in [%.2f, %.2f], %.2f s", rate, kRawRateMin, kRawRateMax, secs)};
}

Outcome corrected_rate() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<ErrorVariant> vs{ErrorVariant::raw(), ErrorVariant{ErrorKind::Corrected, 0}};
  const auto r = sweep(main_coefficient(), sin_pi(), default_eps_ladder(), vs);
  const double rate = fitted_rate(r, ErrorKind::Corrected);
  const double raw = error_at(r, ErrorKind::Raw, 1.0 / 64);
  const double cor = error_at(r, ErrorKind::Corrected, 1.0 / 64);
  const double secs = seconds_since(t0);
  return {rate >= kCorrectedRateMin && cor * kCorrectedGain <= raw && secs < kCorrectedRuntime,
          fmt("sign %+d, corrected rate %.4f >= %.2f, at eps=1/64 corrected %.3e vs raw %.3e, %.2f s",
              r.corrector_sign, rate, kCorrectedRateMin, cor, raw, secs)};
}

Outcome symmetric_case() {
  const auto a = symmetric_coefficient();
  const double m1 = moment_m1(a), m2 = moment_m2(a);
  const std::vector<ErrorVariant> vs{ErrorVariant::averaged()};
  const double rate = fitted_rate(sweep(a, sin_pi(), default_eps_ladder(), vs), ErrorKind::Averaged);
  return {std::abs(m1) <= kMomentTol && std::abs(m2) <= kMomentTol && rate >= kCorrectedRateMin,
          fmt("M1 %.2e, M2 %.2e, averaged rate %.4f >= %.2f", m1, m2, rate, kCorrectedRateMin)};
}

Outcome codim2_case() {
  const auto a = main_coefficient();
  const auto f = FunctionSpec::polynomial({1.0 / 6.0, -1.0, 1.0});
  const bool vanishes = corrector_vanishes(a, f);
  const std::vector<ErrorVariant> vs{ErrorVariant::averaged()};
  const double rate = fitted_rate(sweep(a, f, default_eps_ladder(), vs), ErrorKind::Averaged);
  return {vanishes && rate >= kCorrectedRateMin,
          fmt("corrector_vanishes %s, averaged rate %.4f >= %.2f", vanishes ? "true" : "false", rate,
              kCorrectedRateMin)};
}

Outcome quadratic_defect() {
  const auto one = PeriodicCoefficient::from_profile(FunctionSpec::constant(1.0));
  double worst = 0.0;
  for (double eps : default_eps_ladder()) {
    const auto p = ProblemInstance::make(one, FunctionSpec::constant(1.0), eps);
    const double e = sup_error(p, ErrorVariant::averaged(), default_grid_size(eps));
    worst = std::max(worst, std::abs(e - eps * eps / 24));
  }
  return {worst <= kDefectTol, fmt("max |sup_error - eps^2/24| %.2e <= %.0e", worst, kDefectTol)};
}

Outcome ceps_closed_form() {
  const auto a = main_coefficient();
  const auto one = FunctionSpec::constant(1.0);
  double worst = 0.0;
  for (double eps : {0.25, 0.125, 0.0625}) {
    const double c = c_eps(ProblemInstance::make(a, one, eps));
    worst = std::max(worst, std::abs(c - (0.5 - eps / (4 * kPi))));
  }
  const auto ex = c_eps_asymptotic(a, one);
  const double d0 = std::abs(ex.c0 - 0.5), d1 = std::abs(ex.c1 + 1 / (4 * kPi));
  return {worst <= kCepsTol && d0 <= kExpansionTol && d1 <= kExpansionTol,
          fmt("max |c_eps - closed form| %.2e, expansion errors (%.2e, %.2e)", worst, d0, d1)};
}

Outcome oracle_equivalence() {
  const auto p = ProblemInstance::make(main_coefficient(), sin_pi(), 1.0 / 16);
  const ExactSolution ue(p);
  const auto diff = [&](std::size_t n) {
    const auto fd = fd_oracle(p, n);
    double m = 0.0;
    for (std::size_t i = 0; i < fd.grid.size(); ++i) m = std::max(m, std::abs(fd.values[i] - ue(fd.grid[i])));
    return m;
  };
  const double coarse = diff(kOracleCoarse), fine = diff(kOracleFine);
  const double ratio = coarse / fine;
  return {fine <= kOracleTol && ratio >= kOracleRatioMin && ratio <= kOracleRatioMax,
          fmt("sup diff %.3e at N=%zu (<= %.0e), %.3e at N=%zu, ratio %.2f in [%.1f, %.1f]", fine, kOracleFine,
              kOracleTol, coarse, kOracleCoarse, ratio, kOracleRatioMin, kOracleRatioMax)};
}

Outcome feynman_kac() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto p = ProblemInstance::make(main_coefficient(), sin_pi(), 1.0 / 8);
  const auto e = fk_estimate_u_eps(p, {0.5, kFkHorizon, kFkDt, kFkPaths, kSeed});
  const double exact = u_eps(p, 0.5);
  const double z = e.z_score(exact);
  const double secs = seconds_since(t0);
  return {std::abs(z) <= kZMax && secs < kFkRuntime,
          fmt("MC %.6f +- %.2e vs u_eps(0.5) %.6f, z %.2f, %.1f s", e.mean, e.stderr_, exact, z, secs)};
}

Outcome cell_masses() {
  const PathParams pp{0.5, kCellHorizon, kCellDt, kCellPaths, kSeed};
  const auto table = cell_mass_check(main_coefficient(), 1.0 / 8, pp);
  const auto unit = cell_mass_check(PeriodicCoefficient::from_profile(FunctionSpec::constant(1.0)), 1.0 / 8, pp);
  bool identical = !unit.rows.empty();
  for (const auto& r : unit.rows) identical = identical && r.homogenized_mc_mass == r.mc_mass;
  std::string masses;
  for (const auto& r : table.rows) masses += fmt(" %.4f/%.4f", r.mc_mass, r.exact_mass);
  return {table.max_abs_z <= kZMax && identical,
          fmt("main max |z| %.2f <= %.0f (mc/exact:%s), constant a zero discrepancy %s, max |z| %.2f",
              table.max_abs_z, kZMax, masses.c_str(), identical ? "yes" : "no", unit.max_abs_z)};
}

Outcome semigroup_machinery() {
  const auto a = main_coefficient();
  const double abar = harmonic_mean(a);
  const auto p = ProblemInstance::make(a, sin_pi(), kBootstrapEps);
  const std::size_t n = default_grid_size(kBootstrapEps);
  const auto ue = ExactSolution(p).sample(n);
  const auto u = HomogenizedSolution(abar, p.f).sample(n);
  SolutionField phi = ue;
  for (std::size_t i = 0; i < phi.values.size(); ++i) phi.values[i] = std::abs(ue.values[i] - u.values[i]);

  const auto twice = heat_propagate(heat_propagate(phi, abar, 0.1), abar, 0.15);
  const auto once = heat_propagate(phi, abar, 0.25);
  double semigroup = 0.0;
  for (std::size_t i = 0; i < once.values.size(); ++i)
    semigroup = std::max(semigroup, std::abs(twice.values[i] - once.values[i]));

  const double c = contraction_constant(1.0, 1.0);
  const double c_err = std::abs(c - (1.0 - 4.0 / kPi * std::exp(-kPi * kPi)));

  const auto d = delta_estimate(p, {0.5, kBootstrapT, kDeltaDt, kDeltaPaths, kSeed});
  const auto b = bootstrap_bound(phi, d.delta, kBootstrapT, abar);
  std::string why;
  if (!b.hypothesis_holds && b.violation_x)
    why = fmt(" (hypothesis fails at x=%.4f by %.2e)", *b.violation_x, b.violation);
  return {semigroup <= kSemigroupTol && c_err <= kContractionTol && b.verified,
          fmt("semigroup %.2e, contraction error %.2e, delta %.3e +- %.1e, max phi %.3e <= bound %.3e: %s%s",
              semigroup, c_err, d.delta, d.stderr_, b.max_phi, b.implied_bound,
              b.verified ? "verified" : "not verified", why.c_str())};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const fs::path cfg = fs::path(HOMOG_CONFIG_DIR) / "main.json";
  const fs::path root = fs::temp_directory_path() / "homog1d_acceptance";
  const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> runs{
      {{"converge"}, {"converge.csv", "converge_summary.csv"}},
      {{"solve", "--eps", "0.0625"}, {"solve.csv"}},
      {{"cell-mass", "--eps", "0.125", "--paths", "2000", "--seed", "7"}, {"cell_mass.csv"}},
      {{"fk-verify", "--eps", "0.125", "--paths", "500", "--seed", "7"}, {"fk_verify.csv"}},
  };
  std::size_t compared = 0;
  for (const auto& [args, files] : runs) {
    std::vector<std::string> contents[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = root / (args[0] + std::to_string(rep));
      fs::remove_all(dir);
      std::vector<std::string> argv{args[0], cfg.string(), "--out", dir.string()};
      argv.insert(argv.end(), args.begin() + 1, args.end());
      std::ostringstream out, err;
      if (cli::run(argv, out, err) != cli::kExitOk) return {false, args[0] + " failed: " + err.str()};
      for (const auto& f : files) contents[rep].push_back(slurp(dir / f));
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
      if (contents[0][i].empty() || contents[0][i] != contents[1][i])
        return {false, files[i] + " differs between runs"};
      ++compared;
    }
  }
  return {true, fmt("%zu CSV files byte-identical across two runs", compared)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "raw linear rate", raw_rate},
      {2, "corrected quadratic rate", corrected_rate},
      {3, "symmetric coefficient", symmetric_case},
      {4, "codimension-2 right-hand side", codim2_case},
      {5, "exact quadratic defect", quadratic_defect},
      {6, "c_eps closed form", ceps_closed_form},
      {7, "oracle equivalence", oracle_equivalence},
      {8, "Feynman-Kac identity", feynman_kac},
      {9, "cell masses", cell_masses},
      {10, "semigroup and bootstrap", semigroup_machinery},
      {11, "determinism", determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
