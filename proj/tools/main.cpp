#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "approxrank/dimreduce.hpp"
#include "approxrank/errors.hpp"
#include "approxrank/linalg.hpp"
#include "approxrank/matrix.hpp"
#include "approxrank/norms.hpp"
#include "approxrank/oracle.hpp"
#include "approxrank/pipeline.hpp"

namespace {

using namespace approxrank;

constexpr int kMaxSide = 128;

void check_size(int rows, int cols) {
  if (rows > kMaxSide || cols > kMaxSide)
    throw ValidationError("matrices larger than 128x128 are not supported (dense SDP cost)");
}

RealMatrix load_real(const std::string& path) {
  RealMatrix m = read_real_matrix_file(path);
  check_size(m.rows, m.cols);
  return m;
}

SignMatrix load_sign(const std::string& path) {
  SignMatrix m = read_sign_matrix_file(path);
  check_size(m.rows, m.cols);
  return m;
}

int cmd_gamma2(const std::string& file, double tol) {
  const RealMatrix a = load_real(file);
  const NormCertificate cert = gamma2(a, tol);
  std::cout << std::setprecision(12);
  std::cout << "gamma2          " << cert.value << "\n";
  std::cout << "certificate gap " << cert.gap << "\n";
  std::cout << "lower (dual)    " << cert.lower << "\n";
  std::cout << "upper (primal)  " << cert.upper << "\n";
  std::cout << "dual witness    unit vectors v (" << cert.dual_v.size() << "), u ("
            << cert.dual_u.size() << "); trace_norm(A o v u^T) = " << cert.lower << "\n";
  return 0;
}

int cmd_gamma2_alpha(const std::string& file, double alpha, double tol,
                     const std::string& out) {
  const SignMatrix a = load_sign(file);
  const auto [cert, witness] = gamma2_alpha(a, ApproxBand(alpha), tol);
  std::cout << std::setprecision(12);
  std::cout << "gamma2_alpha    " << cert.value << "\n";
  std::cout << "certificate gap " << cert.gap << "\n";
  std::cout << "lower (dual)    " << cert.lower << "\n";
  std::cout << "upper (primal)  " << cert.upper << "\n";
  if (!out.empty()) {
    write_real_matrix_file(out, witness);
    std::cout << "witness matrix written to " << out << "\n";
  }
  return 0;
}

int cmd_nu(const std::string& file) {
  const RealMatrix a = load_real(file);
  const NormCertificate cert = nu(a);
  std::cout << std::setprecision(12);
  std::cout << "nu              " << cert.value << "\n";
  std::cout << "certificate gap " << cert.gap << "\n";
  std::cout << "decomposition   " << cert.decomposition->size() << " rank-one sign terms\n";
  for (const Layer& l : *cert.decomposition) {
    std::cout << "  " << (l.sign > 0 ? "+" : "-") << l.beta << " * [";
    for (std::size_t i = 0; i < l.x.size(); ++i) std::cout << (l.x[i] > 0 ? "+" : "-");
    std::cout << "] x [";
    for (std::size_t j = 0; j < l.y.size(); ++j) std::cout << (l.y[j] > 0 ? "+" : "-");
    std::cout << "]\n";
  }
  return 0;
}

int cmd_reduce(const std::string& file, double alpha, double t, std::optional<int> forced_k,
               std::uint64_t seed) {
  const SignMatrix a = load_sign(file);
  const auto [cert, witness] = gamma2_alpha(a, ApproxBand(alpha), 1e-8);
  double nu_quantity;
  if (a.rows + a.cols - 1 <= 15)
    nu_quantity = nu_alpha(a, ApproxBand(alpha)).value;
  else
    nu_quantity = nu_upper_bound(cert.value);
  const int k_plan = plan_k_prime(std::max(nu_quantity, 1.0), a.rows, a.cols, t);
  const int k_used = forced_k.value_or(k_plan);
  std::cout << std::setprecision(12);
  std::cout << "k_prime (planned, nu-based)   " << k_plan << "\n";
  std::cout << "k_prime (statement, gamma)    "
            << plan_k_prime_gamma(cert.value, a.rows, a.cols, t) << "\n";
  std::cout << "k_prime (used)                " << k_used << "\n";
  const ReductionPlan plan(t, k_used, seed);
  if (!forced_k && projection_skipped(plan, cert.factorization->inner_dim(), a.rows, a.cols)) {
    std::cout << "projection skipped: k_prime does not beat the trivial rank\n";
    std::cout << "trials 0, achieved error 0\n";
    return 0;
  }
  const LasVegasResult lv = project_las_vegas(*cert.factorization, witness, plan);
  std::cout << "trials          " << lv.trials << "\n";
  std::cout << "achieved error  " << lv.achieved_error << "\n";
  std::cout << "projected rank  " << numerical_rank(lv.factorization.product()) << "\n";
  return 0;
}

int cmd_pipeline(const std::string& file, double alpha, std::uint64_t seed,
                 std::optional<int> force_k, const std::string& out,
                 const std::string& out_matrix, bool timings) {
  const SignMatrix a = load_sign(file);
  PipelineConfig config;
  config.force_k = force_k;
  config.with_timings = timings;
  const ApproxResult result = approximate_rank_pipeline(a, alpha, seed, config);
  const std::string report = report_json(result);
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw ValidationError("cannot write '" + out + "'");
    os << report;
  }
  if (!out_matrix.empty()) write_real_matrix_file(out_matrix, result.b);
  std::cout << report;
  return 0;
}

int cmd_bounds(const std::string& file, double alpha) {
  const SignMatrix a = load_sign(file);
  const auto [lower, upper] = theorem1_bounds(a, alpha);
  std::cout << std::setprecision(12);
  std::cout << "rank lower bound  " << lower << "\n";
  std::cout << "rank upper bound  " << upper << "\n";
  return 0;
}

int cmd_verify(const std::string& a_file, const std::string& b_file, double alpha) {
  const SignMatrix a = load_sign(a_file);
  const RealMatrix b = load_real(b_file);
  const BandReport report = verify_band(a, b, alpha, 1e-8);
  std::cout << std::setprecision(12);
  std::cout << "band min  " << report.band_min << "\n";
  std::cout << "band max  " << report.band_max << "\n";
  std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
  if (!report.pass) {
    for (const auto& [i, j, v] : report.violations)
      std::cout << "  violation at (" << i << "," << j << "): " << v << "\n";
    return 1;
  }
  return 0;
}

int cmd_oracle(const std::string& file, std::optional<double> alpha) {
  const SignMatrix a = load_sign(file);
  std::cout << std::setprecision(12);
  if (a.rows + a.cols - 1 <= 15) {
    std::cout << "atoms (up to sign)  " << enumerate_atoms(a.rows, a.cols).size() << "\n";
    const NormCertificate cert = nu(a.to_real());
    std::cout << "exact nu            " << cert.value << "\n";
  } else {
    std::cout << "instance too large for exact atom enumeration\n";
  }
  if (a.rows <= 4 && a.cols <= 4) {
    const double al = alpha.value_or(2.0);
    std::cout << "rank_alpha == 1     " << (is_rank_alpha_one(a, al) ? "true" : "false")
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Factorization norms (gamma2, gamma2^alpha, nu) with certificates, and a "
      "randomized pipeline producing certified low-rank band approximations"};
  app.require_subcommand(1);

  std::string file, file_b, out, out_matrix;
  double alpha = 2.0, tol = 1e-8, t = 0.5;
  std::uint64_t seed = 0;
  std::optional<int> forced_k;
  bool timings = false;
  std::optional<double> oracle_alpha;

  auto* g2 = app.add_subcommand("gamma2", "gamma2 of a real matrix, with certificate");
  g2->add_option("file", file)->required();
  g2->add_option("--tol", tol);

  auto* g2a = app.add_subcommand("gamma2-alpha", "band-constrained gamma2 of a sign matrix");
  g2a->add_option("file", file)->required();
  g2a->add_option("--alpha", alpha)->required();
  g2a->add_option("--tol", tol);
  g2a->add_option("--out", out);

  auto* nu_cmd = app.add_subcommand("nu", "exact nu with rank-one sign decomposition");
  nu_cmd->add_option("file", file)->required();

  auto* red = app.add_subcommand("reduce", "random projection stage alone");
  red->add_option("file", file)->required();
  red->add_option("--alpha", alpha)->required();
  red->add_option("--t", t)->required();
  red->add_option("--k", forced_k);
  red->add_option("--seed", seed)->required();

  auto* pipe = app.add_subcommand("pipeline", "full approximation pipeline");
  pipe->add_option("file", file)->required();
  pipe->add_option("--alpha", alpha)->required();
  pipe->add_option("--seed", seed)->required();
  pipe->add_option("--force-k", forced_k);
  pipe->add_option("--out", out);
  pipe->add_option("--out-matrix", out_matrix);
  pipe->add_flag("--timings", timings);

  auto* bounds_cmd = app.add_subcommand("bounds", "closed-form rank sandwich");
  bounds_cmd->add_option("file", file)->required();
  bounds_cmd->add_option("--alpha", alpha)->required();

  auto* ver = app.add_subcommand("verify", "entrywise band check of an approximant");
  ver->add_option("A-file", file)->required();
  ver->add_option("B-file", file_b)->required();
  ver->add_option("--alpha", alpha)->required();

  auto* orc = app.add_subcommand("oracle", "tiny-instance ground truth");
  orc->add_option("file", file)->required();
  orc->add_option("--alpha", oracle_alpha);

  CLI11_PARSE(app, argc, argv);

  try {
    if (g2->parsed()) return cmd_gamma2(file, tol);
    if (g2a->parsed()) return cmd_gamma2_alpha(file, alpha, tol, out);
    if (nu_cmd->parsed()) return cmd_nu(file);
    if (red->parsed()) return cmd_reduce(file, alpha, t, forced_k, seed);
    if (pipe->parsed()) return cmd_pipeline(file, alpha, seed, forced_k, out, out_matrix, timings);
    if (bounds_cmd->parsed()) return cmd_bounds(file, alpha);
    if (ver->parsed()) return cmd_verify(file, file_b, alpha);
    if (orc->parsed()) return cmd_oracle(file, oracle_alpha);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
