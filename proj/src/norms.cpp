#include "approxrank/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>

#include "approxrank/errors.hpp"
#include "approxrank/linalg.hpp"
#include "approxrank/lp.hpp"
#include "approxrank/oracle.hpp"
#include "approxrank/sdp.hpp"

namespace approxrank {

ApproxBand::ApproxBand(double a) : alpha(a) {
  if (!(a > 1.0)) throw ValidationError("ApproxBand: alpha must exceed 1");
}

namespace {

double dominant_diag_scale(const RealMatrix& a) {
  return 2.0 * (1.0 + max_abs(a)) * std::max(a.rows, a.cols);
}

// Strictly feasible start [[lambda I, B],[B^T, lambda I]], psd by diagonal
// dominance; keeps the primal residuals at zero from the first iteration.
void set_feasible_start(SdpProblem& p, const RealMatrix& b) {
  const int m = b.rows, n = b.cols;
  const double lambda = p.init_scale;
  p.initial_z = lambda * RealMatrix::identity(m + n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      p.initial_z(i, m + j) = b(i, j);
      p.initial_z(m + j, i) = b(i, j);
    }
}

// Both gamma2 programs are solved in the equal-diagonal form: padding the
// diagonal with nonnegative amounts keeps Z psd and fixes neither the
// off-diagonal block nor feasibility, so the common diagonal value equals
// the optimal t and the free scalar disappears.  The objective becomes the
// average diagonal entry.
void append_equal_diag_rows(SdpProblem& p) {
  const int d = p.block_dim;
  for (int k = 1; k < d; ++k) {
    SdpConstraint c;
    c.z_coeffs.push_back({0, 0, -1.0});
    c.z_coeffs.push_back({k, k, 1.0});
    c.rel = Relation::Equal;
    c.bound = 0.0;
    p.constraints.push_back(std::move(c));
  }
  for (int k = 0; k < d; ++k) p.z_objective.push_back({k, k, 1.0 / d});
}

// Unit vectors from the diagonal of the dual slack matrix.  At the dual
// optimum trace_norm(A . v u^T) meets the optimal value; any unit pair
// still certifies a valid lower bound.
void dual_pair_from_diag_multipliers(const std::vector<double>& lambda, int m, int n,
                                     std::vector<double>& v, std::vector<double>& u) {
  v.assign(m, 0.0);
  u.assign(n, 0.0);
  double nv = 0.0, nu_ = 0.0;
  for (int i = 0; i < m; ++i) {
    v[i] = std::sqrt(std::max(lambda[i], 0.0));
    nv += v[i] * v[i];
  }
  for (int j = 0; j < n; ++j) {
    u[j] = std::sqrt(std::max(lambda[m + j], 0.0));
    nu_ += u[j] * u[j];
  }
  if (nv <= 0.0 || nu_ <= 0.0) {
    // Degenerate multipliers; fall back to indicator vectors.
    v.assign(m, 0.0);
    u.assign(n, 0.0);
    v[0] = 1.0;
    u[0] = 1.0;
    return;
  }
  for (double& x : v) x /= std::sqrt(nv);
  for (double& x : u) x /= std::sqrt(nu_);
}

double trace_norm_witness(const RealMatrix& a, const std::vector<double>& v,
                          const std::vector<double>& u) {
  RealMatrix h(a.rows, a.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) h(i, j) = a(i, j) * v[i] * u[j];
  return trace_norm(h);
}

// Indicator pair at the largest |A| entry; certifies gamma2 >= max |A[i,j]|.
double indicator_bound(const RealMatrix& a, std::vector<double>& v, std::vector<double>& u) {
  int bi = 0, bj = 0;
  double best = -1.0;
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j)
      if (std::fabs(a(i, j)) > best) {
        best = std::fabs(a(i, j));
        bi = i;
        bj = j;
      }
  v.assign(a.rows, 0.0);
  u.assign(a.cols, 0.0);
  v[bi] = 1.0;
  u[bj] = 1.0;
  return best;
}

std::pair<std::vector<int>, std::vector<int>> atom_vectors(const SignMatrix& t) {
  std::vector<int> x(t.rows), y(t.cols);
  for (int i = 0; i < t.rows; ++i) x[i] = t.sign(i, 0);
  for (int j = 0; j < t.cols; ++j) y[j] = t.sign(0, j);
  return {x, y};
}

// max over rank-one sign patterns of |x^T G y|, enumerating the smaller side.
double atom_norm(const RealMatrix& g) {
  const bool flip = g.rows > g.cols;
  const RealMatrix& w = g;  // logical transpose below when flip
  const int m = flip ? g.cols : g.rows;
  const int n = flip ? g.rows : g.cols;
  const int half = 1 << (m - 1);
  double best = 0.0;
  for (int bits = 0; bits < half; ++bits) {
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      double z = 0.0;
      for (int i = 0; i < m; ++i) {
        const int xi = (i == 0) ? 1 : (((bits >> (i - 1)) & 1) ? -1 : 1);
        z += xi * (flip ? w(j, i) : w(i, j));
      }
      total += std::fabs(z);
    }
    best = std::max(best, total);
  }
  return best;
}

// Violating atoms for the pricing step, strongest first; value = |x^T G y|.
struct PricedAtom {
  double value = 0.0;
  std::vector<int> x;
  std::vector<int> y;
};

std::vector<PricedAtom> price_atoms(const RealMatrix& g, double threshold, int max_count) {
  const bool flip = g.rows > g.cols;
  const int m = flip ? g.cols : g.rows;
  const int n = flip ? g.rows : g.cols;
  const int half = 1 << (m - 1);
  std::vector<PricedAtom> found;
  for (int bits = 0; bits < half; ++bits) {
    std::vector<int> x(m, 1);
    for (int i = 1; i < m; ++i) x[i] = ((bits >> (i - 1)) & 1) ? -1 : 1;
    double total = 0.0;
    std::vector<int> y(n, 1);
    for (int j = 0; j < n; ++j) {
      double z = 0.0;
      for (int i = 0; i < m; ++i) z += x[i] * (flip ? g(j, i) : g(i, j));
      y[j] = z < 0.0 ? -1 : 1;
      total += std::fabs(z);
    }
    if (total <= threshold) continue;
    PricedAtom atom;
    atom.value = total;
    atom.x = flip ? y : x;
    atom.y = flip ? x : y;
    if (atom.x[0] < 0) {  // canonical form: x[0] = +1, sign carried by y
      for (int& v : atom.x) v = -v;
      for (int& v : atom.y) v = -v;
    }
    found.push_back(std::move(atom));
  }
  std::sort(found.begin(), found.end(),
            [](const PricedAtom& a, const PricedAtom& b) { return a.value > b.value; });
  if (static_cast<int>(found.size()) > max_count) found.resize(max_count);
  return found;
}

}  // namespace

NormCertificate gamma2(const RealMatrix& a, double tol) {
  check_finite(a, "gamma2");
  if (max_abs(a) == 0.0) throw ValidationError("gamma2: matrix must be nonzero");
  const int m = a.rows, n = a.cols, d = m + n;

  SdpProblem p;
  p.block_dim = d;
  p.init_scale = dominant_diag_scale(a);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      SdpConstraint c;
      c.z_coeffs.push_back({i, m + j, 0.5});
      c.rel = Relation::Equal;
      c.bound = a(i, j);
      p.constraints.push_back(std::move(c));
    }
  append_equal_diag_rows(p);
  set_feasible_start(p, a);

  const SdpSolution sol = solve_sdp(p, tol);

  NormCertificate cert;
  cert.solver_gap = sol.duality_gap;
  cert.iterations = sol.iterations;

  cert.factorization = factor_from_gram(sol.z, m, n, tol);
  cert.upper = cert.factorization->max_col_norm_x() * cert.factorization->max_col_norm_y();

  std::vector<double> lambda(d, 0.0);
  for (int k = 0; k < d; ++k) lambda[k] = std::max(0.0, sol.dual_slack(k, k));
  std::vector<double> v, u;
  dual_pair_from_diag_multipliers(lambda, m, n, v, u);
  double lower = trace_norm_witness(a, v, u);

  std::vector<double> vi, ui;
  const double ind = indicator_bound(a, vi, ui);
  if (ind > lower) {
    lower = ind;
    v = vi;
    u = ui;
  }
  cert.lower = lower;
  cert.dual_v = v;
  cert.dual_u = u;
  cert.value = std::clamp(sol.objective, std::min(cert.lower, cert.upper), cert.upper);
  cert.gap = cert.upper - cert.lower;
  if (cert.gap < -1e-8) throw NumericalFailure("gamma2: certificate bounds crossed");
  return cert;
}

std::pair<NormCertificate, RealMatrix> gamma2_alpha(const SignMatrix& a, const ApproxBand& band,
                                                    double tol) {
  const int m = a.rows, n = a.cols, d = m + n;
  const double alpha = band.alpha;

  SdpProblem p;
  p.block_dim = d;
  p.init_scale = dominant_diag_scale(a.to_real());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      SdpConstraint c;
      c.z_coeffs.push_back({i, m + j, 0.5 * a.sign(i, j)});
      c.rel = Relation::GreaterEq;
      c.bound = 1.0;
      p.constraints.push_back(std::move(c));
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      SdpConstraint c;
      c.z_coeffs.push_back({i, m + j, 0.5 * a.sign(i, j)});
      c.rel = Relation::LessEq;
      c.bound = alpha;
      p.constraints.push_back(std::move(c));
    }
  append_equal_diag_rows(p);
  set_feasible_start(p, (0.5 * (1.0 + alpha)) * a.to_real());

  const SdpSolution sol = solve_sdp(p, tol);

  RealMatrix witness(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) witness(i, j) = sol.z(i, m + j);

  NormCertificate cert;
  cert.solver_gap = sol.duality_gap;
  cert.iterations = sol.iterations;
  cert.factorization = factor_from_gram(sol.z, m, n, tol);
  cert.upper = cert.factorization->max_col_norm_x() * cert.factorization->max_col_norm_y();

  // Certified lower bound: repair the dual multipliers into an exactly
  // feasible dual point, then evaluate its objective.
  const int mn = m * n;
  std::vector<double> mu(mn), eta(mn), lambda(d);
  for (int k = 0; k < mn; ++k) mu[k] = std::max(0.0, sol.dual[k]);
  for (int k = 0; k < mn; ++k) eta[k] = std::max(0.0, -sol.dual[mn + k]);
  for (int k = 0; k < d; ++k) lambda[k] = std::max(0.0, sol.dual_slack(k, k));

  RealMatrix dual_slack(d, d);
  for (int k = 0; k < d; ++k) dual_slack(k, k) = lambda[k];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      const double bij = a.sign(i, j) * (mu[i * n + j] - eta[i * n + j]);
      dual_slack(i, m + j) = -0.5 * bij;
      dual_slack(m + j, i) = -0.5 * bij;
    }
  const EigResult eig = eigen_symmetric(dual_slack);
  const double shift = std::max(0.0, -eig.eigenvalues.back());
  double lam_sum = 0.0;
  for (double l : lambda) lam_sum += l;
  lam_sum += shift * d;
  double certified = 0.0;
  if (lam_sum > 1e-300) {
    double obj = 0.0;
    for (int k = 0; k < mn; ++k) obj += mu[k] - alpha * eta[k];
    certified = obj / lam_sum;
  }
  cert.lower = std::max(certified, 1.0);  // any in-band matrix has entries of magnitude >= 1
  cert.value = std::clamp(sol.objective, std::min(cert.lower, cert.upper), cert.upper);
  cert.gap = cert.upper - cert.lower;
  if (cert.gap < -1e-8) throw NumericalFailure("gamma2_alpha: certificate bounds crossed");
  return {cert, witness};
}

namespace {

void size_gate(int m, int n, const char* what) {
  if (m + n - 1 > 15) throw TooLarge(std::string(what) + ": 2^(m+n-1) exceeds 2^15");
}

}  // namespace

NormCertificate nu(const RealMatrix& a) {
  check_finite(a, "nu");
  const int m = a.rows, n = a.cols, mn = m * n;
  size_gate(m, n, "nu");
  const std::vector<SignMatrix> atoms = enumerate_atoms(m, n);

  std::vector<double> rhs(mn);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) rhs[i * n + j] = a(i, j);
  SimplexSolver solver(rhs);
  std::vector<double> col(mn);
  for (const SignMatrix& t : atoms) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) col[i * n + j] = t.sign(i, j);
    solver.add_column(col, 1.0);
    for (double& v : col) v = -v;
    solver.add_column(col, 1.0);
  }
  const LpSolution lp = solver.optimize();
  if (lp.status != LpStatus::Optimal) throw NumericalFailure("nu: atom LP did not solve");

  NormCertificate cert;
  cert.iterations = lp.iterations;

  // Decomposition and its reconstruction slack.
  std::vector<Layer> layers;
  RealMatrix recon(m, n);
  double total = 0.0;
  for (std::size_t idx = 0; idx < atoms.size(); ++idx) {
    const double coeff = lp.x[2 * idx] - lp.x[2 * idx + 1];
    if (std::fabs(coeff) < 1e-12) continue;
    const auto [xv, yv] = atom_vectors(atoms[idx]);
    Layer layer;
    layer.beta = std::fabs(coeff);
    layer.sign = coeff < 0.0 ? -1 : 1;
    layer.x.assign(xv.begin(), xv.end());
    layer.y.assign(yv.begin(), yv.end());
    layers.push_back(std::move(layer));
    total += std::fabs(coeff);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) recon(i, j) += coeff * atoms[idx].sign(i, j);
  }
  double recon_err = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) recon_err += std::fabs(recon(i, j) - a(i, j));
  cert.upper = total + recon_err;  // nu(E_ij) <= 1 absorbs the residual
  cert.decomposition = std::move(layers);

  // Dual witness, rescaled into exact feasibility.
  RealMatrix w(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) w(i, j) = lp.dual[i * n + j];
  const double wt = atom_norm(w);
  if (wt > 1.0 + 1e-7) throw NumericalFailure("nu: dual witness infeasible beyond tolerance");
  const double scale = std::max(1.0, wt);
  double dual_obj = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) dual_obj += a(i, j) * w(i, j);
  cert.lower = dual_obj / scale;
  cert.dual_matrix = (1.0 / scale) * w;
  cert.value = std::clamp(lp.objective, std::min(cert.lower, cert.upper), cert.upper);
  cert.gap = cert.upper - cert.lower;
  cert.solver_gap = lp.objective - dual_obj;
  if (cert.gap < -1e-8) throw NumericalFailure("nu: certificate bounds crossed");
  return cert;
}

NormCertificate nu_alpha(const SignMatrix& a, const ApproxBand& band) {
  const int m = a.rows, n = a.cols, mn = m * n;
  size_gate(m, n, "nu_alpha");
  const double alpha = band.alpha;

  // Rows 0..mn-1: A.M - s_lo = 1 ; rows mn..2mn-1: A.M + s_up = alpha.
  // The rhs is statically perturbed toward the band interior: that breaks
  // the degenerate vertices this master otherwise piles up, every perturbed
  // solution is still feasible for the true band, and the dual bound below
  // is evaluated against the unperturbed rhs.
  std::vector<double> rhs(2 * mn);
  for (int k = 0; k < 2 * mn; ++k) {
    const double jitter = 1e-7 * (1.0 + ((k * 2654435761u) % 997) / 997.0);
    rhs[k] = k < mn ? 1.0 + jitter : alpha - jitter;
  }
  SimplexSolver solver(rhs);

  struct AtomCols {
    std::vector<int> x, y;
    int col_plus = -1;  // the matching minus column sits at col_plus + 1
  };
  std::vector<AtomCols> pool;
  std::set<std::uint64_t> pool_keys;
  auto atom_key = [&](const std::vector<int>& xv, const std::vector<int>& yv) {
    std::uint64_t key = 0;
    for (int i = 0; i < m; ++i) key = 2 * key + (xv[i] > 0);
    for (int j = 0; j < n; ++j) key = 2 * key + (yv[j] > 0);
    return key;
  };
  auto add_atom = [&](const std::vector<int>& xv, const std::vector<int>& yv) {
    if (!pool_keys.insert(atom_key(xv, yv)).second) return false;
    std::vector<double> col(2 * mn);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        const double e = a.sign(i, j) * xv[i] * yv[j];
        col[i * n + j] = e;
        col[mn + i * n + j] = e;
      }
    const int plus = solver.add_column(col, 1.0);
    for (double& v : col) v = -v;
    solver.add_column(col, 1.0);
    pool.push_back({xv, yv, plus});
    return true;
  };

  const bool small = (m + n - 2) <= 12;
  if (small) {
    for (const SignMatrix& t : enumerate_atoms(m, n)) {
      const auto [xv, yv] = atom_vectors(t);
      add_atom(xv, yv);
    }
  } else {
    // Walsh-like spanning seed: truncated rows of a Sylvester-type matrix.
    for (int ai = 0; ai < m; ++ai)
      for (int bj = 0; bj < n; ++bj) {
        std::vector<int> xv(m), yv(n);
        for (int i = 0; i < m; ++i) xv[i] = (__builtin_popcount(ai & i) % 2) ? -1 : 1;
        for (int j = 0; j < n; ++j) yv[j] = (__builtin_popcount(bj & j) % 2) ? -1 : 1;
        add_atom(xv, yv);
      }
  }
  std::vector<double> col(2 * mn, 0.0);
  // surplus / slack columns
  for (int k = 0; k < 2 * mn; ++k) {
    std::fill(col.begin(), col.end(), 0.0);
    col[k] = k < mn ? -1.0 : 1.0;
    solver.add_column(col, 0.0);
  }

  LpSolution lp = solver.optimize();
  if (lp.status != LpStatus::Optimal) throw NumericalFailure("nu_alpha: master LP did not solve");

  // Column generation.  The master's dual accuracy bottoms out around 1e-7
  // on degenerate plateaus, so the entry threshold sits above that; the
  // certified lower bound absorbs whatever slack remains.
  double atom_max = 0.0;
  for (int round = 0; round < 1024; ++round) {
    RealMatrix g(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        g(i, j) = a.sign(i, j) * (lp.dual[i * n + j] + lp.dual[mn + i * n + j]);
    const std::vector<PricedAtom> priced = price_atoms(g, 1.0 + 1e-7, 8);
    atom_max = priced.empty() ? atom_norm(g) : priced.front().value;
    if (priced.empty()) break;
    if (small) break;  // all atoms already present; the sweep is the certificate
    bool added = false;
    for (const PricedAtom& atom : priced) added = add_atom(atom.x, atom.y) || added;
    if (!added) break;  // every violating atom is already priced in: a dual plateau
    lp = solver.optimize();
    if (lp.status != LpStatus::Optimal)
      throw NumericalFailure("nu_alpha: master LP did not solve after pricing");
  }
  if (atom_max > 1.0 + 1e-4)
    throw NumericalFailure("nu_alpha: pricing certificate violated at termination");

  NormCertificate cert;
  cert.iterations = lp.iterations;
  std::vector<Layer> layers;
  for (const AtomCols& atom : pool) {
    const double coeff = lp.x[atom.col_plus] - lp.x[atom.col_plus + 1];
    if (std::fabs(coeff) < 1e-12) continue;
    Layer layer;
    layer.beta = std::fabs(coeff);
    layer.sign = coeff < 0.0 ? -1 : 1;
    layer.x.assign(atom.x.begin(), atom.x.end());
    layer.y.assign(atom.y.begin(), atom.y.end());
    layers.push_back(std::move(layer));
  }
  cert.decomposition = std::move(layers);
  cert.upper = lp.objective;

  // Certified lower bound from the sign-repaired dual point, priced against
  // the unperturbed band bounds.
  RealMatrix g_rep(m, n);
  double dual_obj = 0.0;
  for (int k = 0; k < mn; ++k) {
    const double yl = std::max(lp.dual[k], 0.0);
    const double yu = std::min(lp.dual[mn + k], 0.0);
    dual_obj += yl + alpha * yu;
    g_rep(k / n, k % n) = a.sign(k / n, k % n) * (yl + yu);
  }
  const double scale = std::max(1.0, atom_norm(g_rep));
  cert.lower = std::max(dual_obj / scale, 1.0);
  cert.value = std::clamp(lp.objective, std::min(cert.lower, cert.upper), cert.upper);
  cert.gap = cert.upper - cert.lower;
  cert.solver_gap = lp.objective - dual_obj;
  return cert;
}

double nu_upper_bound(double g2) {
  if (g2 < 0.0) throw ValidationError("nu_upper_bound: argument must be nonnegative");
  return 2.0 * g2;
}

double nu_upper_bound_grothendieck(double g2) {
  if (g2 < 0.0) throw ValidationError("nu_upper_bound: argument must be nonnegative");
  return GrothendieckConstants::k_hi * g2;
}

double rank_lower_bound(const SignMatrix& a, const ApproxBand& band, double tol) {
  const NormCertificate cert = gamma2_alpha(a, band, tol).first;
  return cert.lower * cert.lower / (band.alpha * band.alpha);
}

}  // namespace approxrank
