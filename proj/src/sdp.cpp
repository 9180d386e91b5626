#include "approxrank/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "approxrank/errors.hpp"
#include "approxrank/linalg.hpp"

namespace approxrank {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sym_dot(const std::vector<SdpCoeff>& f, const RealMatrix& m) {
  double s = 0.0;
  for (const SdpCoeff& e : f) s += e.value * m(e.row, e.col) * (e.row == e.col ? 1.0 : 2.0);
  return s;
}

void sym_axpy(const std::vector<SdpCoeff>& f, double coef, RealMatrix& m) {
  for (const SdpCoeff& e : f) {
    m(e.row, e.col) += coef * e.value;
    if (e.row != e.col) m(e.col, e.row) += coef * e.value;
  }
}

// W * F * W for sparse symmetric F, dense symmetric W.
RealMatrix scale_both_sides(const std::vector<SdpCoeff>& f, const RealMatrix& w) {
  const int d = w.rows;
  RealMatrix k(d, d);
  for (const SdpCoeff& e : f) {
    for (int a = 0; a < d; ++a) {
      const double war = w(a, e.row) * e.value;
      const double wac = w(a, e.col) * e.value;
      for (int b = 0; b < d; ++b) {
        if (e.row == e.col) {
          k(a, b) += war * w(e.col, b);
        } else {
          k(a, b) += war * w(e.col, b) + wac * w(e.row, b);
        }
      }
    }
  }
  return k;
}

RealMatrix symmetrize(const RealMatrix& m) {
  RealMatrix s(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
  return s;
}

// Q * diag(g(lambda)) * Q^T from an eigendecomposition.
RealMatrix eig_apply(const EigResult& eig, double (*fn)(double)) {
  const int n = eig.q.rows;
  RealMatrix out(n, n);
  for (int k = 0; k < n; ++k) {
    const double g = fn(eig.eigenvalues[k]);
    if (g == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const double qik = eig.q(i, k) * g;
      for (int j = 0; j < n; ++j) out(i, j) += qik * eig.q(j, k);
    }
  }
  return out;
}

double sqrt_clamped(double x) { return std::sqrt(std::max(x, 0.0)); }
double inv_sqrt_clamped(double x) { return 1.0 / std::sqrt(std::max(x, 1e-300)); }
double inv_clamped(double x) { return 1.0 / std::max(x, 1e-300); }

// Largest step a with X + a*D psd, given X spd.  Falls back to an
// eigenvalue route when X sits numerically on the cone boundary.
double max_psd_step(const RealMatrix& x, const RealMatrix& dx) {
  const int d = x.rows;
  RealMatrix l;
  RealMatrix xr = x;
  if (!cholesky(xr, l)) {
    const EigResult ex = eigen_symmetric(x);
    const double lmax = std::max(ex.eigenvalues.front(), 1e-300);
    RealMatrix inv_half(d, d);
    for (int k = 0; k < d; ++k) {
      const double lam = std::max(ex.eigenvalues[k], 1e-16 * lmax);
      const double g = 1.0 / std::sqrt(lam);
      for (int i = 0; i < d; ++i) {
        const double qik = ex.q(i, k) * g;
        for (int j = 0; j < d; ++j) inv_half(i, j) += qik * ex.q(j, k);
      }
    }
    const EigResult ed = eigen_symmetric(symmetrize(inv_half * dx * inv_half));
    const double lam_min = ed.eigenvalues.back();
    if (lam_min >= -1e-16) return kInf;
    return -1.0 / lam_min;
  }
  // D' = L^-1 dx L^-T
  RealMatrix t(d, d);
  for (int col = 0; col < d; ++col) {
    std::vector<double> v(d);
    for (int i = 0; i < d; ++i) v[i] = dx(i, col);
    for (int i = 0; i < d; ++i) {
      for (int k = 0; k < i; ++k) v[i] -= l(i, k) * v[k];
      v[i] /= l(i, i);
    }
    for (int i = 0; i < d; ++i) t(i, col) = v[i];
  }
  RealMatrix dprime(d, d);
  for (int row = 0; row < d; ++row) {
    std::vector<double> v(d);
    for (int j = 0; j < d; ++j) v[j] = t(row, j);
    for (int i = 0; i < d; ++i) {
      for (int k = 0; k < i; ++k) v[i] -= l(i, k) * v[k];
      v[i] /= l(i, i);
    }
    for (int j = 0; j < d; ++j) dprime(row, j) = v[j];
  }
  const EigResult eig = eigen_symmetric(symmetrize(dprime));
  const double lam_min = eig.eigenvalues.back();
  if (lam_min >= -1e-16) return kInf;
  return -1.0 / lam_min;
}

}  // namespace

SdpSolution solve_sdp(const SdpProblem& prob, double tol) {
  const int d = prob.block_dim;
  const int nf = prob.num_scalars;
  const int p = static_cast<int>(prob.constraints.size());
  if (d <= 0) throw ValidationError("sdp: block dimension must be positive");
  if (nf != static_cast<int>(prob.scalar_objective.size()))
    throw ValidationError("sdp: scalar objective length mismatch");
  for (const SdpConstraint& c : prob.constraints)
    for (const SdpCoeff& e : c.z_coeffs)
      if (e.row < 0 || e.col < 0 || e.row >= d || e.col >= d || e.row > e.col)
        throw ValidationError("sdp: coefficient outside the upper triangle");

  // Slack slots for inequality rows.
  std::vector<int> slot(p, -1);
  std::vector<double> sigma(p, 0.0);
  int n_diag = 0;
  for (int i = 0; i < p; ++i) {
    if (prob.constraints[i].rel == Relation::LessEq) {
      slot[i] = n_diag++;
      sigma[i] = 1.0;
    } else if (prob.constraints[i].rel == Relation::GreaterEq) {
      slot[i] = n_diag++;
      sigma[i] = -1.0;
    }
  }

  double b_max = 0.0, c_max = 0.0;
  for (const SdpConstraint& c : prob.constraints) b_max = std::max(b_max, std::fabs(c.bound));
  for (double v : prob.scalar_objective) c_max = std::max(c_max, std::fabs(v));
  for (const SdpCoeff& e : prob.z_objective) c_max = std::max(c_max, std::fabs(e.value));
  RealMatrix c_dense(d, d);
  sym_axpy(prob.z_objective, 1.0, c_dense);

  const double eta_p = prob.init_scale > 0.0
                           ? prob.init_scale
                           : std::max({10.0, 2.0 * (1.0 + b_max), std::sqrt(double(d))});
  const double eta_d = std::max({10.0, 2.0 * (1.0 + c_max), std::sqrt(double(d))});

  RealMatrix x = eta_p * RealMatrix::identity(d);
  RealMatrix s = eta_d * RealMatrix::identity(d);
  std::vector<double> x_diag(n_diag, eta_p), s_diag(n_diag, eta_d);
  std::vector<double> y(p, 0.0), u(nf, 0.0);

  // The multiplier component along the scalar columns is pinned exactly:
  // start with G^T y = c_f and keep every step inside null(G^T), so the
  // free-variable part of dual feasibility never drifts.
  RealMatrix g_cols(std::max(p, 1), std::max(nf, 1));
  RealMatrix l_gtg;
  if (nf > 0) {
    for (int i = 0; i < p; ++i)
      for (const ScalarCoeff& sc : prob.constraints[i].scalar_coeffs)
        g_cols(i, sc.index) = sc.value;
    RealMatrix gtg(nf, nf);
    for (int a = 0; a < nf; ++a)
      for (int b = 0; b < nf; ++b) {
        double v = 0.0;
        for (int i = 0; i < p; ++i) v += g_cols(i, a) * g_cols(i, b);
        gtg(a, b) = v;
      }
    if (!cholesky(gtg, l_gtg))
      throw ValidationError("sdp: scalar columns are linearly dependent");
  }
  auto restore_scalar_rows = [&](std::vector<double>& yv) {
    if (nf == 0) return;
    std::vector<double> resid(nf, 0.0);
    for (int a = 0; a < nf; ++a) {
      double v = prob.scalar_objective[a];
      for (int i = 0; i < p; ++i) v -= g_cols(i, a) * yv[i];
      resid[a] = v;
    }
    const std::vector<double> coef = cholesky_solve(l_gtg, resid);
    for (int i = 0; i < p; ++i)
      for (int a = 0; a < nf; ++a) yv[i] += g_cols(i, a) * coef[a];
  };
  auto project_null_gt = [&](std::vector<double>& dyv) {
    if (nf == 0) return;
    std::vector<double> resid(nf, 0.0);
    for (int a = 0; a < nf; ++a) {
      double v = 0.0;
      for (int i = 0; i < p; ++i) v += g_cols(i, a) * dyv[i];
      resid[a] = v;
    }
    const std::vector<double> coef = cholesky_solve(l_gtg, resid);
    for (int i = 0; i < p; ++i)
      for (int a = 0; a < nf; ++a) dyv[i] -= g_cols(i, a) * coef[a];
  };
  restore_scalar_rows(y);

  if (x.same_shape(prob.initial_z)) {
    x = prob.initial_z;
    if (static_cast<int>(prob.initial_scalars.size()) == nf) u = prob.initial_scalars;
    // Slacks that make the inequality rows hold exactly; rows whose implied
    // slack is not safely interior fall back to the default.
    for (int i = 0; i < p; ++i) {
      if (slot[i] < 0) continue;
      const SdpConstraint& c = prob.constraints[i];
      double lhs = sym_dot(c.z_coeffs, x);
      for (const ScalarCoeff& sc : c.scalar_coeffs) lhs += sc.value * u[sc.index];
      const double implied = sigma[i] * (c.bound - lhs);
      x_diag[slot[i]] = implied > 1e-8 ? implied : eta_p;
    }
  }

  const double total_dim = d + n_diag;
  int tiny_steps = 0;

  SdpSolution sol;
  for (int iter = 0; iter < prob.max_iterations; ++iter) {
    restore_scalar_rows(y);
    // Residuals.
    std::vector<double> rp(p);
    double pinf = 0.0;
    for (int i = 0; i < p; ++i) {
      const SdpConstraint& c = prob.constraints[i];
      double lhs = sym_dot(c.z_coeffs, x);
      if (slot[i] >= 0) lhs += sigma[i] * x_diag[slot[i]];
      for (const ScalarCoeff& sc : c.scalar_coeffs) lhs += sc.value * u[sc.index];
      rp[i] = c.bound - lhs;
      pinf = std::max(pinf, std::fabs(rp[i]));
    }
    RealMatrix rd_dense = c_dense;
    for (int i = 0; i < p; ++i) sym_axpy(prob.constraints[i].z_coeffs, -y[i], rd_dense);
    rd_dense = rd_dense - s;
    std::vector<double> rd_diag(n_diag);
    for (int i = 0; i < p; ++i)
      if (slot[i] >= 0) rd_diag[slot[i]] = -sigma[i] * y[i] - s_diag[slot[i]];
    std::vector<double> rf(prob.scalar_objective);
    for (int i = 0; i < p; ++i)
      for (const ScalarCoeff& sc : prob.constraints[i].scalar_coeffs)
        rf[sc.index] -= sc.value * y[i];

    double dinf = max_abs(rd_dense);
    for (double v : rd_diag) dinf = std::max(dinf, std::fabs(v));
    for (double v : rf) dinf = std::max(dinf, std::fabs(v));

    double pobj = sym_dot(prob.z_objective, x);
    for (int k = 0; k < nf; ++k) pobj += prob.scalar_objective[k] * u[k];
    double dobj = 0.0;
    for (int i = 0; i < p; ++i) dobj += y[i] * prob.constraints[i].bound;

    double mu = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) mu += x(i, j) * s(i, j);
    for (int k = 0; k < n_diag; ++k) mu += x_diag[k] * s_diag[k];
    mu /= total_dim;

    const double gap_rel = std::fabs(pobj - dobj) / (1.0 + std::fabs(pobj) + std::fabs(dobj));
    const double pinf_rel = pinf / (1.0 + b_max);
    const double dinf_rel = dinf / (1.0 + c_max);
    const double mu_rel = mu * total_dim / (1.0 + std::fabs(pobj) + std::fabs(dobj));

    if (std::getenv("APPROXRANK_SDP_TRACE"))
      std::fprintf(stderr, "it %3d  gap %.2e  pinf %.2e  dinf %.2e  mu %.2e\n", iter, gap_rel,
                   pinf_rel, dinf_rel, mu_rel);

    if (gap_rel <= tol && pinf_rel <= tol && dinf_rel <= tol && mu_rel <= 10.0 * tol) {
      sol.iterations = iter;
      break;
    }
    if (iter == prob.max_iterations - 1)
      throw NumericalFailure("sdp: iteration cap reached without convergence");

    // Divergence heuristics.
    double y_max = 0.0;
    for (double v : y) y_max = std::max(y_max, std::fabs(v));
    if (std::fabs(pobj) > 1e12 * (1.0 + b_max + c_max) && pinf_rel < 1e-6)
      throw Unbounded("sdp: primal objective diverging");
    if (y_max > 1e12 * (1.0 + b_max + c_max) && dinf_rel < 1e-6)
      throw Infeasible("sdp: dual diverging, primal likely infeasible");

    // Nesterov-Todd scaling point.
    const EigResult eig_s = eigen_symmetric(s);
    const RealMatrix s_half = eig_apply(eig_s, sqrt_clamped);
    const RealMatrix s_inv_half = eig_apply(eig_s, inv_sqrt_clamped);
    const RealMatrix s_inv = eig_apply(eig_s, inv_clamped);
    const RealMatrix t_mat = s_half * x * s_half;
    const EigResult eig_t = eigen_symmetric(symmetrize(t_mat));
    const RealMatrix t_half = eig_apply(eig_t, sqrt_clamped);
    const RealMatrix w = symmetrize(s_inv_half * t_half * s_inv_half);
    std::vector<double> w_diag(n_diag);
    for (int k = 0; k < n_diag; ++k)
      w_diag[k] = std::sqrt(std::max(x_diag[k], 1e-300) / std::max(s_diag[k], 1e-300));

    // Schur complement M and the pieces of h not depending on sigma_center.
    RealMatrix m_schur(std::max(p, 1), std::max(p, 1));
    for (int j = 0; j < p; ++j) {
      const RealMatrix k_j = scale_both_sides(prob.constraints[j].z_coeffs, w);
      for (int i = 0; i <= j; ++i) {
        double v = sym_dot(prob.constraints[i].z_coeffs, k_j);
        if (i == j && slot[i] >= 0) v += w_diag[slot[i]] * w_diag[slot[i]];
        m_schur(i, j) = v;
        m_schur(j, i) = v;
      }
    }
    // Jacobi-scaled Cholesky of M keeps the factorization usable deep into
    // the ill-conditioned endgame.
    std::vector<double> m_scale(p, 1.0);
    for (int i = 0; i < p; ++i)
      m_scale[i] = 1.0 / std::sqrt(std::max(m_schur(i, i), 1e-300));
    RealMatrix m_scaled(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) m_scaled(i, j) = m_schur(i, j) * m_scale[i] * m_scale[j];
    RealMatrix l_schur;
    {
      RealMatrix m_try = m_scaled;
      bool ok = cholesky(m_try, l_schur);
      double bump = 1e-14;
      int attempts = 0;
      while (!ok && attempts < 4) {
        m_try = m_scaled;
        for (int i = 0; i < p; ++i) m_try(i, i) += bump;
        ok = cholesky(m_try, l_schur);
        bump *= 100.0;
        ++attempts;
      }
      if (!ok) throw NumericalFailure("sdp: Schur complement lost definiteness");
    }
    // M^-1 b through the scaled factor.  One guarded refinement round: the
    // correction is kept only when it verifiably shrinks the residual, since
    // residuals computed at extreme conditioning are mostly noise.
    auto schur_residual = [&](const std::vector<double>& b, const std::vector<double>& xsol) {
      std::vector<double> resid(b);
      double norm = 0.0;
      for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) resid[i] -= m_schur(i, j) * xsol[j];
        norm = std::max(norm, std::fabs(resid[i]));
      }
      return std::make_pair(resid, norm);
    };
    auto schur_solve = [&](const std::vector<double>& b) {
      std::vector<double> scaled(p);
      for (int i = 0; i < p; ++i) scaled[i] = b[i] * m_scale[i];
      std::vector<double> z = cholesky_solve(l_schur, scaled);
      std::vector<double> xsol(p);
      for (int i = 0; i < p; ++i) xsol[i] = z[i] * m_scale[i];
      auto [resid, norm0] = schur_residual(b, xsol);
      if (norm0 > 0.0) {
        for (int i = 0; i < p; ++i) resid[i] *= m_scale[i];
        const std::vector<double> corr = cholesky_solve(l_schur, resid);
        std::vector<double> candidate(xsol);
        for (int i = 0; i < p; ++i) candidate[i] += corr[i] * m_scale[i];
        const auto [resid1, norm1] = schur_residual(b, candidate);
        if (norm1 < norm0) xsol = std::move(candidate);
      }
      return xsol;
    };

    const RealMatrix w_rd_w = w * rd_dense * w;

    // Pieces of the scalar-column elimination that change with the scaling.
    RealMatrix minv_g(std::max(p, 1), std::max(nf, 1));
    RealMatrix l_small;
    if (nf > 0) {
      for (int k = 0; k < nf; ++k) {
        std::vector<double> col(p);
        for (int i = 0; i < p; ++i) col[i] = g_cols(i, k);
        col = schur_solve(col);
        for (int i = 0; i < p; ++i) minv_g(i, k) = col[i];
      }
      // Gram form (L^-1 D g_a) . (L^-1 D g_b) cannot lose definiteness.
      RealMatrix fw(p, nf);
      for (int k = 0; k < nf; ++k) {
        std::vector<double> v(p);
        for (int i = 0; i < p; ++i) v[i] = g_cols(i, k) * m_scale[i];
        for (int i = 0; i < p; ++i) {
          for (int r = 0; r < i; ++r) v[i] -= l_schur(i, r) * v[r];
          v[i] /= l_schur(i, i);
        }
        for (int i = 0; i < p; ++i) fw(i, k) = v[i];
      }
      RealMatrix small(nf, nf);
      for (int a = 0; a < nf; ++a)
        for (int bq = 0; bq < nf; ++bq) {
          double v = 0.0;
          for (int i = 0; i < p; ++i) v += fw(i, a) * fw(i, bq);
          small(a, bq) = v;
        }
      if (!cholesky(small, l_small)) {
        for (int a = 0; a < nf; ++a) small(a, a) += 1e-14 * (small(a, a) + 1e-30);
        if (!cholesky(small, l_small))
          throw NumericalFailure("sdp: scalar reduction matrix not positive definite");
      }
    }

    // [[M G],[G^T 0]] [dy du] = [h rfv], refined once at the KKT level.
    auto kkt_solve = [&](const std::vector<double>& h, const std::vector<double>& rfv,
                         std::vector<double>& dy, std::vector<double>& du) {
      auto single_pass = [&](const std::vector<double>& hh, const std::vector<double>& rr,
                             std::vector<double>& oy, std::vector<double>& ou) {
        std::vector<double> q = schur_solve(hh);
        if (nf == 0) {
          oy = q;
          ou.clear();
          return;
        }
        std::vector<double> rhs_u(nf, 0.0);
        for (int a = 0; a < nf; ++a) {
          double v = -rr[a];
          for (int i = 0; i < p; ++i) v += g_cols(i, a) * q[i];
          rhs_u[a] = v;
        }
        ou = cholesky_solve(l_small, rhs_u);
        oy = q;
        for (int i = 0; i < p; ++i) {
          double adj = 0.0;
          for (int k = 0; k < nf; ++k) adj += minv_g(i, k) * ou[k];
          oy[i] -= adj;
        }
      };
      single_pass(h, rfv, dy, du);
    };

    // Solves the Newton system for a given centering target, returning the
    // directions through the out-parameters.
    auto newton = [&](const RealMatrix& rc_dense, const std::vector<double>& rc_diag,
                      RealMatrix& dx, std::vector<double>& dx_diag, std::vector<double>& dy,
                      std::vector<double>& du, RealMatrix& ds, std::vector<double>& ds_diag) {
      std::vector<double> h(p);
      for (int i = 0; i < p; ++i) {
        double v = rp[i] - sym_dot(prob.constraints[i].z_coeffs, rc_dense) +
                   sym_dot(prob.constraints[i].z_coeffs, w_rd_w);
        if (slot[i] >= 0) {
          const int k = slot[i];
          v += -sigma[i] * rc_diag[k] + sigma[i] * w_diag[k] * w_diag[k] * rd_diag[k];
        }
        h[i] = v;
      }
      kkt_solve(h, rf, dy, du);
      project_null_gt(dy);
      du.resize(nf, 0.0);
      ds = rd_dense;
      for (int i = 0; i < p; ++i) sym_axpy(prob.constraints[i].z_coeffs, -dy[i], ds);
      ds_diag.assign(n_diag, 0.0);
      for (int i = 0; i < p; ++i)
        if (slot[i] >= 0) ds_diag[slot[i]] = rd_diag[slot[i]] - sigma[i] * dy[i];
      dx = symmetrize(rc_dense - w * ds * w);
      dx_diag.assign(n_diag, 0.0);
      for (int k = 0; k < n_diag; ++k)
        dx_diag[k] = rc_diag[k] - w_diag[k] * w_diag[k] * ds_diag[k];
    };

    auto max_step_all = [&](const RealMatrix& xm, const std::vector<double>& xd,
                            const RealMatrix& dxm, const std::vector<double>& dxd) {
      double a = max_psd_step(xm, dxm);
      for (int k = 0; k < n_diag; ++k)
        if (dxd[k] < 0.0) a = std::min(a, -xd[k] / dxd[k]);
      return a;
    };

    // Predictor probe (affine direction) to pick the centering weight.
    RealMatrix rc_aff = -1.0 * x;
    std::vector<double> rc_diag_aff(n_diag);
    for (int k = 0; k < n_diag; ++k) rc_diag_aff[k] = -x_diag[k];
    RealMatrix dx_a, ds_a;
    std::vector<double> dxd_a, dy_a, du_a, dsd_a;
    newton(rc_aff, rc_diag_aff, dx_a, dxd_a, dy_a, du_a, ds_a, dsd_a);
    const double ap_aff = std::min(1.0, max_step_all(x, x_diag, dx_a, dxd_a));
    const double ad_aff = std::min(1.0, max_step_all(s, s_diag, ds_a, dsd_a));
    double mu_aff = 0.0;
    {
      RealMatrix x_try = x + ap_aff * dx_a;
      RealMatrix s_try = s + ad_aff * ds_a;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) mu_aff += x_try(i, j) * s_try(i, j);
      for (int k = 0; k < n_diag; ++k)
        mu_aff += (x_diag[k] + ap_aff * dxd_a[k]) * (s_diag[k] + ad_aff * dsd_a[k]);
      mu_aff /= total_dim;
    }
    double sigma_c = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);
    sigma_c = std::clamp(sigma_c, 1e-6, 0.999);

    // Combined centering direction (second-order term on the scalar block).
    RealMatrix rc_dense = sigma_c * mu * s_inv - x;  // rebuilt on recentering
    std::vector<double> rc_diag(n_diag);
    for (int k = 0; k < n_diag; ++k) {
      rc_diag[k] = sigma_c * mu / std::max(s_diag[k], 1e-300) - x_diag[k] -
                   dxd_a[k] * dsd_a[k] / std::max(s_diag[k], 1e-300);
    }
    RealMatrix dx, ds;
    std::vector<double> dxd, dy, du, dsd;
    newton(rc_dense, rc_diag, dx, dxd, dy, du, ds, dsd);

    const double tau = 0.98;
    const double ap = std::min(1.0, tau * max_step_all(x, x_diag, dx, dxd));
    const double ad = std::min(1.0, tau * max_step_all(s, s_diag, ds, dsd));

    x = symmetrize(x + ap * dx);
    s = symmetrize(s + ad * ds);
    for (int k = 0; k < n_diag; ++k) {
      x_diag[k] = std::max(x_diag[k] + ap * dxd[k], 1e-300);
      s_diag[k] = std::max(s_diag[k] + ad * dsd[k], 1e-300);
    }
    for (int i = 0; i < p; ++i) y[i] += ad * dy[i];
    for (int k = 0; k < nf; ++k) u[k] += ap * du[k];

    if (std::min(ap, ad) < 1e-8) {
      if (++tiny_steps >= 5) throw NumericalFailure("sdp: step lengths collapsed");
    } else {
      tiny_steps = 0;
    }
    sol.iterations = iter + 1;
  }

  sol.z = x;
  sol.scalars = u;
  sol.objective = sym_dot(prob.z_objective, x);
  for (int k = 0; k < nf; ++k) sol.objective += prob.scalar_objective[k] * u[k];
  sol.dual_objective = 0.0;
  for (int i = 0; i < p; ++i) sol.dual_objective += y[i] * prob.constraints[i].bound;
  sol.duality_gap = sol.objective - sol.dual_objective;
  sol.dual = y;
  {
    double pinf = 0.0;
    for (int i = 0; i < p; ++i) {
      const SdpConstraint& c = prob.constraints[i];
      double lhs = sym_dot(c.z_coeffs, x);
      if (slot[i] >= 0) lhs += sigma[i] * x_diag[slot[i]];
      for (const ScalarCoeff& sc : c.scalar_coeffs) lhs += sc.value * u[sc.index];
      pinf = std::max(pinf, std::fabs(c.bound - lhs));
    }
    sol.primal_infeasibility = pinf;
  }
  sol.dual_slack = c_dense;
  for (int i = 0; i < p; ++i) sym_axpy(prob.constraints[i].z_coeffs, -y[i], sol.dual_slack);
  const EigResult final_eig = eigen_symmetric(sol.z);
  sol.min_eigenvalue = final_eig.eigenvalues.back();
  return sol;
}

}  // namespace approxrank
