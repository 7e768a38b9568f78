/**
 * This code is part of qcredal.
 *
 * (C) Copyright the qcredal developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

// Small-scale conic optimization over the spectrahedron
// {rho >= 0, Tr rho = 1, Tr(A_j rho) >= b_j}: linear objectives, feasibility
// margins with Farkas certificates, fractional (conditional) previsions by
// monotone bisection, and an exact vertex-enumeration path for diagonal
// (classical) instances.
//
// The engine is a primal log-det barrier with Newton recentering on the
// affine slice, barrier weight schedule mu <- mu/5 from mu0 = 1, Newton
// tolerance 1e-10 per center. Hermitian variables are coordinatized by the
// orthonormal basis of linalg.hpp (diagonals plus sqrt2-scaled off-diagonal
// pairs), which makes the Newton systems real symmetric. Internals run in
// long double so the 1e-9 termination gaps stay inside the working precision.

#ifndef QCREDAL_SDP_HPP
#define QCREDAL_SDP_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "qcredal/linalg.hpp"
#include "qcredal/measurement.hpp"

namespace qcredal {

// ---------------------------------------------------------------------------
// Public problem/solution types
// ---------------------------------------------------------------------------

struct SdpProblem {
  int dim = 0;
  cmat objective;                                   // minimize Tr(C rho)
  std::vector<std::pair<cmat, double>> constraints; // Tr(A_j rho) >= b_j
};

enum class SdpStatus { Optimal, Infeasible, MaxIterations };

// Conic Farkas certificate: sum alpha_j G_j <= -beta I over the trace-one
// slice, where G_j is the homogenized constraint gamble A_j - b_j I.
struct SdpCertificate {
  rvec alpha;
  double beta = 0;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::Optimal;
  double value = 0;
  std::optional<DensityMatrix> optimizer;
  double gap = 0;
  std::optional<SdpCertificate> certificate;
  int newton_iterations = 0;
};

// ---------------------------------------------------------------------------
// Barrier engine (internal)
// ---------------------------------------------------------------------------

namespace barrier {

using real = long double;
using BMat = cmat_t<real>;
using BVecC = cvec_t<real>;
using BVec = rvec_t<real>;
using BRMat = rmat_t<real>;

struct Block {
  BMat f0;                                   // affine offset
  std::vector<std::pair<int, BMat>> coef;    // F(x) = f0 + sum x_k coef_k
  int n = 0;
};

struct Program {
  int dim = 0;
  BVec objective;
  std::vector<Block> blocks;
  BRMat ineq_a;  // rows a_i: a_i . x >= ineq_b(i)
  BVec ineq_b;
  BRMat eq_a;    // eq_a x = eq_b
  BVec eq_b;
  real x_norm_bound = 2; // used only to repair the dual bound

  int nu() const {
    int v = (int)ineq_b.size();
    for (const auto &b : blocks)
      v += b.n;
    return v;
  }
};

struct Result {
  bool converged = false;
  BVec x;
  real value = 0;
  real dual_value = 0;
  real gap = 0;
  real mu_final = 0;
  BVec ineq_duals;
  int newton_iterations = 0;
};

struct Workspace {
  std::vector<BMat> F, L;
  std::vector<std::vector<BMat>> M; // M[b][k] = L^-1 C_k L^-dagger
};

inline BMat block_value(const Block &b, const BVec &x) {
  BMat f = b.f0;
  for (const auto &[k, c] : b.coef)
    f += x(k) * c;
  return f;
}

inline bool cholesky(const BMat &f, BMat &l) {
  Eigen::LLT<BMat> llt(f);
  if (llt.info() != Eigen::Success)
    return false;
  l = llt.matrixL();
  return true;
}

inline bool strictly_feasible(const Program &p, const BVec &x, real slack_floor = 0) {
  for (int i = 0; i < p.ineq_b.size(); ++i)
    if (p.ineq_a.row(i).dot(x) - p.ineq_b(i) <= slack_floor)
      return false;
  BMat l;
  for (const auto &b : p.blocks)
    if (!cholesky(block_value(b, x), l))
      return false;
  return true;
}

// phi_mu(x) = objective.x / mu - sum log det F_b - sum log slack_i
inline real barrier_value(const Program &p, const BVec &x, real mu) {
  real v = p.objective.dot(x) / mu;
  for (int i = 0; i < p.ineq_b.size(); ++i) {
    real s = p.ineq_a.row(i).dot(x) - p.ineq_b(i);
    if (s <= 0)
      return std::numeric_limits<real>::infinity();
    v -= std::log(s);
  }
  BMat l;
  for (const auto &b : p.blocks) {
    if (!cholesky(block_value(b, x), l))
      return std::numeric_limits<real>::infinity();
    for (int i = 0; i < b.n; ++i)
      v -= 2 * std::log((real)l(i, i).real());
  }
  return v;
}

// Newton direction restricted to the null space of the equality rows.
class Solver {
public:
  explicit Solver(const Program &p) : p_(p) {
    const int d = p.dim;
    if (p.eq_a.rows() > 0) {
      // Reduce the equality rows to an independent (orthogonal) set once;
      // duplicated or dependent pins would make the KKT Schur system
      // singular.
      Eigen::JacobiSVD<BRMat> svd(p.eq_a,
                                  Eigen::ComputeFullV | Eigen::ComputeThinU);
      real tol = (real)1e-12 * std::max<real>(1, svd.singularValues()(0));
      int rank = 0;
      for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol)
          ++rank;
      eq_rows_ = svd.matrixV().leftCols(rank).transpose();
    } else {
      eq_rows_ = BRMat::Zero(0, d);
    }
  }

  // One centering run at barrier weight mu, from strictly feasible x.
  // Returns the number of Newton iterations spent. The direction solves the
  // KKT system [H E^T; E 0] via a Schur complement. Iterates are re-anchored
  // to the affine slice every step: near the precision floor the Newton
  // direction can carry a large noisy component and projecting the direction
  // alone lets drift accumulate.
  int center(BVec &x, real mu, real newton_tol, int max_newton) const {
    const int d = p_.dim;
    const int r = (int)eq_rows_.rows();
    if (slice_target_.size() != r)
      slice_target_ = eq_rows_ * x;
    if (r >= d)
      return 0;
    BVec grad(d);
    BRMat hess(d, d);
    int it = 0;
    real prev_decrement2 = std::numeric_limits<real>::infinity();
    bool prev_step_full = false;
    for (; it < max_newton; ++it) {
      assemble(x, mu, grad, hess);
      Eigen::LLT<BRMat> llt(hess);
      BRMat hinv_rhs; // H^-1 [grad | E^T]
      {
        BRMat rhs(d, 1 + r);
        rhs.col(0) = grad;
        if (r > 0)
          rhs.rightCols(r) = eq_rows_.transpose();
        if (llt.info() == Eigen::Success) {
          hinv_rhs = llt.solve(rhs);
        } else {
          BRMat h_r = hess + BRMat::Identity(d, d) *
                                 ((real)1e-24 * std::max<real>(1, hess.trace()));
          hinv_rhs = h_r.ldlt().solve(rhs);
        }
      }
      BVec dir;
      if (r > 0) {
        BRMat schur = eq_rows_ * hinv_rhs.rightCols(r);
        BVec lambda = schur.ldlt().solve(BVec(eq_rows_ * hinv_rhs.col(0)));
        dir = -hinv_rhs.col(0) + hinv_rhs.rightCols(r) * lambda;
        // the rows are orthonormal: snap the direction back onto the slice
        // (an ill-conditioned H solve can leak out of it)
        dir -= eq_rows_.transpose() * (eq_rows_ * dir);
      } else {
        dir = -hinv_rhs.col(0);
      }
      real decrement2 = -grad.dot(dir);
      // stop when the Newton decrement falls below newton_tol
      if (!(decrement2 > newton_tol * newton_tol))
        break;
      const real delta = std::sqrt(decrement2);
      // after a full Newton step the decrement must contract; failing that we
      // have hit the arithmetic noise floor (capped steps are exempt: against
      // a boundary the decrement legitimately contracts slowly)
      if (delta < (real)0.25 && prev_step_full &&
          decrement2 > (real)0.25 * prev_decrement2)
        break;
      prev_decrement2 = decrement2;
      // Self-concordant damped Newton: 1/(1+delta) while far from the
      // center, full step in the quadratic region; both capped by the exact
      // fraction-to-boundary step (scalar slacks and PSD blocks alike), so
      // no sufficient-decrease test is needed (barrier differences sit below
      // the floating-point floor near convergence anyway).
      real cap = max_step(x, dir);
      for (size_t bi = 0; bi < p_.blocks.size(); ++bi) {
        const auto &b = p_.blocks[bi];
        BMat df = BMat::Zero(b.n, b.n);
        for (const auto &[k, c] : b.coef)
          df += dir(k) * c;
        auto lower = block_l_[bi].template triangularView<Eigen::Lower>();
        BMat s1 = lower.solve(df);
        BMat s = lower.solve(BMat(s1.adjoint()));
        real lmin = eig<real>(s).values(0);
        if (lmin < 0)
          cap = std::min(cap, -1 / lmin);
      }
      real step;
      if (delta < (real)0.25) {
        step = std::min<real>((real)0.99 * cap, (real)1);
      } else {
        // damped phase: the barrier along the Newton direction is cheap to
        // evaluate (one small Cholesky), so minimize it by golden section
        // instead of settling for the conservative 1/(1+delta) step
        const real lo0 = 0, hi0 = std::min<real>((real)0.99 * cap, (real)64);
        const real gr = (real)0.6180339887498949;
        real a0 = lo0, b0 = hi0;
        real m1 = b0 - gr * (b0 - a0), m2 = a0 + gr * (b0 - a0);
        real f1 = barrier_value(p_, BVec(x + m1 * dir), mu);
        real f2 = barrier_value(p_, BVec(x + m2 * dir), mu);
        for (int ls = 0; ls < 40 && (b0 - a0) > (real)1e-3 * (1 + hi0); ++ls) {
          if (f1 <= f2) {
            b0 = m2;
            m2 = m1;
            f2 = f1;
            m1 = b0 - gr * (b0 - a0);
            f1 = barrier_value(p_, BVec(x + m1 * dir), mu);
          } else {
            a0 = m1;
            m1 = m2;
            f1 = f2;
            m2 = a0 + gr * (b0 - a0);
            f2 = barrier_value(p_, BVec(x + m2 * dir), mu);
          }
        }
        step = (real)0.5 * (a0 + b0);
        if (step <= 0)
          step = std::min<real>((real)0.99 * cap, 1 / (1 + delta));
      }
      int bt = 0;
      while (bt < 10 && !strictly_feasible(p_, BVec(x + step * dir))) {
        step *= (real)0.5;
        ++bt;
      }
      if (bt >= 10)
        break; // stalled; caller sees the residual through the gap
      x += step * dir;
      prev_step_full = step > (real)0.9;
      if (r > 0)
        x -= eq_rows_.transpose() * (eq_rows_ * x - slice_target_);
    }
    return it;
  }

  // Full path-following solve. x must be strictly feasible on entry. The
  // stage callback (if any) sees every centered iterate; callers use it to
  // track exact primal/dual bounds, which sidesteps the precision floor the
  // final stages hit on degenerate optima. A false return from the callback
  // stops the path early (the caller's own gap is already met).
  using StageCallback = std::function<bool(const BVec &, real mu)>;
  Result solve(BVec x, real gap_target, real mu0 = 1, real mu_factor = 5,
               real newton_tol = (real)1e-10, int max_newton = 40,
               const StageCallback &on_stage = {}) const {
    Result r;
    slice_target_ = eq_rows_ * x; // entry point defines the slice
    const int nu = p_.nu();
    real mu = mu0;
    int stages = 0;
    while (true) {
      // early stages only follow the path; tight centering is needed once
      // the duals start to matter
      const real stage_tol = mu > (real)1e-6
                                 ? std::max(newton_tol, (real)1e-6)
                                 : newton_tol;
      r.newton_iterations += center(x, mu, stage_tol, max_newton);
      if (on_stage && !on_stage(x, mu))
        break;
      if (mu * nu <= gap_target || stages++ > 80)
        break;
      mu /= mu_factor;
    }
    r.x = x;
    r.value = p_.objective.dot(x);
    r.mu_final = mu;
    extract_dual(x, mu, r);
    r.converged = (mu * nu <= gap_target);
    return r;
  }

  // Central-path inequality multipliers at (x, mu).
  BVec ineq_duals_at(const BVec &x, real mu) const {
    BVec a(p_.ineq_b.size());
    for (int i = 0; i < p_.ineq_b.size(); ++i)
      a(i) = mu / (p_.ineq_a.row(i).dot(x) - p_.ineq_b(i));
    return a;
  }

private:
  void assemble(const BVec &x, real mu, BVec &grad, BRMat &hess) const {
    const int d = p_.dim;
    grad = p_.objective / mu;
    hess = BRMat::Zero(d, d);
    for (int i = 0; i < p_.ineq_b.size(); ++i) {
      real s = p_.ineq_a.row(i).dot(x) - p_.ineq_b(i);
      grad -= p_.ineq_a.row(i).transpose() / s;
      hess += (p_.ineq_a.row(i).transpose() * p_.ineq_a.row(i)) / (s * s);
    }
    BMat s1, s2, mk;
    block_l_.resize(p_.blocks.size());
    for (size_t bi = 0; bi < p_.blocks.size(); ++bi) {
      const auto &b = p_.blocks[bi];
      BMat f = block_value(b, x);
      Eigen::LLT<BMat> llt(f);
      block_l_[bi] = llt.matrixL();
      const BMat &l = block_l_[bi];
      const int nk = (int)b.coef.size();
      const int nn = b.n * b.n;
      auto lower = l.triangularView<Eigen::Lower>();
      // rows of w are the vectorized m_k = L^-1 C_k L^-dagger, so the block
      // Hessian Tr(m_k m_j) is one Gram product
      BMat w(nk, nn);
      for (int k = 0; k < nk; ++k) {
        s1 = lower.solve(b.coef[k].second);
        s2 = lower.solve(BMat(s1.adjoint()));
        mk = s2.adjoint();
        grad(b.coef[k].first) -= mk.trace().real();
        w.row(k) = Eigen::Map<const BVecC>(mk.data(), nn).transpose();
      }
      BMat gram = w * w.adjoint();
      for (int k = 0; k < nk; ++k)
        for (int j = 0; j < nk; ++j)
          hess(b.coef[k].first, b.coef[j].first) += gram(k, j).real();
    }
  }

  // Largest step keeping scalar slacks positive (block feasibility is left to
  // the backtracking line search).
  real max_step(const BVec &x, const BVec &dir) const {
    real step = std::numeric_limits<real>::infinity();
    for (int i = 0; i < p_.ineq_b.size(); ++i) {
      real ad = p_.ineq_a.row(i).dot(dir);
      if (ad < 0) {
        real s = p_.ineq_a.row(i).dot(x) - p_.ineq_b(i);
        step = std::min(step, -s / ad);
      }
    }
    return std::min<real>(step, (real)1e6);
  }

  // Dual point from the central-path relations Z_b = mu F_b^-1 and
  // alpha_i = mu / s_i; equality multipliers by least squares; the leftover
  // stationarity residual is charged against the x-norm bound so the reported
  // dual value is a genuine lower bound.
  void extract_dual(const BVec &x, real mu, Result &r) const {
    const int d = p_.dim;
    BVec adj = BVec::Zero(d);
    real offset = 0;
    r.ineq_duals.resize(p_.ineq_b.size());
    for (int i = 0; i < p_.ineq_b.size(); ++i) {
      real s = p_.ineq_a.row(i).dot(x) - p_.ineq_b(i);
      real alpha = mu / s;
      r.ineq_duals(i) = alpha;
      adj += alpha * p_.ineq_a.row(i).transpose();
      offset += alpha * p_.ineq_b(i);
    }
    for (const auto &b : p_.blocks) {
      BMat f = block_value(b, x);
      BMat z = mu * f.inverse();
      for (const auto &[k, c] : b.coef)
        adj(k) += (z.cwiseProduct(c.conjugate())).sum().real();
      offset -= (z.cwiseProduct(b.f0.conjugate())).sum().real();
    }
    BVec resid = p_.objective - adj;
    if (p_.eq_a.rows() > 0) {
      Eigen::JacobiSVD<BRMat> svd(p_.eq_a.transpose(),
                                  Eigen::ComputeThinU | Eigen::ComputeThinV);
      BVec nu_mult = svd.solve(resid);
      offset += nu_mult.dot(p_.eq_b);
      resid -= p_.eq_a.transpose() * nu_mult;
    }
    r.dual_value = offset - resid.norm() * p_.x_norm_bound;
    r.gap = r.value - r.dual_value;
  }

  const Program &p_;
  BRMat eq_rows_;                      // independent (orthonormal) equality rows
  mutable BVec slice_target_;          // eq_rows_ * x for the current solve
  mutable std::vector<BMat> block_l_;  // Cholesky factors from the last assemble
};

} // namespace barrier

// ---------------------------------------------------------------------------
// Certificate program: min over the simplex of lambda_max(sum alpha_k G_k).
// A value below zero is a verified Farkas certificate that no density matrix
// satisfies every Tr(G_k rho) >= 0; a value near zero witnesses a boundary
// (zero-margin) system.
// ---------------------------------------------------------------------------

struct CertificateResult {
  rvec alpha;         // optimal simplex weights (in the input order)
  double lambda_star; // min-max eigenvalue
};

inline CertificateResult certificate_program(const std::vector<cmat> &gambles,
                                             double gap_target = 1e-11) {
  using namespace barrier;
  const int m = (int)gambles.size();
  if (m == 0)
    throw SolverFailureError("certificate_program: empty gamble list");
  const int n = (int)gambles[0].rows();
  Program p;
  p.dim = m + 1;
  p.objective = BVec::Zero(m + 1);
  p.objective(m) = 1;
  Block blk;
  blk.n = n;
  blk.f0 = BMat::Zero(n, n);
  for (int k = 0; k < m; ++k)
    blk.coef.push_back({k, BMat(-cast_cmat<real>(gambles[(size_t)k]))});
  blk.coef.push_back({m, BMat(BMat::Identity(n, n))});
  p.blocks.push_back(std::move(blk));
  p.ineq_a = BRMat::Zero(m, m + 1);
  p.ineq_b = BVec::Zero(m);
  for (int k = 0; k < m; ++k)
    p.ineq_a(k, k) = 1;
  p.eq_a = BRMat::Zero(1, m + 1);
  p.eq_a.leftCols(m).setOnes();
  p.eq_b = BVec::Ones(1);

  BVec x0 = BVec::Constant(m + 1, (real)1 / m);
  cmat avg = cmat::Zero(n, n);
  for (const auto &g : gambles)
    avg += g / double(m);
  const double s0 = lambda_max<double>(avg) + 1.0 + inf_norm<double>(avg);
  x0(m) = (real)s0;
  p.x_norm_bound = (real)std::sqrt(1.0 + (std::abs(s0) + 1.0) * (std::abs(s0) + 1.0));

  Solver solver(p);
  CertificateResult out;
  out.alpha = rvec::Constant(m, 1.0 / m);
  out.lambda_star = std::numeric_limits<double>::infinity();
  // Track the exact value of every centered iterate; the minimum over stages
  // is immune to the precision floor the last stages hit.
  auto on_stage = [&](const BVec &x, real) {
    rvec alpha(m);
    for (int k = 0; k < m; ++k)
      alpha(k) = std::max(0.0, (double)x(k));
    alpha /= alpha.sum();
    cmat comb = cmat::Zero(n, n);
    for (int k = 0; k < m; ++k)
      comb += alpha(k) * gambles[(size_t)k];
    const double lam = lambda_max<double>(comb);
    if (lam < out.lambda_star) {
      out.lambda_star = lam;
      out.alpha = alpha;
    }
    return true;
  };
  solver.solve(x0, (real)gap_target, 1, 5, (real)1e-10, 150, on_stage);
  return out;
}

// Build and eigen-verify a (alpha, beta) certificate from a negative
// lambda_star, normalizing to beta = 1. Returns nothing if the system is not
// actually infeasible at the 1e-9 threshold.
inline std::optional<SdpCertificate>
make_verified_certificate(const std::vector<cmat> &gambles,
                          const CertificateResult &cr) {
  const int n = (int)gambles[0].rows();
  if (cr.lambda_star < -1e-9) {
    const double beta_hat = -cr.lambda_star;
    SdpCertificate cert;
    cert.alpha = cr.alpha / beta_hat;
    cert.beta = 1.0;
    cmat comb = cmat::Zero(n, n);
    for (int k = 0; k < (int)gambles.size(); ++k)
      comb += cert.alpha(k) * gambles[(size_t)k];
    if (lambda_max<double>(comb) > -cert.beta + 1e-8)
      throw SolverFailureError("certificate failed eigenvalue re-verification");
    return cert;
  }
  if (cr.lambda_star <= 1e-9) {
    // Boundary system: the combination is <= 0 but not uniformly negative.
    SdpCertificate cert;
    cert.alpha = cr.alpha;
    cert.beta = 0.0;
    return cert;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// FeasibleRegion: one prepared spectrahedron slice, reusable across many
// linear objectives (the bisection path re-solves dozens of times).
// ---------------------------------------------------------------------------

class FeasibleRegion {
public:
  // constraints are (A_j, b_j) meaning Tr(A_j rho) >= b_j; trace rho = 1.
  FeasibleRegion(int dim, std::vector<std::pair<cmat, double>> constraints)
      : n_(dim) {
    using namespace barrier;
    // Homogenize on the trace-one slice, drop vacuous rows, detect equality
    // pairs (A, -A), which pin marginals and would otherwise leave the
    // barrier without an interior.
    std::vector<cmat> gambles;
    for (auto &[a, b] : constraints) {
      cmat g = validate_hermitian(a) - b * cmat::Identity(n_, n_);
      if (inf_norm<double>(g) <= 1e-14)
        continue;
      gambles.push_back(g);
    }
    std::vector<bool> used(gambles.size(), false);
    for (size_t i = 0; i < gambles.size(); ++i) {
      if (used[i])
        continue;
      const double ni = std::sqrt(inner(gambles[i], gambles[i]));
      for (size_t j = i + 1; j < gambles.size(); ++j) {
        if (used[j])
          continue;
        const double nj = std::sqrt(inner(gambles[j], gambles[j]));
        cmat sum = gambles[i] / ni + gambles[j] / nj;
        if (inf_norm<double>(sum) <= 1e-11) {
          equalities_.push_back(gambles[i]);
          used[i] = used[j] = true;
          break;
        }
        cmat diff = gambles[i] / ni - gambles[j] / nj;
        if (inf_norm<double>(diff) <= 1e-11)
          used[j] = true; // duplicate row
      }
      if (!used[i])
        inequalities_.push_back(gambles[i]);
      used[i] = true;
    }
    homogenized_ = gambles;
    prepare();
  }

  int dim() const { return n_; }
  bool feasible() const { return feasible_; }
  bool boundary() const { return boundary_; }
  const std::optional<SdpCertificate> &infeasibility() const { return cert_; }
  const std::vector<cmat> &homogenized_gambles() const { return homogenized_; }

  // Minimize Tr(C rho) over the region. gap_target is absolute. The
  // reported value is the midpoint of an exactly evaluated primal bound,
  // Tr(C rho_hat) at a feasible iterate, and an exact dual bound
  //   lambda_min(C - sum alpha_j G_j - sum nu_k E_k) + nu.e + alpha.b,
  // both tracked across barrier stages.
  SdpSolution minimize(const cmat &objective, double gap_target = 0) const {
    using namespace barrier;
    SdpSolution sol;
    if (!feasible_) {
      sol.status = SdpStatus::Infeasible;
      sol.certificate = cert_;
      return sol;
    }
    cmat c = validate_hermitian(objective);
    if (gap_target <= 0)
      gap_target = 1e-9 * std::max(1.0, inf_norm<double>(c));
    Program p = base_;
    p.objective = cast_rvec<real>(rvec(herm_to_coords(c)));
    Solver solver(p);

    Eigen::JacobiSVD<BRMat> lsq(BRMat(p.eq_a.transpose()),
                                Eigen::ComputeThinU | Eigen::ComputeThinV);
    double best_primal = std::numeric_limits<double>::infinity();
    double best_dual = -std::numeric_limits<double>::infinity();
    auto on_stage = [&](const BVec &x, real mu) {
      cmat rho = coords_to_herm(cast_rvec<double>(rvec_t<real>(x)), n_);
      best_primal = std::min(best_primal, inner(c, rho));
      BVec alpha = solver.ineq_duals_at(x, mu);
      BMat f = block_value(p.blocks[0], x);
      BMat z = mu * f.inverse();
      BVec zc = cast_rvec<real>(
          rvec(herm_to_coords(cast_cmat<double>(z))));
      BVec resid = p.objective - zc;
      for (int j = 0; j < (int)alpha.size(); ++j)
        resid -= alpha(j) * p.ineq_a.row(j).transpose();
      BVec nu_mult = lsq.solve(resid);
      cmat m_mat = c;
      for (int j = 0; j < (int)alpha.size(); ++j)
        m_mat -= (double)alpha(j) * inequalities_[(size_t)j];
      m_mat -= coords_to_herm(
          cast_rvec<double>(BVec(p.eq_a.transpose() * nu_mult)), n_);
      double bound = lambda_min<double>(m_mat) +
                     (double)nu_mult.dot(p.eq_b) + (double)alpha.dot(p.ineq_b);
      best_dual = std::max(best_dual, bound);
      return best_primal - best_dual > gap_target;
    };

    Result r = solver.solve(x_int_, (real)gap_target, 1, 5, (real)1e-10, 150,
                            on_stage);
    sol.newton_iterations = r.newton_iterations;
    sol.gap = (best_primal - best_dual) + relax_penalty_;
    // The primal evaluations converge along the whole path (error ~ mu*nu);
    // the dual bound can bottom out earlier on ill-conditioned active sets,
    // so it certifies the gap but does not pollute the reported value.
    sol.value = best_primal;
    sol.status = (r.converged || sol.gap <= gap_target * 2)
                     ? SdpStatus::Optimal
                     : SdpStatus::MaxIterations;
    cmat rho = coords_to_herm(cast_rvec<double>(rvec_t<real>(r.x)), n_);
    sol.optimizer = make_density(rho);
    return sol;
  }

  double lower_value(const cmat &objective) const {
    SdpSolution s = minimize(objective);
    if (s.status == SdpStatus::Infeasible)
      throw SolverFailureError("minimize over an infeasible region");
    return s.value;
  }

  // Witness produced while preparing the interior point.
  std::optional<DensityMatrix> witness() const {
    if (!feasible_)
      return std::nullopt;
    return make_density(coords_to_herm(cast_rvec<double>(rvec_t<barrier::real>(x_int_)), n_));
  }

  double uniform_margin() const { return uniform_margin_; }

  // Adds affine equality rows Tr(E_k rho) = t_k on top of the constraints
  // (used for marginal membership tests). Returns the uniform feasibility
  // margin of the augmented system, with a witness when feasible.
  struct SliceFeasibility {
    double margin;
    std::optional<DensityMatrix> witness;
  };
  SliceFeasibility slice_feasibility(const std::vector<std::pair<cmat, double>> &eqs) const;

private:
  friend struct MarginAccess;
  void prepare();

  int n_;
  std::vector<cmat> inequalities_; // homogenized, Tr(G rho) >= 0
  std::vector<cmat> equalities_;   // Tr(G rho) = 0
  std::vector<cmat> homogenized_;  // all rows, original order
  barrier::Program base_;          // no objective set
  barrier::BVec x_int_;
  bool feasible_ = false;
  bool boundary_ = false;
  double uniform_margin_ = 0;
  double relax_penalty_ = 0;
  std::optional<SdpCertificate> cert_;
};

namespace detail {

// Uniform margin program over a fixed affine slice:
//   max t  s.t.  rho - t I >= 0, Tr(G_j rho) >= t, eq rows hold.
// Always strictly startable from any point on the slice. Returns the margin,
// the maximizing x (rho coordinates only) and the inequality duals.
struct MarginOutcome {
  double t_star;
  barrier::BVec x;      // rho coordinates (without the t variable)
  rvec ineq_duals;      // per G_j
};

inline MarginOutcome uniform_margin_program(int n,
                                            const std::vector<cmat> &ineq_gambles,
                                            const barrier::BRMat &eq_rows,
                                            const barrier::BVec &eq_vals,
                                            const barrier::BVec &x_slice,
                                            double gap_target = 1e-11) {
  using namespace barrier;
  const int d = herm_coord_dim(n);
  const int m = (int)ineq_gambles.size();
  Program p;
  p.dim = d + 1;
  p.objective = BVec::Zero(d + 1);
  p.objective(d) = -1; // maximize t
  Block blk;
  blk.n = n;
  blk.f0 = BMat::Zero(n, n);
  for (int k = 0; k < d; ++k)
    blk.coef.push_back({k, cast_cmat<real>(herm_basis_element<double>(n, k))});
  blk.coef.push_back({d, BMat(-BMat::Identity(n, n))});
  p.blocks.push_back(std::move(blk));
  p.ineq_a = BRMat::Zero(m, d + 1);
  p.ineq_b = BVec::Zero(m);
  for (int j = 0; j < m; ++j) {
    rvec row = herm_to_coords(ineq_gambles[(size_t)j]);
    p.ineq_a.block(j, 0, 1, d) = cast_rvec<real>(row).transpose();
    p.ineq_a(j, d) = -1;
  }
  p.eq_a = BRMat::Zero(eq_rows.rows(), d + 1);
  p.eq_a.block(0, 0, eq_rows.rows(), d) = eq_rows;
  p.eq_b = eq_vals;
  p.x_norm_bound = 4;

  BVec x0(d + 1);
  x0.head(d) = x_slice;
  cmat rho0 = coords_to_herm(cast_rvec<double>(rvec_t<real>(x_slice)), n);
  double m0 = lambda_min<double>(rho0);
  for (int j = 0; j < m; ++j)
    m0 = std::min(m0, inner(ineq_gambles[(size_t)j],
                            validate_hermitian(rho0, 1e-6)));
  x0(d) = (real)(m0 - std::max(1.0, std::abs(m0)));

  Solver solver(p);
  // Rigorous two-sided estimate of t*, tracked across stages: evaluating a
  // witness bounds it from below; any nonnegative weights alpha, Z >= 0 and
  // free equality multipliers nu give the eigenvalue bound
  //   t* <= [lambda_max(sum alpha_j G_j + Z - sum nu_k E_k) + nu.e]
  //         / (sum alpha_j + Tr Z)
  // because Tr rho = 1 and E rho = e on the slice.
  double best_lower = -std::numeric_limits<double>::infinity();
  double best_upper = std::numeric_limits<double>::infinity();
  BVec witness_x;
  Eigen::JacobiSVD<BRMat> lsq(BRMat(eq_rows.transpose()),
                              Eigen::ComputeThinU | Eigen::ComputeThinV);
  auto on_stage = [&](const BVec &x, real mu) {
    rvec xd = cast_rvec<double>(rvec_t<real>(BVec(x.head(d))));
    cmat rho_hat = coords_to_herm(xd, n);
    double lower = lambda_min<double>(rho_hat);
    for (int j = 0; j < m; ++j)
      lower = std::min(lower, inner(ineq_gambles[(size_t)j], rho_hat));
    if (lower > best_lower) {
      best_lower = lower;
      witness_x = x.head(d);
    }
    BVec alpha = solver.ineq_duals_at(x, mu);
    BMat f = block_value(p.blocks[0], x);
    cmat comb = cast_cmat<double>(BMat(mu * f.inverse()));
    double wsum = comb.trace().real();
    for (int j = 0; j < m; ++j) {
      comb += (double)alpha(j) * ineq_gambles[(size_t)j];
      wsum += (double)alpha(j);
    }
    BVec resid = cast_rvec<real>(rvec(herm_to_coords(comb)));
    BVec nu_mult = lsq.solve(resid);
    comb -= coords_to_herm(
        cast_rvec<double>(BVec(eq_rows.transpose() * nu_mult)), n);
    const double nu_dot_e = (double)nu_mult.dot(eq_vals);
    best_upper =
        std::min(best_upper, (lambda_max<double>(comb) + nu_dot_e) / wsum);
    return best_upper - best_lower > 1e-11;
  };
  Result r = solver.solve(x0, (real)gap_target, 1, 5, (real)1e-10, 150,
                          on_stage);
  MarginOutcome out;
  out.x = witness_x.size() ? witness_x : BVec(r.x.head(d));
  out.ineq_duals.resize(m);
  for (int j = 0; j < m; ++j)
    out.ineq_duals(j) = (double)r.ineq_duals(j);
  out.t_star = 0.5 * (best_lower + best_upper);
  return out;
}

} // namespace detail

inline void FeasibleRegion::prepare() {
  using namespace barrier;
  const int d = herm_coord_dim(n_);

  // Equality rows: trace plus pinned gambles.
  const int ne = (int)equalities_.size();
  BRMat eq_rows(1 + ne, d);
  BVec eq_vals(1 + ne);
  eq_rows.row(0) =
      cast_rvec<real>(rvec(herm_to_coords(cmat(cmat::Identity(n_, n_))))).transpose();
  eq_vals(0) = 1;
  for (int k = 0; k < ne; ++k) {
    eq_rows.row(k + 1) =
        cast_rvec<real>(rvec(herm_to_coords(equalities_[(size_t)k]))).transpose();
    eq_vals(k + 1) = 0;
  }

  // Least-norm point on the affine slice.
  Eigen::JacobiSVD<BRMat> svd(eq_rows, Eigen::ComputeThinU | Eigen::ComputeThinV);
  BVec x_slice = svd.solve(eq_vals);
  if ((eq_rows * x_slice - eq_vals).norm() > (real)1e-9) {
    feasible_ = false;
    CertificateResult cr = certificate_program(homogenized_);
    cert_ = make_verified_certificate(homogenized_, cr);
    return;
  }

  std::vector<cmat> work_ineqs = inequalities_;
  if (work_ineqs.empty() && equalities_.empty()) {
    // vacuous region: I/n is the analytic center already
    x_int_ = x_slice;
    feasible_ = true;
    uniform_margin_ = 1.0 / n_;
  }
  int rounds = 0;
  while (!feasible_) {
    detail::MarginOutcome mo = detail::uniform_margin_program(
        n_, work_ineqs, eq_rows, eq_vals, x_slice);
    uniform_margin_ = mo.t_star;
    if (mo.t_star > 1e-9) {
      x_int_ = mo.x;
      feasible_ = true;
      break;
    }
    if (mo.t_star < -1e-9) {
      feasible_ = false;
      CertificateResult cr = certificate_program(homogenized_);
      cert_ = make_verified_certificate(homogenized_, cr);
      if (!cert_) {
        // Margin says infeasible but the certificate solve disagrees within
        // tolerance; treat as boundary instead of lying either way.
        boundary_ = true;
        feasible_ = true;
        x_int_ = mo.x;
        relax_penalty_ = 1e-9;
      }
      return;
    }
    // Boundary: one round of dual-certificate facial reduction. Constraints
    // carrying significant dual weight at a zero margin hold with equality on
    // the whole feasible set.
    bool progressed = false;
    if (rounds++ < 3 && !work_ineqs.empty()) {
      const double total = mo.ineq_duals.sum();
      std::vector<cmat> keep;
      for (int j = 0; j < (int)work_ineqs.size(); ++j) {
        if (total > 0 && mo.ineq_duals(j) > 0.05 * total) {
          equalities_.push_back(work_ineqs[(size_t)j]);
          progressed = true;
        } else {
          keep.push_back(work_ineqs[(size_t)j]);
        }
      }
      if (progressed) {
        work_ineqs = keep;
        const int ne2 = (int)equalities_.size();
        eq_rows.conservativeResize(1 + ne2, d);
        eq_vals.conservativeResize(1 + ne2);
        for (int k = 0; k < ne2; ++k) {
          eq_rows.row(k + 1) =
              cast_rvec<real>(rvec(herm_to_coords(equalities_[(size_t)k])))
                  .transpose();
          eq_vals(k + 1) = 0;
        }
        Eigen::JacobiSVD<BRMat> svd2(eq_rows,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
        x_slice = svd2.solve(eq_vals);
        if ((eq_rows * x_slice - eq_vals).norm() > (real)1e-9) {
          feasible_ = false;
          CertificateResult cr = certificate_program(homogenized_);
          cert_ = make_verified_certificate(homogenized_, cr);
          return;
        }
        continue;
      }
    }
    // Last resort: epsilon-relaxed interior (the PSD face case). The value
    // error this introduces is charged to the reported gap.
    boundary_ = true;
    feasible_ = true;
    x_int_ = mo.x;
    relax_penalty_ = 1e-8;
    break;
  }
  inequalities_ = work_ineqs;

  // Assemble the base program (objective filled per call).
  base_ = Program{};
  base_.dim = d;
  base_.objective = BVec::Zero(d);
  Block blk;
  blk.n = n_;
  blk.f0 = BMat::Zero(n_, n_);
  if (relax_penalty_ > 0)
    blk.f0 = (real)1e-11 * BMat::Identity(n_, n_);
  for (int k = 0; k < d; ++k)
    blk.coef.push_back({k, cast_cmat<real>(herm_basis_element<double>(n_, k))});
  base_.blocks.push_back(std::move(blk));
  const int m = (int)inequalities_.size();
  base_.ineq_a = BRMat::Zero(m, d);
  base_.ineq_b = BVec::Zero(m);
  for (int j = 0; j < m; ++j) {
    base_.ineq_a.row(j) =
        cast_rvec<real>(rvec(herm_to_coords(inequalities_[(size_t)j]))).transpose();
    if (relax_penalty_ > 0)
      base_.ineq_b(j) = (real)-1e-11;
  }
  base_.eq_a = eq_rows;
  base_.eq_b = eq_vals;
  base_.x_norm_bound = 2;
}

inline FeasibleRegion::SliceFeasibility FeasibleRegion::slice_feasibility(
    const std::vector<std::pair<cmat, double>> &eqs) const {
  using namespace barrier;
  const int d = herm_coord_dim(n_);
  const int base_rows = (int)base_.eq_a.rows();
  BRMat eq_rows(base_rows + (int)eqs.size(), d);
  BVec eq_vals(base_rows + (int)eqs.size());
  eq_rows.topRows(base_rows) = base_.eq_a;
  eq_vals.head(base_rows) = base_.eq_b;
  for (size_t k = 0; k < eqs.size(); ++k) {
    eq_rows.row(base_rows + (int)k) =
        cast_rvec<real>(rvec(herm_to_coords(validate_hermitian(eqs[k].first))))
            .transpose();
    eq_vals(base_rows + (int)k) = (real)eqs[k].second;
  }
  Eigen::JacobiSVD<BRMat> svd(eq_rows, Eigen::ComputeThinU | Eigen::ComputeThinV);
  BVec x_slice = svd.solve(eq_vals);
  SliceFeasibility out{-std::numeric_limits<double>::infinity(), std::nullopt};
  if ((eq_rows * x_slice - eq_vals).norm() > (real)1e-8)
    return out;
  detail::MarginOutcome mo = detail::uniform_margin_program(
      n_, inequalities_, eq_rows, eq_vals, x_slice);
  out.margin = mo.t_star;
  if (mo.t_star >= -1e-8) {
    cmat rho = coords_to_herm(cast_rvec<double>(rvec_t<real>(mo.x)), n_);
    // Clip the tiny negative part so the witness validates.
    Eigendecomposition<double> ed = eig(rho);
    cmat fixed = cmat::Zero(n_, n_);
    for (int k = 0; k < n_; ++k)
      fixed += std::max(ed.values(k), 0.0) *
               cmat(ed.vectors.col(k) * ed.vectors.col(k).adjoint());
    fixed /= fixed.trace().real();
    out.witness = make_density(fixed);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

inline SdpSolution sdp_minimize(const SdpProblem &problem) {
  FeasibleRegion region(problem.dim, problem.constraints);
  return region.minimize(problem.objective);
}

// Feasibility of {rho in D, Tr(B_k rho) >= 0 (border), Tr(S_j rho) >= t
// (strict)} with the margin t maximized. When the uniform phase-1 margin is
// strictly positive, a second solve with the border rows held at >= 0
// recovers the exact strict-only margin. Zero-margin systems are reported
// feasible with margin ~0 and no certificate; the caller applies its own
// coherence semantics.
struct MarginReport {
  bool feasible = false;
  double margin = 0; // strict margin when strict rows exist, else uniform
  std::optional<DensityMatrix> witness;
  std::optional<SdpCertificate> certificate; // infeasible case (border+strict order)
};

inline MarginReport feasibility_margin(int dim, const std::vector<cmat> &border,
                                       const std::vector<cmat> &strict) {
  using namespace barrier;
  MarginReport rep;
  std::vector<cmat> all;
  for (const auto &g : border)
    all.push_back(validate_hermitian(g));
  for (const auto &g : strict)
    all.push_back(validate_hermitian(g));

  const int d = herm_coord_dim(dim);
  BRMat eq_rows(1, d);
  eq_rows.row(0) =
      cast_rvec<real>(rvec(herm_to_coords(cmat(cmat::Identity(dim, dim))))).transpose();
  BVec eq_vals = BVec::Ones(1);
  BVec x_slice = cast_rvec<real>(rvec(herm_to_coords(
      cmat(cmat::Identity(dim, dim) / double(dim)))));

  detail::MarginOutcome uni =
      detail::uniform_margin_program(dim, all, eq_rows, eq_vals, x_slice);

  auto witness_from = [&](const barrier::BVec &x) {
    cmat rho = coords_to_herm(cast_rvec<double>(rvec_t<real>(x)), dim);
    Eigendecomposition<double> ed = eig(rho);
    cmat fixed = cmat::Zero(dim, dim);
    for (int k = 0; k < dim; ++k)
      fixed += std::max(ed.values(k), 0.0) *
               cmat(ed.vectors.col(k) * ed.vectors.col(k).adjoint());
    fixed /= fixed.trace().real();
    return make_density(fixed);
  };

  if (uni.t_star < -1e-9) {
    rep.feasible = false;
    rep.margin = uni.t_star;
    CertificateResult cr = certificate_program(all);
    rep.certificate = make_verified_certificate(all, cr);
    return rep;
  }

  rep.feasible = true;
  rep.margin = uni.t_star;
  rep.witness = witness_from(uni.x);
  // Refinement needs a genuinely interior start; below this threshold the
  // uniform margin already is the answer (boundary system).
  if (strict.empty() || uni.t_star <= 1e-7)
    return rep;

  // Interior exists: refine with border >= 0 hard so the margin is the
  // strict-only slack.
  Program p;
  p.dim = d + 1;
  p.objective = BVec::Zero(d + 1);
  p.objective(d) = -1;
  Block blk;
  blk.n = dim;
  blk.f0 = BMat::Zero(dim, dim);
  for (int k = 0; k < d; ++k)
    blk.coef.push_back({k, cast_cmat<real>(herm_basis_element<double>(dim, k))});
  p.blocks.push_back(std::move(blk));
  const int mb = (int)border.size(), ms = (int)strict.size();
  p.ineq_a = BRMat::Zero(mb + ms, d + 1);
  p.ineq_b = BVec::Zero(mb + ms);
  for (int j = 0; j < mb; ++j)
    p.ineq_a.block(j, 0, 1, d) =
        cast_rvec<real>(rvec(herm_to_coords(validate_hermitian(border[(size_t)j]))))
            .transpose();
  for (int j = 0; j < ms; ++j) {
    p.ineq_a.block(mb + j, 0, 1, d) =
        cast_rvec<real>(rvec(herm_to_coords(validate_hermitian(strict[(size_t)j]))))
            .transpose();
    p.ineq_a(mb + j, d) = -1;
  }
  p.eq_a = BRMat::Zero(1, d + 1);
  p.eq_a.block(0, 0, 1, d) = eq_rows;
  p.eq_b = eq_vals;
  p.x_norm_bound = 4;

  BVec x0(d + 1);
  x0.head(d) = uni.x;
  cmat rho_int = coords_to_herm(cast_rvec<double>(rvec_t<real>(uni.x)), dim);
  double min_slack = std::numeric_limits<double>::infinity();
  for (const auto &g : strict)
    min_slack = std::min(min_slack, inner(validate_hermitian(g), rho_int));
  x0(d) = (real)(min_slack - std::max(1.0, std::abs(min_slack)));
  Solver solver(p);
  // Two-sided strict-margin estimate tracked across stages: witness
  // evaluation from below, dual eigenvalue bound (dividing by the strict
  // weights only) from above.
  double best_lower = -std::numeric_limits<double>::infinity();
  double best_upper = std::numeric_limits<double>::infinity();
  BVec witness_x;
  auto on_stage = [&](const BVec &x, real mu) {
    rvec xd = cast_rvec<double>(rvec_t<real>(BVec(x.head(d))));
    cmat rho_hat = coords_to_herm(xd, dim);
    double lower = std::numeric_limits<double>::infinity();
    for (const auto &g : strict)
      lower = std::min(lower, inner(validate_hermitian(g), rho_hat));
    if (lower > best_lower) {
      best_lower = lower;
      witness_x = x.head(d);
    }
    BVec alpha = solver.ineq_duals_at(x, mu);
    BMat f = block_value(p.blocks[0], x);
    cmat comb = cast_cmat<double>(BMat(mu * f.inverse()));
    double wsum = 0;
    for (int j = 0; j < mb; ++j)
      comb += (double)alpha(j) * validate_hermitian(border[(size_t)j]);
    for (int j = 0; j < ms; ++j) {
      comb += (double)alpha(mb + j) * validate_hermitian(strict[(size_t)j]);
      wsum += (double)alpha(mb + j);
    }
    if (wsum > 1e-300)
      best_upper = std::min(best_upper, lambda_max<double>(comb) / wsum);
    return best_upper - best_lower > 1e-11;
  };
  Result r = solver.solve(x0, (real)1e-11, 1, 5, (real)1e-10, 150, on_stage);
  rep.margin = 0.5 * (best_lower + best_upper);
  rep.witness = witness_from(witness_x.size() ? witness_x : BVec(r.x.head(d)));
  return rep;
}

// ---------------------------------------------------------------------------
// Conditional previsions by monotone bisection: the conditional lower
// prevision of G given an event map is the unique mu with
//   inf_{rho in M} Tr( map(G - mu I) rho ) = 0,
// bracketed by the spectral bounds of G. h is strictly decreasing in mu as
// long as the event has positive lower probability (caller's precondition).
// ---------------------------------------------------------------------------

inline double conditional_bisection(
    const FeasibleRegion &region,
    const std::function<cmat(const cmat &)> &gamble_map, const cmat &g,
    double tol = 1e-9) {
  const int n = region.dim();
  cmat gh = validate_hermitian(g);
  rvec_t<double> ev = eigenvalues(gh);
  double lo = ev(0), hi = ev(ev.size() - 1);
  if (hi - lo <= tol)
    return 0.5 * (lo + hi);
  auto h = [&](double mu) {
    cmat mapped =
        validate_hermitian(gamble_map(cmat(gh - mu * cmat::Identity(n, n))), 1e-8);
    return region.lower_value(mapped);
  };
  const double scale = std::max(1.0, inf_norm<double>(gh));
  const double slack = 1e-7 * scale;
  if (h(lo) < -slack || h(hi) > slack)
    throw BracketFailureError("conditional bisection endpoints do not bracket "
                              "a root; is the event's lower probability positive?");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (h(mid) >= 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Diagonal (classical) fast path: the spectrahedron collapses to the
// probability simplex and the program is a linear program solved exactly by
// enumerating the vertices of the constraint polytope.
// ---------------------------------------------------------------------------

// Vertices of {p >= 0, sum p = 1, rows.a . p >= rows.b}, dimension n <= 8.
inline std::vector<rvec>
simplex_polytope_vertices(const std::vector<std::pair<rvec, double>> &ineqs,
                          int n) {
  if (n > 8)
    throw DimensionTooLargeError("vertex enumeration limited to n <= 8");
  const int m = (int)ineqs.size();
  const int total = n + m; // candidate active rows: p_i = 0 and a_j p = b_j
  // C(total, n-1) systems; keep the combinatorics sane.
  double combos = 1;
  for (int i = 0; i < n - 1; ++i)
    combos *= double(total - i) / double(i + 1);
  if (combos > 2e6)
    throw DimensionTooLargeError("vertex enumeration would need " +
                                 std::to_string((long long)combos) + " systems");

  std::vector<rvec> vertices;
  std::vector<int> pick(std::max(0, n - 1));
  const double feas_tol = 1e-10;

  auto try_active_set = [&](const std::vector<int> &active) {
    rmat sys(n, n);
    rvec rhs(n);
    sys.row(0).setOnes();
    rhs(0) = 1;
    for (int r = 0; r < n - 1; ++r) {
      const int idx = active[(size_t)r];
      if (idx < n) {
        sys.row(r + 1).setZero();
        sys(r + 1, idx) = 1;
        rhs(r + 1) = 0;
      } else {
        sys.row(r + 1) = ineqs[(size_t)(idx - n)].first.transpose();
        rhs(r + 1) = ineqs[(size_t)(idx - n)].second;
      }
    }
    Eigen::FullPivLU<rmat> lu(sys);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible())
      return;
    rvec p = lu.solve(rhs);
    for (int i = 0; i < n; ++i)
      if (p(i) < -feas_tol)
        return;
    for (const auto &[a, b] : ineqs)
      if (a.dot(p) < b - feas_tol)
        return;
    for (int i = 0; i < n; ++i)
      p(i) = std::max(p(i), 0.0);
    p /= p.sum();
    for (const auto &v : vertices)
      if ((v - p).cwiseAbs().maxCoeff() < 1e-9)
        return;
    vertices.push_back(p);
  };

  if (n == 1) {
    rvec p = rvec::Ones(1);
    bool ok = true;
    for (const auto &[a, b] : ineqs)
      ok = ok && a.dot(p) >= b - feas_tol;
    if (ok)
      vertices.push_back(p);
    return vertices;
  }

  // Enumerate n-1 element subsets of the candidate rows.
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n - 1) {
      try_active_set(pick);
      return;
    }
    for (int i = start; i <= total - (n - 1 - depth); ++i) {
      pick[(size_t)depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return vertices;
}

inline SdpSolution diagonal_fast_path(const SdpProblem &problem) {
  const int n = problem.dim;
  bool diag = is_diagonal(problem.objective);
  for (const auto &[a, b] : problem.constraints)
    diag = diag && is_diagonal(a);
  if (!diag)
    throw SolverFailureError("diagonal_fast_path on a non-diagonal instance");
  std::vector<std::pair<rvec, double>> rows;
  for (const auto &[a, b] : problem.constraints)
    rows.push_back({real_diagonal(a), b});
  std::vector<rvec> vertices;
  try {
    vertices = simplex_polytope_vertices(rows, n);
  } catch (const DimensionTooLargeError &) {
    return sdp_minimize(problem);
  }
  SdpSolution sol;
  if (vertices.empty()) {
    sol.status = SdpStatus::Infeasible;
    std::vector<cmat> gambles;
    for (const auto &[a, b] : problem.constraints)
      gambles.push_back(cmat(a - b * cmat::Identity(n, n)));
    CertificateResult cr = certificate_program(gambles);
    sol.certificate = make_verified_certificate(gambles, cr);
    return sol;
  }
  const rvec c = real_diagonal(problem.objective);
  double best = std::numeric_limits<double>::infinity();
  rvec best_p;
  for (const auto &p : vertices) {
    const double v = c.dot(p);
    if (v < best) {
      best = v;
      best_p = p;
    }
  }
  sol.status = SdpStatus::Optimal;
  sol.value = best;
  sol.gap = 0;
  sol.optimizer = make_density(diag_matrix(best_p));
  return sol;
}

} // namespace qcredal

#endif // QCREDAL_SDP_HPP
