/**
 * This code is part of qcredal.
 *
 * (C) Copyright the qcredal developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

// The desirability engine: gamble assessments and coherence checking, credal
// sets of density matrices (constraint and extreme-point representations),
// lower/upper previsions, conditioning (selective and non-selective),
// unitary evolution, marginalisation, natural extension, independence and
// Frechet-bound checks, plus the exact classical (diagonal) embedding.

#ifndef QCREDAL_CREDAL_HPP
#define QCREDAL_CREDAL_HPP

#include <algorithm>
#include <memory>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "qcredal/linalg.hpp"
#include "qcredal/measurement.hpp"
#include "qcredal/sdp.hpp"

namespace qcredal {

inline constexpr double kCoherenceMargin = 1e-9;
inline constexpr double kPrevisionTol = 1e-7;
inline constexpr double kSetEqualityTol = 1e-6;

enum class Strictness { Strict, Border };

// One accepted gamble. Strict models membership of the open cone of strictly
// desirable gambles; Border pins a boundary ray (desirable but not strictly).
struct Assessment {
  cmat gamble;
  Strictness strictness = Strictness::Strict;
};

inline Assessment strictly_desirable(const cmat &g) {
  return Assessment{validate_hermitian(g), Strictness::Strict};
}
inline Assessment border_desirable(const cmat &g) {
  return Assessment{validate_hermitian(g), Strictness::Border};
}

enum class CoherenceStatus { Coherent, IncursPartialLoss };

struct CoherenceReport {
  CoherenceStatus status = CoherenceStatus::Coherent;
  double margin = 0; // t* of the strict system (uniform slack when no strict)
  std::optional<DensityMatrix> witness;       // when coherent
  std::optional<SdpCertificate> certificate;  // when incoherent; alpha is
                                              // indexed by assessment
  bool coherent() const { return status == CoherenceStatus::Coherent; }
};

// Avoiding-partial-loss check. PSDNZ gambles are always desirable and drop
// out; the rest feed a feasibility-margin program over the density matrices:
// Border gambles need Tr(G rho) >= 0, Strict gambles a strictly positive
// joint margin. Incoherence comes with a verified Farkas combination
// sum alpha_k G_k <= -beta I (beta = 0 flags a zero-margin system).
inline CoherenceReport check_coherence(const std::vector<Assessment> &assessments,
                                       int dim) {
  std::vector<cmat> border, strict;
  std::vector<size_t> border_idx, strict_idx;
  for (size_t k = 0; k < assessments.size(); ++k) {
    const cmat g = validate_hermitian(assessments[k].gamble);
    if (g.rows() != dim)
      throw DimensionMismatchError("assessment " + std::to_string(k) +
                                   " has dimension " + std::to_string(g.rows()));
    const Definiteness d = classify(g);
    if (d == Definiteness::PD || d == Definiteness::PSDNZ)
      continue; // accepting partial gain: automatically satisfied
    if (d == Definiteness::Zero) {
      if (assessments[k].strictness == Strictness::Border)
        continue; // 0 >= 0, information free
      // a strictly desirable zero gamble is a zero-margin Dutch book
      CoherenceReport rep;
      rep.status = CoherenceStatus::IncursPartialLoss;
      rep.margin = 0;
      SdpCertificate cert;
      cert.alpha = rvec::Zero(assessments.size());
      cert.alpha((Eigen::Index)k) = 1;
      cert.beta = 0;
      rep.certificate = cert;
      return rep;
    }
    if (assessments[k].strictness == Strictness::Border) {
      border.push_back(g);
      border_idx.push_back(k);
    } else {
      strict.push_back(g);
      strict_idx.push_back(k);
    }
  }

  CoherenceReport rep;
  MarginReport mr = feasibility_margin(dim, border, strict);
  rep.margin = mr.margin;

  auto spread_alpha = [&](const rvec &alpha) {
    rvec full = rvec::Zero(assessments.size());
    for (size_t j = 0; j < border_idx.size(); ++j)
      full((Eigen::Index)border_idx[j]) = alpha((Eigen::Index)j);
    for (size_t j = 0; j < strict_idx.size(); ++j)
      full((Eigen::Index)strict_idx[j]) =
          alpha((Eigen::Index)(border_idx.size() + j));
    return full;
  };

  if (!mr.feasible) {
    rep.status = CoherenceStatus::IncursPartialLoss;
    if (mr.certificate) {
      SdpCertificate cert;
      cert.alpha = spread_alpha(mr.certificate->alpha);
      cert.beta = mr.certificate->beta;
      rep.certificate = cert;
    }
    return rep;
  }

  if (!strict.empty() && mr.margin <= kCoherenceMargin) {
    // boundary system: feasible only with zero strict slack
    rep.status = CoherenceStatus::IncursPartialLoss;
    std::vector<cmat> all = border;
    all.insert(all.end(), strict.begin(), strict.end());
    CertificateResult cr = certificate_program(all);
    if (auto cert = make_verified_certificate(all, cr)) {
      cert->alpha = spread_alpha(cert->alpha);
      rep.certificate = cert;
    }
    return rep;
  }

  rep.status = CoherenceStatus::Coherent;
  rep.witness = mr.witness;
  return rep;
}

struct PrevisionInterval {
  double lower = 0;
  double upper = 0;
};

// ---------------------------------------------------------------------------
// Credal sets
// ---------------------------------------------------------------------------

namespace detail {

// Gamble-side event map for implicit conditional sets: one node applies
// G -> sum_k K G K^dagger (projector sandwiches for conditioning, U^dagger
// on the left for evolution, entrywise conjugation first for anti-unitaries)
// and then delegates to the map of the set it refined.
struct GambleMap {
  std::vector<cmat> kraus;
  bool conjugate_first = false;
  std::shared_ptr<const GambleMap> outer;

  cmat apply(const cmat &g) const {
    cmat x = conjugate_first ? cmat(g.conjugate()) : g;
    cmat out = cmat::Zero(x.rows(), x.cols());
    for (const auto &k : kraus)
      out += k * x * k.adjoint();
    return outer ? outer->apply(out) : out;
  }

  // Adjoint action on states: <apply(G), rho> = <G, state_apply(rho)>.
  cmat state_apply(const cmat &rho) const {
    cmat x = outer ? outer->state_apply(rho) : rho;
    cmat out = cmat::Zero(x.rows(), x.cols());
    for (const auto &k : kraus)
      out += k.adjoint() * x * k;
    return conjugate_first ? cmat(out.conjugate()) : out;
  }
};

} // namespace detail

// A closed convex set of density matrices. Constraint form (HRep) is
// {rho in D : Tr(A_j rho) >= 0}; extreme-point form (VRep) is a convex hull,
// exact for classical polytopes and finite mixtures. Diagonal constraint
// systems at n <= 8 are materialized as classical polytopes on construction,
// which restricts the duals to diagonal density matrices exactly as the
// classical theory does. Conditional sets stay implicit: they share the base
// constraints and carry a gamble-side event map; their previsions are
// evaluated by fractional bisection.
class CredalSet {
public:
  static CredalSet vacuous(int dim, bool classical = false) {
    CredalSet m;
    m.dim_ = dim;
    m.vacuous_ = true;
    m.classical_ = classical && dim <= 8;
    if (m.classical_) {
      for (int i = 0; i < dim; ++i) {
        rvec p = rvec::Zero(dim);
        p(i) = 1;
        m.extremes_.push_back(diag_matrix<double>(p));
      }
    } else {
      m.region_ = std::make_shared<FeasibleRegion>(
          dim, std::vector<std::pair<cmat, double>>{});
    }
    return m;
  }

  static CredalSet from_constraints(int dim, const std::vector<cmat> &gambles) {
    CredalSet m;
    m.dim_ = dim;
    bool all_diag = !gambles.empty();
    for (const auto &g : gambles) {
      cmat h = validate_hermitian(g);
      if (h.rows() != dim)
        throw DimensionMismatchError("constraint gamble dimension mismatch");
      Definiteness d = classify(h);
      if (d == Definiteness::PD || d == Definiteness::PSDNZ ||
          d == Definiteness::Zero)
        continue; // vacuous constraint, not informative
      all_diag = all_diag && is_diagonal(h);
      m.constraints_.push_back(h);
    }
    if (m.constraints_.empty())
      return vacuous(dim);
    if (all_diag && dim <= 8) {
      // classical polytope: enumerate the simplex vertices
      std::vector<std::pair<rvec, double>> rows;
      for (const auto &g : m.constraints_)
        rows.push_back({real_diagonal(g), 0.0});
      auto verts = simplex_polytope_vertices(rows, dim);
      if (verts.empty())
        throw IncoherentError("constraint polytope is empty");
      m.classical_ = true;
      for (const auto &p : verts)
        m.extremes_.push_back(diag_matrix<double>(p));
      return m;
    }
    std::vector<std::pair<cmat, double>> cons;
    for (const auto &g : m.constraints_)
      cons.push_back({g, 0.0});
    m.region_ = std::make_shared<FeasibleRegion>(dim, cons);
    if (!m.region_->feasible())
      throw IncoherentError("constraint system admits no density matrix");
    return m;
  }

  // The hull of the given states, with quantum semantics: joint models built
  // from it pin the full Hermitian basis. Classical (diagonal-restricted)
  // sets come from classical_embed / classical_embed_polytope or from
  // all-diagonal constraint systems, never from shape detection here: a
  // diagonal density is a perfectly good quantum state.
  static CredalSet from_extreme_points(const std::vector<DensityMatrix> &pts,
                                       bool classical = false) {
    if (pts.empty())
      throw IncoherentError("a credal set needs at least one extreme point");
    CredalSet m;
    m.dim_ = pts[0].dim();
    for (const auto &p : pts) {
      if (p.dim() != m.dim_)
        throw DimensionMismatchError("extreme point dimension mismatch");
      m.extremes_.push_back(p.matrix);
    }
    m.classical_ =
        classical && std::all_of(m.extremes_.begin(), m.extremes_.end(),
                                 [](const cmat &v) { return is_diagonal(v); });
    return m;
  }

  int dim() const { return dim_; }
  bool classical() const { return classical_; }
  bool vacuous_set() const { return vacuous_; }
  bool has_extremes() const { return !extremes_.empty(); }
  bool implicit_conditional() const { return map_ != nullptr; }
  const std::vector<cmat> &constraint_gambles() const { return constraints_; }
  const std::vector<cmat> &extreme_points() const { return extremes_; }

  double lower_prevision(const cmat &gamble) const {
    cmat g = validate_hermitian(gamble);
    if (g.rows() != dim_)
      throw DimensionMismatchError("prevision: gamble dimension mismatch");
    if (!extremes_.empty()) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto &v : extremes_)
        best = std::min(best, inner(g, v));
      return best;
    }
    if (map_)
      return conditional_bisection(
          *region_, [this](const cmat &x) { return map_->apply(x); }, g);
    SdpSolution s = region_->minimize(g);
    if (s.status == SdpStatus::Infeasible)
      throw SolverFailureError("prevision over an empty credal set");
    return s.value;
  }

  double upper_prevision(const cmat &gamble) const {
    return -lower_prevision(cmat(-gamble)); // conjugacy, by construction
  }

  PrevisionInterval prevision(const cmat &gamble) const {
    return {lower_prevision(gamble), upper_prevision(gamble)};
  }

  // Dual membership test for gambles: desirable iff partially positive or
  // every density matrix in the set pays strictly.
  bool is_desirable(const cmat &gamble) const {
    if (is_psd_nonzero(validate_hermitian(gamble)))
      return true;
    return lower_prevision(gamble) > kCoherenceMargin;
  }

  // Membership of a density matrix.
  bool contains(const DensityMatrix &rho, double tol = 1e-8) const {
    if (rho.dim() != dim_)
      throw DimensionMismatchError("contains: dimension mismatch");
    if (map_)
      throw Error("membership of an implicit conditional set is not defined");
    if (!constraints_.empty() || extremes_.empty()) {
      if (classical_ && !is_diagonal(rho.matrix, tol))
        return false;
      for (const auto &a : constraints_)
        if (inner(a, rho.matrix) < -tol)
          return false;
      return true;
    }
    return in_hull(extremes_, rho.matrix, tol);
  }

  // Implicit-conditional internals, used by marginal membership.
  cmat map_gamble(const cmat &g) const { return map_ ? map_->apply(g) : g; }
  cmat map_state(const cmat &rho) const {
    return map_ ? map_->state_apply(rho) : rho;
  }
  std::shared_ptr<const FeasibleRegion> region() const { return region_; }

  // Convex-hull membership via a uniform-margin program over the weights.
  static bool in_hull(const std::vector<cmat> &extremes, const cmat &target,
                      double tol);

private:
  friend CredalSet condition_map(const CredalSet &, const std::vector<cmat> &,
                                 const cmat &);
  friend CredalSet evolve(const CredalSet &, const UnitaryMap<double> &);

  int dim_ = 0;
  bool classical_ = false;
  bool vacuous_ = false;
  std::vector<cmat> constraints_;
  std::vector<cmat> extremes_;
  std::shared_ptr<const detail::GambleMap> map_;
  std::shared_ptr<const FeasibleRegion> region_;
};

inline bool CredalSet::in_hull(const std::vector<cmat> &extremes,
                               const cmat &target, double tol) {
  using namespace barrier;
  const int kk = (int)extremes.size();
  const int n = (int)target.rows();
  const int d = herm_coord_dim(n);
  // weights w >= 0, sum w = 1, sum w_i V_i = target; maximize the uniform
  // slack of w >= t.
  Program p;
  p.dim = kk + 1;
  p.objective = BVec::Zero(kk + 1);
  p.objective(kk) = -1;
  p.ineq_a = BRMat::Zero(kk, kk + 1);
  p.ineq_b = BVec::Zero(kk);
  for (int i = 0; i < kk; ++i) {
    p.ineq_a(i, i) = 1;
    p.ineq_a(i, kk) = -1;
  }
  p.eq_a = BRMat::Zero(1 + d, kk + 1);
  p.eq_b = BVec::Zero(1 + d);
  p.eq_a.row(0).head(kk).setOnes();
  p.eq_b(0) = 1;
  for (int i = 0; i < kk; ++i) {
    rvec c = herm_to_coords(extremes[(size_t)i]);
    for (int r = 0; r < d; ++r)
      p.eq_a(1 + r, i) = (real)c(r);
  }
  rvec tc = herm_to_coords(target);
  for (int r = 0; r < d; ++r)
    p.eq_b(1 + r) = (real)tc(r);
  p.x_norm_bound = 4;

  // least-norm point on the affine slice; infeasible linear system means the
  // target is outside the affine hull
  Eigen::JacobiSVD<BRMat> svd(p.eq_a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  BVec x0 = svd.solve(p.eq_b);
  if ((p.eq_a * x0 - p.eq_b).norm() > (real)std::max(tol, 1e-10))
    return false;
  x0(kk) = x0.head(kk).minCoeff() - 1;
  Solver solver(p);
  double best_lower = -std::numeric_limits<double>::infinity();
  auto on_stage = [&](const BVec &x, real) {
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kk; ++i)
      lo = std::min(lo, (double)x(i));
    best_lower = std::max(best_lower, lo);
    return best_lower < 0;
  };
  solver.solve(x0, (real)1e-12, 1, 5, (real)1e-10, 40, on_stage);
  return best_lower >= -tol;
}

// Coherent assessments to their dual credal set: every non-PSDNZ gamble,
// Border and Strict alike, contributes a Tr(G rho) >= 0 constraint.
inline CredalSet credal_from_assessments(const std::vector<Assessment> &assessments,
                                         int dim) {
  CoherenceReport rep = check_coherence(assessments, dim);
  if (!rep.coherent())
    throw IncoherentError("assessments incur partial loss (margin " +
                          std::to_string(rep.margin) + ")");
  std::vector<cmat> gambles;
  for (const auto &a : assessments)
    gambles.push_back(a.gamble);
  return CredalSet::from_constraints(dim, gambles);
}

inline double lower_prevision(const CredalSet &m, const cmat &g) {
  return m.lower_prevision(g);
}
inline double upper_prevision(const CredalSet &m, const cmat &g) {
  return m.upper_prevision(g);
}
inline PrevisionInterval prevision(const CredalSet &m, const cmat &g) {
  return m.prevision(g);
}
inline bool is_desirable(const CredalSet &m, const cmat &g) {
  return m.is_desirable(g);
}

// Maximality probe: a model pins a unique density matrix iff the prevision
// interval of every orthonormal Hermitian basis element collapses.
template <typename Model> bool is_maximal_model(const Model &m, int dim) {
  for (int k = 0; k < herm_coord_dim(dim); ++k) {
    cmat e = herm_basis_element<double>(dim, k);
    if (m.upper_prevision(e) - m.lower_prevision(e) > kPrevisionTol)
      return false;
  }
  return true;
}

inline bool is_maximal(const CredalSet &m) {
  return is_maximal_model(m, m.dim());
}

inline DensityMatrix extract_state(const CredalSet &m) {
  const int n = m.dim();
  rvec coords(herm_coord_dim(n));
  for (int k = 0; k < herm_coord_dim(n); ++k) {
    cmat e = herm_basis_element<double>(n, k);
    PrevisionInterval iv = m.prevision(e);
    if (iv.upper - iv.lower > kPrevisionTol)
      throw NotMaximalError("prevision interval of basis element " +
                            std::to_string(k) + " has width " +
                            std::to_string(iv.upper - iv.lower));
    coords(k) = 0.5 * (iv.lower + iv.upper);
  }
  cmat rho = coords_to_herm(coords, n);
  // clip numerical negatives before validating
  Eigendecomposition<double> ed = eig(rho);
  cmat fixed = cmat::Zero(n, n);
  for (int k = 0; k < n; ++k)
    fixed += std::max(ed.values(k), 0.0) *
             cmat(ed.vectors.col(k) * ed.vectors.col(k).adjoint());
  fixed /= fixed.trace().real();
  return make_density(fixed);
}

// ---------------------------------------------------------------------------
// Conditioning and evolution
// ---------------------------------------------------------------------------

namespace detail {

inline CredalSet luders_extremes(const CredalSet &m,
                                 const std::vector<cmat> &kraus) {
  std::vector<DensityMatrix> out;
  for (const auto &v : m.extreme_points()) {
    cmat num = cmat::Zero(m.dim(), m.dim());
    for (const auto &k : kraus)
      num += k * v * k.adjoint();
    const double tr = num.trace().real();
    if (tr <= kCoherenceMargin)
      throw UndefinedConditioningError(
          "an extreme point assigns zero probability to the event");
    out.push_back(make_density(num / tr));
  }
  return CredalSet::from_extreme_points(out);
}

} // namespace detail

// Shared implementation: condition on the event whose update map is
// rho -> sum_k K rho K^dagger, with event gamble sum_k K^dagger K used for
// the probability checks.
inline CredalSet condition_map(const CredalSet &m,
                               const std::vector<cmat> &kraus,
                               const cmat &event_gamble) {
  const double p_upper = m.upper_prevision(event_gamble);
  if (p_upper <= kCoherenceMargin)
    return CredalSet::vacuous(m.dim(), m.classical());
  const double p_lower = m.lower_prevision(event_gamble);
  if (p_lower <= kCoherenceMargin)
    throw UndefinedConditioningError(
        "event has zero lower but positive upper probability");
  if (m.has_extremes())
    return detail::luders_extremes(m, kraus);
  CredalSet out = m;
  out.vacuous_ = false;
  auto node = std::make_shared<detail::GambleMap>();
  node->kraus = kraus;
  node->outer = out.map_;
  out.map_ = node;
  return out;
}

inline CredalSet condition_selective(const CredalSet &m, const Projector &pi) {
  if (pi.dim() != m.dim())
    throw DimensionMismatchError("condition_selective: dimension mismatch");
  return condition_map(m, {pi.matrix}, pi.matrix);
}

// Conditioning on "some outcome in J occurred".
inline CredalSet condition_nonselective(const CredalSet &m,
                                        const ProjectiveMeasurement &meas,
                                        const std::vector<int> &J) {
  if (meas.dim() != m.dim())
    throw DimensionMismatchError("condition_nonselective: dimension mismatch");
  if (J.empty())
    throw Error("condition_nonselective: empty index set");
  std::vector<cmat> kraus;
  cmat event = cmat::Zero(m.dim(), m.dim());
  for (int j : J) {
    if (j < 0 || j >= meas.size())
      throw Error("condition_nonselective: index out of range");
    kraus.push_back(meas[j].matrix);
    event += meas[j].matrix;
  }
  return condition_map(m, kraus, event);
}

// Unitary (or anti-unitary) image {U rho U^dagger : rho in M}.
inline CredalSet evolve(const CredalSet &m, const UnitaryMap<double> &u) {
  if (u.matrix.rows() != m.dim())
    throw DimensionMismatchError("evolve: dimension mismatch");
  CredalSet out = m;
  if (m.has_extremes()) {
    std::vector<cmat> pts;
    for (const auto &v : m.extreme_points())
      pts.push_back(conjugate(u, v, ConjugateAs::State));
    out.extremes_ = pts;
    out.classical_ = m.classical_ && std::all_of(pts.begin(), pts.end(),
                                                 [](const cmat &v) {
                                                   return is_diagonal(v);
                                                 });
    out.vacuous_ = m.vacuous_ && out.classical_;
    if (!m.constraints_.empty()) {
      std::vector<cmat> cons;
      for (const auto &a : m.constraints_)
        cons.push_back(conjugate(u, a, ConjugateAs::State));
      out.constraints_ = cons;
    }
    return out;
  }
  if (m.implicit_conditional()) {
    // previsions of the image are previsions of U^dagger G U
    auto node = std::make_shared<detail::GambleMap>();
    node->kraus = {cmat(u.matrix.adjoint())};
    node->conjugate_first = u.antiunitary;
    node->outer = out.map_;
    out.map_ = node;
    return out;
  }
  // Tr(A rho) >= 0 for all rho in M  <=>  Tr((U A U^dagger) sigma) >= 0 for
  // all sigma in the image
  std::vector<cmat> cons;
  for (const auto &a : m.constraints_)
    cons.push_back(conjugate(u, a, ConjugateAs::State));
  return CredalSet::from_constraints(m.dim(), cons.empty()
                                                  ? std::vector<cmat>{}
                                                  : cons);
}

// ---------------------------------------------------------------------------
// Composite systems
// ---------------------------------------------------------------------------

// Implicit marginal of a credal set on A (x) B. Previsions of G are the
// previsions of the cylindrical extension G (x) I (or I (x) G); membership of
// sigma is feasibility of {rho in M : partial trace = sigma}.
class MarginalModel {
public:
  MarginalModel(CredalSet base, int dim_a, int dim_b, Subsystem keep)
      : base_(std::move(base)), na_(dim_a), nb_(dim_b), keep_(keep) {
    if (base_.dim() != dim_a * dim_b)
      throw DimensionMismatchError("marginal: dims do not factor the set");
  }

  int dim() const { return keep_ == Subsystem::A ? na_ : nb_; }

  cmat lift(const cmat &g) const {
    if ((int)g.rows() != dim())
      throw DimensionMismatchError("marginal: probe dimension mismatch");
    return keep_ == Subsystem::A
               ? tensor_product(g, cmat(cmat::Identity(nb_, nb_)))
               : tensor_product(cmat(cmat::Identity(na_, na_)), g);
  }

  double lower_prevision(const cmat &g) const {
    return base_.lower_prevision(lift(g));
  }
  double upper_prevision(const cmat &g) const {
    return -lower_prevision(cmat(-g));
  }
  PrevisionInterval prevision(const cmat &g) const {
    return {lower_prevision(g), upper_prevision(g)};
  }
  bool is_desirable(const cmat &g) const {
    if (is_psd_nonzero(validate_hermitian(g)))
      return true;
    return lower_prevision(g) > kCoherenceMargin;
  }

  // Exact materialization by partial-tracing extreme points (linear map,
  // so the hull maps onto the hull). Only available for VRep bases.
  std::optional<CredalSet> materialized() const {
    if (!base_.has_extremes())
      return std::nullopt;
    std::vector<DensityMatrix> pts;
    for (const auto &v : base_.extreme_points())
      pts.push_back(make_density(partial_trace(
          v, na_, nb_, keep_ == Subsystem::A ? Subsystem::B : Subsystem::A)));
    return CredalSet::from_extreme_points(pts);
  }

  bool membership(const DensityMatrix &sigma, double tol = 1e-8) const {
    if (sigma.dim() != dim())
      throw DimensionMismatchError("marginal membership: dimension mismatch");
    if (base_.has_extremes()) {
      std::vector<cmat> traced;
      for (const auto &v : base_.extreme_points())
        traced.push_back(partial_trace(
            v, na_, nb_, keep_ == Subsystem::A ? Subsystem::B : Subsystem::A));
      return CredalSet::in_hull(traced, sigma.matrix, tol);
    }
    // {rho in M : Tr_other(S(rho)) = sigma * Tr(S(rho))} expressed through
    // the gamble-side map; for plain sets S is the identity and the trace
    // factor is one.
    std::vector<std::pair<cmat, double>> eqs;
    const cmat lift_id = base_.map_gamble(cmat(
        cmat::Identity(na_ * nb_, na_ * nb_)));
    for (int k = 0; k < herm_coord_dim(dim()); ++k) {
      cmat e = herm_basis_element<double>(dim(), k);
      const double c = inner(e, sigma.matrix);
      cmat row = base_.map_gamble(lift(e)) - c * lift_id;
      eqs.push_back({row, 0.0});
    }
    auto region = base_.region();
    if (!region)
      throw Error("marginal membership needs a constraint-based set");
    auto out = region->slice_feasibility(eqs);
    return out.margin >= -tol;
  }

  const CredalSet &base() const { return base_; }

private:
  CredalSet base_;
  int na_, nb_;
  Subsystem keep_;
};

inline MarginalModel marginal(const CredalSet &m, int dim_a, int dim_b,
                              Subsystem keep) {
  return MarginalModel(m, dim_a, dim_b, keep);
}

namespace detail {

// Constraint gambles describing a credal set, for building joint models:
// HRep sets contribute their own constraints, singletons are pinned on the
// orthonormal basis (diagonal part only for classical singletons).
inline std::vector<cmat> constraint_description(const CredalSet &m) {
  if (!m.constraint_gambles().empty())
    return m.constraint_gambles();
  if (m.vacuous_set())
    return {};
  if (m.has_extremes() && m.extreme_points().size() == 1) {
    const cmat &rho = m.extreme_points()[0];
    const int n = m.dim();
    std::vector<cmat> pins;
    const int coords = m.classical() ? n : herm_coord_dim(n);
    for (int k = 0; k < coords; ++k) {
      cmat e = herm_basis_element<double>(n, k);
      const double c = inner(e, rho);
      pins.push_back(cmat(e - c * cmat::Identity(n, n)));
      pins.push_back(cmat(c * cmat::Identity(n, n) - e));
    }
    return pins;
  }
  throw Error("no constraint description available for this credal set "
              "(general extreme-point sets are not convertible)");
}

} // namespace detail

// Least-committal joint model with the given marginals: the cylindrical
// extensions of the operands' constraint gambles.
inline CredalSet natural_extension(const CredalSet &ma, const CredalSet &mb) {
  const int n = ma.dim(), m = mb.dim();
  std::vector<cmat> cons;
  for (const auto &a : detail::constraint_description(ma))
    cons.push_back(tensor_product(a, cmat(cmat::Identity(m, m))));
  for (const auto &b : detail::constraint_description(mb))
    cons.push_back(tensor_product(cmat(cmat::Identity(n, n)), b));
  return CredalSet::from_constraints(n * m, cons);
}

// ---------------------------------------------------------------------------
// Independence, irrelevance, Frechet bounds
// ---------------------------------------------------------------------------

struct IndependenceReport {
  bool independent = false;
  DensityMatrix rho_a, rho_b;
  double residual = 0;
};

inline IndependenceReport check_independence(const DensityMatrix &rho_ab,
                                             int dim_a, int dim_b) {
  cmat ra = partial_trace(rho_ab.matrix, dim_a, dim_b, Subsystem::B);
  cmat rb = partial_trace(rho_ab.matrix, dim_a, dim_b, Subsystem::A);
  IndependenceReport rep;
  rep.rho_a = make_density(ra);
  rep.rho_b = make_density(rb);
  rep.residual = inf_norm<double>(cmat(rho_ab.matrix - tensor_product(ra, rb)));
  rep.independent = rep.residual <= 1e-8;
  return rep;
}

enum class IrrelevanceDirection { AtoB, BtoA };

struct IrrelevanceReport {
  double max_discrepancy = 0;
  int comparisons = 0;
  int undefined_events = 0;
  bool holds_on_tested_family() const { return max_discrepancy <= 1e-6; }
};

// Deterministic Haar-like measurement family (QR of a seeded Gaussian
// matrix) used to extend user-supplied families.
inline ProjectiveMeasurement seeded_haar_measurement(std::mt19937_64 &rng,
                                                     int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  cmat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<cmat> qr(a);
  cmat q = qr.householderQ();
  std::vector<cmat> mats;
  for (int k = 0; k < n; ++k) {
    cvec v = q.col(k);
    mats.push_back(cmat(v * v.adjoint()));
  }
  return make_measurement(mats);
}

// Compares marginal previsions before and against after conditioning on each
// projector of the tested measurements (lifted to the composite system).
// Definable only on a finite family: the tested measurements plus twenty
// seeded pseudo-random ones.
inline IrrelevanceReport check_irrelevance_probe(
    const CredalSet &m_ab, int dim_a, int dim_b, IrrelevanceDirection dir,
    std::vector<ProjectiveMeasurement> measurements,
    const std::vector<cmat> &probes, uint64_t seed = 0x51u,
    int extra_random_measurements = 20) {
  const Subsystem keep =
      dir == IrrelevanceDirection::AtoB ? Subsystem::A : Subsystem::B;
  const int cond_dim = dir == IrrelevanceDirection::AtoB ? dim_b : dim_a;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < extra_random_measurements; ++i)
    measurements.push_back(seeded_haar_measurement(rng, cond_dim));

  MarginalModel base_marg = marginal(m_ab, dim_a, dim_b, keep);
  std::vector<double> base_lowers;
  for (const auto &p : probes)
    base_lowers.push_back(base_marg.lower_prevision(p));

  IrrelevanceReport rep;
  for (const auto &meas : measurements) {
    if (meas.dim() != cond_dim)
      throw DimensionMismatchError("irrelevance: measurement acts on the "
                                   "conditioning subsystem");
    for (int i = 0; i < meas.size(); ++i) {
      cmat lifted = dir == IrrelevanceDirection::AtoB
                        ? tensor_product(cmat(cmat::Identity(dim_a, dim_a)),
                                         meas[i].matrix)
                        : tensor_product(meas[i].matrix,
                                         cmat(cmat::Identity(dim_b, dim_b)));
      CredalSet conditioned = CredalSet::vacuous(m_ab.dim());
      try {
        conditioned = condition_map(m_ab, {lifted}, lifted);
      } catch (const UndefinedConditioningError &) {
        ++rep.undefined_events;
        continue;
      }
      MarginalModel cond_marg = marginal(conditioned, dim_a, dim_b, keep);
      for (size_t p = 0; p < probes.size(); ++p) {
        const double after = cond_marg.lower_prevision(probes[p]);
        rep.max_discrepancy =
            std::max(rep.max_discrepancy, std::abs(after - base_lowers[p]));
        ++rep.comparisons;
      }
    }
  }
  return rep;
}

struct FrechetReport {
  // (i) rho_A (x) I - rho_AB >= 0, (ii) I (x) rho_B - rho_AB >= 0,
  // (iii) rho_AB - (rho_A (x) I + I (x) rho_B - I) >= 0, (iv) rho_AB >= 0
  std::array<bool, 4> holds{};
  std::array<double, 4> min_eigenvalue{};
  bool all_hold() const {
    return holds[0] && holds[1] && holds[2] && holds[3];
  }
};

// Necessary conditions for separability (the reduction criterion plus the
// lower Frechet bound); entangled states violate them.
inline FrechetReport frechet_check(const DensityMatrix &rho_ab, int dim_a,
                                   int dim_b) {
  const cmat ra = partial_trace(rho_ab.matrix, dim_a, dim_b, Subsystem::B);
  const cmat rb = partial_trace(rho_ab.matrix, dim_a, dim_b, Subsystem::A);
  const int nm = dim_a * dim_b;
  const cmat eye = cmat::Identity(nm, nm);
  std::array<cmat, 4> tests = {
      cmat(tensor_product(ra, cmat(cmat::Identity(dim_b, dim_b))) -
           rho_ab.matrix),
      cmat(tensor_product(cmat(cmat::Identity(dim_a, dim_a)), rb) -
           rho_ab.matrix),
      cmat(rho_ab.matrix -
           (tensor_product(ra, cmat(cmat::Identity(dim_b, dim_b))) +
            tensor_product(cmat(cmat::Identity(dim_a, dim_a)), rb) - eye)),
      rho_ab.matrix};
  FrechetReport rep;
  for (int t = 0; t < 4; ++t) {
    const double tol = kPsdTolRel * std::max(1.0, inf_norm<double>(tests[t]));
    rep.min_eigenvalue[(size_t)t] = lambda_min<double>(tests[t]);
    rep.holds[(size_t)t] = rep.min_eigenvalue[(size_t)t] >= -tol;
  }
  // (iv) additionally asks for a nonzero matrix, which a density matrix is
  return rep;
}

// ---------------------------------------------------------------------------
// Classical embedding
// ---------------------------------------------------------------------------

inline CredalSet classical_embed(const rvec &p) {
  const int n = (int)p.size();
  double total = 0;
  for (int i = 0; i < n; ++i) {
    if (!(p(i) >= -1e-12))
      throw InvalidDistributionError("negative probability at index " +
                                     std::to_string(i));
    total += p(i);
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw InvalidDistributionError("probabilities sum to " +
                                   std::to_string(total));
  rvec q = p.cwiseMax(0.0);
  q /= q.sum();
  return CredalSet::from_extreme_points({make_density(diag_matrix<double>(q))},
                                        /*classical=*/true);
}

// Inequalities a . p >= b over the probability simplex.
inline CredalSet
classical_embed_polytope(const std::vector<std::pair<rvec, double>> &ineqs,
                         int n) {
  std::vector<cmat> gambles;
  for (const auto &[a, b] : ineqs) {
    if ((int)a.size() != n)
      throw DimensionMismatchError("inequality dimension mismatch");
    gambles.push_back(
        cmat(diag_matrix<double>(a) - b * cmat::Identity(n, n)));
  }
  if (gambles.empty())
    return CredalSet::vacuous(n, /*classical=*/true);
  CredalSet m = CredalSet::from_constraints(n, gambles);
  if (!m.classical())
    throw InvalidDistributionError("polytope embedding needs n <= 8");
  return m;
}

struct ClassicalDescription {
  std::vector<rvec> vertices; // probability mass functions
};

inline ClassicalDescription classical_project(const CredalSet &m) {
  if (!m.has_extremes())
    throw Error("classical_project needs an extreme-point description");
  ClassicalDescription out;
  for (const auto &v : m.extreme_points()) {
    if (!is_diagonal(v, 1e-10))
      throw Error("classical_project: extreme point is not diagonal");
    out.vertices.push_back(real_diagonal(v));
  }
  return out;
}

} // namespace qcredal

#endif // QCREDAL_CREDAL_HPP
