/**
 * This code is part of qcredal.
 *
 * (C) Copyright the qcredal developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

// Projective measurements, density matrices, payoff resolution for the
// betting protocol, and Born probabilities.

#ifndef QCREDAL_MEASUREMENT_HPP
#define QCREDAL_MEASUREMENT_HPP

#include <cmath>
#include <string>
#include <vector>

#include "qcredal/linalg.hpp"

namespace qcredal {

inline constexpr double kProjectorTol = 1e-10;
inline constexpr double kTraceTol = 1e-9;

// A validated orthogonal projector together with its rank.
struct Projector {
  cmat matrix;
  int rank = 0;

  int dim() const { return (int)matrix.rows(); }
};

inline Projector make_projector(const cmat &raw) {
  cmat p = validate_hermitian(raw);
  if (inf_norm<double>(cmat(p * p - p)) > kProjectorTol)
    throw NotProjectorError("matrix is not idempotent");
  if (!is_psd_nonzero(p) && classify(p) != Definiteness::Zero)
    throw NotProjectorError("matrix is not positive semi-definite");
  const double tr = p.trace().real();
  const int rank = (int)std::lround(tr);
  if (std::abs(tr - rank) > kTraceTol || rank < 0)
    throw NotProjectorError("trace " + std::to_string(tr) +
                            " is not close to an integer rank");
  return Projector{p, rank};
}

// Rank-one projector onto a (normalized) column vector.
inline Projector projector_onto(const cvec &v) {
  cvec u = v / std::sqrt(v.squaredNorm());
  return Projector{cmat(u * u.adjoint()), 1};
}

// Complete family of pairwise orthogonal projectors.
struct ProjectiveMeasurement {
  std::vector<Projector> projectors;

  int size() const { return (int)projectors.size(); }
  int dim() const { return projectors.empty() ? 0 : projectors[0].dim(); }
  const Projector &operator[](int i) const { return projectors[(size_t)i]; }
};

inline ProjectiveMeasurement
make_measurement(const std::vector<cmat> &mats) {
  if (mats.empty())
    throw NotCompleteError("measurement needs at least one projector");
  ProjectiveMeasurement m;
  const Eigen::Index n = mats[0].rows();
  for (size_t i = 0; i < mats.size(); ++i) {
    if (mats[i].rows() != n)
      throw DimensionMismatchError("projector " + std::to_string(i) +
                                   " has a different dimension");
    try {
      m.projectors.push_back(make_projector(mats[i]));
    } catch (const NotProjectorError &e) {
      throw NotProjectorError("projector " + std::to_string(i) + ": " +
                              e.what());
    }
  }
  for (size_t i = 0; i < mats.size(); ++i)
    for (size_t k = i + 1; k < mats.size(); ++k) {
      cmat prod = m.projectors[i].matrix * m.projectors[k].matrix;
      if (inf_norm<double>(prod) > kProjectorTol)
        throw NotOrthogonalError("projectors " + std::to_string(i) + " and " +
                                 std::to_string(k) + " are not orthogonal");
    }
  cmat sum = cmat::Zero(n, n);
  for (const auto &p : m.projectors)
    sum += p.matrix;
  if (inf_norm<double>(cmat(sum - cmat::Identity(n, n))) > kProjectorTol)
    throw NotCompleteError("projectors do not sum to the identity");
  return m;
}

// PSD trace-one Hermitian matrix.
struct DensityMatrix {
  cmat matrix;

  int dim() const { return (int)matrix.rows(); }
  bool diagonal() const { return is_diagonal(matrix); }
};

inline DensityMatrix make_density(const cmat &raw) {
  cmat rho = validate_hermitian(raw);
  Definiteness d = classify(rho);
  if (d != Definiteness::PD && d != Definiteness::PSDNZ)
    throw NotDensityMatrixError("matrix is not positive semi-definite "
                                "(classify: " +
                                std::string(to_string(d)) + ")");
  if (std::abs(rho.trace().real() - 1.0) > kTraceTol)
    throw NotDensityMatrixError("trace " + std::to_string(rho.trace().real()) +
                                " != 1");
  return DensityMatrix{rho};
}

inline DensityMatrix maximally_mixed(int n) {
  return DensityMatrix{cmat::Identity(n, n) / double(n)};
}

// Payoff of a gamble when the bookmaker's meter fires along a rank-one
// projector: the unique gamma with Pi G Pi = gamma Pi.
inline double payoff(const cmat &g, const Projector &pi) {
  if (pi.dim() != g.rows())
    throw DimensionMismatchError("payoff: dimension mismatch");
  if (pi.rank != 1)
    throw RankNotOneError("payoff requires a rank-one projector, got rank " +
                          std::to_string(pi.rank));
  cmat pgp = pi.matrix * g * pi.matrix;
  const double gamma = pgp.trace().real();
  const double scale = std::max(1.0, inf_norm<double>(g));
  if (inf_norm<double>(cmat(pgp - gamma * pi.matrix)) > 1e-10 * scale)
    throw Error("payoff: Pi G Pi deviates from gamma Pi");
  return gamma;
}

// Born probabilities p_i = Tr(Pi_i rho Pi_i). Tiny negatives (within 1e-12)
// are clamped to zero and the vector renormalized; anything worse raises.
inline rvec born_probabilities(const DensityMatrix &rho,
                               const ProjectiveMeasurement &m) {
  if (rho.dim() != m.dim())
    throw DimensionMismatchError("born_probabilities: dimension mismatch");
  rvec p(m.size());
  for (int i = 0; i < m.size(); ++i) {
    const cmat &pi = m[i].matrix;
    p(i) = cmat(pi * rho.matrix * pi).trace().real();
    if (p(i) < -1e-12)
      throw Error("born probability " + std::to_string(i) + " = " +
                  std::to_string(p(i)) + " below clamping tolerance");
    if (p(i) < 0)
      p(i) = 0;
  }
  const double total = p.sum();
  if (std::abs(total - 1.0) > kTraceTol)
    throw Error("born probabilities sum to " + std::to_string(total));
  return p / total;
}

// Measurement along the eigenvectors of a density matrix, one rank-one
// projector per eigenvalue (degeneracies split along the computed Jacobi
// eigenbasis, which is deterministic).
inline ProjectiveMeasurement eigenmeasurement(const DensityMatrix &rho) {
  Eigendecomposition<double> ed = eig(rho.matrix);
  ProjectiveMeasurement m;
  for (Eigen::Index k = 0; k < ed.values.size(); ++k) {
    cvec v = ed.vectors.col(k);
    m.projectors.push_back(Projector{cmat(v * v.adjoint()), 1});
  }
  return m;
}

// Canonical (computational-basis) measurement on an n-dimensional system.
inline ProjectiveMeasurement canonical_measurement(int n) {
  std::vector<cmat> mats;
  for (int i = 0; i < n; ++i) {
    cmat p = cmat::Zero(n, n);
    p(i, i) = 1.0;
    mats.push_back(p);
  }
  return make_measurement(mats);
}

// Luders update rho -> Pi rho Pi / Tr(Pi rho Pi).
inline DensityMatrix luders(const DensityMatrix &rho, const cmat &pi) {
  cmat num = pi * rho.matrix * pi;
  const double tr = num.trace().real();
  if (tr <= 0)
    throw UndefinedConditioningError("Luders update on a zero-probability event");
  return make_density(num / tr);
}

} // namespace qcredal

#endif // QCREDAL_MEASUREMENT_HPP
