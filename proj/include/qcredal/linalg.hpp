/**
 * This code is part of qcredal.
 *
 * (C) Copyright the qcredal developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

// Complex Hermitian matrix algebra: validation, a cyclic Jacobi
// eigendecomposition, definiteness classification, Pauli coordinates,
// tensor products, partial traces and unitary conjugation. Everything is
// a pure free function over Eigen dense types templated on the real scalar.

#ifndef QCREDAL_LINALG_HPP
#define QCREDAL_LINALG_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "qcredal/errors.hpp"

namespace qcredal {

template <typename T>
using cmat_t = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using cvec_t = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, 1>;
template <typename T> using rmat_t = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T> using rvec_t = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using cmat = cmat_t<double>;
using cvec = cvec_t<double>;
using rmat = rmat_t<double>;
using rvec = rvec_t<double>;
using cplx = std::complex<double>;

inline constexpr double kHermTol = 1e-12;   // Hermitian deviation accepted on input
inline constexpr double kPsdTolRel = 1e-10; // definiteness cutoff, relative to ||A||_inf
inline constexpr double kEigTol = 1e-10;    // eigendecomposition quality bound
inline constexpr double kUnitaryTol = 1e-10;

// Entrywise max-abs norm (the norm used by every tolerance below).
template <typename T> T inf_norm(const cmat_t<T> &a) {
  return a.size() == 0 ? T(0) : a.cwiseAbs().maxCoeff();
}

template <typename T> bool all_finite(const cmat_t<T> &a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag()))
        return false;
  return true;
}

// Accept a raw complex grid as a gamble. The matrix is symmetrized to
// (A + A^dagger)/2 and the diagonal imaginary parts are zeroed, provided the
// deviation from Hermitianity stays within tol.
template <typename T>
cmat_t<T> validate_hermitian(const cmat_t<T> &raw, T tol = T(kHermTol)) {
  if (raw.rows() != raw.cols())
    throw NotSquareError("matrix is " + std::to_string(raw.rows()) + "x" +
                         std::to_string(raw.cols()));
  if (!all_finite(raw))
    throw NonFiniteError("matrix contains NaN or Inf entries");
  cmat_t<T> dev = raw - raw.adjoint().eval();
  if (inf_norm<T>(dev) > tol)
    throw NotHermitianError("||A - A^dagger||_inf = " +
                            std::to_string((double)inf_norm<T>(dev)) +
                            " exceeds " + std::to_string((double)tol));
  cmat_t<T> h = (raw + raw.adjoint().eval()) / T(2);
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    h(i, i) = std::complex<T>(h(i, i).real(), T(0));
  return h;
}

template <typename T> struct Eigendecomposition {
  rvec_t<T> values;  // ascending
  cmat_t<T> vectors; // orthonormal columns, values(k) <-> vectors.col(k)
};

namespace detail {

// Fix the phase of each eigenvector column so the first component with
// magnitude above tol becomes real and positive. Keeps eig deterministic,
// which downstream code (eigenmeasurement tie-breaks) relies on.
template <typename T> void normalize_column_phases(cmat_t<T> &v) {
  const T tol = T(1e-9);
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      T m = std::abs(v(r, c));
      if (m > tol) {
        std::complex<T> phase = v(r, c) / m;
        v.col(c) *= std::conj(phase);
        break;
      }
    }
  }
}

} // namespace detail

// Cyclic Jacobi diagonalization for complex Hermitian matrices. Deterministic
// sweep order, at most max_sweeps sweeps, off-diagonal threshold
// 1e-13 * ||A||_inf. Accurate at the sizes this library targets (n <= 32).
template <typename T>
Eigendecomposition<T> eig(const cmat_t<T> &a_in, int max_sweeps = 100) {
  const Eigen::Index n = a_in.rows();
  if (n != a_in.cols())
    throw NotSquareError("eig requires a square matrix");
  cmat_t<T> a = (a_in + a_in.adjoint().eval()) / T(2);
  cmat_t<T> v = cmat_t<T>::Identity(n, n);
  const T scale = std::max(T(1), inf_norm<T>(a));
  const T thresh = T(1e-13) * scale;

  auto off_max = [&]() {
    T m = T(0);
    for (Eigen::Index q = 1; q < n; ++q)
      for (Eigen::Index p = 0; p < q; ++p)
        m = std::max(m, std::abs(a(p, q)));
    return m;
  };

  int sweep = 0;
  while (off_max() > thresh) {
    if (++sweep > max_sweeps)
      throw NoConvergenceError("Jacobi eigensolver did not converge in " +
                               std::to_string(max_sweeps) + " sweeps");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        std::complex<T> apq = a(p, q);
        if (std::abs(apq) <= thresh)
          continue;
        // Unitary diagonalizing the 2x2 Hermitian block [[app, apq],[apq*, aqq]].
        const T app = a(p, p).real();
        const T aqq = a(q, q).real();
        const T m = std::abs(apq);
        const std::complex<T> phase = apq / m; // e^{i arg(apq)}
        const T tau = (aqq - app) / (T(2) * m);
        T t; // tangent of the rotation angle, smaller root for stability
        if (tau >= T(0))
          t = T(1) / (tau + std::sqrt(T(1) + tau * tau));
        else
          t = T(-1) / (-tau + std::sqrt(T(1) + tau * tau));
        const T c = T(1) / std::sqrt(T(1) + t * t);
        const std::complex<T> s = phase * (t * c);
        // Columns: [p q] <- [p q] * [[c, s],[-conj(s), c]]
        for (Eigen::Index r = 0; r < n; ++r) {
          const std::complex<T> arp = a(r, p), arq = a(r, q);
          a(r, p) = c * arp - std::conj(s) * arq;
          a(r, q) = s * arp + c * arq;
        }
        // Rows (adjoint action)
        for (Eigen::Index cidx = 0; cidx < n; ++cidx) {
          const std::complex<T> apc = a(p, cidx), aqc = a(q, cidx);
          a(p, cidx) = c * apc - s * aqc;
          a(q, cidx) = std::conj(s) * apc + c * aqc;
        }
        a(p, q) = std::complex<T>(0, 0);
        a(q, p) = std::complex<T>(0, 0);
        a(p, p) = std::complex<T>(a(p, p).real(), 0);
        a(q, q) = std::complex<T>(a(q, q).real(), 0);
        for (Eigen::Index r = 0; r < n; ++r) {
          const std::complex<T> vrp = v(r, p), vrq = v(r, q);
          v(r, p) = c * vrp - std::conj(s) * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() < a(j, j).real();
  });
  Eigendecomposition<T> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  detail::normalize_column_phases(out.vectors);
  return out;
}

template <typename T> rvec_t<T> eigenvalues(const cmat_t<T> &a) {
  return eig(a).values;
}

template <typename T> T lambda_min(const cmat_t<T> &a) { return eigenvalues(a)(0); }
template <typename T> T lambda_max(const cmat_t<T> &a) {
  rvec_t<T> ev = eigenvalues(a);
  return ev(ev.size() - 1);
}

enum class Definiteness { PD, PSDNZ, Zero, Indefinite, NSDNZ, ND };

inline const char *to_string(Definiteness d) {
  switch (d) {
  case Definiteness::PD: return "PD";
  case Definiteness::PSDNZ: return "PSDNZ";
  case Definiteness::Zero: return "Zero";
  case Definiteness::Indefinite: return "Indefinite";
  case Definiteness::NSDNZ: return "NSDNZ";
  case Definiteness::ND: return "ND";
  }
  return "?";
}

// Sign pattern of the spectrum under the scale-relative cutoff
// tol = 1e-10 * max(1, ||A||_inf).
template <typename T> Definiteness classify(const cmat_t<T> &a) {
  const T tol = T(kPsdTolRel) * std::max(T(1), inf_norm<T>(a));
  if (inf_norm<T>(a) <= tol)
    return Definiteness::Zero;
  rvec_t<T> ev = eigenvalues(a);
  Eigen::Index neg = 0, pos = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > tol) ++pos;
    if (ev(i) < -tol) ++neg;
  }
  const Eigen::Index n = ev.size();
  if (neg == 0 && pos == n) return Definiteness::PD;
  if (neg == 0 && pos > 0) return Definiteness::PSDNZ;
  if (neg == 0) return Definiteness::Zero;
  if (pos == 0 && neg == n) return Definiteness::ND;
  if (pos == 0) return Definiteness::NSDNZ;
  return Definiteness::Indefinite;
}

// The gambles that are always desirable: G >= 0 and G != 0.
template <typename T> bool is_psd_nonzero(const cmat_t<T> &a) {
  Definiteness d = classify(a);
  return d == Definiteness::PD || d == Definiteness::PSDNZ;
}

// Pauli coordinates of a 2x2 Hermitian matrix: A = v*I + x*sx + y*sy + z*sz.
// Returned as {v, x, y, z}.
template <typename T> std::array<T, 4> pauli_coords(const cmat_t<T> &a) {
  if (a.rows() != 2 || a.cols() != 2)
    throw DimensionMismatchError("pauli_coords requires a 2x2 matrix");
  const T v = (a(0, 0).real() + a(1, 1).real()) / T(2);
  const T z = (a(0, 0).real() - a(1, 1).real()) / T(2);
  const T x = a(1, 0).real();
  const T y = a(1, 0).imag();
  return {v, x, y, z};
}

template <typename T>
cmat_t<T> pauli_build(T v, T x, T y, T z) {
  cmat_t<T> a(2, 2);
  a(0, 0) = std::complex<T>(v + z, 0);
  a(0, 1) = std::complex<T>(x, -y);
  a(1, 0) = std::complex<T>(x, y);
  a(1, 1) = std::complex<T>(v - z, 0);
  return a;
}

template <typename T> cmat_t<T> pauli_x() { return pauli_build<T>(0, 1, 0, 0); }
template <typename T> cmat_t<T> pauli_y() { return pauli_build<T>(0, 0, 1, 0); }
template <typename T> cmat_t<T> pauli_z() { return pauli_build<T>(0, 0, 0, 1); }

// Kronecker product with A-major block ordering: entry ((i*m+k),(j*m+l)) is
// A(i,j)*B(k,l). Composite-system index = index_A * dim_B + index_B.
template <typename T>
cmat_t<T> tensor_product(const cmat_t<T> &a, const cmat_t<T> &b) {
  const Eigen::Index n = a.rows(), p = a.cols();
  const Eigen::Index m = b.rows(), q = b.cols();
  cmat_t<T> out(n * m, p * q);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      out.block(i * m, j * q, m, q) = a(i, j) * b;
  return out;
}

enum class Subsystem { A, B };

// Partial trace of an (n*m)x(n*m) matrix over one factor; `over` names the
// subsystem traced out, so over=B returns the n x n marginal on A.
template <typename T>
cmat_t<T> partial_trace(const cmat_t<T> &mat, int dim_a, int dim_b,
                        Subsystem over) {
  if (mat.rows() != mat.cols() ||
      mat.rows() != Eigen::Index(dim_a) * Eigen::Index(dim_b))
    throw DimensionMismatchError("partial_trace: size != dim_a * dim_b");
  if (over == Subsystem::B) {
    cmat_t<T> out = cmat_t<T>::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
      for (int j = 0; j < dim_a; ++j)
        for (int k = 0; k < dim_b; ++k)
          out(i, j) += mat(i * dim_b + k, j * dim_b + k);
    return out;
  }
  cmat_t<T> out = cmat_t<T>::Zero(dim_b, dim_b);
  for (int k = 0; k < dim_b; ++k)
    for (int l = 0; l < dim_b; ++l)
      for (int i = 0; i < dim_a; ++i)
        out(k, l) += mat(i * dim_b + k, i * dim_b + l);
  return out;
}

// Unitary (or anti-unitary) transformation. Anti-unitary maps conjugate the
// argument entrywise before the sandwich.
template <typename T> struct UnitaryMap {
  cmat_t<T> matrix;
  bool antiunitary = false;
};

template <typename T>
UnitaryMap<T> make_unitary(const cmat_t<T> &u, bool antiunitary = false,
                           T tol = T(kUnitaryTol)) {
  if (u.rows() != u.cols())
    throw NotSquareError("unitary must be square");
  cmat_t<T> dev = u.adjoint() * u - cmat_t<T>::Identity(u.rows(), u.cols());
  if (inf_norm<T>(dev) > tol)
    throw NotUnitaryError("||U^dagger U - I||_inf = " +
                          std::to_string((double)inf_norm<T>(dev)));
  return UnitaryMap<T>{u, antiunitary};
}

enum class ConjugateAs { Gamble, State };

// Gamble direction: U^dagger A U (payoff at time t1 read back at t0).
// State direction: U A U^dagger (density matrix pushed forward).
template <typename T>
cmat_t<T> conjugate(const UnitaryMap<T> &u, const cmat_t<T> &a,
                    ConjugateAs direction) {
  if (u.matrix.rows() != a.rows() || a.rows() != a.cols())
    throw DimensionMismatchError("conjugate: dimension mismatch");
  cmat_t<T> x = u.antiunitary ? a.conjugate().eval() : a;
  if (direction == ConjugateAs::Gamble)
    return (u.matrix.adjoint() * x * u.matrix).eval();
  return (u.matrix * x * u.matrix.adjoint()).eval();
}

// Trace inner product Tr(A^dagger B); real for Hermitian arguments, and the
// imaginary residual is checked against 1e-10.
template <typename T> T inner(const cmat_t<T> &a, const cmat_t<T> &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatchError("inner: dimension mismatch");
  std::complex<T> tr(0, 0);
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      tr += std::conj(a(i, j)) * b(i, j);
  const T scale = std::max(T(1), inf_norm<T>(a) * inf_norm<T>(b));
  if (std::abs(tr.imag()) > T(1e-10) * scale)
    throw Error("inner: imaginary residual " + std::to_string((double)tr.imag()));
  return tr.real();
}

template <typename T> bool is_diagonal(const cmat_t<T> &a, T tol = T(1e-12)) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j && std::abs(a(i, j)) > tol)
        return false;
  return true;
}

template <typename T> cmat_t<T> diag_matrix(const rvec_t<T> &d) {
  cmat_t<T> a = cmat_t<T>::Zero(d.size(), d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i)
    a(i, i) = std::complex<T>(d(i), 0);
  return a;
}

template <typename T> rvec_t<T> real_diagonal(const cmat_t<T> &a) {
  rvec_t<T> d(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    d(i) = a(i, i).real();
  return d;
}

// ---------------------------------------------------------------------------
// Orthonormal Hermitian basis (trace inner product). Order: the n diagonal
// units e_k e_k^T, then for each pair i<j (row-major) the symmetric element
// (E_ij + E_ji)/sqrt(2) followed by the antisymmetric (-i E_ij + i E_ji)/sqrt(2).
// This is the coordinate system of the barrier solver and of the maximality
// probes.
// ---------------------------------------------------------------------------

inline int herm_coord_dim(int n) { return n * n; }

template <typename T> cmat_t<T> herm_basis_element(int n, int k) {
  cmat_t<T> e = cmat_t<T>::Zero(n, n);
  if (k < n) {
    e(k, k) = std::complex<T>(1, 0);
    return e;
  }
  int idx = k - n;
  int pair = idx / 2;
  bool imag_part = idx % 2;
  int i = 0, j = 0, count = 0;
  for (i = 0; i < n; ++i) {
    int row_pairs = n - 1 - i;
    if (count + row_pairs > pair) {
      j = i + 1 + (pair - count);
      break;
    }
    count += row_pairs;
  }
  const T s = T(1) / std::sqrt(T(2));
  if (!imag_part) {
    e(i, j) = std::complex<T>(s, 0);
    e(j, i) = std::complex<T>(s, 0);
  } else {
    e(i, j) = std::complex<T>(0, -s);
    e(j, i) = std::complex<T>(0, s);
  }
  return e;
}

template <typename T> rvec_t<T> herm_to_coords(const cmat_t<T> &a) {
  const int n = (int)a.rows();
  rvec_t<T> x(n * n);
  const T s = std::sqrt(T(2));
  for (int k = 0; k < n; ++k)
    x(k) = a(k, k).real();
  int idx = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      x(idx++) = s * a(i, j).real();
      x(idx++) = -s * a(i, j).imag(); // Tr(E_y^dagger A) with E_y = (-i,+i)/sqrt2
    }
  return x;
}

template <typename T> cmat_t<T> coords_to_herm(const rvec_t<T> &x, int n) {
  cmat_t<T> a = cmat_t<T>::Zero(n, n);
  const T s = T(1) / std::sqrt(T(2));
  for (int k = 0; k < n; ++k)
    a(k, k) = std::complex<T>(x(k), 0);
  int idx = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const T re = x(idx++) * s;
      const T im = -x(idx++) * s;
      a(i, j) = std::complex<T>(re, im);
      a(j, i) = std::complex<T>(re, -im);
    }
  return a;
}

// Scalar-precision conversion helpers used at the solver boundary.
template <typename To, typename From>
cmat_t<To> cast_cmat(const cmat_t<From> &a) {
  cmat_t<To> out(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      out(i, j) = std::complex<To>((To)a(i, j).real(), (To)a(i, j).imag());
  return out;
}

template <typename To, typename From>
rvec_t<To> cast_rvec(const rvec_t<From> &v) {
  rvec_t<To> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out(i) = (To)v(i);
  return out;
}

} // namespace qcredal

#endif // QCREDAL_LINALG_HPP
