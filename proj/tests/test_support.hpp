// Shared helpers for the test suites: seeded random matrices and a few
// independent numeric oracles the expected values are frozen from.

#ifndef QCREDAL_TEST_SUPPORT_HPP
#define QCREDAL_TEST_SUPPORT_HPP

#include <random>
#include <vector>

#include "qcredal/linalg.hpp"
#include "qcredal/measurement.hpp"

namespace qtest {

using qcredal::cmat;
using qcredal::cplx;
using qcredal::cvec;
using qcredal::rvec;

inline cmat random_complex(std::mt19937_64 &rng, int n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  cmat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = cplx(g(rng), g(rng));
  return a;
}

inline cmat random_hermitian(std::mt19937_64 &rng, int n, double scale = 1.0) {
  cmat a = random_complex(rng, n, scale);
  return cmat((a + a.adjoint()) / 2.0);
}

inline cmat random_unitary(std::mt19937_64 &rng, int n) {
  cmat a = random_complex(rng, n);
  Eigen::HouseholderQR<cmat> qr(a);
  cmat q = qr.householderQ();
  return q;
}

inline qcredal::DensityMatrix random_density(std::mt19937_64 &rng, int n) {
  cmat a = random_complex(rng, n);
  cmat p = a * a.adjoint();
  p += 1e-3 * cmat::Identity(n, n); // keep it comfortably positive
  p /= p.trace().real();
  return qcredal::make_density(p);
}

inline rvec random_simplex_point(std::mt19937_64 &rng, int n) {
  std::exponential_distribution<double> e(1.0);
  rvec p(n);
  for (int i = 0; i < n; ++i)
    p(i) = e(rng);
  return rvec(p / p.sum());
}

// Measurement along the columns of a random unitary.
inline qcredal::ProjectiveMeasurement random_measurement(std::mt19937_64 &rng,
                                                         int n) {
  cmat u = random_unitary(rng, n);
  std::vector<cmat> mats;
  for (int k = 0; k < n; ++k) {
    cvec v = u.col(k);
    mats.push_back(cmat(v * v.adjoint()));
  }
  return qcredal::make_measurement(mats);
}

// --- frequently used fixed matrices -----------------------------------

inline cmat gamble_g2() {
  cmat g(2, 2);
  g << cplx(1, 0), cplx(0, -1), cplx(0, 1), cplx(-2, 0);
  return g;
}

inline cmat state_plus_y() { // 1/2 [[1, -i],[i, 1]], the pure state of the
                             // quantum-coin running example
  cmat d(2, 2);
  d << cplx(0.5, 0), cplx(0, -0.5), cplx(0, 0.5), cplx(0.5, 0);
  return d;
}

inline cmat bell_state() {
  cmat b = cmat::Zero(4, 4);
  b(0, 0) = b(0, 3) = b(3, 0) = b(3, 3) = 0.5;
  return b;
}

inline cmat diag2(double a, double b) {
  cmat d = cmat::Zero(2, 2);
  d(0, 0) = a;
  d(1, 1) = b;
  return d;
}

// Independent oracle: eigenvalues of a 2x2 Hermitian matrix from the
// characteristic polynomial (quadratic formula).
inline std::pair<double, double> eig2_oracle(const cmat &a) {
  const double tr = a.trace().real();
  const double det = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)).real();
  const double disc = std::sqrt(tr * tr / 4.0 - det);
  return {tr / 2.0 - disc, tr / 2.0 + disc};
}

// Independent oracle: minimum of a linear function over the simplex polytope
// by dense grid search with the given step (only usable for small n).
inline double
grid_min_oracle(const rvec &cost,
                const std::vector<std::pair<rvec, double>> &ineqs, int n,
                double step) {
  double best = std::numeric_limits<double>::infinity();
  const int m = (int)std::lround(1.0 / step);
  if (n == 2) {
    for (int i = 0; i <= m; ++i) {
      rvec p(2);
      p << i * step, 1.0 - i * step;
      bool ok = true;
      for (const auto &[a, b] : ineqs)
        ok = ok && a.dot(p) >= b - 1e-12;
      if (ok)
        best = std::min(best, cost.dot(p));
    }
    return best;
  }
  if (n == 3) {
    for (int i = 0; i <= m; ++i)
      for (int j = 0; j <= m - i; ++j) {
        rvec p(3);
        p << i * step, j * step, 1.0 - (i + j) * step;
        bool ok = true;
        for (const auto &[a, b] : ineqs)
          ok = ok && a.dot(p) >= b - 1e-12;
        if (ok)
          best = std::min(best, cost.dot(p));
      }
    return best;
  }
  throw std::logic_error("grid oracle only for n <= 3");
}

} // namespace qtest

#endif // QCREDAL_TEST_SUPPORT_HPP
