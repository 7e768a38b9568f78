#include <doctest.h>

#include "qcredal/linalg.hpp"
#include "test_support.hpp"

using namespace qcredal;
using qtest::diag2;
using qtest::gamble_g2;
using qtest::state_plus_y;

TEST_CASE("validate_hermitian accepts and symmetrizes") {
  cmat g = gamble_g2();
  cmat h = validate_hermitian(g);
  CHECK(inf_norm<double>(cmat(h - g)) == doctest::Approx(0.0).epsilon(1e-14));

  CHECK_NOTHROW(validate_hermitian(cmat(cmat::Identity(2, 2))));

  cmat bad(2, 2);
  bad << cplx(1, 0), cplx(0, 1), cplx(0, 1), cplx(1, 0);
  CHECK_THROWS_AS(validate_hermitian(bad), NotHermitianError);

  cmat rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(validate_hermitian(rect), NotSquareError);

  cmat nan2 = cmat::Zero(2, 2);
  nan2(0, 0) = cplx(std::numeric_limits<double>::quiet_NaN(), 0);
  CHECK_THROWS_AS(validate_hermitian(nan2), NonFiniteError);

  // near-Hermitian input inside the tolerance gets symmetrized
  cmat near = gamble_g2();
  near(0, 1) += cplx(4e-13, 0);
  cmat fixed = validate_hermitian(near);
  CHECK(inf_norm<double>(cmat(fixed - fixed.adjoint())) == 0.0);
  CHECK(fixed(0, 0).imag() == 0.0);
}

TEST_CASE("eig on fixed examples") {
  SUBCASE("diagonal input") {
    Eigendecomposition<double> ed = eig(diag2(3.0, -0.5));
    CHECK(ed.values(0) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(ed.values(1) == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("G2 spectrum matches the characteristic-polynomial oracle") {
    auto [lo, hi] = qtest::eig2_oracle(gamble_g2()); // roots of l^2 + l - 3
    CHECK(lo == doctest::Approx((-1.0 - std::sqrt(13.0)) / 2.0).epsilon(1e-12));
    Eigendecomposition<double> ed = eig(gamble_g2());
    CHECK(ed.values(0) == doctest::Approx(lo).epsilon(1e-10));
    CHECK(ed.values(1) == doctest::Approx(hi).epsilon(1e-10));
    CHECK(ed.values(0) == doctest::Approx(-2.302775637732).epsilon(1e-9));
    CHECK(ed.values(1) == doctest::Approx(1.302775637732).epsilon(1e-9));
  }
  SUBCASE("rank-one projector") {
    Eigendecomposition<double> ed = eig(state_plus_y());
    CHECK(ed.values(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ed.values(1) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("eig invariants on random matrices") {
  std::mt19937_64 rng(20260809);
  for (int n : {2, 3, 4, 8}) {
    for (int rep = 0; rep < 25; ++rep) {
      cmat a = qtest::random_hermitian(rng, n, 2.0);
      Eigendecomposition<double> ed = eig(a);
      const double scale = std::max(1.0, inf_norm<double>(a));
      cmat rec = ed.vectors *
                 diag_matrix<double>(ed.values) * ed.vectors.adjoint();
      CHECK(inf_norm<double>(cmat(rec - a)) <= 1e-10 * scale);
      cmat vv = ed.vectors.adjoint() * ed.vectors;
      CHECK(inf_norm<double>(cmat(vv - cmat::Identity(n, n))) <= 1e-10);
      for (int k = 0; k + 1 < n; ++k)
        CHECK(ed.values(k) <= ed.values(k + 1) + 1e-14);
    }
  }
}

TEST_CASE("classify") {
  CHECK(classify(cmat(cmat::Identity(2, 2))) == Definiteness::PD);
  CHECK(classify(diag2(1, 0)) == Definiteness::PSDNZ);
  CHECK(classify(gamble_g2()) == Definiteness::Indefinite);
  CHECK(classify(cmat(cmat::Zero(3, 3))) == Definiteness::Zero);
  CHECK(classify(diag2(-1, -2)) == Definiteness::ND);
  CHECK(classify(diag2(-1, 0)) == Definiteness::NSDNZ);
  // scale robustness
  CHECK(classify(cmat(1e8 * diag2(1, 0))) == Definiteness::PSDNZ);
  CHECK(classify(cmat(1e-8 * diag2(1, -1))) == Definiteness::Indefinite);
}

TEST_CASE("congruence preserves positive semidefiniteness (CGC^dagger)") {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int n : {2, 3, 4, 8}) {
    for (int rep = 0; rep < 50; ++rep) {
      cmat a = qtest::random_hermitian(rng, n);
      Definiteness da = classify(a);
      if (da != Definiteness::PD && da != Definiteness::PSDNZ &&
          da != Definiteness::Zero) {
        // make it PSD by shifting the spectrum
        a = cmat(a - (lambda_min<double>(a) - 0.1) * cmat::Identity(n, n));
        da = classify(a);
      }
      REQUIRE((da == Definiteness::PD || da == Definiteness::PSDNZ ||
               da == Definiteness::Zero));
      cmat c = qtest::random_complex(rng, n);
      Definiteness dc = classify(cmat(c * a * c.adjoint()));
      CHECK((dc == Definiteness::PD || dc == Definiteness::PSDNZ ||
             dc == Definiteness::Zero));
      ++checked;
    }
  }
  CHECK(checked >= 200);
}

TEST_CASE("pauli coordinates") {
  auto c = pauli_coords(pauli_z<double>());
  CHECK(c[0] == doctest::Approx(0.0));
  CHECK(c[1] == doctest::Approx(0.0));
  CHECK(c[2] == doctest::Approx(0.0));
  CHECK(c[3] == doctest::Approx(1.0));

  auto d = pauli_coords(state_plus_y());
  CHECK(d[0] == doctest::Approx(0.5));
  CHECK(d[1] == doctest::Approx(0.0));
  CHECK(d[2] == doctest::Approx(0.5));
  CHECK(d[3] == doctest::Approx(0.0));

  auto e = pauli_coords(cmat(cmat::Identity(2, 2)));
  CHECK(e[0] == doctest::Approx(1.0));

  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    cmat a = qtest::random_hermitian(rng, 2);
    auto [v, x, y, z] = pauli_coords(a);
    CHECK(inf_norm<double>(cmat(pauli_build(v, x, y, z) - a)) <= 1e-14);
  }
  CHECK_THROWS_AS(pauli_coords(cmat(cmat::Identity(3, 3))),
                  DimensionMismatchError);
}

TEST_CASE("tensor product") {
  CHECK(inf_norm<double>(cmat(tensor_product(diag2(1, 0), diag2(1, 0)) -
                              [] {
                                cmat d = cmat::Zero(4, 4);
                                d(0, 0) = 1;
                                return d;
                              }())) <= 1e-15);
  cmat quarter = tensor_product(diag2(0.5, 0.5), diag2(0.5, 0.5));
  CHECK(inf_norm<double>(cmat(quarter - 0.25 * cmat::Identity(4, 4))) <= 1e-15);

  // block pattern of G (x) I2: A-major ordering
  std::mt19937_64 rng(11);
  cmat g = qtest::random_hermitian(rng, 2);
  cmat gi = tensor_product(g, cmat(cmat::Identity(2, 2)));
  CHECK(gi(0, 0) == g(0, 0));
  CHECK(gi(1, 1) == g(0, 0));
  CHECK(gi(0, 2) == g(0, 1));
  CHECK(gi(1, 3) == g(0, 1));
  CHECK(gi(0, 1) == cplx(0, 0));

  // spectrum = pairwise products
  for (int rep = 0; rep < 10; ++rep) {
    cmat a = qtest::random_hermitian(rng, 2);
    cmat b = qtest::random_hermitian(rng, 3);
    rvec ea = eigenvalues(a), eb = eigenvalues(b);
    std::vector<double> prod;
    for (int i = 0; i < ea.size(); ++i)
      for (int j = 0; j < eb.size(); ++j)
        prod.push_back(ea(i) * eb(j));
    std::sort(prod.begin(), prod.end());
    rvec et = eigenvalues(cmat(tensor_product(a, b)));
    for (int k = 0; k < et.size(); ++k)
      CHECK(et(k) == doctest::Approx(prod[(size_t)k]).epsilon(1e-8));
  }
}

TEST_CASE("partial trace") {
  cmat bell = qtest::bell_state();
  cmat ma = partial_trace(bell, 2, 2, Subsystem::B);
  CHECK(inf_norm<double>(cmat(ma - diag2(0.5, 0.5))) <= 1e-12);

  std::mt19937_64 rng(13);
  auto ra = qtest::random_density(rng, 2);
  auto rb = qtest::random_density(rng, 3);
  cmat joint = tensor_product(ra.matrix, rb.matrix);
  CHECK(inf_norm<double>(cmat(partial_trace(joint, 2, 3, Subsystem::B) -
                              ra.matrix)) <= 1e-12);
  CHECK(inf_norm<double>(cmat(partial_trace(joint, 2, 3, Subsystem::A) -
                              rb.matrix)) <= 1e-12);

  cmat d4 = cmat::Zero(4, 4);
  d4(0, 0) = 1;
  CHECK(inf_norm<double>(cmat(partial_trace(d4, 2, 2, Subsystem::A) -
                              diag2(1, 0))) <= 1e-15);

  // trace preservation and linearity
  for (int rep = 0; rep < 10; ++rep) {
    cmat m = qtest::random_hermitian(rng, 6);
    cmat n2 = qtest::random_hermitian(rng, 6);
    CHECK(partial_trace(m, 2, 3, Subsystem::B).trace().real() ==
          doctest::Approx(m.trace().real()).epsilon(1e-12));
    cmat lin = partial_trace(cmat(2.0 * m - 0.5 * n2), 2, 3, Subsystem::B);
    cmat rhs = 2.0 * partial_trace(m, 2, 3, Subsystem::B) -
               0.5 * partial_trace(n2, 2, 3, Subsystem::B);
    CHECK(inf_norm<double>(cmat(lin - rhs)) <= 1e-12);
  }
  CHECK_THROWS_AS(partial_trace(cmat(cmat::Identity(5, 5)), 2, 2, Subsystem::B),
                  DimensionMismatchError);
}

TEST_CASE("unitary conjugation") {
  std::mt19937_64 rng(17);
  cmat a = qtest::random_hermitian(rng, 2);
  UnitaryMap<double> id = make_unitary(cmat(cmat::Identity(2, 2)));
  CHECK(inf_norm<double>(cmat(conjugate(id, a, ConjugateAs::Gamble) - a)) <=
        1e-14);

  cmat perm(2, 2);
  perm << 0, 1, 1, 0;
  UnitaryMap<double> flip = make_unitary(perm);
  cmat g = diag2(3.0, 7.0);
  CHECK(inf_norm<double>(cmat(conjugate(flip, g, ConjugateAs::Gamble) -
                              diag2(7.0, 3.0))) <= 1e-14);

  cmat had(2, 2);
  had << 1, 1, 1, -1;
  had /= std::sqrt(2.0);
  UnitaryMap<double> h = make_unitary(had);
  cmat out = conjugate(h, diag2(1, 0), ConjugateAs::State);
  cmat expect(2, 2);
  expect << 0.5, 0.5, 0.5, 0.5;
  CHECK(inf_norm<double>(cmat(out - expect)) <= 1e-14);

  // eigenvalues preserved, antiunitary included
  UnitaryMap<double> anti = make_unitary(qtest::random_unitary(rng, 3), true);
  cmat b = qtest::random_hermitian(rng, 3);
  rvec before = eigenvalues(b);
  rvec after = eigenvalues(conjugate(anti, b, ConjugateAs::State));
  for (int k = 0; k < 3; ++k)
    CHECK(after(k) == doctest::Approx(before(k)).epsilon(1e-10));

  cmat bad(2, 2);
  bad << 1, 1, 0, 1;
  CHECK_THROWS_AS(make_unitary(bad), NotUnitaryError);
  CHECK_THROWS_AS(conjugate(id, cmat(cmat::Identity(3, 3)), ConjugateAs::State),
                  DimensionMismatchError);
}

TEST_CASE("trace inner product") {
  CHECK(inner(gamble_g2(), state_plus_y()) == doctest::Approx(0.5).epsilon(1e-12));
  std::mt19937_64 rng(19);
  auto rho = qtest::random_density(rng, 3);
  CHECK(inner(cmat(cmat::Identity(3, 3)), rho.matrix) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(inner(pauli_x<double>(), pauli_y<double>()) ==
        doctest::Approx(0.0).epsilon(1e-12));

  for (int rep = 0; rep < 20; ++rep) {
    cmat a = qtest::random_hermitian(rng, 4), b = qtest::random_hermitian(rng, 4),
         c = qtest::random_hermitian(rng, 4);
    CHECK(inner(a, b) == doctest::Approx(inner(b, a)).epsilon(1e-12));
    CHECK(inner(cmat(1.5 * a - 2.0 * c), b) ==
          doctest::Approx(1.5 * inner(a, b) - 2.0 * inner(c, b)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(inner(cmat(cmat::Identity(2, 2)), cmat(cmat::Identity(3, 3))),
                  DimensionMismatchError);
}

TEST_CASE("hermitian coordinate isometry") {
  std::mt19937_64 rng(23);
  for (int n : {2, 3, 5}) {
    for (int rep = 0; rep < 10; ++rep) {
      cmat a = qtest::random_hermitian(rng, n);
      rvec x = herm_to_coords(a);
      CHECK(inf_norm<double>(cmat(coords_to_herm(x, n) - a)) <= 1e-14);
      cmat b = qtest::random_hermitian(rng, n);
      // isometry for the trace inner product
      CHECK(x.dot(herm_to_coords(b)) ==
            doctest::Approx(inner(a, b)).epsilon(1e-12));
    }
    for (int k = 0; k < herm_coord_dim(n); ++k) {
      cmat e = herm_basis_element<double>(n, k);
      rvec x = herm_to_coords(e);
      CHECK(x(k) == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(x.norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}
