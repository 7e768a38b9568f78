#include <doctest.h>

#include "qcredal/sdp.hpp"
#include "test_support.hpp"

using namespace qcredal;
using qtest::diag2;
using qtest::gamble_g2;
using qtest::state_plus_y;

namespace {

// +/- orthonormal-basis pins describing the singleton {rho0} as constraints.
std::vector<std::pair<cmat, double>> singleton_pins(const cmat &rho0) {
  const int n = (int)rho0.rows();
  std::vector<std::pair<cmat, double>> cons;
  for (int k = 0; k < herm_coord_dim(n); ++k) {
    cmat e = herm_basis_element<double>(n, k);
    const double c = inner(e, rho0);
    cons.push_back({e, c});
    cons.push_back({cmat(-e), -c});
  }
  return cons;
}

} // namespace

TEST_CASE("sdp_minimize over the vacuous spectrahedron hits lambda_min") {
  SUBCASE("G2") {
    SdpProblem p{2, gamble_g2(), {}};
    SdpSolution s = sdp_minimize(p);
    CHECK(s.status == SdpStatus::Optimal);
    auto [lo, hi] = qtest::eig2_oracle(gamble_g2());
    CHECK(s.value == doctest::Approx(lo).epsilon(1e-7));
    CHECK(s.gap <= 2e-9);
    CHECK(s.optimizer.has_value());
    CHECK(std::abs(inner(gamble_g2(), s.optimizer->matrix) - s.value) <= 1e-7);
  }
  SUBCASE("identity objective is pinned to 1 by the trace") {
    SdpProblem p{3, cmat(cmat::Identity(3, 3)), {}};
    CHECK(sdp_minimize(p).value == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("random spectra, several dimensions") {
    std::mt19937_64 rng(53);
    for (int n : {2, 3, 4, 8}) {
      for (int rep = 0; rep < 3; ++rep) {
        cmat g = qtest::random_hermitian(rng, n, 1.5);
        SdpProblem p{n, g, {}};
        SdpSolution s = sdp_minimize(p);
        CHECK(s.value == doctest::Approx(lambda_min<double>(g)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("sdp_minimize with linear constraints") {
  // classical interval case: rho11 in [0.2, 0.6]
  std::vector<std::pair<cmat, double>> cons = {{diag2(0.8, -0.2), 0.0},
                                               {diag2(-0.4, 0.6), 0.0}};
  SdpProblem p{2, diag2(1, 0), cons};
  SdpSolution s = sdp_minimize(p);
  CHECK(s.status == SdpStatus::Optimal);
  CHECK(s.value == doctest::Approx(0.2).epsilon(1e-7));
  SdpProblem q{2, diag2(-1, 0), cons};
  CHECK(-sdp_minimize(q).value == doctest::Approx(0.6).epsilon(1e-7));

  SdpProblem r{2, cmat(cmat::Identity(2, 2)), cons};
  CHECK(sdp_minimize(r).value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("sdp_minimize on a pinned singleton (equality detection)") {
  std::mt19937_64 rng(59);
  for (int rep = 0; rep < 5; ++rep) {
    auto rho0 = qtest::random_density(rng, 3);
    FeasibleRegion region(3, singleton_pins(rho0.matrix));
    CHECK(region.feasible());
    cmat g = qtest::random_hermitian(rng, 3);
    CHECK(region.lower_value(g) ==
          doctest::Approx(inner(g, rho0.matrix)).epsilon(1e-8));
  }
}

TEST_CASE("feasibility_margin") {
  SUBCASE("quantum sure-loss pair is infeasible with certificate (1,1,beta=1)") {
    cmat g1 = gamble_g2();
    cmat g2(2, 2);
    g2 << cplx(-2, 0), cplx(0, 1), cplx(0, -1), cplx(1, 0);
    MarginReport rep = feasibility_margin(2, {}, {g1, g2});
    CHECK_FALSE(rep.feasible);
    REQUIRE(rep.certificate.has_value());
    CHECK(rep.certificate->beta == doctest::Approx(1.0));
    CHECK(rep.certificate->alpha(0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.certificate->alpha(1) == doctest::Approx(1.0).epsilon(1e-6));
    cmat comb = rep.certificate->alpha(0) * g1 + rep.certificate->alpha(1) * g2;
    CHECK(lambda_max<double>(comb) <= -rep.certificate->beta + 1e-8);
  }
  SUBCASE("classical zero-margin pair") {
    MarginReport rep = feasibility_margin(2, {}, {diag2(2, -1), diag2(-2, 1)});
    CHECK(rep.feasible);
    CHECK(std::abs(rep.margin) <= 1e-9);
    REQUIRE(rep.witness.has_value());
    CHECK(rep.witness->matrix(0, 0).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(rep.witness->matrix(1, 1).real() == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  }
  SUBCASE("no constraints: interior witness") {
    MarginReport rep = feasibility_margin(3, {}, {});
    CHECK(rep.feasible);
    CHECK(rep.margin == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(inf_norm<double>(cmat(rep.witness->matrix -
                                cmat::Identity(3, 3) / 3.0)) <= 1e-6);
  }
  SUBCASE("border pair pinning a face stays feasible") {
    MarginReport rep = feasibility_margin(2, {diag2(1, -1), diag2(-1, 1)}, {});
    CHECK(rep.feasible);
    CHECK(std::abs(rep.margin) <= 1e-9);
    CHECK(rep.witness->matrix(0, 0).real() == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("strict margin refined with border held at zero") {
    // border keeps rho11 >= 0.3; strict wants rho11 large
    MarginReport rep =
        feasibility_margin(2, {diag2(0.7, -0.3)}, {diag2(1, -1)});
    CHECK(rep.feasible);
    // max over rho of min slack of diag(1,-1) subject to rho in D:
    // rho11 - rho22 = 2 rho11 - 1, max at rho11 = 1 -> margin 1
    CHECK(rep.margin == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("conditional_bisection") {
  SUBCASE("fair coin conditioned on heads returns the heads payoff") {
    FeasibleRegion region(2, singleton_pins(diag2(0.5, 0.5)));
    auto map = [](const cmat &g) {
      cmat pi = qtest::diag2(1, 0);
      return cmat(pi * g * pi);
    };
    std::mt19937_64 rng(61);
    for (int rep = 0; rep < 5; ++rep) {
      std::uniform_real_distribution<double> u(-3, 3);
      double a = u(rng), b = u(rng);
      CHECK(conditional_bisection(region, map, diag2(a, b)) ==
            doctest::Approx(a).epsilon(1e-8));
    }
  }
  SUBCASE("singleton agrees with the direct Luders oracle") {
    std::mt19937_64 rng(67);
    int done = 0;
    while (done < 10) {
      auto rho0 = qtest::random_density(rng, 2);
      auto meas = qtest::random_measurement(rng, 2);
      const cmat pi = meas[0].matrix;
      const double prob = inner(pi, rho0.matrix);
      if (prob < 0.05)
        continue;
      FeasibleRegion region(2, singleton_pins(rho0.matrix));
      auto map = [&pi](const cmat &g) { return cmat(pi * g * pi); };
      cmat g = qtest::random_hermitian(rng, 2);
      const double expect = inner(g, luders(rho0, pi).matrix);
      CHECK(conditional_bisection(region, map, g) ==
            doctest::Approx(expect).epsilon(1e-8));
      ++done;
    }
  }
  SUBCASE("constants are conditioning-invariant") {
    FeasibleRegion region(2, {{diag2(0.8, -0.2), 0.0}});
    auto map = [](const cmat &g) {
      cmat pi = qtest::diag2(1, 0);
      return cmat(pi * g * pi);
    };
    CHECK(conditional_bisection(region, map, cmat(2.5 * cmat::Identity(2, 2))) ==
          doctest::Approx(2.5).epsilon(1e-8));
  }
  SUBCASE("the bisection function decreases across the bracket") {
    // region with strictly positive lower probability of the event: the
    // interval credal set, conditioned on heads
    FeasibleRegion region(2, {{diag2(0.8, -0.2), 0.0}, {diag2(-0.4, 0.6), 0.0}});
    cmat pi = diag2(1, 0);
    cmat g = diag2(2.0, -1.0);
    auto h = [&](double mu) {
      return region.lower_value(
          cmat(pi * (g - mu * cmat::Identity(2, 2)) * pi));
    };
    auto [lo, hi] = qtest::eig2_oracle(g);
    CHECK(h(lo) >= -1e-8);
    CHECK(h(hi) <= 1e-8);
    CHECK(h(lo) > h(0.5 * (lo + hi)) + 1e-6);
    CHECK(h(0.5 * (lo + hi)) > h(hi) + 1e-6);
  }
}

TEST_CASE("simplex vertex enumeration") {
  SUBCASE("interval polytope") {
    std::vector<std::pair<rvec, double>> rows;
    rvec a1(2), a2(2);
    a1 << 0.8, -0.2;
    a2 << -0.4, 0.6;
    rows.push_back({a1, 0.0});
    rows.push_back({a2, 0.0});
    auto verts = simplex_polytope_vertices(rows, 2);
    REQUIRE(verts.size() == 2);
    std::sort(verts.begin(), verts.end(),
              [](const rvec &x, const rvec &y) { return x(0) < y(0); });
    CHECK(verts[0](0) == doctest::Approx(0.2).epsilon(1e-10));
    CHECK(verts[1](0) == doctest::Approx(0.6).epsilon(1e-10));
  }
  SUBCASE("transportation polytope with fixed margins 0.7 and 0.6") {
    std::vector<std::pair<rvec, double>> rows;
    rvec m1(4), m2(4);
    m1 << 1, 1, 0, 0; // P(A) = 0.7
    m2 << 1, 0, 1, 0; // P(B) = 0.6
    rows.push_back({m1, 0.7});
    rows.push_back({rvec(-m1), -0.7});
    rows.push_back({m2, 0.6});
    rows.push_back({rvec(-m2), -0.6});
    auto verts = simplex_polytope_vertices(rows, 4);
    REQUIRE(verts.size() == 2);
    double lo = 1, hi = 0;
    for (const auto &v : verts) {
      lo = std::min(lo, v(0));
      hi = std::max(hi, v(0));
    }
    CHECK(lo == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(hi == doctest::Approx(0.6).epsilon(1e-10));
  }
}

TEST_CASE("diagonal_fast_path") {
  SUBCASE("fair coin expectation") {
    std::vector<std::pair<cmat, double>> cons = {{diag2(1, -1), 0.0},
                                                 {diag2(-1, 1), 0.0}};
    SdpProblem p{2, diag2(3.0, -1.0), cons};
    SdpSolution s = diagonal_fast_path(p);
    CHECK(s.status == SdpStatus::Optimal);
    CHECK(s.value == doctest::Approx(1.0).epsilon(1e-10)); // (g1+g2)/2
  }
  SUBCASE("vacuous simplex gives min g") {
    SdpProblem p{3, cmat(diag_matrix<double>([] {
                    rvec g(3);
                    g << 0.4, -2.5, 7.0;
                    return g;
                  }())),
                 {}};
    CHECK(diagonal_fast_path(p).value == doctest::Approx(-2.5).epsilon(1e-10));
  }
  SUBCASE("single-vertex polytope") {
    std::vector<std::pair<cmat, double>> cons = {{diag2(1, 0), 0.25},
                                                 {diag2(-1, 0), -0.25}};
    SdpProblem p{2, diag2(2.0, -2.0), cons};
    CHECK(diagonal_fast_path(p).value ==
          doctest::Approx(2.0 * 0.25 - 2.0 * 0.75).epsilon(1e-10));
  }
  SUBCASE("infeasible diagonal system yields a certificate") {
    std::vector<std::pair<cmat, double>> cons = {{diag2(1, 0), 0.8},
                                                 {diag2(-1, 0), -0.2}};
    SdpSolution s = diagonal_fast_path(SdpProblem{2, diag2(1, 0), cons});
    CHECK(s.status == SdpStatus::Infeasible);
    REQUIRE(s.certificate.has_value());
    CHECK(s.certificate->beta == doctest::Approx(1.0));
  }
}

TEST_CASE("oracle equivalence on random diagonal instances") {
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<int> dim_pick(2, 6);
  std::uniform_int_distribution<int> m_pick(0, 10);
  int grid_checked = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const int n = dim_pick(rng);
    const int m = m_pick(rng);
    // constraints generated through a random interior point so the polytope
    // is nonempty
    rvec p0 = qtest::random_simplex_point(rng, n);
    std::vector<std::pair<cmat, double>> cons;
    std::vector<std::pair<rvec, double>> rows;
    std::normal_distribution<double> g(0, 1);
    std::uniform_real_distribution<double> slack(0.05, 0.4);
    for (int j = 0; j < m; ++j) {
      rvec a(n);
      for (int i = 0; i < n; ++i)
        a(i) = g(rng);
      const double b = a.dot(p0) - slack(rng);
      cons.push_back({cmat(diag_matrix<double>(a)), b});
      rows.push_back({a, b});
    }
    rvec cost(n);
    for (int i = 0; i < n; ++i)
      cost(i) = g(rng);
    cost *= 0.4 / cost.cwiseAbs().maxCoeff(); // keeps the grid-oracle bound
                                              // (step * |grad|) inside 1e-3
    SdpProblem prob{n, cmat(diag_matrix<double>(cost)), cons};

    SdpSolution fast = diagonal_fast_path(prob);
    REQUIRE(fast.status == SdpStatus::Optimal);
    SdpSolution slow = sdp_minimize(prob);
    REQUIRE(slow.status == SdpStatus::Optimal);
    CHECK(std::abs(fast.value - slow.value) <= 1e-6);

    if (n <= 3) {
      const double gridv = qtest::grid_min_oracle(cost, rows, n, 1e-3);
      CHECK(std::abs(fast.value - gridv) <= 1e-3);
      ++grid_checked;
    }
  }
  CHECK(grid_checked >= 10);
}

TEST_CASE("slice feasibility (marginal membership backend)") {
  // vacuous joint on 2x2: any sigma is reachable as a partial trace
  FeasibleRegion region(4, {});
  std::vector<std::pair<cmat, double>> eqs;
  cmat sigma = diag2(0.25, 0.75);
  for (int k = 0; k < herm_coord_dim(2); ++k) {
    cmat e = herm_basis_element<double>(2, k);
    eqs.push_back({tensor_product(e, cmat(cmat::Identity(2, 2))),
                   inner(e, sigma)});
  }
  auto out = region.slice_feasibility(eqs);
  CHECK(out.margin > 1e-6);
  REQUIRE(out.witness.has_value());
  CHECK(inf_norm<double>(cmat(partial_trace(out.witness->matrix, 2, 2,
                                            Subsystem::B) -
                              sigma)) <= 1e-7);
}
