#include <doctest.h>

#include "qcredal/game.hpp"
#include "test_support.hpp"

using namespace qcredal;
using qtest::diag2;
using qtest::gamble_g2;

TEST_CASE("identity gamble pays exactly one per trial") {
  Scenario s;
  s.bookmaker_state = make_density(qtest::state_plus_y());
  s.accepted_gambles = {cmat(cmat::Identity(2, 2))};
  s.trials = 257;
  s.seed = 9;
  Ledger led = run_simulation(s);
  CHECK(led.cumulative[0] == doctest::Approx(257.0).epsilon(1e-12));
}

TEST_CASE("empirical means approach expectations") {
  SUBCASE("fair coin, symmetric gamble") {
    Scenario s;
    s.bookmaker_state = make_density(diag2(0.5, 0.5));
    s.accepted_gambles = {diag2(1, -1)};
    s.trials = 10000;
    s.seed = 2026;
    Ledger led = run_simulation(s);
    CHECK(std::abs(led.empirical_mean[0]) <= 4.0 / std::sqrt(10000.0));
  }
  SUBCASE("biased coin, heads indicator") {
    Scenario s;
    s.bookmaker_state = make_density(diag2(0.2, 0.8));
    s.accepted_gambles = {diag2(1, 0)};
    s.trials = 10000;
    s.seed = 4099;
    Ledger led = run_simulation(s);
    CHECK(std::abs(led.empirical_mean[0] - 0.2) <=
          4.0 * std::sqrt(0.16) / std::sqrt(10000.0));
    CHECK(led.expectation[0] == doctest::Approx(0.2));
  }
  SUBCASE("law of large numbers across twenty seeds") {
    std::mt19937_64 meta(271828);
    for (uint64_t seed = 1; seed <= 20; ++seed) {
      const int n = 2 + (int)(meta() % 2);
      Scenario s;
      s.bookmaker_state = qtest::random_density(meta, n);
      s.accepted_gambles = {qtest::random_hermitian(meta, n)};
      s.trials = 10000;
      s.seed = seed * 7919;
      Ledger led = run_simulation(s);
      const double bound = 4.0 * led.sigma[0] / std::sqrt(double(s.trials));
      CHECK(std::abs(led.empirical_mean[0] - led.expectation[0]) <= bound);
    }
  }
}

TEST_CASE("ledgers are reproducible and counter-addressable") {
  Scenario s;
  s.bookmaker_state = make_density(diag2(0.3, 0.7));
  s.accepted_gambles = {diag2(2, -1), gamble_g2()};
  s.trials = 500;
  s.seed = 77;
  Ledger a = run_simulation(s);
  Ledger b = run_simulation(s);
  CHECK(a.outcomes == b.outcomes);
  CHECK(a.cumulative == b.cumulative);
  // each outcome is a pure function of (seed, trial index)
  for (long t = 0; t < s.trials; t += 97)
    CHECK(a.outcomes[(size_t)t] ==
          rng::sample_outcome(a.born, s.seed, (uint64_t)t));
  // different seeds give different paths
  s.seed = 78;
  Ledger c = run_simulation(s);
  CHECK(a.outcomes != c.outcomes);
}

TEST_CASE("measurement defaults to the eigenbasis of the state") {
  Scenario s;
  s.bookmaker_state = make_density(qtest::state_plus_y());
  s.accepted_gambles = {qtest::state_plus_y()};
  s.trials = 50;
  s.seed = 5;
  Ledger led = run_simulation(s);
  // the state is pure: the meter always fires along it, paying 1
  CHECK(led.cumulative[0] == doctest::Approx(50.0).epsilon(1e-12));
  // rank constraint: a composite measurement with a rank-2 projector fails
  Scenario bad = s;
  bad.measurement = make_measurement({cmat(cmat::Identity(2, 2))});
  CHECK_THROWS_AS(run_simulation(bad), RankNotOneError);
}

TEST_CASE("dutch book demonstrations") {
  SUBCASE("the quantum sure-loss pair pays -1 on every outcome") {
    cmat g2b(2, 2);
    g2b << cplx(-2, 0), cplx(0, 1), cplx(0, -1), cplx(1, 0);
    Scenario skel;
    skel.bookmaker_state = make_density(qtest::state_plus_y());
    skel.trials = 200;
    skel.seed = 11;
    DutchBookReport rep = dutch_book_demo(
        {strictly_desirable(gamble_g2()), strictly_desirable(g2b)}, skel);
    CHECK_FALSE(rep.zero_margin);
    CHECK(rep.beta == doctest::Approx(1.0));
    for (double pay : rep.outcome_payoffs)
      CHECK(pay <= -rep.beta + 1e-8);
    CHECK(rep.outcome_payoffs[0] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(rep.outcome_payoffs[1] == doctest::Approx(-1.0).epsilon(1e-9));
    // regardless of the bookmaker's state
    skel.bookmaker_state = make_density(diag2(0.9, 0.1));
    DutchBookReport rep2 = dutch_book_demo(
        {strictly_desirable(gamble_g2()), strictly_desirable(g2b)}, skel);
    for (double pay : rep2.outcome_payoffs)
      CHECK(pay <= -1.0 + 1e-8);
    CHECK(rep2.ledger.cumulative[0] ==
          doctest::Approx(-200.0).epsilon(1e-9));
  }
  SUBCASE("the classical zero-margin pair is a boundary book") {
    Scenario skel;
    skel.bookmaker_state = make_density(diag2(0.5, 0.5));
    skel.trials = 100;
    skel.seed = 13;
    DutchBookReport rep = dutch_book_demo(
        {strictly_desirable(diag2(2, -1)), strictly_desirable(diag2(-2, 1))},
        skel);
    CHECK(rep.zero_margin);
    CHECK(inf_norm<double>(rep.combined_gamble) <= 1e-7);
    for (double pay : rep.outcome_payoffs)
      CHECK(std::abs(pay) <= 1e-7);
  }
  SUBCASE("coherent assessments have no book") {
    Scenario skel;
    skel.bookmaker_state = make_density(diag2(0.5, 0.5));
    CHECK_THROWS_AS(dutch_book_demo({border_desirable(diag2(1, -1)),
                                     border_desirable(diag2(-1, 1))},
                                    skel),
                    NotIncoherentError);
  }
}
