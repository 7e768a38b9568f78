/**
 * This code is part of qcredal.
 *
 * (C) Copyright the qcredal developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

// Monte-Carlo simulation of the betting protocol (bookmaker prepares a
// state, measures along n orthogonal rank-one directions, Alice collects the
// payoff of every accepted gamble) and the Dutch-book demonstration for
// incoherent assessments.

#ifndef QCREDAL_GAME_HPP
#define QCREDAL_GAME_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "qcredal/credal.hpp"
#include "qcredal/measurement.hpp"

namespace qcredal {

// Counter-based generator: trial i draws splitmix64(seed + (i+1) * golden)
// scaled to [0,1), so any trial's outcome is reproducible in isolation and
// partitions with counter offsets preserve the exact sequence.
namespace rng {

inline constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline uint64_t splitmix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

inline double trial_uniform(uint64_t seed, uint64_t trial) {
  const uint64_t z = splitmix64(seed + (trial + 1) * kGolden);
  return double(z >> 11) * 0x1.0p-53;
}

// Inverse CDF over the probabilities in projector order.
inline int sample_outcome(const rvec &probs, uint64_t seed, uint64_t trial) {
  const double u = trial_uniform(seed, trial);
  double cum = 0;
  for (int i = 0; i < probs.size(); ++i) {
    cum += probs(i);
    if (u < cum)
      return i;
  }
  return (int)probs.size() - 1;
}

} // namespace rng

struct Scenario {
  DensityMatrix bookmaker_state;
  std::optional<ProjectiveMeasurement> measurement; // default: eigenbasis
  std::vector<cmat> accepted_gambles;
  long trials = 10000;
  uint64_t seed = 0;
};

struct Ledger {
  std::vector<int> outcomes;            // per trial
  std::vector<double> cumulative;       // per gamble, fixed summation order
  std::vector<double> empirical_mean;   // cumulative / trials
  std::vector<double> expectation;      // Tr(G rho*)
  std::vector<double> sigma;            // exact per-trial standard deviation
  rvec born;                            // outcome probabilities
};

inline ProjectiveMeasurement scenario_measurement(const Scenario &s) {
  ProjectiveMeasurement m = s.measurement ? *s.measurement
                                          : eigenmeasurement(s.bookmaker_state);
  if (m.dim() != s.bookmaker_state.dim())
    throw DimensionMismatchError("scenario: measurement dimension mismatch");
  for (int i = 0; i < m.size(); ++i)
    if (m[i].rank != 1)
      throw RankNotOneError("scenario: projector " + std::to_string(i) +
                            " has rank " + std::to_string(m[i].rank));
  return m;
}

inline Ledger run_simulation(const Scenario &s) {
  if (s.trials <= 0)
    throw Error("run_simulation: trials must be positive");
  ProjectiveMeasurement meas = scenario_measurement(s);
  const int n_outcomes = meas.size();
  const size_t n_gambles = s.accepted_gambles.size();

  // payoff table gamma[g][i]
  std::vector<std::vector<double>> gamma(n_gambles,
                                         std::vector<double>(n_outcomes));
  for (size_t g = 0; g < n_gambles; ++g) {
    const cmat gg = validate_hermitian(s.accepted_gambles[g]);
    if (gg.rows() != s.bookmaker_state.dim())
      throw DimensionMismatchError("scenario: gamble dimension mismatch");
    for (int i = 0; i < n_outcomes; ++i)
      gamma[g][(size_t)i] = payoff(gg, meas[i]);
  }

  Ledger led;
  led.born = born_probabilities(s.bookmaker_state, meas);
  led.outcomes.resize((size_t)s.trials);
  led.cumulative.assign(n_gambles, 0.0);
  for (long t = 0; t < s.trials; ++t) {
    const int out = rng::sample_outcome(led.born, s.seed, (uint64_t)t);
    led.outcomes[(size_t)t] = out;
    for (size_t g = 0; g < n_gambles; ++g)
      led.cumulative[g] += gamma[g][(size_t)out];
  }
  for (size_t g = 0; g < n_gambles; ++g) {
    led.empirical_mean.push_back(led.cumulative[g] / double(s.trials));
    led.expectation.push_back(
        inner(validate_hermitian(s.accepted_gambles[g]),
              s.bookmaker_state.matrix));
    double mean = 0, second = 0;
    for (int i = 0; i < n_outcomes; ++i) {
      mean += led.born(i) * gamma[g][(size_t)i];
      second += led.born(i) * gamma[g][(size_t)i] * gamma[g][(size_t)i];
    }
    led.sigma.push_back(std::sqrt(std::max(0.0, second - mean * mean)));
  }
  return led;
}

struct DutchBookReport {
  rvec alpha;                          // per assessment
  double beta = 0;                     // combined gamble <= -beta I
  bool zero_margin = false;            // boundary Dutch book
  cmat combined_gamble;
  std::vector<double> outcome_payoffs; // payoff of the combination per outcome
  double worst_payoff = 0;             // max over outcomes
  Ledger ledger;                       // simulation of the combined gamble
};

// Builds the sure-loss combination from the incoherence certificate and
// shows that its payoff never exceeds -beta, whatever the outcome and
// whatever state the bookmaker prepared.
inline DutchBookReport dutch_book_demo(const std::vector<Assessment> &assessments,
                                       Scenario skeleton) {
  const int dim = skeleton.bookmaker_state.dim();
  CoherenceReport coh = check_coherence(assessments, dim);
  if (coh.coherent())
    throw NotIncoherentError("assessments are coherent; no Dutch book exists");
  if (!coh.certificate)
    throw SolverFailureError("incoherent but no certificate was produced");

  DutchBookReport rep;
  rep.alpha = coh.certificate->alpha;
  rep.beta = coh.certificate->beta;
  rep.zero_margin = rep.beta <= 1e-12;
  rep.combined_gamble = cmat::Zero(dim, dim);
  for (size_t k = 0; k < assessments.size(); ++k)
    rep.combined_gamble +=
        rep.alpha((Eigen::Index)k) * validate_hermitian(assessments[k].gamble);

  ProjectiveMeasurement meas = scenario_measurement(skeleton);
  rep.worst_payoff = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < meas.size(); ++i) {
    const double pay = payoff(rep.combined_gamble, meas[i]);
    rep.outcome_payoffs.push_back(pay);
    rep.worst_payoff = std::max(rep.worst_payoff, pay);
  }
  if (rep.worst_payoff > -rep.beta + 1e-8)
    throw SolverFailureError("Dutch book verification failed: best outcome "
                             "pays " +
                             std::to_string(rep.worst_payoff));

  skeleton.accepted_gambles = {rep.combined_gamble};
  rep.ledger = run_simulation(skeleton);
  return rep;
}

} // namespace qcredal

#endif // QCREDAL_GAME_HPP
