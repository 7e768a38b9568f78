/**
 * This code is part of qcredal.
 *
 * (C) Copyright the qcredal developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

// Scenario file format (JSON), command dispatch and report rendering for the
// command-line tool. Matrices are nested arrays, row-major, with entries
// either plain numbers or [re, im] pairs; the serializer always writes the
// pair form. Unknown fields are rejected with a JSONPath-style location.

#ifndef QCREDAL_SCENARIO_IO_HPP
#define QCREDAL_SCENARIO_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcredal/credal.hpp"
#include "qcredal/game.hpp"

namespace qcredal {
namespace io {

using json = nlohmann::ordered_json;

struct Tolerances {
  double herm = kHermTol;  // Hermitian validation at parse time
  double member = 1e-8;    // membership decisions
};

// One credal-set description: exactly one of assessments / extreme_points /
// constraints (or none for the vacuous set).
struct ModelSpec {
  std::vector<Assessment> assessments;
  std::vector<cmat> extreme_points;
  std::vector<cmat> constraints;
  bool classical = false;
  bool specified = false;
};

struct ParsedScenario {
  int schema = 1;
  int dim = 0;
  std::optional<std::pair<int, int>> dims;
  ModelSpec model;
  ModelSpec model_b;
  std::optional<cmat> gamble;
  std::vector<cmat> gambles;
  std::vector<cmat> measurement;
  std::optional<cmat> projector;
  std::vector<int> outcomes;
  std::optional<cmat> unitary;
  bool antiunitary = false;
  std::optional<Subsystem> keep;
  std::optional<IrrelevanceDirection> direction;
  std::vector<cmat> probes;
  std::optional<cmat> state;
  long trials = 10000;
  uint64_t seed = 0;
  Tolerances tol;
};

// Parse and validate UTF-8 JSON text. Every matrix is validated (square,
// finite, Hermitian within tol) at parse time; unknown fields raise.
// tol_overrides (from --tol name=value flags) take precedence over the
// scenario's own tolerances block.
ParsedScenario
parse_scenario(const std::string &text,
               const std::vector<std::pair<std::string, double>> &tol_overrides = {});

// Canonical serialization; parse(serialize(parse(x))) is semantically
// identical to parse(x).
json serialize_scenario(const ParsedScenario &s);

struct DispatchResult {
  json report;
  int exit_code = 0; // 0 success/coherent, 2 incoherent, 1 error (by caller)
};

// command is one of: check, prevision, member, condition, marginal, extend,
// evolve, born, frechet, independence, simulate, pauli.
DispatchResult dispatch(const std::string &command, const ParsedScenario &s);

// Render a report: "json" dumps the structured form, "text" prints stable
// key: value lines with numbers at 12 significant digits.
std::string emit_report(const json &report, const std::string &format);

// Build the credal set described by a model block (vacuous when empty).
CredalSet resolve_model(const ModelSpec &spec, int dim);

} // namespace io
} // namespace qcredal

#endif // QCREDAL_SCENARIO_IO_HPP
