/**
 * This code is part of qcredal.
 *
 * (C) Copyright the qcredal developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "qcredal/scenario_io.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace qcredal {
namespace io {

namespace {

using nlohmann::detail::value_t;

std::string type_name(const json &j) { return j.type_name(); }

double number_at(const json &j, const std::string &path) {
  if (!j.is_number())
    throw ParseError(path, "expected a number, got " + type_name(j));
  return j.get<double>();
}

cplx entry_at(const json &j, const std::string &path) {
  if (j.is_number())
    return cplx(j.get<double>(), 0.0);
  if (j.is_array()) {
    if (j.size() != 2)
      throw ParseError(path, "a complex entry is a [re, im] pair");
    return cplx(number_at(j[0], path + "[0]"), number_at(j[1], path + "[1]"));
  }
  throw ParseError(path, "expected a number or [re, im], got " + type_name(j));
}

cmat raw_matrix_at(const json &j, const std::string &path) {
  if (!j.is_array() || j.empty())
    throw ParseError(path, "expected a non-empty array of rows");
  const size_t rows = j.size();
  size_t cols = 0;
  for (size_t r = 0; r < rows; ++r) {
    const json &row = j[r];
    const std::string rpath = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.empty())
      throw ParseError(rpath, "expected a non-empty row array");
    if (r == 0)
      cols = row.size();
    else if (row.size() != cols)
      throw ParseError(rpath, "ragged matrix: row has " +
                                  std::to_string(row.size()) +
                                  " entries, expected " + std::to_string(cols));
  }
  cmat m((Eigen::Index)rows, (Eigen::Index)cols);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c)
      m((Eigen::Index)r, (Eigen::Index)c) =
          entry_at(j[r][c], path + "[" + std::to_string(r) + "][" +
                               std::to_string(c) + "]");
  return m;
}

cmat hermitian_at(const json &j, const std::string &path, double tol) {
  cmat raw = raw_matrix_at(j, path);
  try {
    return validate_hermitian(raw, tol);
  } catch (const Error &e) {
    throw ValidationError(path, e.what());
  }
}

cmat square_at(const json &j, const std::string &path) {
  cmat raw = raw_matrix_at(j, path);
  if (raw.rows() != raw.cols())
    throw ValidationError(path, "matrix must be square");
  if (!all_finite(raw))
    throw ValidationError(path, "matrix has non-finite entries");
  return raw;
}

void reject_unknown(const json &j, const std::set<std::string> &allowed,
                    const std::string &path) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ParseError(path + "." + it.key(), "unknown field");
}

ModelSpec parse_model(const json &j, const std::string &path, double herm_tol) {
  ModelSpec spec;
  spec.specified = true;
  reject_unknown(j, {"assessments", "extreme_points", "constraints",
                     "classical"},
                 path);
  if (j.contains("classical")) {
    if (!j["classical"].is_boolean())
      throw ParseError(path + ".classical", "expected a boolean");
    spec.classical = j["classical"].get<bool>();
  }
  if (j.contains("assessments")) {
    const json &arr = j["assessments"];
    if (!arr.is_array())
      throw ParseError(path + ".assessments", "expected an array");
    for (size_t i = 0; i < arr.size(); ++i) {
      const std::string apath =
          path + ".assessments[" + std::to_string(i) + "]";
      const json &a = arr[i];
      if (!a.is_object())
        throw ParseError(apath, "expected an object");
      reject_unknown(a, {"gamble", "strictness"}, apath);
      if (!a.contains("gamble"))
        throw ParseError(apath, "missing gamble");
      cmat g = hermitian_at(a["gamble"], apath + ".gamble", herm_tol);
      Strictness s = Strictness::Strict;
      if (a.contains("strictness")) {
        const std::string v = a["strictness"].get<std::string>();
        if (v == "strict")
          s = Strictness::Strict;
        else if (v == "border")
          s = Strictness::Border;
        else
          throw ParseError(apath + ".strictness",
                           "expected \"strict\" or \"border\"");
      }
      spec.assessments.push_back(Assessment{g, s});
    }
  }
  if (j.contains("extreme_points")) {
    const json &arr = j["extreme_points"];
    if (!arr.is_array())
      throw ParseError(path + ".extreme_points", "expected an array");
    for (size_t i = 0; i < arr.size(); ++i)
      spec.extreme_points.push_back(hermitian_at(
          arr[i], path + ".extreme_points[" + std::to_string(i) + "]",
          herm_tol));
  }
  if (j.contains("constraints")) {
    const json &arr = j["constraints"];
    if (!arr.is_array())
      throw ParseError(path + ".constraints", "expected an array");
    for (size_t i = 0; i < arr.size(); ++i)
      spec.constraints.push_back(hermitian_at(
          arr[i], path + ".constraints[" + std::to_string(i) + "]", herm_tol));
  }
  const int forms = (!spec.assessments.empty() ? 1 : 0) +
                    (!spec.extreme_points.empty() ? 1 : 0) +
                    (!spec.constraints.empty() ? 1 : 0);
  if (forms > 1)
    throw ValidationError(path, "give at most one of assessments, "
                                "extreme_points, constraints");
  return spec;
}

json matrix_to_json(const cmat &m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(row);
  }
  return rows;
}

json model_to_json(const ModelSpec &spec) {
  json out = json::object();
  if (!spec.assessments.empty()) {
    json arr = json::array();
    for (const auto &a : spec.assessments)
      arr.push_back(json{{"gamble", matrix_to_json(a.gamble)},
                         {"strictness", a.strictness == Strictness::Strict
                                            ? "strict"
                                            : "border"}});
    out["assessments"] = arr;
  }
  if (!spec.extreme_points.empty()) {
    json arr = json::array();
    for (const auto &v : spec.extreme_points)
      arr.push_back(matrix_to_json(v));
    out["extreme_points"] = arr;
  }
  if (!spec.constraints.empty()) {
    json arr = json::array();
    for (const auto &v : spec.constraints)
      arr.push_back(matrix_to_json(v));
    out["constraints"] = arr;
  }
  if (spec.classical)
    out["classical"] = true;
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

json interval_json(const PrevisionInterval &iv) {
  return json::array({iv.lower, iv.upper});
}

void render_text(const json &j, const std::string &prefix, std::ostream &os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      render_text(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(),
                  os);
    return;
  }
  if (j.is_array()) {
    bool scalar = true;
    for (const auto &e : j)
      scalar = scalar && (e.is_number() || e.is_string() || e.is_boolean());
    if (scalar) {
      os << prefix << ": [";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i)
          os << ", ";
        if (j[i].is_number())
          os << fmt(j[i].get<double>());
        else
          os << j[i].dump();
      }
      os << "]\n";
      return;
    }
    for (size_t i = 0; i < j.size(); ++i)
      render_text(j[i], prefix + "[" + std::to_string(i) + "]", os);
    return;
  }
  os << prefix << ": ";
  if (j.is_number())
    os << fmt(j.get<double>());
  else if (j.is_string())
    os << j.get<std::string>();
  else
    os << j.dump();
  os << "\n";
}

} // namespace

CredalSet resolve_model(const ModelSpec &spec, int dim) {
  if (!spec.assessments.empty())
    return credal_from_assessments(spec.assessments, dim);
  if (!spec.extreme_points.empty()) {
    std::vector<DensityMatrix> pts;
    for (const auto &v : spec.extreme_points)
      pts.push_back(make_density(v));
    return CredalSet::from_extreme_points(pts, spec.classical);
  }
  if (!spec.constraints.empty())
    return CredalSet::from_constraints(dim, spec.constraints);
  return CredalSet::vacuous(dim, spec.classical);
}

ParsedScenario parse_scenario(
    const std::string &text,
    const std::vector<std::pair<std::string, double>> &tol_overrides) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError("$", e.what());
  }
  if (!j.is_object())
    throw ParseError("$", "scenario must be a JSON object");

  ParsedScenario s;
  reject_unknown(j,
                 {"schema", "dim", "dims", "model", "model_b", "assessments",
                  "gamble", "gambles", "measurement", "projector", "outcomes",
                  "unitary", "antiunitary", "keep", "direction", "probes",
                  "state", "trials", "seed", "tolerances"},
                 "$");

  if (j.contains("tolerances")) {
    const json &t = j["tolerances"];
    reject_unknown(t, {"tol_herm", "tol_member"}, "$.tolerances");
    if (t.contains("tol_herm"))
      s.tol.herm = number_at(t["tol_herm"], "$.tolerances.tol_herm");
    if (t.contains("tol_member"))
      s.tol.member = number_at(t["tol_member"], "$.tolerances.tol_member");
  }
  for (const auto &[name, value] : tol_overrides) {
    if (name == "tol_herm")
      s.tol.herm = value;
    else if (name == "tol_member")
      s.tol.member = value;
    else
      throw ValidationError("--tol", "unknown tolerance name: " + name);
  }
  if (j.contains("schema")) {
    s.schema = (int)number_at(j["schema"], "$.schema");
    if (s.schema != 1)
      throw ValidationError("$.schema", "unsupported schema version");
  }
  if (j.contains("dims")) {
    const json &d = j["dims"];
    if (!d.is_array() || d.size() != 2)
      throw ParseError("$.dims", "expected [dim_a, dim_b]");
    const int a = (int)number_at(d[0], "$.dims[0]");
    const int b = (int)number_at(d[1], "$.dims[1]");
    if (a < 1 || b < 1)
      throw ValidationError("$.dims", "dimensions must be positive");
    s.dims = {a, b};
    s.dim = a * b;
  }
  if (j.contains("dim")) {
    s.dim = (int)number_at(j["dim"], "$.dim");
    if (s.dim < 1)
      throw ValidationError("$.dim", "dimension must be positive");
    if (s.dims && s.dims->first * s.dims->second != s.dim)
      throw ValidationError("$.dim", "dim does not match dims product");
  }

  if (j.contains("model"))
    s.model = parse_model(j["model"], "$.model", s.tol.herm);
  if (j.contains("model_b"))
    s.model_b = parse_model(j["model_b"], "$.model_b", s.tol.herm);
  if (j.contains("assessments")) {
    // top-level shorthand for model.assessments
    if (s.model.specified)
      throw ValidationError("$.assessments",
                            "give either assessments or model, not both");
    json wrap = json::object();
    wrap["assessments"] = j["assessments"];
    s.model = parse_model(wrap, "$", s.tol.herm);
  }

  if (j.contains("gamble"))
    s.gamble = hermitian_at(j["gamble"], "$.gamble", s.tol.herm);
  if (j.contains("gambles")) {
    const json &arr = j["gambles"];
    if (!arr.is_array())
      throw ParseError("$.gambles", "expected an array");
    for (size_t i = 0; i < arr.size(); ++i)
      s.gambles.push_back(hermitian_at(
          arr[i], "$.gambles[" + std::to_string(i) + "]", s.tol.herm));
  }
  if (j.contains("measurement")) {
    const json &arr = j["measurement"];
    if (!arr.is_array())
      throw ParseError("$.measurement", "expected an array of projectors");
    for (size_t i = 0; i < arr.size(); ++i)
      s.measurement.push_back(hermitian_at(
          arr[i], "$.measurement[" + std::to_string(i) + "]", s.tol.herm));
  }
  if (j.contains("projector"))
    s.projector = hermitian_at(j["projector"], "$.projector", s.tol.herm);
  if (j.contains("outcomes")) {
    const json &arr = j["outcomes"];
    if (!arr.is_array())
      throw ParseError("$.outcomes", "expected an array of indices");
    for (size_t i = 0; i < arr.size(); ++i)
      s.outcomes.push_back(
          (int)number_at(arr[i], "$.outcomes[" + std::to_string(i) + "]"));
  }
  if (j.contains("unitary"))
    s.unitary = square_at(j["unitary"], "$.unitary");
  if (j.contains("antiunitary")) {
    if (!j["antiunitary"].is_boolean())
      throw ParseError("$.antiunitary", "expected a boolean");
    s.antiunitary = j["antiunitary"].get<bool>();
  }
  if (j.contains("keep")) {
    const std::string v = j["keep"].get<std::string>();
    if (v == "A")
      s.keep = Subsystem::A;
    else if (v == "B")
      s.keep = Subsystem::B;
    else
      throw ParseError("$.keep", "expected \"A\" or \"B\"");
  }
  if (j.contains("direction")) {
    const std::string v = j["direction"].get<std::string>();
    if (v == "AtoB")
      s.direction = IrrelevanceDirection::AtoB;
    else if (v == "BtoA")
      s.direction = IrrelevanceDirection::BtoA;
    else
      throw ParseError("$.direction", "expected \"AtoB\" or \"BtoA\"");
  }
  if (j.contains("probes")) {
    const json &arr = j["probes"];
    if (!arr.is_array())
      throw ParseError("$.probes", "expected an array");
    for (size_t i = 0; i < arr.size(); ++i)
      s.probes.push_back(hermitian_at(
          arr[i], "$.probes[" + std::to_string(i) + "]", s.tol.herm));
  }
  if (j.contains("state"))
    s.state = hermitian_at(j["state"], "$.state", s.tol.herm);
  if (j.contains("trials")) {
    s.trials = (long)number_at(j["trials"], "$.trials");
    if (s.trials <= 0)
      throw ValidationError("$.trials", "trials must be positive");
  }
  if (j.contains("seed"))
    s.seed = j["seed"].get<uint64_t>();

  // infer the dimension when not given
  auto first_dim = [&]() -> int {
    if (!s.model.assessments.empty())
      return (int)s.model.assessments[0].gamble.rows();
    if (!s.model.extreme_points.empty())
      return (int)s.model.extreme_points[0].rows();
    if (!s.model.constraints.empty())
      return (int)s.model.constraints[0].rows();
    if (s.state)
      return (int)s.state->rows();
    if (s.gamble)
      return (int)s.gamble->rows();
    if (!s.gambles.empty())
      return (int)s.gambles[0].rows();
    if (!s.measurement.empty())
      return (int)s.measurement[0].rows();
    return 0;
  };
  if (s.dim == 0)
    s.dim = first_dim();
  if (s.dim == 0)
    throw ValidationError("$", "cannot infer the system dimension");
  return s;
}

json serialize_scenario(const ParsedScenario &s) {
  json out = json::object();
  out["schema"] = s.schema;
  out["dim"] = s.dim;
  if (s.dims)
    out["dims"] = json::array({s.dims->first, s.dims->second});
  if (s.model.specified)
    out["model"] = model_to_json(s.model);
  if (s.model_b.specified)
    out["model_b"] = model_to_json(s.model_b);
  if (s.gamble)
    out["gamble"] = matrix_to_json(*s.gamble);
  if (!s.gambles.empty()) {
    json arr = json::array();
    for (const auto &g : s.gambles)
      arr.push_back(matrix_to_json(g));
    out["gambles"] = arr;
  }
  if (!s.measurement.empty()) {
    json arr = json::array();
    for (const auto &p : s.measurement)
      arr.push_back(matrix_to_json(p));
    out["measurement"] = arr;
  }
  if (s.projector)
    out["projector"] = matrix_to_json(*s.projector);
  if (!s.outcomes.empty())
    out["outcomes"] = s.outcomes;
  if (s.unitary)
    out["unitary"] = matrix_to_json(*s.unitary);
  if (s.antiunitary)
    out["antiunitary"] = true;
  if (s.keep)
    out["keep"] = *s.keep == Subsystem::A ? "A" : "B";
  if (s.direction)
    out["direction"] = *s.direction == IrrelevanceDirection::AtoB ? "AtoB"
                                                                  : "BtoA";
  if (!s.probes.empty()) {
    json arr = json::array();
    for (const auto &p : s.probes)
      arr.push_back(matrix_to_json(p));
    out["probes"] = arr;
  }
  if (s.state)
    out["state"] = matrix_to_json(*s.state);
  out["trials"] = s.trials;
  out["seed"] = s.seed;
  return out;
}

namespace {

std::pair<int, int> require_dims(const ParsedScenario &s,
                                 const std::string &cmd) {
  if (!s.dims)
    throw ValidationError("$.dims", cmd + " needs composite dims");
  return *s.dims;
}

ProjectiveMeasurement measurement_or_canonical(const ParsedScenario &s,
                                               int dim) {
  if (s.measurement.empty())
    return canonical_measurement(dim);
  return make_measurement(s.measurement);
}

json coherence_json(const CoherenceReport &rep) {
  json out = json::object();
  out["status"] = rep.coherent() ? "coherent" : "incurs-partial-loss";
  out["margin"] = rep.margin;
  if (rep.witness)
    out["witness"] = matrix_to_json(rep.witness->matrix);
  if (rep.certificate) {
    json cert = json::object();
    cert["alpha"] = std::vector<double>(
        rep.certificate->alpha.data(),
        rep.certificate->alpha.data() + rep.certificate->alpha.size());
    cert["beta"] = rep.certificate->beta;
    out["certificate"] = cert;
  }
  return out;
}

} // namespace

DispatchResult dispatch(const std::string &command, const ParsedScenario &s) {
  DispatchResult res;
  json &out = res.report;
  out["command"] = command;

  if (command == "check") {
    CoherenceReport rep = check_coherence(s.model.assessments, s.dim);
    out.update(coherence_json(rep));
    out["tolerance"] = {{"margin", kCoherenceMargin}};
    res.exit_code = rep.coherent() ? 0 : 2;
    return res;
  }

  if (command == "prevision") {
    if (!s.gamble)
      throw ValidationError("$.gamble", "prevision needs a gamble");
    CredalSet m = resolve_model(s.model, s.dim);
    PrevisionInterval iv = m.prevision(*s.gamble);
    out["prevision"] = interval_json(iv);
    out["desirable"] = m.is_desirable(*s.gamble);
    out["tolerance"] = {{"prevision", kPrevisionTol}};
    return res;
  }

  if (command == "member") {
    if (!s.state)
      throw ValidationError("$.state", "member needs a state");
    CredalSet m = resolve_model(s.model, s.dim);
    out["member"] = m.contains(make_density(*s.state), s.tol.member);
    out["tolerance"] = {{"membership", s.tol.member}};
    return res;
  }

  if (command == "condition") {
    CredalSet m = resolve_model(s.model, s.dim);
    CredalSet cond = [&] {
      if (s.projector)
        return condition_selective(m, make_projector(*s.projector));
      if (!s.measurement.empty() && !s.outcomes.empty())
        return condition_nonselective(m, make_measurement(s.measurement),
                                      s.outcomes);
      throw ValidationError(
          "$", "condition needs a projector or measurement+outcomes");
    }();
    out["vacuous"] = cond.vacuous_set();
    if (cond.has_extremes() && cond.extreme_points().size() == 1)
      out["state"] = matrix_to_json(cond.extreme_points()[0]);
    if (s.gamble)
      out["prevision"] = interval_json(cond.prevision(*s.gamble));
    for (size_t i = 0; i < s.probes.size(); ++i)
      out["probe_previsions"].push_back(
          interval_json(cond.prevision(s.probes[i])));
    return res;
  }

  if (command == "marginal") {
    auto [na, nb] = require_dims(s, "marginal");
    if (!s.keep)
      throw ValidationError("$.keep", "marginal needs keep: A or B");
    CredalSet m = resolve_model(s.model, s.dim);
    MarginalModel marg = marginal(m, na, nb, *s.keep);
    if (s.gamble)
      out["prevision"] = interval_json(marg.prevision(*s.gamble));
    for (size_t i = 0; i < s.probes.size(); ++i)
      out["probe_previsions"].push_back(
          interval_json(marg.prevision(s.probes[i])));
    if (s.state)
      out["member"] = marg.membership(make_density(*s.state), s.tol.member);
    if (auto mat = marg.materialized()) {
      if (mat->extreme_points().size() == 1)
        out["state"] = matrix_to_json(mat->extreme_points()[0]);
    }
    return res;
  }

  if (command == "extend") {
    auto [na, nb] = require_dims(s, "extend");
    CredalSet ma = resolve_model(s.model, na);
    CredalSet mb = resolve_model(s.model_b, nb);
    CredalSet ext = natural_extension(ma, mb);
    out["classical"] = ext.classical();
    if (s.state)
      out["member"] = ext.contains(make_density(*s.state), s.tol.member);
    if (s.gamble)
      out["prevision"] = interval_json(ext.prevision(*s.gamble));
    for (size_t i = 0; i < s.probes.size(); ++i)
      out["probe_previsions"].push_back(
          interval_json(ext.prevision(s.probes[i])));
    return res;
  }

  if (command == "evolve") {
    if (!s.unitary)
      throw ValidationError("$.unitary", "evolve needs a unitary");
    CredalSet m = resolve_model(s.model, s.dim);
    UnitaryMap<double> u = make_unitary(*s.unitary, s.antiunitary);
    CredalSet e = evolve(m, u);
    out["vacuous"] = e.vacuous_set();
    if (e.has_extremes() && e.extreme_points().size() == 1)
      out["state"] = matrix_to_json(e.extreme_points()[0]);
    if (s.gamble)
      out["prevision"] = interval_json(e.prevision(*s.gamble));
    return res;
  }

  if (command == "born") {
    if (!s.state)
      throw ValidationError("$.state", "born needs a state");
    DensityMatrix rho = make_density(*s.state);
    ProjectiveMeasurement meas =
        s.measurement.empty() ? eigenmeasurement(rho)
                              : make_measurement(s.measurement);
    rvec p = born_probabilities(rho, meas);
    out["probabilities"] =
        std::vector<double>(p.data(), p.data() + p.size());
    return res;
  }

  if (command == "frechet") {
    auto [na, nb] = require_dims(s, "frechet");
    if (!s.state)
      throw ValidationError("$.state", "frechet needs a joint state");
    FrechetReport rep = frechet_check(make_density(*s.state), na, nb);
    const char *names[4] = {"upper_a", "upper_b", "lower", "positivity"};
    for (int t = 0; t < 4; ++t) {
      json bound = json::object();
      bound["holds"] = rep.holds[(size_t)t];
      bound["min_eigenvalue"] = rep.min_eigenvalue[(size_t)t];
      out["bounds"][names[t]] = bound;
    }
    out["all_hold"] = rep.all_hold();
    return res;
  }

  if (command == "independence") {
    auto [na, nb] = require_dims(s, "independence");
    if (!s.state)
      throw ValidationError("$.state", "independence needs a joint state");
    IndependenceReport rep = check_independence(make_density(*s.state), na, nb);
    out["independent"] = rep.independent;
    out["residual"] = rep.residual;
    out["rho_a"] = matrix_to_json(rep.rho_a.matrix);
    out["rho_b"] = matrix_to_json(rep.rho_b.matrix);
    if (s.model.specified && s.direction && !s.probes.empty()) {
      CredalSet m = resolve_model(s.model, s.dim);
      std::vector<ProjectiveMeasurement> fam;
      if (!s.measurement.empty())
        fam.push_back(make_measurement(s.measurement));
      IrrelevanceReport irr = check_irrelevance_probe(
          m, na, nb, *s.direction, fam, s.probes, s.seed);
      out["irrelevance"] = {{"max_discrepancy", irr.max_discrepancy},
                            {"comparisons", irr.comparisons},
                            {"undefined_events", irr.undefined_events},
                            {"holds", irr.holds_on_tested_family()}};
    }
    return res;
  }

  if (command == "simulate") {
    if (!s.state)
      throw ValidationError("$.state", "simulate needs a bookmaker state");
    Scenario sc;
    sc.bookmaker_state = make_density(*s.state);
    if (!s.measurement.empty())
      sc.measurement = make_measurement(s.measurement);
    sc.accepted_gambles = s.gambles;
    if (sc.accepted_gambles.empty() && s.gamble)
      sc.accepted_gambles.push_back(*s.gamble);
    sc.trials = s.trials;
    sc.seed = s.seed;
    Ledger led = run_simulation(sc);
    out["trials"] = sc.trials;
    out["seed"] = sc.seed;
    json table = json::array();
    for (size_t g = 0; g < led.empirical_mean.size(); ++g) {
      json row = json::object();
      row["empirical_mean"] = led.empirical_mean[g];
      row["expectation"] = led.expectation[g];
      row["abs_deviation"] =
          std::abs(led.empirical_mean[g] - led.expectation[g]);
      row["sigma_bound"] =
          4.0 * led.sigma[g] / std::sqrt(double(sc.trials));
      table.push_back(row);
    }
    out["gambles"] = table;
    return res;
  }

  if (command == "pauli") {
    if (!s.gamble)
      throw ValidationError("$.gamble", "pauli needs a gamble");
    auto c = pauli_coords(*s.gamble);
    out["coords"] = {{"v", c[0]}, {"x", c[1]}, {"y", c[2]}, {"z", c[3]}};
    return res;
  }

  throw ValidationError("$", "unknown command: " + command);
}

std::string emit_report(const json &report, const std::string &format) {
  if (format == "json")
    return report.dump(2) + "\n";
  if (format != "text")
    throw Error("unknown format: " + format);
  std::ostringstream os;
  render_text(report, "", os);
  return os.str();
}

} // namespace io
} // namespace qcredal
