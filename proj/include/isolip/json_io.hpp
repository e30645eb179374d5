#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "isolip/experiments.hpp"
#include "isolip/isoorder.hpp"
#include "isolip/isoperim.hpp"
#include "isolip/lipschitz.hpp"
#include "isolip/measure.hpp"
#include "isolip/mmspace.hpp"
#include "isolip/plan.hpp"

namespace isolip {

using json = nlohmann::json;

namespace detail {

inline std::vector<double> number_array(const json& j, const std::string& key,
                                        const std::string& context) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw std::invalid_argument(context + ": missing or non-array \"" + key + "\"");
  std::vector<double> out;
  out.reserve(j.at(key).size());
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw std::invalid_argument(context + ": \"" + key + "\" has a non-number entry");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace detail

// ---- measures -------------------------------------------------------------

inline json measure_to_json(const AtomicMeasure& mu) {
  return json{{"atoms", mu.atoms()}, {"weights", mu.weights()}};
}

/// Reads {"atoms": [...], "weights": [...]}. Validates the invariants and
/// rejects non-sorted atoms with a message naming the offending index.
inline AtomicMeasure measure_from_json(const json& j) {
  const auto atoms = detail::number_array(j, "atoms", "measure JSON");
  const auto weights = detail::number_array(j, "weights", "measure JSON");
  if (atoms.size() != weights.size())
    throw std::invalid_argument("measure JSON: atoms and weights differ in length");
  for (std::size_t i = 0; i + 1 < atoms.size(); ++i)
    if (atoms[i + 1] <= atoms[i])
      throw std::invalid_argument("measure JSON: atoms must be strictly increasing, but atoms[" +
                                  std::to_string(i + 1) + "]=" + fmt_double(atoms[i + 1]) +
                                  " <= atoms[" + std::to_string(i) + "]=" +
                                  fmt_double(atoms[i]));
  return AtomicMeasure(atoms, weights);
}

// ---- spaces and graphs ----------------------------------------------------

inline json space_to_json(const FiniteMMSpace& x) {
  std::vector<std::vector<double>> rows(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    rows[i].resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) rows[i][j] = x.dist(i, j);
  }
  json j{{"dist", rows}, {"weights", x.weights()}};
  if (!x.labels().empty()) j["labels"] = x.labels();
  return j;
}

inline FiniteMMSpace space_from_json(const json& j) {
  if (!j.contains("dist") || !j.at("dist").is_array())
    throw std::invalid_argument("space JSON: missing or non-array \"dist\"");
  const auto& rows = j.at("dist");
  const std::size_t n = rows.size();
  std::vector<double> dist;
  dist.reserve(n * n);
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != n)
      throw std::invalid_argument("space JSON: \"dist\" must be a square matrix");
    for (const auto& v : row) {
      if (!v.is_number()) throw std::invalid_argument("space JSON: non-number distance");
      dist.push_back(v.get<double>());
    }
  }
  const auto weights = detail::number_array(j, "weights", "space JSON");
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    for (const auto& v : j.at("labels")) labels.push_back(v.get<std::string>());
  }
  return FiniteMMSpace(n, std::move(dist), weights, std::move(labels));
}

inline json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& [u, v] : g.edges) edges.push_back(json::array({u, v}));
  return json{{"order", g.order}, {"edges", edges}};
}

inline Graph graph_from_json(const json& j) {
  if (!j.contains("order") || !j.at("order").is_number_integer())
    throw std::invalid_argument("graph JSON: missing integer \"order\"");
  Graph g;
  g.order = j.at("order").get<int>();
  if (!j.contains("edges") || !j.at("edges").is_array())
    throw std::invalid_argument("graph JSON: missing or non-array \"edges\"");
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("graph JSON: each edge must be a pair of indices");
    g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return g;
}

// ---- plans and certificates -----------------------------------------------

inline constexpr std::size_t kDensePlanLimit = 512;

/// Plans serialize densely up to 512 x 512 and as sparse triplets beyond.
inline json plan_to_json(const Plan& p) {
  json j{{"rows", p.row_atoms()}, {"cols", p.col_atoms()}};
  const std::size_t m = p.row_atoms().size(), n = p.col_atoms().size();
  if (m <= kDensePlanLimit && n <= kDensePlanLimit) {
    std::vector<std::vector<double>> mass(m, std::vector<double>(n, 0.0));
    for (const auto& c : p.cells()) mass[c.row][c.col] = c.mass;
    j["mass"] = mass;
  } else {
    json trips = json::array();
    for (const auto& c : p.cells()) trips.push_back(json::array({c.row, c.col, c.mass}));
    j["triplets"] = trips;
  }
  return j;
}

inline Plan plan_from_json(const json& j) {
  const auto rows = detail::number_array(j, "rows", "plan JSON");
  const auto cols = detail::number_array(j, "cols", "plan JSON");
  std::vector<PlanCell> cells;
  if (j.contains("mass")) {
    const auto& mass = j.at("mass");
    if (!mass.is_array() || mass.size() != rows.size())
      throw std::invalid_argument("plan JSON: \"mass\" row count mismatch");
    for (std::size_t i = 0; i < mass.size(); ++i) {
      if (!mass[i].is_array() || mass[i].size() != cols.size())
        throw std::invalid_argument("plan JSON: \"mass\" column count mismatch");
      for (std::size_t jj = 0; jj < cols.size(); ++jj) {
        const double v = mass[i][jj].get<double>();
        if (v != 0.0) cells.push_back({i, jj, v});
      }
    }
  } else if (j.contains("triplets")) {
    for (const auto& t : j.at("triplets")) {
      if (!t.is_array() || t.size() != 3)
        throw std::invalid_argument("plan JSON: each triplet must be [row, col, mass]");
      cells.push_back({t[0].get<std::size_t>(), t[1].get<std::size_t>(), t[2].get<double>()});
    }
  } else {
    throw std::invalid_argument("plan JSON: needs \"mass\" or \"triplets\"");
  }
  return Plan(rows, cols, std::move(cells));
}

inline json certificate_to_json(const OrderCertificate& c) {
  json cells = json::array();
  for (const auto& [i, j] : c.cells) cells.push_back(json::array({i, j}));
  return json{{"plan", plan_to_json(c.plan)},
              {"cells", cells},
              {"s_achieved", c.s_achieved},
              {"t_achieved", c.t_achieved}};
}

inline OrderCertificate certificate_from_json(const json& j) {
  OrderCertificate c{plan_from_json(j.at("plan")), {}, j.at("s_achieved").get<double>(),
                     j.at("t_achieved").get<double>()};
  for (const auto& cell : j.at("cells"))
    c.cells.emplace_back(cell[0].get<std::size_t>(), cell[1].get<std::size_t>());
  return c;
}

inline json decision_to_json(const OrderDecision& d) {
  json j{{"holds", d.holds}};
  if (d.certificate.has_value()) j["certificate"] = certificate_to_json(*d.certificate);
  if (d.refutation.has_value()) {
    j["refutation"] = json{{"exhaustive", d.refutation->exhaustive},
                           {"best_mass", d.refutation->best_mass},
                           {"required_mass", d.refutation->required_mass},
                           {"nodes_explored", d.refutation->nodes_explored},
                           {"note", d.refutation->note}};
  }
  return j;
}

// ---- fields ---------------------------------------------------------------

inline std::string provenance_name(FieldProvenance p) {
  switch (p) {
    case FieldProvenance::DistanceFunction: return "distance-function";
    case FieldProvenance::McShaneRandom: return "mcshane-random";
    default: return "user";
  }
}

inline json field_to_json(const ScalarField& f) {
  return json{{"values", f.values}, {"provenance", provenance_name(f.provenance)}};
}

inline ScalarField field_from_json(const json& j) {
  ScalarField f;
  f.values = detail::number_array(j, "values", "field JSON");
  const std::string p = j.value("provenance", "user");
  if (p == "distance-function")
    f.provenance = FieldProvenance::DistanceFunction;
  else if (p == "mcshane-random")
    f.provenance = FieldProvenance::McShaneRandom;
  else
    f.provenance = FieldProvenance::User;
  return f;
}

// ---- reports --------------------------------------------------------------

inline json icl_report_to_json(const IclReport& r) {
  json j{{"pass", r.pass}, {"eps", r.eps}, {"pairs_checked", r.pairs_checked}};
  if (r.violation.has_value()) {
    j["violation"] = json{{"a", r.violation->a},
                          {"b", r.violation->b},
                          {"witness", r.violation->witness},
                          {"required", r.violation->required},
                          {"achieved", r.violation->achieved}};
  }
  return j;
}

inline json ic_plus_report_to_json(const IcPlusReport& r) {
  json cases = json::array();
  for (const auto& c : r.cases) {
    cases.push_back(json{{"t", c.t},
                         {"delta_plus", c.delta_plus},
                         {"vacuous", c.vacuous},
                         {"pass", c.pass},
                         {"profile_value", c.profile_value},
                         {"required", c.required},
                         {"witness", c.witness}});
  }
  return json{{"pass", r.pass}, {"eps", r.eps}, {"cases", cases}};
}

inline json profile_to_json(const ProfileTable& t) {
  json entries = json::array();
  for (const auto& e : t.entries)
    entries.push_back(json{{"volume", e.volume}, {"value", e.value}, {"witness", e.witness}});
  return json{{"eps", t.eps}, {"entries", entries}};
}

inline json dominance_report_to_json(const DominanceReport& r, bool include_certificates = false) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    json je{{"field_index", e.field_index}, {"holds", e.holds}};
    if (include_certificates && e.certificate.has_value())
      je["certificate"] = certificate_to_json(*e.certificate);
    if (e.refutation.has_value()) je["refutation_note"] = e.refutation->note;
    entries.push_back(je);
  }
  return json{{"all_pass", r.all_pass},
              {"vacuous", r.vacuous},
              {"verdict", r.verdict},
              {"entries", entries}};
}

}  // namespace isolip
