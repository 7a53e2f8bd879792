#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nilcover/amalgam.hpp"
#include "nilcover/derivation.hpp"
#include "nilcover/liealg.hpp"

namespace nilcover::io {

using json = nlohmann::json;

/// Parses JSON text; syntax errors report line and column.
inline json parse_json(const std::string& text, const std::string& source = "input") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    const auto cut = what.find("parse error");
    if (cut != std::string::npos) what = what.substr(cut);
    throw Error(ErrorKind::parse, source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// FNV-1a 64-bit, as 16 hex digits.
inline std::string digest(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

[[noreturn]] inline void schema(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::parse, path + ": " + what);
}

inline const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(path, "missing field \"" + key + "\"");
  return *it;
}

inline long long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  return j.get<long long>();
}

inline const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array");
  return j;
}

}  // namespace detail

inline Vec vector_from_json(const json& j, const Field& f, std::size_t n, const std::string& path) {
  detail::array(j, path);
  if (j.size() != n) detail::schema(path, "expected " + std::to_string(n) + " coordinates, got " + std::to_string(j.size()));
  Vec v(n, 0);
  for (std::size_t i = 0; i < n; ++i) v[i] = f.reduce(detail::integer(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

inline std::vector<Vec> vectors_from_json(const json& j, const Field& f, std::size_t n, const std::string& path) {
  detail::array(j, path);
  std::vector<Vec> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vector_from_json(j[i], f, n, path + "[" + std::to_string(i) + "]"));
  return out;
}

/// A wedge expression: list of [i, j, c] meaning c·(e_i ∧ e_j).
inline Vec wedge_from_json(const json& j, const Field& f, std::size_t n, const std::string& path) {
  detail::array(j, path);
  Vec w(wedge_dim(n), 0);
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string p = path + "[" + std::to_string(t) + "]";
    detail::array(j[t], p);
    if (j[t].size() != 3) detail::schema(p, "expected a triple [i, j, c]");
    const long long a = detail::integer(j[t][0], p + "[0]");
    const long long b = detail::integer(j[t][1], p + "[1]");
    const long long c = detail::integer(j[t][2], p + "[2]");
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n) {
      detail::schema(p, "index out of range for dimension " + std::to_string(n));
    }
    if (a == b) detail::schema(p, "e_i ∧ e_i is zero; indices must differ");
    if (a < b) {
      add_wedge(f, w, f.reduce(c), unit_vector(n, a), unit_vector(n, b));
    } else {
      add_wedge(f, w, f.reduce(-c), unit_vector(n, b), unit_vector(n, a));
    }
  }
  return w;
}

inline json wedge_to_json(const Vec& w, std::size_t n) {
  json out = json::array();
  for (std::size_t idx = 0; idx < w.size(); ++idx) {
    if (w[idx] == 0) continue;
    const auto [i, j] = index_pair(n, idx);
    out.push_back(json::array({i, j, w[idx]}));
  }
  return out;
}

inline json vector_to_json(const Vec& v) {
  json out = json::array();
  for (auto x : v) out.push_back(x);
  return out;
}

inline json subspace_to_json(const Subspace& s) {
  json out = json::array();
  for (const auto& b : s.basis()) out.push_back(vector_to_json(b));
  return out;
}

/// Reads p (overridable when the file omits it), dim, labels and relations.
inline GradedAlgebra algebra_from_json(const json& j, unsigned default_p = 3, const std::string& path = "$") {
  if (!j.is_object()) detail::schema(path, "expected an object");
  unsigned p = default_p;
  if (j.contains("p")) {
    const long long raw = detail::integer(j["p"], path + ".p");
    if (raw < 0 || !Field::supported(static_cast<unsigned>(raw))) {
      throw Error(ErrorKind::malformed_field, path + ".p: " + std::to_string(raw) + " is not one of 3, 5, 7, 11");
    }
    p = static_cast<unsigned>(raw);
  }
  const Field f(p);
  const long long dim = detail::integer(detail::field(j, "dim", path), path + ".dim");
  if (dim < 0 || dim > 64) detail::schema(path + ".dim", "dimension must lie in [0, 64]");
  const std::size_t n = static_cast<std::size_t>(dim);
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    const json& l = detail::array(j["labels"], path + ".labels");
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (!l[i].is_string()) detail::schema(path + ".labels[" + std::to_string(i) + "]", "expected a string");
      labels.push_back(l[i].get<std::string>());
    }
    if (labels.size() != n) detail::schema(path + ".labels", "label count does not match dim");
  }
  std::vector<Vec> rels;
  if (j.contains("relations")) {
    const json& r = detail::array(j["relations"], path + ".relations");
    for (std::size_t i = 0; i < r.size(); ++i) {
      rels.push_back(wedge_from_json(r[i], f, n, path + ".relations[" + std::to_string(i) + "]"));
    }
  }
  return GradedAlgebra::with_relations(f, n, std::move(rels), std::move(labels));
}

/// Canonical form: relations as the echelon basis of N, nonzero triples in pair order.
inline json algebra_to_json(const GradedAlgebra& alg) {
  json out;
  out["p"] = alg.field().modulus();
  out["dim"] = alg.dim();
  if (!alg.labels().empty()) out["labels"] = alg.labels();
  json rels = json::array();
  for (const auto& w : alg.relations().basis()) rels.push_back(wedge_to_json(w, alg.dim()));
  out["relations"] = std::move(rels);
  return out;
}

struct ProblemFile {
  GradedAlgebra algebra;
  Subspace base;
  Subspace target;
  PartialDerivation f;
};

/// Algebra fields plus "base", "target" (vector lists) and "map" ([[x, f(x)], ...]).
inline ProblemFile problem_from_json(const json& j, unsigned default_p = 3) {
  GradedAlgebra alg = algebra_from_json(j, default_p);
  const Field& f = alg.field();
  const std::size_t n = alg.dim();
  const Subspace base = alg.span(vectors_from_json(detail::field(j, "base", "$"), f, n, "$.base"));
  const Subspace target = alg.span(vectors_from_json(detail::field(j, "target", "$"), f, n, "$.target"));
  const json& m = detail::array(detail::field(j, "map", "$"), "$.map");
  std::vector<std::pair<Vec, Vec>> pairs;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::string p = "$.map[" + std::to_string(i) + "]";
    detail::array(m[i], p);
    if (m[i].size() != 2) detail::schema(p, "expected a pair [x, f(x)]");
    pairs.emplace_back(vector_from_json(m[i][0], f, n, p + "[0]"), vector_from_json(m[i][1], f, n, p + "[1]"));
  }
  PartialDerivation map = pairs.empty() ? PartialDerivation::zero(Subspace(f, n))
                                        : PartialDerivation::from_pairs(f, n, pairs);
  if (pairs.empty() && !base.is_zero()) detail::schema("$.map", "map must be given on a basis of the base");
  if (!(map.domain() == base)) detail::schema("$.map", "map must be given on a basis of the base");
  return ProblemFile{std::move(alg), base, target, std::move(map)};
}

struct ReplayStep {
  std::vector<Vec> base;  ///< workspace vectors; the i-th is matched to coordinate i of the algebra
  GradedAlgebra algebra;
};

struct ReplayScript {
  unsigned p = 3;
  std::vector<ReplayStep> steps;
};

/// {"p": 3, "steps": [{"base": [...], "algebra": {...}}, ...]}; base vectors are read in the
/// ambient the workspace has when the step runs.
inline ReplayScript replay_from_json(const json& j, unsigned default_p = 3) {
  if (!j.is_object()) detail::schema("$", "expected an object");
  ReplayScript script;
  script.p = default_p;
  if (j.contains("p")) {
    const long long raw = detail::integer(j["p"], "$.p");
    if (raw < 0 || !Field::supported(static_cast<unsigned>(raw))) {
      throw Error(ErrorKind::malformed_field, "$.p: " + std::to_string(raw) + " is not one of 3, 5, 7, 11");
    }
    script.p = static_cast<unsigned>(raw);
  }
  const Field f(script.p);
  const json& steps = detail::array(detail::field(j, "steps", "$"), "$.steps");
  std::size_t ambient = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string p = "$.steps[" + std::to_string(i) + "]";
    json alg_json = detail::field(steps[i], "algebra", p);
    if (alg_json.is_object() && !alg_json.contains("p")) alg_json["p"] = script.p;
    GradedAlgebra alg = algebra_from_json(alg_json, script.p, p + ".algebra");
    if (!(alg.field() == f)) detail::schema(p + ".algebra.p", "step field differs from the script field");
    std::vector<Vec> base;
    if (steps[i].contains("base")) base = vectors_from_json(steps[i]["base"], f, ambient, p + ".base");
    if (base.size() > alg.dim()) detail::schema(p + ".base", "more base vectors than algebra coordinates");
    ambient += alg.dim() - base.size();
    script.steps.push_back(ReplayStep{std::move(base), std::move(alg)});
  }
  return script;
}

inline json replay_to_json(const ReplayScript& script) {
  json steps = json::array();
  for (const auto& s : script.steps) {
    json base = json::array();
    for (const auto& b : s.base) base.push_back(vector_to_json(b));
    steps.push_back(json{{"base", std::move(base)}, {"algebra", algebra_to_json(s.algebra)}});
  }
  return json{{"p", script.p}, {"steps", std::move(steps)}};
}

/// Replays a script from the empty workspace.
inline Workspace replay(const ReplayScript& script, std::size_t budget = 24, const ScanOptions& opts = {}) {
  Workspace ws(Field(script.p), budget, opts);
  for (const auto& step : script.steps) ws.embed_extension(step.base, step.algebra);
  return ws;
}

}  // namespace nilcover::io
