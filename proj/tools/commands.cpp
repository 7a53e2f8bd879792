#include "commands.hpp"

#include <random>

#include "nilcover/cover.hpp"
#include "nilcover/io.hpp"

namespace nilcover::cli {

using nlohmann::json;

namespace {

ScanOptions scan(const Options& opts) { return ScanOptions{opts.cap_enum, ScanRoute::automatic}; }

std::string show(const Vec& v) { return io::vector_to_json(v).dump(); }

json k_report(const GradedAlgebra& alg, std::size_t cap) {
  const KReport k = in_class_K(alg, cap);
  json out{{"ok", k.ok}, {"route", k.route == KRoute::subspaces ? "subspaces" : "relations"}};
  if (k.decomposable) {
    out["commuting_pair"] = json::array({io::vector_to_json(k.decomposable->first),
                                         io::vector_to_json(k.decomposable->second)});
  }
  if (k.violating) {
    out["low_predimension"] = json{{"basis", io::subspace_to_json(*k.violating)},
                                   {"delta", predim(alg, *k.violating)}};
  }
  return out;
}

json subspace_row(const GradedAlgebra& alg, const Subspace& s, const ScanOptions& opts) {
  return json{{"basis", io::subspace_to_json(s)},
              {"dim", s.dim()},
              {"relation_dim", relation_dim(alg, s)},
              {"delta", predim(alg, s)},
              {"strong", is_strong(alg, s, opts)}};
}

json step_report(const ExtensionKind& k) {
  json out{{"kind", kind_name(k)}};
  if (const auto* a = std::get_if<Algebraic>(&k)) {
    out["new_vector"] = io::vector_to_json(a->new_vector);
    out["relation"] = a->relation.empty() ? json::array() : io::wedge_to_json(a->relation, a->new_vector.size());
  } else if (const auto* t = std::get_if<Transcendental>(&k)) {
    out["new_vector"] = io::vector_to_json(t->new_vector);
  } else {
    out["codimension"] = std::get<Prealgebraic>(k).codimension;
  }
  return out;
}

json derivation_json(const PartialDerivation& f) {
  json rows = json::array();
  for (std::size_t i = 0; i < f.domain().dim(); ++i) {
    rows.push_back(json::array({io::vector_to_json(f.domain().basis()[i]), io::vector_to_json(f.images().row(i))}));
  }
  return rows;
}

/// A workspace seeded from a replay script, or from a single algebra when none is given.
Workspace make_workspace(const std::optional<std::string>& script_path, const GradedAlgebra* seed_alg,
                         const Options& opts, json& inputs) {
  if (script_path) {
    const std::string text = io::read_file(*script_path);
    inputs[*script_path] = io::digest(text);
    return io::replay(io::replay_from_json(io::parse_json(text, *script_path), opts.p), opts.cap_ambient, scan(opts));
  }
  Workspace ws(seed_alg->field(), opts.cap_ambient, scan(opts));
  ws.embed_extension({}, *seed_alg);
  return ws;
}

// Deterministic sampling from the seed; values reduce by modulo so the stream does not
// depend on the standard library's distributions.
struct Sampler {
  std::mt19937_64 engine;
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine() % n); }
  Vec vector(const Field& f, std::size_t n) {
    Vec v(n);
    for (auto& x : v) x = static_cast<std::uint8_t>(below(f.modulus()));
    return v;
  }
  Vec nonzero(const Field& f, std::size_t n) {
    while (true) {
      Vec v = vector(f, n);
      if (!is_zero(v)) return v;
    }
  }
};

std::vector<PartialDerivation> killing_derivations(const GradedAlgebra& alg, std::size_t count, Sampler& rng,
                                                   const ScanOptions& opts) {
  const Field& f = alg.field();
  const std::size_t n = alg.dim();
  std::vector<PartialDerivation> out;
  for (std::size_t attempt = 0; attempt < 400 * count && out.size() < count; ++attempt) {
    const Vec a = rng.nonzero(f, n);
    std::vector<Vec> bs(rng.below(3));
    for (auto& b : bs) b = rng.nonzero(f, n);
    const Vec e = rng.vector(f, n);
    try {
      out.push_back(totalize_derivation(alg, killing_derivation(alg, a, bs, e, opts)));
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::precondition) throw;
    }
  }
  return out;
}

std::vector<Vec> vectors_or(const json& exp, const char* key, const Field& f, std::size_t n,
                            const std::string& path, std::vector<Vec> fallback) {
  if (!exp.contains(key)) return fallback;
  return io::vectors_from_json(exp[key], f, n, path + "." + key);
}

json automorphism_experiment(const GradedAlgebra& alg, const json& exp, const std::string& path, Sampler& rng,
                             const ScanOptions& opts, bool& ok, std::string& line) {
  const Field& f = alg.field();
  const std::size_t n = alg.dim();
  std::vector<PartialDerivation> fs;
  const json derivs = exp.value("derivations", json{{"kind", "killing"}, {"count", 3}});
  const std::string dkind = derivs.value("kind", "killing");
  std::size_t requested = 1;
  if (dkind == "zero") {
    fs.push_back(PartialDerivation::zero(alg.full_space()));
  } else if (dkind == "killing") {
    requested = derivs.value("count", std::size_t{3});
    fs = killing_derivations(alg, requested, rng, opts);
  } else {
    throw Error(ErrorKind::parse, path + ".derivations.kind: expected \"zero\" or \"killing\"");
  }

  std::vector<Vec> proj{Vec(n, 0)};
  for (std::size_t i = 0; i < std::min<std::size_t>(n, 4); ++i) proj.push_back(unit_vector(n, i));
  std::vector<Vec> second{Vec(n, 0)};
  if (n > 0) second.push_back(unit_vector(n, n - 1));
  proj = vectors_or(exp, "projections", f, n, path, proj);
  second = vectors_or(exp, "seconds", f, n, path, second);
  std::vector<CoverPoint> alphabet;
  for (const auto& a : proj) {
    for (const auto& u : second) alphabet.push_back(CoverPoint{a, u});
  }
  std::vector<std::size_t> pairs{1, 2};
  if (exp.contains("pairs")) pairs = exp["pairs"].get<std::vector<std::size_t>>();

  json per_pairs = json::array();
  std::size_t violations = 0, instances = 0;
  for (std::size_t k : pairs) {
    AutomorphismTally total;
    for (const auto& d : fs) {
      const auto t = automorphism_scan(alg, d, alphabet, k);
      total.instances += t.instances;
      total.holding += t.holding;
      total.violations += t.violations;
    }
    violations += total.violations;
    instances += total.instances;
    per_pairs.push_back(json{{"pairs", k}, {"instances", total.instances}, {"holding", total.holding},
                             {"violations", total.violations}});
  }

  const std::size_t samples = exp.value("homomorphism_samples", std::size_t{50});
  std::size_t hom_checked = 0, hom_failed = 0;
  for (std::size_t i = 0; i + 1 < fs.size() || (fs.size() == 1 && i == 0); ++i) {
    const auto& g = fs[i];
    const auto& h = fs.size() == 1 ? fs[0] : fs[i + 1];
    const auto sum = add_derivations(g, h);
    for (std::size_t s = 0; s < samples; ++s) {
      const CoverPoint pt{rng.vector(f, n), rng.vector(f, n)};
      ++hom_checked;
      if (!(sigma_f(g, sigma_f(h, pt)) == sigma_f(sum, pt))) ++hom_failed;
    }
    if (fs.size() == 1) break;
  }

  const bool pass = violations == 0 && hom_failed == 0 && fs.size() == requested;
  ok = ok && pass;
  line = "automorphism: " + std::to_string(fs.size()) + " derivations, " + std::to_string(instances) +
         " T_W instances, " + std::to_string(violations) + " violations, homomorphism " +
         std::to_string(hom_checked - hom_failed) + "/" + std::to_string(hom_checked);
  return json{{"kind", "automorphism"}, {"derivations", fs.size()}, {"requested", requested},
              {"alphabet", alphabet.size()}, {"tw", per_pairs},
              {"homomorphism", json{{"checked", hom_checked}, {"failed", hom_failed}}}, {"pass", pass}};
}

json orbit_experiment(const GradedAlgebra& alg, const json& exp, const std::string& path, const ScanOptions& opts,
                      bool& ok, std::string& line) {
  const Field& f = alg.field();
  const std::size_t n = alg.dim();
  const CoverPoint s{io::vector_from_json(io::detail::field(exp, "a", path), f, n, path + ".a"),
                     exp.contains("u") ? io::vector_from_json(exp["u"], f, n, path + ".u") : Vec(n, 0)};
  std::vector<CoverPoint> fixed;
  if (exp.contains("fixed")) {
    const json& fx = io::detail::array(exp["fixed"], path + ".fixed");
    for (std::size_t i = 0; i < fx.size(); ++i) {
      const std::string p = path + ".fixed[" + std::to_string(i) + "]";
      fixed.push_back(CoverPoint{io::vector_from_json(io::detail::field(fx[i], "a", p), f, n, p + ".a"),
                                 fx[i].contains("u") ? io::vector_from_json(fx[i]["u"], f, n, p + ".u") : Vec(n, 0)});
    }
  }
  std::vector<Vec> es;
  if (exp.contains("e")) {
    es = io::vectors_from_json(exp["e"], f, n, path + ".e");
  } else {
    // every nonzero element of the span
    const Subspace block = alg.span(io::vectors_from_json(io::detail::field(exp, "e_span", path), f, n, path + ".e_span"));
    std::vector<unsigned> digits(block.dim(), 0);
    while (true) {
      std::size_t pos = 0;
      while (pos < digits.size() && ++digits[pos] == f.modulus()) digits[pos++] = 0;
      if (pos == digits.size()) break;
      Vec c(digits.size());
      for (std::size_t i = 0; i < digits.size(); ++i) c[i] = static_cast<std::uint8_t>(digits[i]);
      es.push_back(combine(f, block.basis(), c, n));
    }
  }
  const OrbitProbe probe = orbit_probe(alg, s, fixed, es, opts);
  std::size_t direct = 0;
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (probe.images[i] == CoverPoint{s.a, added(f, s.u, es[i])}) ++direct;
  }
  const bool pass = probe.distinct == es.size() && probe.fixes_base && direct == es.size();
  ok = ok && pass;
  json images = json::array();
  for (const auto& im : probe.images) images.push_back(json::array({io::vector_to_json(im.a), io::vector_to_json(im.u)}));
  line = "orbit: " + std::to_string(probe.distinct) + " distinct images from " + std::to_string(es.size()) +
         " choices of e" + (probe.fixes_base ? ", base fixed" : ", base moved");
  return json{{"kind", "orbit"}, {"choices", es.size()}, {"distinct", probe.distinct}, {"fixes_base", probe.fixes_base},
              {"matches_direct_evaluation", direct}, {"images", images}, {"pass", pass}};
}

json stabilizer_experiment(const GradedAlgebra& alg, bool& ok, std::string& line) {
  const StabilizerTally t = stabilizer_scan(alg);
  const bool pass = t.zero == 1 && t.zero_only_at_origin;
  ok = ok && pass;
  line = "stabilizer: zero residual at " + std::to_string(t.zero) + "/" + std::to_string(t.tuples) +
         " shift tuples" + (t.zero_only_at_origin ? " (origin only)" : "");
  return json{{"kind", "stabilizer"}, {"tuples", t.tuples}, {"zero", t.zero},
              {"zero_only_at_origin", t.zero_only_at_origin}, {"pass", pass}};
}

}  // namespace

Outcome run_check(const std::string& algebra_path, const Options& opts) {
  const std::string text = io::read_file(algebra_path);
  const json j = io::parse_json(text, algebra_path);
  const GradedAlgebra alg = io::algebra_from_json(j, opts.p);
  const ScanOptions so = scan(opts);
  const Field& f = alg.field();
  const std::size_t n = alg.dim();

  Outcome out;
  out.result["inputs"] = json{{algebra_path, io::digest(text)}};
  out.result["algebra"] = json{{"p", f.modulus()}, {"dim", n}, {"relation_dim", alg.relations().dim()},
                               {"delta", predim(alg, alg.full_space())}};
  const json k = k_report(alg, opts.cap_enum);
  out.result["class_K"] = k;
  out.summary.push_back("dim " + std::to_string(n) + ", dim N " + std::to_string(alg.relations().dim()) +
                        ", delta " + std::to_string(predim(alg, alg.full_space())));
  if (k["ok"].get<bool>()) {
    out.summary.push_back("in class K");
  } else if (k.contains("commuting_pair")) {
    out.summary.push_back("not in class K: " + k["commuting_pair"][0].dump() + " and " + k["commuting_pair"][1].dump() +
                          " commute");
  } else {
    out.summary.push_back("not in class K: " + k["low_predimension"]["basis"].dump() + " has delta " +
                          k["low_predimension"]["delta"].dump());
  }

  json table = json::array();
  table.push_back(subspace_row(alg, alg.full_space(), so));
  if (j.contains("subspaces")) {
    const json& subs = io::detail::array(j["subspaces"], "$.subspaces");
    for (std::size_t i = 0; i < subs.size(); ++i) {
      const auto s = alg.span(io::vectors_from_json(subs[i], f, n, "$.subspaces[" + std::to_string(i) + "]"));
      table.push_back(subspace_row(alg, s, so));
    }
  }
  if (j.contains("base")) {
    const Subspace b = alg.span(io::vectors_from_json(j["base"], f, n, "$.base"));
    table.push_back(subspace_row(alg, b, so));
    json step{{"base_dim", b.dim()}, {"base_delta", predim(alg, b)}, {"base_strong", is_strong(alg, b, so)}};
    if (step["base_strong"].get<bool>() && b.dim() < n) {
      try {
        step["minimal"] = step_report(classify_step(alg, b, alg.full_space(), so));
        out.summary.push_back("over the base: minimal " + step["minimal"]["kind"].get<std::string>() + " extension");
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::classification) throw;
        const Tower t = minimal_tower(alg, b, alg.full_space(), so);
        json kinds = json::array();
        for (const auto& kind : t.kinds) kinds.push_back(kind_name(kind));
        step["tower"] = kinds;
        out.summary.push_back("over the base: tower " + kinds.dump());
      }
    }
    out.result["base"] = step;
  }
  out.result["deltas"] = table;
  for (const auto& row : table) {
    out.summary.push_back("  delta " + row["delta"].dump() + " for dim " + row["dim"].dump() +
                          (row["strong"].get<bool>() ? " (strong)" : " (not strong)"));
  }
  return out;
}

Outcome run_extend(const std::string& problem_path, const std::optional<std::string>& workspace_path,
                   const Options& opts) {
  const std::string text = io::read_file(problem_path);
  const io::ProblemFile prob = io::problem_from_json(io::parse_json(text, problem_path), opts.p);
  const ScanOptions so = scan(opts);
  json inputs{{problem_path, io::digest(text)}};
  Workspace ws = make_workspace(workspace_path, &prob.algebra, opts, inputs);
  if (!(ws.algebra() == prob.algebra)) {
    throw Error(ErrorKind::precondition, "the problem's algebra differs from the workspace algebra");
  }
  check_problem(ws.algebra(), ExtensionProblem{prob.base, prob.target, prob.f}, so);

  Outcome out;
  out.result["inputs"] = inputs;
  PartialDerivation g = prob.f;
  json trace = json::array();
  for (const auto& v : prob.target.basis()) {
    const Vec a = padded(v, ws.dim());
    g = detail::lift_to(g, ws.dim());
    if (g.domain().contains(a)) continue;
    ExtensionOutcome step = extend_derivation(ws, g, a);
    for (const auto& t : step.trace) {
      trace.push_back(json{{"action", t.action}, {"kind", t.kind}, {"domain_before", t.domain_before},
                           {"domain_after", t.domain_after}, {"workspace_dim", t.workspace_dim}});
      out.summary.push_back("step: " + t.action + " (" + t.kind + "), domain " + std::to_string(t.domain_before) +
                            " -> " + std::to_string(t.domain_after) + ", workspace " + std::to_string(t.workspace_dim));
    }
    g = std::move(step.f);
  }
  g = detail::lift_to(g, ws.dim());

  const GradedAlgebra& alg = ws.algebra();
  json table = json::array();
  for (const auto& v : prob.target.basis()) {
    const Vec a = padded(v, ws.dim());
    table.push_back(json::array({io::vector_to_json(a), io::vector_to_json(g.apply(a))}));
    out.summary.push_back("g" + show(a) + " = " + show(g.apply(a)));
  }
  const bool valid = validate_derivation(alg, g).ok;
  const bool dom_strong = is_strong(alg, g.domain(), so);
  const bool img_strong = is_strong(alg, g.domain_plus_image(), so);
  const bool extends = g.extends(detail::lift_to(prob.f, ws.dim()));
  bool covers = true;
  for (const auto& v : prob.target.basis()) covers = covers && g.domain().contains(padded(v, ws.dim()));
  out.ok = valid && dom_strong && img_strong && extends && covers;
  out.result["trace"] = trace;
  out.result["table"] = table;
  out.result["derivation"] = derivation_json(g);
  out.result["certificates"] = json{{"derivation", valid}, {"domain_strong", dom_strong},
                                    {"domain_plus_image_strong", img_strong}, {"extends_input", extends},
                                    {"covers_target", covers}};
  out.result["workspace"] = json{{"dim", ws.dim()}, {"relation_dim", alg.relations().dim()},
                                 {"embeddings", ws.history().size()}, {"algebra", io::algebra_to_json(alg)}};
  if (trace.empty()) out.summary.push_back("target already in the domain; derivation unchanged");
  out.summary.push_back(std::string("certificates: ") + (out.ok ? "all pass" : "FAILED"));
  return out;
}

Outcome run_cover(const std::string& experiments_path, const std::optional<std::string>& workspace_path,
                  const Options& opts) {
  const std::string text = io::read_file(experiments_path);
  const json j = io::parse_json(text, experiments_path);
  if (!j.is_object()) throw Error(ErrorKind::parse, "$: expected an object");
  unsigned p = opts.p;
  if (j.contains("p")) {
    const long long raw = io::detail::integer(j["p"], "$.p");
    if (raw < 0 || !Field::supported(static_cast<unsigned>(raw))) {
      throw Error(ErrorKind::malformed_field, "$.p: " + std::to_string(raw) + " is not one of 3, 5, 7, 11");
    }
    p = static_cast<unsigned>(raw);
  }
  std::optional<GradedAlgebra> seed_alg;
  if (j.contains("algebra")) {
    seed_alg = io::algebra_from_json(j["algebra"], p, "$.algebra");
  } else {
    std::size_t block = 4;
    if (j.contains("canonical_w")) block = static_cast<std::size_t>(io::detail::integer(j["canonical_w"].value("block", json(4)), "$.canonical_w.block"));
    seed_alg = canonical_w_instance(Field(p), block);
  }
  json inputs{{experiments_path, io::digest(text)}};
  Workspace ws = make_workspace(workspace_path, &*seed_alg, opts, inputs);
  const GradedAlgebra& alg = ws.algebra();
  const ScanOptions so = scan(opts);

  Outcome out;
  out.result["inputs"] = inputs;
  out.result["workspace"] = json{{"dim", alg.dim()}, {"relation_dim", alg.relations().dim()}};
  Sampler rng{std::mt19937_64(opts.seed)};
  json results = json::array();
  const json& exps = io::detail::array(io::detail::field(j, "experiments", "$"), "$.experiments");
  for (std::size_t i = 0; i < exps.size(); ++i) {
    const std::string path = "$.experiments[" + std::to_string(i) + "]";
    const json& exp = exps[i];
    const json& kind = io::detail::field(exp, "kind", path);
    if (!kind.is_string()) throw Error(ErrorKind::parse, path + ".kind: expected a string");
    std::string line;
    json r;
    if (kind == "automorphism") {
      r = automorphism_experiment(alg, exp, path, rng, so, out.ok, line);
    } else if (kind == "orbit") {
      r = orbit_experiment(alg, exp, path, so, out.ok, line);
    } else if (kind == "stabilizer") {
      r = stabilizer_experiment(alg, out.ok, line);
    } else {
      throw Error(ErrorKind::parse, path + ".kind: unknown experiment " + kind.dump());
    }
    if (exp.contains("name")) r["name"] = exp["name"];
    results.push_back(std::move(r));
    out.summary.push_back(line);
  }
  out.result["experiments"] = results;
  return out;
}

}  // namespace nilcover::cli
