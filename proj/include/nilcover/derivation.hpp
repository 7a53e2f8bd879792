#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nilcover/amalgam.hpp"
#include "nilcover/liealg.hpp"
#include "nilcover/strong.hpp"

namespace nilcover {

/// A linear map from a subspace B of F^n into F^n, stored by the images of B's echelon basis.
/// Whether it is a derivation depends on the algebra; see validate_derivation.
class PartialDerivation {
 public:
  PartialDerivation(Subspace domain, Matrix images)
      : domain_(std::move(domain)), images_(std::move(images)) {
    if (images_.rows() != domain_.dim() || images_.cols() != domain_.ambient_dim()) {
      throw Error(ErrorKind::dimension, "images do not match the domain's basis");
    }
  }

  static PartialDerivation zero(const Subspace& domain) {
    return PartialDerivation(domain, Matrix(domain.field(), domain.ambient_dim(),
                                            std::vector<Vec>(domain.dim(), Vec(domain.ambient_dim(), 0))));
  }

  /// Builds the map from (x, f(x)) pairs. The x's may be dependent as long as the
  /// prescription is linear.
  static PartialDerivation from_pairs(const Field& field, std::size_t n,
                                      const std::vector<std::pair<Vec, Vec>>& pairs) {
    std::vector<Vec> xs, ys;
    for (const auto& [x, y] : pairs) {
      if (x.size() != n || y.size() != n) {
        throw Error(ErrorKind::dimension, "map pair does not live in F^" + std::to_string(n));
      }
      xs.push_back(x);
      ys.push_back(y);
    }
    const Subspace domain = Subspace::span(field, n, xs);
    Matrix images(field, n);
    for (const auto& beta : domain.basis()) {
      auto coeffs = solve_combination(field, xs, beta);
      images.append_row(combine(field, ys, *coeffs, n));
    }
    PartialDerivation d(domain, std::move(images));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (d.apply(xs[i]) != ys[i]) throw Error(ErrorKind::precondition, "map prescription is not linear");
    }
    return d;
  }

  const Field& field() const { return domain_.field(); }
  std::size_t ambient_dim() const { return domain_.ambient_dim(); }
  const Subspace& domain() const { return domain_; }
  const Matrix& images() const { return images_; }

  Vec apply(const Vec& x) const {
    auto coords = domain_.coordinates(x);
    if (!coords) throw Error(ErrorKind::domain, "vector lies outside the domain of the map");
    return images_.apply(*coords);
  }

  Subspace image() const { return Subspace::span(field(), ambient_dim(), images_.row_vectors()); }
  Subspace domain_plus_image() const { return sum(domain_, image()); }

  /// Leibniz extension to ∧²B: x ∧ y ↦ f(x) ∧ y + x ∧ f(y).
  Vec apply_wedge(const Vec& w) const { return apply_lift(domain_, leibniz_lift(domain_, images_), w); }

  /// The same map inside F^m, m >= n.
  PartialDerivation embed(std::size_t m) const {
    std::vector<Vec> rows;
    for (const auto& r : images_.row_vectors()) rows.push_back(padded(r, m));
    return PartialDerivation(domain_.embed(m), Matrix(field(), m, std::move(rows)));
  }

  bool extends(const PartialDerivation& other) const {
    if (!domain_.contains(other.domain_)) return false;
    for (std::size_t i = 0; i < other.domain_.dim(); ++i) {
      if (apply(other.domain_.basis()[i]) != other.images_.row(i)) return false;
    }
    return true;
  }

  friend bool operator==(const PartialDerivation& a, const PartialDerivation& b) {
    return a.domain_ == b.domain_ && a.images_ == b.images_;
  }

 private:
  Subspace domain_;
  Matrix images_;
};

struct DerivationReport {
  bool ok = true;
  std::optional<Vec> violating;  ///< relation of the domain whose Leibniz image leaves N
};

/// f is a derivation iff its Leibniz lift sends N(B) into N (hence into N(B + f(B))).
inline DerivationReport validate_derivation(const GradedAlgebra& alg, const PartialDerivation& d) {
  check_in_algebra(alg, d.domain());
  DerivationReport report;
  const Matrix lift = leibniz_lift(d.domain(), d.images());
  for (const auto& w : relations_of(alg, d.domain()).basis()) {
    if (!alg.relations().contains(apply_lift(d.domain(), lift, w))) {
      report.ok = false;
      report.violating = w;
      break;
    }
  }
  return report;
}

struct ExtensionProblem {
  Subspace base;
  Subspace target;
  PartialDerivation f;
};

/// Checks B ≤ A, f a derivation on B, and A + f(B) strong in the algebra.
inline void check_problem(const GradedAlgebra& alg, const ExtensionProblem& prob,
                          const ScanOptions& opts = {}) {
  check_in_algebra(alg, prob.base);
  check_in_algebra(alg, prob.target);
  if (!(prob.f.domain() == prob.base)) throw Error(ErrorKind::domain, "map is not defined exactly on the base");
  if (!prob.target.contains(prob.base)) throw Error(ErrorKind::containment, "base is not contained in the target");
  if (!validate_derivation(alg, prob.f).ok) throw Error(ErrorKind::precondition, "map on the base is not a derivation");
  if (!is_strong(alg, prob.base, prob.target, opts)) throw Error(ErrorKind::precondition, "base is not strong in the target");
  if (!is_strong(alg, sum(prob.target, prob.f.image()), opts)) {
    throw Error(ErrorKind::precondition, "target plus the image of the base is not strong");
  }
}

struct Pseudosolution {
  std::size_t original_dim = 0;        ///< n; fresh coordinates are n, ..., n + k - 1
  std::vector<Vec> complement;         ///< a_1, ..., a_k completing B to A (in F^n)
  GradedAlgebra extended_algebra;      ///< the old algebra plus k fresh coordinates
  PartialDerivation extended_f;        ///< on A, with f(a_i) = e_{n+i}
  std::vector<Vec> new_relations;      ///< f̃ applied to the echelon basis of N(A)
  Subspace scope;                      ///< A + f(B), in the extended ambient
  Subspace solution_space;             ///< A + f(A), in the extended ambient

  std::size_t fresh_count() const { return complement.size(); }
};

/// Restricts a wedge vector of ∧²F^m to ∧²F^n (n <= m); it must not involve coordinates >= n.
inline std::optional<Vec> restrict_wedge(const Vec& w, std::size_t m, std::size_t n) {
  Vec out(wedge_dim(n), 0);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j, ++idx) {
      if (j < n) {
        out[pair_index(n, i, j)] = w[idx];
      } else if (w[idx] != 0) {
        return std::nullopt;
      }
    }
  }
  return out;
}

/// Extends f to A by sending the canonical completion a_1..a_k of B to fresh coordinates
/// and adds f̃(N(A)) to the relations. The old algebra is kept whole, so the result is
/// the free amalgam of the old algebra with A + f(A) over A + f(B).
inline Pseudosolution free_pseudosolution(const GradedAlgebra& alg, const ExtensionProblem& prob) {
  const Field& fld = alg.field();
  const std::size_t n = alg.dim();
  check_in_algebra(alg, prob.target);
  if (!(prob.f.domain() == prob.base)) throw Error(ErrorKind::domain, "map is not defined exactly on the base");
  const std::vector<Vec> comp = complement_basis(prob.base, prob.target);
  const std::size_t k = comp.size();
  const std::size_t m = n + k;

  std::vector<std::pair<Vec, Vec>> pairs;
  for (std::size_t i = 0; i < prob.base.dim(); ++i) {
    pairs.emplace_back(padded(prob.base.basis()[i], m), padded(prob.f.images().row(i), m));
  }
  for (std::size_t i = 0; i < k; ++i) pairs.emplace_back(padded(comp[i], m), unit_vector(m, n + i));
  PartialDerivation ext = PartialDerivation::from_pairs(fld, m, pairs);

  std::vector<Vec> fresh_rel;
  for (const auto& w : relations_of(alg, prob.target).basis()) {
    fresh_rel.push_back(ext.apply_wedge(embed_wedge(w, n, m)));
  }
  const Subspace rel = sum(embed_wedge_subspace(alg.relations(), n, m),
                           Subspace::span(fld, wedge_dim(m), fresh_rel));
  GradedAlgebra extended(fld, m, rel);
  Subspace scope = sum(prob.target, prob.f.image()).embed(m);
  Subspace solution = ext.domain_plus_image();
  return Pseudosolution{n, comp, std::move(extended), std::move(ext), std::move(fresh_rel),
                        std::move(scope), std::move(solution)};
}

struct CaseA {
  Vec v0;
  Vec v1;
};

struct InK {};

using PseudosolutionCase = std::variant<CaseA, InK>;

/// Case A when N(A + f(A)) holds a decomposable v0 ∧ v1, InK otherwise.
inline PseudosolutionCase classify_pseudosolution(const Pseudosolution& ps,
                                                  std::uint64_t element_cap = default_element_cap) {
  const auto& alg = ps.extended_algebra;
  if (auto pair = find_decomposable(relations_of(alg, ps.solution_space), alg.dim(), element_cap)) {
    return CaseA{pair->first, pair->second};
  }
  return InK{};
}

struct CaseASolution {
  PartialDerivation g;
  Vec a0;        ///< the vector of A outside B whose image is forced
  Vec a0_prime;  ///< v0 = f(a0) + a0'
  Vec b0;
  Vec e;         ///< e ∈ N(A) with v0 ∧ b0 = f̃(e) + c
  Vec c;         ///< c ∈ N(A + f(B)), in ∧²F^n
};

/// Constructive solution when the free pseudosolution has a decomposable relation
/// v0 ∧ v1: g agrees with f on B and sends a0 to -a0', landing in A + f(B).
inline CaseASolution solve_case_A_detailed(const GradedAlgebra& alg, const ExtensionProblem& prob,
                                           const Pseudosolution& ps, const CaseA& witness) {
  const Field& fld = alg.field();
  const std::size_t n = ps.original_dim;
  const std::size_t m = ps.extended_algebra.dim();
  const std::size_t k = ps.fresh_count();
  auto fresh_part = [&](const Vec& v) { return Vec(v.begin() + static_cast<long>(n), v.end()); };
  auto old_part = [&](const Vec& v) { return Vec(v.begin(), v.begin() + static_cast<long>(n)); };

  Vec v0 = witness.v0;
  Vec v1 = witness.v1;
  if (v0.size() != m || v1.size() != m) throw Error(ErrorKind::dimension, "witness lives in the wrong ambient");
  if (is_zero(fresh_part(v0))) std::swap(v0, v1);
  const Vec phi0 = fresh_part(v0);
  if (is_zero(phi0)) {
    throw Error(ErrorKind::internal_inconsistency, "decomposable relation inside A + f(B) of an algebra in K");
  }
  // v1 must have fresh part proportional to v0's; subtract to land in B
  std::size_t lead = 0;
  while (phi0[lead] == 0) ++lead;
  const std::uint8_t alpha = fld.mul(v1[n + lead], fld.inv(phi0[lead]));
  const Vec v1r = subtracted(fld, v1, scaled(fld, alpha, v0));
  if (!is_zero(fresh_part(v1r))) {
    throw Error(ErrorKind::internal_inconsistency, "witness vectors have independent fresh parts");
  }
  const Vec b0 = old_part(v1r);
  if (!prob.base.contains(b0) || is_zero(b0)) {
    throw Error(ErrorKind::internal_inconsistency, "second witness vector does not reduce into the base");
  }
  if (k != 1) {
    throw Error(ErrorKind::precondition, "a decomposable relation forces codimension 1, but the extension has codimension " +
                                             std::to_string(k) + "; the problem is not minimal");
  }
  Vec a0(n, 0);
  for (std::size_t i = 0; i < k; ++i) add_scaled(fld, a0, phi0[i], ps.complement[i]);
  const Vec a0p = old_part(v0);

  // v0 ∧ b0 = f̃(e) + c over the generators f̃(N(A)) and N(A + f(B))
  const Subspace na = relations_of(alg, prob.target);
  const Subspace scope_old = sum(prob.target, prob.f.image());
  const Subspace nscope = relations_of(alg, scope_old);
  std::vector<Vec> gens = ps.new_relations;
  for (const auto& w : nscope.basis()) gens.push_back(embed_wedge(w, n, m));
  const Vec target = wedge(fld, v0, padded(b0, m));
  auto coeffs = solve_combination(fld, gens, target);
  if (!coeffs) throw Error(ErrorKind::internal_inconsistency, "v0 ∧ b0 is not generated by f̃(N(A)) and N(A + f(B))");
  Vec e(wedge_dim(n), 0);
  for (std::size_t i = 0; i < na.dim(); ++i) add_scaled(fld, e, (*coeffs)[i], na.basis()[i]);
  Vec c(wedge_dim(n), 0);
  for (std::size_t i = 0; i < nscope.dim(); ++i) add_scaled(fld, c, (*coeffs)[na.dim() + i], nscope.basis()[i]);

  Vec d = e;
  add_wedge(fld, d, fld.neg(1), a0, b0);
  if (!wedge_square(prob.base).contains(d)) {
    throw Error(ErrorKind::internal_inconsistency, "relation e is not of the shape a0 ∧ b0 + d with d ∈ ∧²B");
  }

  std::vector<std::pair<Vec, Vec>> pairs;
  for (std::size_t i = 0; i < prob.base.dim(); ++i) {
    pairs.emplace_back(prob.base.basis()[i], prob.f.images().row(i));
  }
  pairs.emplace_back(a0, negated(fld, a0p));
  PartialDerivation g = PartialDerivation::from_pairs(fld, n, pairs);

  if (!(g.domain() == prob.target)) throw Error(ErrorKind::internal_inconsistency, "solution domain differs from A");
  if (g.apply_wedge(e) != negated(fld, c)) throw Error(ErrorKind::internal_inconsistency, "g̃(e) differs from -c");
  if (!validate_derivation(alg, g).ok) throw Error(ErrorKind::internal_inconsistency, "Case A solution is not a derivation");
  if (!scope_old.contains(g.image())) throw Error(ErrorKind::internal_inconsistency, "g(A) leaves A + f(B)");
  return CaseASolution{std::move(g), a0, a0p, b0, std::move(e), std::move(c)};
}

inline PartialDerivation solve_case_A(const GradedAlgebra& alg, const ExtensionProblem& prob,
                                      const Pseudosolution& ps, const CaseA& witness) {
  return solve_case_A_detailed(alg, prob, ps, witness).g;
}

struct TraceEntry {
  std::string action;  ///< "case_A", "amalgam_embed" or "detour"
  std::string kind;    ///< kind of the minimal step taken
  std::size_t domain_before = 0;
  std::size_t domain_after = 0;
  std::size_t workspace_dim = 0;
};

struct ExtensionOutcome {
  PartialDerivation f;
  std::vector<TraceEntry> trace;
};

namespace detail {

inline Subspace lift_to(const Subspace& s, std::size_t n) {
  return s.ambient_dim() == n ? s : s.embed(n);
}

inline PartialDerivation lift_to(const PartialDerivation& f, std::size_t n) {
  return f.ambient_dim() == n ? f : f.embed(n);
}

inline constexpr std::size_t max_detour_depth = 8;

/// Solves one minimal problem D < E with E + f(D) strong in the workspace.
inline PartialDerivation solve_minimal(Workspace& ws, const PartialDerivation& f, const Subspace& e,
                                       std::vector<TraceEntry>& trace) {
  const GradedAlgebra& alg = ws.algebra();
  const auto& opts = ws.scan_options();
  const Subspace& d = f.domain();
  TraceEntry entry;
  entry.kind = kind_name(classify_step(alg, d, e, opts));
  entry.domain_before = d.dim();
  const ExtensionProblem prob{d, e, f};
  Pseudosolution ps = free_pseudosolution(alg, prob);
  PartialDerivation g = f;
  const PseudosolutionCase kase = classify_pseudosolution(ps);
  if (const auto* witness = std::get_if<CaseA>(&kase)) {
    entry.action = "case_A";
    g = solve_case_A(alg, prob, ps, *witness);
  } else {
    entry.action = "amalgam_embed";
    std::vector<Vec> base = ps.scope.basis();
    std::vector<Vec> u_basis = base;
    for (std::size_t i = 0; i < ps.fresh_count(); ++i) {
      u_basis.push_back(unit_vector(ps.extended_algebra.dim(), ps.original_dim + i));
    }
    const GradedAlgebra u = subalgebra(ps.extended_algebra, u_basis);
    std::vector<Vec> base_old;
    for (const auto& b : base) base_old.emplace_back(b.begin(), b.begin() + static_cast<long>(ps.original_dim));
    ws.embed_extension(base_old, u, "pseudosolution");
    if (!(ws.algebra() == ps.extended_algebra)) {
      throw Error(ErrorKind::internal_inconsistency, "embedded pseudosolution differs from the free construction");
    }
    g = ps.extended_f;
  }
  entry.domain_after = g.domain().dim();
  entry.workspace_dim = ws.dim();
  trace.push_back(std::move(entry));
  return g;
}

inline PartialDerivation extend_to(Workspace& ws, PartialDerivation f, const Subspace& target,
                                   std::vector<TraceEntry>& trace, std::size_t depth) {
  if (depth > max_detour_depth) {
    throw Error(ErrorKind::budget_exceeded, "detour nesting exceeds " + std::to_string(max_detour_depth));
  }
  const auto& opts = ws.scan_options();
  while (true) {
    f = lift_to(f, ws.dim());
    const Subspace t = lift_to(target, ws.dim());
    const Subspace& d = f.domain();
    if (d.contains(t)) return f;
    const GradedAlgebra& alg = ws.algebra();
    const Subspace closure = self_sufficient_closure(alg, sum(t, d), opts);
    const Subspace e = minimal_step(alg, d, closure, opts);
    const Subspace s = sum(e, f.image());
    if (is_strong(alg, s, opts)) {
      f = solve_minimal(ws, f, e, trace);
      continue;
    }
    if (rel_predim(alg, e, d) != 1) {
      throw Error(ErrorKind::internal_inconsistency, "non-strong image-augmented step with predimension increment other than 1");
    }
    trace.push_back(TraceEntry{"detour", kind_name(classify_step(alg, d, e, opts)), d.dim(), d.dim(), ws.dim()});
    const Subspace d_orig = d;
    const Subspace fd = f.image();
    f = extend_to(ws, f, sum(d_orig, fd), trace, depth + 1);
    const std::size_t now = ws.dim();
    const Subspace widened = self_sufficient_closure(ws.algebra(), sum(lift_to(e, now), lift_to(fd, now)), opts);
    f = extend_to(ws, f, widened, trace, depth + 1);
  }
}

}  // namespace detail

/// Extends f so that its domain contains a, growing the workspace by amalgamated free
/// pseudosolutions where needed. Domain and domain + image stay strong in the workspace.
inline ExtensionOutcome extend_derivation(Workspace& ws, const PartialDerivation& f, const Vec& a) {
  const auto& opts = ws.scan_options();
  {
    const GradedAlgebra& alg = ws.algebra();
    check_in_algebra(alg, f.domain());
    if (a.size() != alg.dim()) throw Error(ErrorKind::dimension, "requested vector is not in the workspace");
    if (!validate_derivation(alg, f).ok) throw Error(ErrorKind::precondition, "map is not a derivation");
    if (!is_strong(alg, f.domain(), opts)) throw Error(ErrorKind::precondition, "domain is not strong in the workspace");
    if (!is_strong(alg, f.domain_plus_image(), opts)) {
      throw Error(ErrorKind::precondition, "domain plus image is not strong in the workspace");
    }
  }
  ExtensionOutcome out{f, {}};
  if (f.domain().contains(a)) return out;
  out.f = detail::extend_to(ws, f, sum(f.domain(), a), out.trace, 0);

  const GradedAlgebra& alg = ws.algebra();
  const Vec a_now = padded(a, alg.dim());
  if (!out.f.domain().contains(a_now)) throw Error(ErrorKind::internal_inconsistency, "extension misses the requested vector");
  if (!out.f.extends(detail::lift_to(f, alg.dim()))) throw Error(ErrorKind::internal_inconsistency, "extension changed f on its old domain");
  if (!validate_derivation(alg, out.f).ok) throw Error(ErrorKind::internal_inconsistency, "extension is not a derivation");
  if (!is_strong(alg, out.f.domain(), opts) || !is_strong(alg, out.f.domain_plus_image(), opts)) {
    throw Error(ErrorKind::internal_inconsistency, "extension lost strongness");
  }
  return out;
}

}  // namespace nilcover
