#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nilcover/enumerate.hpp"
#include "nilcover/liealg.hpp"

namespace nilcover {

/// Which side an exhaustive strongness scan enumerates.
///
/// Every predimension minimum over {C : b ⊆ C ⊆ a} is attained at some C of the form
/// b + supp(R) with N(b) ⊆ R ⊆ N(a), because C' = b + supp(N(C)) ⊆ C has N(C') = N(C).
/// So the scan may run over intermediate subspaces (quotient a/b) or over relation
/// subspaces (quotient N(a)/N(b)); both are exact.
enum class ScanRoute { automatic, intermediates, relations };

struct ScanOptions {
  std::size_t cap = default_enumeration_cap;
  ScanRoute route = ScanRoute::automatic;
};

namespace detail {

/// Visits the candidate subspaces C with b ⊆ C ⊆ a described above.
template <class Visitor>
void for_each_candidate(const GradedAlgebra& alg, const Subspace& b, const Subspace& a,
                        const ScanOptions& opts, Visitor&& visit) {
  check_in_algebra(alg, b);
  check_in_algebra(alg, a);
  if (!a.contains(b)) throw Error(ErrorKind::containment, "base is not contained in the target");
  ScanRoute route = opts.route;
  const std::size_t qdim = a.dim() - b.dim();
  std::optional<Subspace> nb, na;
  auto relation_sides = [&] {
    if (!nb) {
      nb = relations_of(alg, b);
      na = relations_of(alg, a);
    }
  };
  if (route == ScanRoute::automatic) {
    if (qdim <= opts.cap) {
      route = ScanRoute::intermediates;
    } else {
      relation_sides();
      route = (na->dim() - nb->dim() < qdim) ? ScanRoute::relations : ScanRoute::intermediates;
    }
  }
  if (route == ScanRoute::intermediates) {
    for_each_intermediate(b, a, visit, opts.cap);
    return;
  }
  relation_sides();
  for_each_intermediate(
      *nb, *na,
      [&](const Subspace& rel) {
        const Subspace c = rel.is_zero() ? b : sum(b, support(alg, rel.basis()));
        return detail::visit_continue(visit, c);
      },
      opts.cap);
}

}  // namespace detail

/// b ≤ a: every intermediate C has δ(C/b) >= 0.
inline bool is_strong(const GradedAlgebra& alg, const Subspace& b, const Subspace& a,
                      const ScanOptions& opts = {}) {
  const long base = predim(alg, b);
  bool strong = true;
  detail::for_each_candidate(alg, b, a, opts, [&](const Subspace& c) {
    if (predim(alg, c) < base) strong = false;
    return strong;
  });
  return strong;
}

inline bool is_strong(const GradedAlgebra& alg, const Subspace& b, const ScanOptions& opts = {}) {
  return is_strong(alg, b, alg.full_space(), opts);
}

/// Smallest subspace containing b that is strong in a. It is the intermediate of least
/// predimension, least dimension among those (unique by submodularity); remaining ties
/// are broken by the canonical order.
inline Subspace self_sufficient_closure(const GradedAlgebra& alg, const Subspace& b,
                                        const Subspace& a, const ScanOptions& opts = {}) {
  std::optional<Subspace> best;
  long best_delta = 0;
  detail::for_each_candidate(alg, b, a, opts, [&](const Subspace& c) {
    const long d = predim(alg, c);
    if (!best || d < best_delta || (d == best_delta && canonical_less(c, *best))) {
      best = c;
      best_delta = d;
    }
  });
  return *best;
}

inline Subspace self_sufficient_closure(const GradedAlgebra& alg, const Subspace& b,
                                        const ScanOptions& opts = {}) {
  return self_sufficient_closure(alg, b, alg.full_space(), opts);
}

struct Transcendental {
  Vec new_vector;
};

/// N(a) = N(b) ⊕ <new_vector ∧ partner + rest>, partner ∈ b, rest ∈ ∧²b.
struct Algebraic {
  Vec new_vector;
  Vec partner;
  Vec rest;
  Vec relation;
};

struct Prealgebraic {
  std::size_t codimension = 0;
};

using ExtensionKind = std::variant<Transcendental, Algebraic, Prealgebraic>;

inline std::string kind_name(const ExtensionKind& k) {
  if (std::holds_alternative<Transcendental>(k)) return "transcendental";
  if (std::holds_alternative<Algebraic>(k)) return "algebraic";
  return "prealgebraic";
}

struct Tower {
  std::vector<Subspace> steps;  ///< C_0 = base, ..., C_k = target
  std::vector<ExtensionKind> kinds;
};

/// Splits w ∈ ∧²(b ⊕ <x>) as x ∧ y + c with y ∈ b and c ∈ ∧²b.
inline std::optional<std::pair<Vec, Vec>> split_wedge(const Field& f, const Subspace& b,
                                                      const Vec& x, const Vec& w) {
  const auto& basis = b.basis();
  std::vector<Vec> gens;
  for (const auto& beta : basis) gens.push_back(wedge(f, x, beta));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) gens.push_back(wedge(f, basis[i], basis[j]));
  }
  auto coeffs = solve_combination(f, gens, w);
  if (!coeffs) return std::nullopt;
  Vec y(b.ambient_dim(), 0);
  for (std::size_t i = 0; i < basis.size(); ++i) add_scaled(f, y, (*coeffs)[i], basis[i]);
  Vec c(w.size(), 0);
  for (std::size_t t = basis.size(); t < gens.size(); ++t) add_scaled(f, c, (*coeffs)[t], gens[t]);
  return std::make_pair(std::move(y), std::move(c));
}

/// Three-way classification of a minimal strong extension b < a.
inline ExtensionKind classify_step(const GradedAlgebra& alg, const Subspace& b, const Subspace& a,
                                   const ScanOptions& opts = {}) {
  if (!a.contains(b)) throw Error(ErrorKind::containment, "base is not contained in the target");
  const std::size_t codim = a.dim() - b.dim();
  if (codim == 0) throw Error(ErrorKind::classification, "trivial extension has no kind");
  if (!is_strong(alg, b, a, opts)) throw Error(ErrorKind::classification, "extension is not strong");
  if (codim > 1) {
    bool minimal = true;
    for_each_intermediate(
        b, a,
        [&](const Subspace& c) {
          if (c.dim() == b.dim() || c.dim() == a.dim()) return true;
          if (is_strong(alg, c, a, opts)) minimal = false;
          return minimal;
        },
        opts.cap);
    if (!minimal) throw Error(ErrorKind::classification, "extension is not minimal");
  }
  const long increment = predim(alg, a) - predim(alg, b);
  const Field& f = alg.field();
  if (codim == 1) {
    const Vec x = complement_basis(b, a).front();
    if (increment == 1) return Transcendental{x};
    if (increment != 0) throw Error(ErrorKind::classification, "unexpected predimension increment");
    const auto fresh = complement_basis(relations_of(alg, b), relations_of(alg, a));
    if (fresh.size() != 1) throw Error(ErrorKind::internal_inconsistency, "algebraic step without a single new relation");
    auto split = split_wedge(f, b, x, fresh.front());
    if (!split || is_zero(split->first)) {
      throw Error(ErrorKind::internal_inconsistency, "new relation does not have the shape x ∧ y + c");
    }
    // normalise so the leading coordinate of the partner is 1
    std::uint8_t lead = 0;
    for (auto v : split->first) {
      if (v != 0) {
        lead = v;
        break;
      }
    }
    const std::uint8_t s = f.inv(lead);
    Algebraic alg_kind{x, scaled(f, s, split->first), scaled(f, s, split->second),
                       scaled(f, s, fresh.front())};
    return alg_kind;
  }
  if (increment != 0) {
    throw Error(ErrorKind::classification,
                "minimal extension of codimension " + std::to_string(codim) +
                    " with predimension increment " + std::to_string(increment));
  }
  return Prealgebraic{codim};
}

/// One minimal strong step from d towards t (d ≤ t, d ≠ t): the least-dimensional
/// C ⊋ d with δ(C/d) = 0 if one exists (canonical order on ties), otherwise the
/// transcendental step d + <first canonical complement vector>.
inline Subspace minimal_step(const GradedAlgebra& alg, const Subspace& d, const Subspace& t,
                             const ScanOptions& opts = {}) {
  const long base = predim(alg, d);
  std::optional<Subspace> best;
  detail::for_each_candidate(alg, d, t, opts, [&](const Subspace& c) {
    if (c.dim() == d.dim() || predim(alg, c) != base) return;
    if (!best || canonical_less(c, *best)) best = c;
  });
  if (best) return *best;
  return sum(d, complement_basis(d, t).front());
}

/// Decomposes a strong extension b ≤ a into a chain of minimal strong extensions.
inline Tower minimal_tower(const GradedAlgebra& alg, const Subspace& b, const Subspace& a,
                           const ScanOptions& opts = {}) {
  if (!is_strong(alg, b, a, opts)) throw Error(ErrorKind::precondition, "tower base is not strong");
  Tower tower;
  tower.steps.push_back(b);
  while (!(tower.steps.back() == a)) {
    const Subspace next = minimal_step(alg, tower.steps.back(), a, opts);
    tower.kinds.push_back(classify_step(alg, tower.steps.back(), next, opts));
    tower.steps.push_back(next);
  }
  return tower;
}

}  // namespace nilcover
