#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nilcover/enumerate.hpp"
#include "nilcover/exterior.hpp"
#include "nilcover/linalg.hpp"

namespace nilcover {

/// A finite 2-nilpotent graded Lie algebra V ⊕ ∧²V / N, stored by its presentation (n, N).
class GradedAlgebra {
 public:
  GradedAlgebra(Field field, std::size_t dim, Subspace relations,
                std::vector<std::string> labels = {})
      : field_(field), dim_(dim), relations_(std::move(relations)), labels_(std::move(labels)) {
    if (relations_.ambient_dim() != wedge_dim(dim_) || !(relations_.field() == field_)) {
      throw Error(ErrorKind::dimension, "relation space does not live in the wedge square of F^" +
                                            std::to_string(dim_));
    }
    if (!labels_.empty() && labels_.size() != dim_) {
      throw Error(ErrorKind::dimension, "label count does not match the dimension");
    }
  }

  /// The free 2-nilpotent algebra F_2(F_p^n).
  static GradedAlgebra free(Field field, std::size_t n) {
    return GradedAlgebra(field, n, Subspace(field, wedge_dim(n)));
  }

  static GradedAlgebra with_relations(Field field, std::size_t n, std::vector<Vec> relations,
                                      std::vector<std::string> labels = {}) {
    return GradedAlgebra(field, n, Subspace::span(field, wedge_dim(n), std::move(relations)),
                         std::move(labels));
  }

  const Field& field() const { return field_; }
  std::size_t dim() const { return dim_; }
  const Subspace& relations() const { return relations_; }
  const std::vector<std::string>& labels() const { return labels_; }

  Subspace full_space() const { return Subspace::full(field_, dim_); }
  Subspace zero_space() const { return Subspace(field_, dim_); }

  Subspace span(std::vector<Vec> vectors) const {
    return Subspace::span(field_, dim_, std::move(vectors));
  }

  /// Same algebra inside F^m, m >= dim, with no relations on the new coordinates.
  GradedAlgebra embed(std::size_t m) const {
    std::vector<std::string> labels;
    if (!labels_.empty()) {
      labels = labels_;
      for (std::size_t i = dim_; i < m; ++i) labels.push_back("x" + std::to_string(i));
    }
    return GradedAlgebra(field_, m, embed_wedge_subspace(relations_, dim_, m), std::move(labels));
  }

  friend bool operator==(const GradedAlgebra& a, const GradedAlgebra& b) {
    return a.field_ == b.field_ && a.dim_ == b.dim_ && a.relations_ == b.relations_;
  }

 private:
  Field field_;
  std::size_t dim_;
  Subspace relations_;
  std::vector<std::string> labels_;
};

/// Canonical representative of a bracket [x, y] = x ∧ y + N.
struct BracketValue {
  Vec representative;

  bool is_zero() const { return nilcover::is_zero(representative); }
  friend bool operator==(const BracketValue&, const BracketValue&) = default;
};

inline BracketValue reduce_bracket(const GradedAlgebra& alg, const Vec& w) {
  return BracketValue{alg.relations().reduce(w)};
}

inline BracketValue bracket(const GradedAlgebra& alg, const Vec& x, const Vec& y) {
  return reduce_bracket(alg, wedge(alg.field(), x, y));
}

inline void check_in_algebra(const GradedAlgebra& alg, const Subspace& b) {
  if (b.ambient_dim() != alg.dim() || !(b.field() == alg.field())) {
    throw Error(ErrorKind::dimension, "subspace of ambient " + std::to_string(b.ambient_dim()) +
                                          " used with an algebra of dimension " +
                                          std::to_string(alg.dim()));
  }
}

/// N(b) = N ∩ ∧²b, the relation ideal of the subalgebra generated by b.
inline Subspace relations_of(const GradedAlgebra& alg, const Subspace& b) {
  check_in_algebra(alg, b);
  return intersect(alg.relations(), wedge_square(b));
}

/// dim N(b) without materialising the intersection: the wedges of the echelon basis
/// are independent, so dim N(b) = C(k,2) - rank(their residues modulo N).
inline std::size_t relation_dim(const GradedAlgebra& alg, const Subspace& b) {
  check_in_algebra(alg, b);
  const Field& f = alg.field();
  const auto& basis = b.basis();
  std::vector<Vec> residues;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      residues.push_back(alg.relations().reduce(wedge(f, basis[i], basis[j])));
    }
  }
  const std::size_t total = residues.size();
  return total - rank(f, std::move(residues));
}

/// δ(b) = ldim(b) - ldim(N(b)).
inline long predim(const GradedAlgebra& alg, const Subspace& b) {
  return static_cast<long>(b.dim()) - static_cast<long>(relation_dim(alg, b));
}

/// δ(b/c) = ldim(b/c) - ldim(N(b)/N(c)) for c ⊆ b.
inline long rel_predim(const GradedAlgebra& alg, const Subspace& b, const Subspace& c) {
  if (!b.contains(c)) throw Error(ErrorKind::containment, "relative predimension needs c ⊆ b");
  return predim(alg, b) - predim(alg, c);
}

/// Support of a set of wedge vectors of this algebra's ambient.
inline Subspace support(const GradedAlgebra& alg, const std::vector<Vec>& ws) {
  return wedge_support(alg.field(), alg.dim(), ws);
}

/// The subalgebra generated by span(basis), written in the coordinates of `basis`.
inline GradedAlgebra subalgebra(const GradedAlgebra& alg, const std::vector<Vec>& basis,
                                std::vector<std::string> labels = {}) {
  const Field& f = alg.field();
  const Subspace b = alg.span(basis);
  if (b.dim() != basis.size()) throw Error(ErrorKind::precondition, "subalgebra basis is dependent");
  std::vector<Vec> gens;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) gens.push_back(wedge(f, basis[i], basis[j]));
  }
  std::vector<Vec> rels;
  for (const auto& w : relations_of(alg, b).basis()) {
    auto coords = solve_combination(f, gens, w);
    if (!coords) throw Error(ErrorKind::internal_inconsistency, "relation outside the wedge square");
    rels.push_back(std::move(*coords));
  }
  return GradedAlgebra::with_relations(f, basis.size(), std::move(rels), std::move(labels));
}

/// How in_class_K decides the second condition (δ ≥ 1 on nonzero subspaces).
enum class KRoute {
  automatic,
  subspaces,  ///< every nonzero subspace of V
  relations,  ///< every nonzero R ⊆ N, tested on its support
};

struct KReport {
  bool ok = true;
  std::optional<std::pair<Vec, Vec>> decomposable;  ///< independent v, w with [v, w] = 0
  std::optional<Subspace> violating;                ///< nonzero subspace with δ < 1
  KRoute route = KRoute::automatic;
};

/// Class-K membership: no two independent vectors commute, and every nonzero subspace
/// has predimension at least 1. Both conditions are decided exhaustively.
///
/// The second condition is scanned over whichever side is smaller: all nonzero
/// subspaces C of V, or all nonzero subspaces R of N with C = supp(R). The second
/// route is exact because δ(supp(N(C))) <= δ(C) for every C.
inline KReport in_class_K(const GradedAlgebra& alg, std::size_t cap = default_enumeration_cap,
                          KRoute route = KRoute::automatic) {
  KReport report;
  const std::size_t n = alg.dim();
  const std::size_t r = alg.relations().dim();
  if (route == KRoute::automatic) route = (n <= r) ? KRoute::subspaces : KRoute::relations;
  report.route = route;

  if (auto pair = find_decomposable(alg.relations(), n)) {
    report.ok = false;
    report.decomposable = std::move(pair);
    return report;
  }

  auto consider = [&](const Subspace& c) {
    if (!c.is_zero() && predim(alg, c) < 1) {
      report.ok = false;
      report.violating = c;
      return false;
    }
    return true;
  };

  if (route == KRoute::subspaces) {
    check_enumeration_cap(n, cap, "class-K subspace scan");
    for_each_intermediate(alg.zero_space(), alg.full_space(), consider, cap);
  } else {
    check_enumeration_cap(r, cap, "class-K relation scan");
    const Subspace zero(alg.field(), wedge_dim(n));
    for_each_intermediate(
        zero, alg.relations(),
        [&](const Subspace& rel) { return rel.is_zero() || consider(support(alg, rel.basis())); },
        cap);
  }
  return report;
}

}  // namespace nilcover
