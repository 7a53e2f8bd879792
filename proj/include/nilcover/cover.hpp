#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "nilcover/derivation.hpp"
#include "nilcover/liealg.hpp"

namespace nilcover {

/// A point (a, u) of the second sort; a is its projection.
struct CoverPoint {
  Vec a;
  Vec u;

  friend bool operator==(const CoverPoint&, const CoverPoint&) = default;
  friend bool operator<(const CoverPoint& x, const CoverPoint& y) {
    return x.a != y.a ? x.a < y.a : x.u < y.u;
  }
};

inline const Vec& project(const CoverPoint& s) { return s.a; }

inline CoverPoint act(const Field& f, const Vec& b, const CoverPoint& s) {
  check_same_size(b, s.u);
  return CoverPoint{s.a, added(f, s.u, b)};
}

/// (a, u) + (a', u') = (a + a', u + u').
inline CoverPoint add(const Field& f, const CoverPoint& s, const CoverPoint& t) {
  return CoverPoint{added(f, s.a, t.a), added(f, s.u, t.u)};
}

/// The relation Σ_{i<n} [x_i, y_i] = 0 lifted to the cover.
struct TWShape {
  std::size_t pairs = 1;
};

/// Σ [x_i, y_i] = 0 and Σ ([u_i, y_i] + [x_i, v_i]) = 0 modulo N.
inline bool tw_holds(const GradedAlgebra& alg, const TWShape& shape, const std::vector<CoverPoint>& xs,
                     const std::vector<CoverPoint>& ys) {
  if (shape.pairs == 0) throw Error(ErrorKind::precondition, "T_W needs at least one pair");
  if (xs.size() != shape.pairs || ys.size() != shape.pairs) {
    throw Error(ErrorKind::dimension, "T_W instance expects " + std::to_string(shape.pairs) + " pairs");
  }
  const Field& f = alg.field();
  Vec first(wedge_dim(alg.dim()), 0);
  Vec second(wedge_dim(alg.dim()), 0);
  for (std::size_t i = 0; i < shape.pairs; ++i) {
    add_wedge(f, first, 1, xs[i].a, ys[i].a);
    add_wedge(f, second, 1, xs[i].u, ys[i].a);
    add_wedge(f, second, 1, xs[i].a, ys[i].u);
  }
  return alg.relations().contains(first) && alg.relations().contains(second);
}

/// (a, u) ↦ (a, u + f(a)) for a derivation f defined on the whole degree-1 part.
inline CoverPoint sigma_f(const PartialDerivation& f, const CoverPoint& s) {
  if (f.domain().dim() != f.ambient_dim()) {
    throw Error(ErrorKind::domain, "σ_f needs a derivation defined on every vector (domain has dimension " +
                                       std::to_string(f.domain().dim()) + " of " +
                                       std::to_string(f.ambient_dim()) + ")");
  }
  return CoverPoint{s.a, added(f.field(), s.u, f.apply(s.a))};
}

inline PartialDerivation add_derivations(const PartialDerivation& f, const PartialDerivation& g) {
  if (!(f.domain() == g.domain())) throw Error(ErrorKind::domain, "sum of maps with different domains");
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < f.domain().dim(); ++i) rows.push_back(added(f.field(), f.images().row(i), g.images().row(i)));
  return PartialDerivation(f.domain(), Matrix(f.field(), f.ambient_dim(), std::move(rows)));
}

inline PartialDerivation negate_derivation(const PartialDerivation& f) {
  std::vector<Vec> rows;
  for (const auto& r : f.images().row_vectors()) rows.push_back(negated(f.field(), r));
  return PartialDerivation(f.domain(), Matrix(f.field(), f.ambient_dim(), std::move(rows)));
}

/// The derivation a ↦ e, b_i ↦ 0 on ⟨a, bs⟩; valid because ⟨a, bs⟩ carries no relations.
inline PartialDerivation killing_derivation(const GradedAlgebra& alg, const Vec& a, const std::vector<Vec>& bs,
                                            const Vec& e, const ScanOptions& opts = {}) {
  const std::size_t n = alg.dim();
  std::vector<Vec> gens{a};
  gens.insert(gens.end(), bs.begin(), bs.end());
  for (const auto& v : gens) {
    if (v.size() != n) throw Error(ErrorKind::dimension, "vector is not in the workspace");
  }
  if (e.size() != n) throw Error(ErrorKind::dimension, "vector is not in the workspace");
  const Subspace base = alg.span(gens);
  if (base.dim() != gens.size()) throw Error(ErrorKind::precondition, "a and the b_i are dependent");
  if (relation_dim(alg, base) != 0) {
    throw Error(ErrorKind::precondition, "⟨a, b_i⟩ carries relations, so a ↦ e need not be a derivation");
  }
  if (!is_strong(alg, base, opts)) throw Error(ErrorKind::precondition, "⟨a, b_i⟩ is not strong");
  std::vector<std::pair<Vec, Vec>> pairs{{a, e}};
  for (const auto& b : bs) pairs.emplace_back(b, Vec(n, 0));
  if (!is_zero(e)) {
    if (base.contains(e)) throw Error(ErrorKind::precondition, "e lies in ⟨a, b_i⟩");
    if (!is_strong(alg, sum(base, e), opts)) throw Error(ErrorKind::precondition, "⟨a, b_i, e⟩ is not strong");
  }
  return PartialDerivation::from_pairs(alg.field(), n, pairs);
}

/// Extends a derivation to the whole degree-1 part of a finite algebra without growing
/// it, by solving the linear conditions F̃(N) ⊆ N for the unknown matrix F (free
/// variables zero). Throws a precondition error when no such extension exists.
inline PartialDerivation totalize_derivation(const GradedAlgebra& alg, const PartialDerivation& f) {
  check_in_algebra(alg, f.domain());
  const Field& fld = alg.field();
  const std::size_t n = alg.dim();
  const std::size_t unknowns = n * n;  // F[i][j] = coordinate j of F(e_i)
  std::vector<Vec> eqs;
  Vec rhs;
  // domain constraints: Σ_i β_i F(e_i) = f(β)
  for (std::size_t t = 0; t < f.domain().dim(); ++t) {
    const Vec& beta = f.domain().basis()[t];
    for (std::size_t j = 0; j < n; ++j) {
      Vec row(unknowns, 0);
      for (std::size_t i = 0; i < n; ++i) row[i * n + j] = beta[i];
      eqs.push_back(std::move(row));
      rhs.push_back(f.images().row(t)[j]);
    }
  }
  // derivation constraints: for each relation w, reduce(F̃(w)) = 0, linear in F
  const std::size_t wd = wedge_dim(n);
  for (const auto& w : alg.relations().basis()) {
    // column for unknown F[i][j]: reduce of the contribution of F(e_i) = e_j
    std::vector<Vec> contrib(unknowns, Vec(wd, 0));
    for (std::size_t idx = 0; idx < wd; ++idx) {
      if (w[idx] == 0) continue;
      const auto [p, q] = index_pair(n, idx);
      // w_pq (F(e_p) ∧ e_q + e_p ∧ F(e_q))
      for (std::size_t j = 0; j < n; ++j) {
        add_wedge(fld, contrib[p * n + j], w[idx], unit_vector(n, j), unit_vector(n, q));
        add_wedge(fld, contrib[q * n + j], w[idx], unit_vector(n, p), unit_vector(n, j));
      }
    }
    for (auto& c : contrib) c = alg.relations().reduce(c);
    for (std::size_t l = 0; l < wd; ++l) {
      Vec row(unknowns, 0);
      bool any = false;
      for (std::size_t u = 0; u < unknowns; ++u) {
        row[u] = contrib[u][l];
        any = any || row[u] != 0;
      }
      if (!any) continue;
      eqs.push_back(std::move(row));
      rhs.push_back(0);
    }
  }
  auto sol = solve_linear(fld, eqs, rhs, unknowns);
  if (!sol) throw Error(ErrorKind::precondition, "the map has no extension to a derivation on the whole algebra");
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < n; ++i) rows.emplace_back(sol->begin() + static_cast<long>(i * n), sol->begin() + static_cast<long>((i + 1) * n));
  PartialDerivation total(alg.full_space(), Matrix(fld, n, std::move(rows)));
  if (!total.extends(f) || !validate_derivation(alg, total).ok) {
    throw Error(ErrorKind::internal_inconsistency, "totalized map fails its own constraints");
  }
  return total;
}

/// Coordinates a, b, c, d, t_1..t_block with N = ⟨a∧c + b∧d⟩.
inline GradedAlgebra canonical_w_instance(const Field& f, std::size_t block = 4) {
  const std::size_t n = 4 + block;
  Vec rel(wedge_dim(n), 0);
  rel[pair_index(n, 0, 2)] = 1;
  rel[pair_index(n, 1, 3)] = 1;
  std::vector<std::string> labels{"a", "b", "c", "d"};
  for (std::size_t i = 0; i < block; ++i) labels.push_back("t" + std::to_string(i + 1));
  return GradedAlgebra::with_relations(f, n, {rel}, labels);
}

/// [a,e3] + [e1,c] + [e1,e3] + [b,e4] + [e2,d] + [e2,e4] mod N, for points (a,·),(b,·),(c,·),(d,·)
/// with [a,c] + [b,d] = 0: the obstruction to the shifted quadruple staying on W.
inline BracketValue stabilizer_residual(const GradedAlgebra& alg, const std::vector<CoverPoint>& pts,
                                        const std::vector<Vec>& shifts) {
  if (pts.size() != 4 || shifts.size() != 4) throw Error(ErrorKind::dimension, "stabilizer probe takes 4 points and 4 shifts");
  const Field& f = alg.field();
  const Vec& a = pts[0].a;
  const Vec& b = pts[1].a;
  const Vec& c = pts[2].a;
  const Vec& d = pts[3].a;
  Vec base = wedge(f, a, c);
  add_wedge(f, base, 1, b, d);
  if (!alg.relations().contains(base)) throw Error(ErrorKind::not_on_w, "[a,c] + [b,d] is not zero");
  const Vec& e1 = shifts[0];
  const Vec& e2 = shifts[1];
  const Vec& e3 = shifts[2];
  const Vec& e4 = shifts[3];
  Vec w = wedge(f, a, e3);
  add_wedge(f, w, 1, e1, c);
  add_wedge(f, w, 1, e1, e3);
  add_wedge(f, w, 1, b, e4);
  add_wedge(f, w, 1, e2, d);
  add_wedge(f, w, 1, e2, e4);
  return reduce_bracket(alg, w);
}

/// Instances of T_W checked by automorphism_scan, with how many hold and how many
/// changed their truth value under σ_f or σ_{-f}.
struct AutomorphismTally {
  std::size_t instances = 0;
  std::size_t holding = 0;
  std::size_t violations = 0;
};

/// Every T_W instance with `pairs` pairs whose points come from `alphabet`, checked in both
/// directions: tw_holds(x, y) iff tw_holds(σ_f x, σ_f y), and the same for σ_{-f}.
inline AutomorphismTally automorphism_scan(const GradedAlgebra& alg, const PartialDerivation& f,
                                           const std::vector<CoverPoint>& alphabet, std::size_t pairs) {
  const PartialDerivation minus = negate_derivation(f);
  const std::size_t k = alphabet.size();
  const std::size_t slots = 2 * pairs;
  std::vector<CoverPoint> plus_img, minus_img;
  for (const auto& s : alphabet) {
    plus_img.push_back(sigma_f(f, s));
    minus_img.push_back(sigma_f(minus, s));
  }
  const TWShape shape{pairs};
  AutomorphismTally tally;
  std::vector<std::size_t> idx(slots, 0);
  std::vector<CoverPoint> xs(pairs), ys(pairs), xp(pairs), yp(pairs), xm(pairs), ym(pairs);
  while (true) {
    for (std::size_t i = 0; i < pairs; ++i) {
      xs[i] = alphabet[idx[i]];
      ys[i] = alphabet[idx[pairs + i]];
      xp[i] = plus_img[idx[i]];
      yp[i] = plus_img[idx[pairs + i]];
      xm[i] = minus_img[idx[i]];
      ym[i] = minus_img[idx[pairs + i]];
    }
    const bool before = tw_holds(alg, shape, xs, ys);
    ++tally.instances;
    if (before) ++tally.holding;
    if (tw_holds(alg, shape, xp, yp) != before || tw_holds(alg, shape, xm, ym) != before) ++tally.violations;
    std::size_t pos = 0;
    while (pos < slots && ++idx[pos] == k) idx[pos++] = 0;
    if (pos == slots) break;
  }
  return tally;
}

struct OrbitProbe {
  std::vector<CoverPoint> images;  ///< image of (a, u) under σ_f for each choice of e
  std::size_t distinct = 0;
  bool fixes_base = true;          ///< every σ_f fixed each (b_i, v_i)
};

/// For each e, the killing derivation a ↦ e, b_i ↦ 0 made total on the workspace and
/// applied to (a, u) and to the points (b_i, v_i).
inline OrbitProbe orbit_probe(const GradedAlgebra& alg, const CoverPoint& s, const std::vector<CoverPoint>& fixed,
                              const std::vector<Vec>& es, const ScanOptions& opts = {}) {
  std::vector<Vec> bs;
  for (const auto& t : fixed) bs.push_back(t.a);
  OrbitProbe probe;
  for (const auto& e : es) {
    const PartialDerivation f = totalize_derivation(alg, killing_derivation(alg, s.a, bs, e, opts));
    probe.images.push_back(sigma_f(f, s));
    for (const auto& t : fixed) probe.fixes_base = probe.fixes_base && sigma_f(f, t) == t;
  }
  std::vector<CoverPoint> sorted = probe.images;
  std::sort(sorted.begin(), sorted.end());
  probe.distinct = static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  return probe;
}

struct StabilizerTally {
  std::size_t tuples = 0;
  std::size_t zero = 0;
  bool zero_only_at_origin = true;
};

/// Shifts e_i = λ_i t_i for all λ in F_p^4, t_1..t_4 the first four block coordinates of a
/// canonical W-instance, applied to the points (a,0), (b,0), (c,0), (d,0).
inline StabilizerTally stabilizer_scan(const GradedAlgebra& alg) {
  const std::size_t n = alg.dim();
  if (n < 8) throw Error(ErrorKind::dimension, "stabilizer scan needs a W-instance with a block of at least 4");
  const Field& f = alg.field();
  const unsigned p = f.modulus();
  std::vector<CoverPoint> pts;
  for (std::size_t i = 0; i < 4; ++i) pts.push_back(CoverPoint{unit_vector(n, i), Vec(n, 0)});
  StabilizerTally tally;
  std::vector<unsigned> lambda(4, 0);
  while (true) {
    std::vector<Vec> shifts;
    for (std::size_t i = 0; i < 4; ++i) shifts.push_back(scaled(f, static_cast<std::uint8_t>(lambda[i]), unit_vector(n, 4 + i)));
    ++tally.tuples;
    if (stabilizer_residual(alg, pts, shifts).is_zero()) {
      ++tally.zero;
      if (lambda != std::vector<unsigned>(4, 0)) tally.zero_only_at_origin = false;
    }
    std::size_t pos = 0;
    while (pos < 4 && ++lambda[pos] == p) lambda[pos++] = 0;
    if (pos == 4) break;
  }
  return tally;
}

}  // namespace nilcover
