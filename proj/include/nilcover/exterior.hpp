#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "nilcover/enumerate.hpp"
#include "nilcover/linalg.hpp"

namespace nilcover {

// Elements of ∧²F_p^n are coefficient rows over {e_i ∧ e_j : i < j}, flattened in
// lexicographic pair order: (0,1), (0,2), ..., (0,n-1), (1,2), ...

inline constexpr std::size_t wedge_dim(std::size_t n) { return n * (n - 1) / 2; }

inline constexpr std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

inline std::pair<std::size_t, std::size_t> index_pair(std::size_t n, std::size_t idx) {
  std::size_t i = 0;
  while (idx >= n - i - 1) {
    idx -= n - i - 1;
    ++i;
  }
  return {i, i + 1 + idx};
}

inline Vec wedge(const Field& f, const Vec& x, const Vec& y) {
  check_same_size(x, y);
  const std::size_t n = x.size();
  const unsigned p = f.modulus();
  Vec out(wedge_dim(n), 0);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++idx) {
      out[idx] = static_cast<std::uint8_t>((x[i] * y[j] + p * p - x[j] * y[i]) % p);
    }
  }
  return out;
}

/// Adds c * (x ∧ y) into w.
inline void add_wedge(const Field& f, Vec& w, std::uint8_t c, const Vec& x, const Vec& y) {
  if (c == 0) return;
  const std::size_t n = x.size();
  const unsigned p = f.modulus();
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++idx) {
      const unsigned t = (x[i] * y[j] + p * p - x[j] * y[i]) % p;
      if (t != 0) w[idx] = static_cast<std::uint8_t>((w[idx] + c * t) % p);
    }
  }
}

/// Re-embeds a wedge vector of ∧²F^n into ∧²F^m (m >= n); the flattening is re-indexed.
inline Vec embed_wedge(const Vec& w, std::size_t n, std::size_t m) {
  if (w.size() != wedge_dim(n) || m < n) throw Error(ErrorKind::dimension, "bad wedge embedding");
  Vec out(wedge_dim(m), 0);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++idx) out[pair_index(m, i, j)] = w[idx];
  }
  return out;
}

inline Subspace embed_wedge_subspace(const Subspace& s, std::size_t n, std::size_t m) {
  std::vector<Vec> rows;
  for (const auto& w : s.basis()) rows.push_back(embed_wedge(w, n, m));
  return Subspace::span(s.field(), wedge_dim(m), std::move(rows));
}

/// The alternating matrix M with M_ij = w_ij, M_ji = -w_ij.
inline std::vector<Vec> alternating_matrix(const Field& f, std::size_t n, const Vec& w) {
  if (w.size() != wedge_dim(n)) throw Error(ErrorKind::dimension, "wedge vector length mismatch");
  std::vector<Vec> m(n, Vec(n, 0));
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++idx) {
      m[i][j] = w[idx];
      m[j][i] = f.neg(w[idx]);
    }
  }
  return m;
}

/// Rank of the alternating matrix of w (always even).
inline std::size_t wedge_rank(const Field& f, std::size_t n, const Vec& w) {
  return rank(f, alternating_matrix(f, n, w));
}

/// The support of w: smallest subspace C with w ∈ ∧²C (the row space of its matrix).
inline Subspace wedge_support(const Field& f, std::size_t n, const std::vector<Vec>& ws) {
  std::vector<Vec> rows;
  for (const auto& w : ws) {
    auto m = alternating_matrix(f, n, w);
    for (auto& r : m) {
      if (!is_zero(r)) rows.push_back(std::move(r));
    }
  }
  return Subspace::span(f, n, std::move(rows));
}

/// For decomposable w, returns (v, u) with v ∧ u = w; nothing otherwise.
inline std::optional<std::pair<Vec, Vec>> factor_decomposable(const Field& f, std::size_t n,
                                                              const Vec& w) {
  if (is_zero(w)) return std::nullopt;
  const Subspace rows = Subspace::span(f, n, alternating_matrix(f, n, w));
  if (rows.dim() != 2) return std::nullopt;
  const Vec& v = rows.basis()[0];
  const Vec& u = rows.basis()[1];
  const Vec vu = wedge(f, v, u);
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] != 0) {
      // vu = mu * w for mu = vu[k] / w[k]
      const std::uint8_t scale = f.mul(w[k], f.inv(vu[k]));
      return std::make_pair(v, scaled(f, scale, u));
    }
  }
  return std::nullopt;
}

inline bool is_decomposable(const Field& f, std::size_t n, const Vec& w) {
  return !is_zero(w) && wedge_rank(f, n, w) == 2;
}

inline constexpr std::uint64_t default_element_cap = 1000000;

/// Searches n_sub ⊆ ∧²F^n for a nonzero decomposable element, scanning every element
/// up to scalars with a rank-2 test.
inline std::optional<std::pair<Vec, Vec>> find_decomposable(const Subspace& n_sub, std::size_t n,
                                                            std::uint64_t element_cap =
                                                                default_element_cap) {
  if (n_sub.ambient_dim() != wedge_dim(n)) {
    throw Error(ErrorKind::dimension, "relation subspace is not in the wedge ambient of dim " +
                                          std::to_string(n));
  }
  std::uint64_t elements = 1;
  for (std::size_t i = 0; i < n_sub.dim(); ++i) {
    elements *= n_sub.field().modulus();
    if (elements > element_cap) {
      throw Error(ErrorKind::enumeration_too_large,
                  "decomposable scan over p^" + std::to_string(n_sub.dim()) +
                      " elements exceeds the cap " + std::to_string(element_cap));
    }
  }
  std::optional<std::pair<Vec, Vec>> found;
  for_each_projective_point(n_sub, [&](const Vec& w) {
    found = factor_decomposable(n_sub.field(), n, w);
    return !found.has_value();
  });
  return found;
}

/// ∧²σ for σ given by rows (row i = σ(e_i)); rows of the result are indexed by pairs i < j.
inline Matrix induced_map(const Matrix& sigma) {
  const Field& f = sigma.field();
  const std::size_t u = sigma.rows();
  Matrix out(f, wedge_dim(sigma.cols()));
  for (std::size_t i = 0; i < u; ++i) {
    for (std::size_t j = i + 1; j < u; ++j) out.append_row(wedge(f, sigma.row(i), sigma.row(j)));
  }
  return out;
}

/// Span of {β_i ∧ β_j : i < j} for the canonical basis of b.
inline Subspace wedge_square(const Subspace& b) {
  const Field& f = b.field();
  std::vector<Vec> rows;
  const auto& basis = b.basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) rows.push_back(wedge(f, basis[i], basis[j]));
  }
  return Subspace::span(f, wedge_dim(b.ambient_dim()), std::move(rows));
}

/// Coordinates of w ∈ ∧²b in the basis {β_i ∧ β_j : i < j} of the echelon basis of b.
/// With an echelon basis the coefficient of β_k ∧ β_l is w at (pivot_k, pivot_l).
inline std::optional<Vec> wedge_square_coordinates(const Subspace& b, const Vec& w) {
  const Field& f = b.field();
  const std::size_t n = b.ambient_dim();
  const auto& basis = b.basis();
  const auto& piv = b.pivots();
  Vec coords;
  Vec rest = w;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    for (std::size_t l = k + 1; l < basis.size(); ++l) {
      const std::uint8_t c = w[pair_index(n, piv[k], piv[l])];
      coords.push_back(c);
      if (c != 0) add_wedge(f, rest, f.neg(c), basis[k], basis[l]);
    }
  }
  if (!is_zero(rest)) return std::nullopt;
  return coords;
}

/// Leibniz lift of f : b -> F^n given by images of the echelon basis of b.
/// Row (i, j) of the result is f(β_i) ∧ β_j + β_i ∧ f(β_j).
inline Matrix leibniz_lift(const Subspace& b, const Matrix& images) {
  if (images.rows() != b.dim()) {
    throw Error(ErrorKind::domain, "map is given on " + std::to_string(images.rows()) +
                                       " vectors but the domain has dimension " +
                                       std::to_string(b.dim()));
  }
  if (images.cols() != b.ambient_dim()) {
    throw Error(ErrorKind::dimension, "images and domain live in different ambients");
  }
  const Field& f = b.field();
  const auto& basis = b.basis();
  Matrix out(f, wedge_dim(b.ambient_dim()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      Vec w = wedge(f, images.row(i), basis[j]);
      add_wedge(f, w, 1, basis[i], images.row(j));
      out.append_row(std::move(w));
    }
  }
  return out;
}

/// Applies a Leibniz lift (as returned by leibniz_lift) to w ∈ ∧²b.
inline Vec apply_lift(const Subspace& b, const Matrix& lift, const Vec& w) {
  auto coords = wedge_square_coordinates(b, w);
  if (!coords) throw Error(ErrorKind::domain, "wedge vector lies outside the wedge square of the domain");
  return lift.apply(*coords);
}

}  // namespace nilcover
