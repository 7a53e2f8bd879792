#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nilcover/error.hpp"
#include "nilcover/field.hpp"

namespace nilcover {

/// Coordinate row over the globally fixed ambient basis.
using Vec = std::vector<std::uint8_t>;

inline Vec zero_vector(std::size_t n) { return Vec(n, 0); }

inline Vec unit_vector(std::size_t n, std::size_t i) {
  Vec v(n, 0);
  v.at(i) = 1;
  return v;
}

inline bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](std::uint8_t x) { return x == 0; });
}

/// y += c * x
inline void add_scaled(const Field& f, Vec& y, std::uint8_t c, const Vec& x) {
  if (c == 0) return;
  const unsigned p = f.modulus();
  for (std::size_t k = 0; k < y.size(); ++k) {
    y[k] = static_cast<std::uint8_t>((y[k] + c * x[k]) % p);
  }
}

inline Vec scaled(const Field& f, std::uint8_t c, Vec x) {
  for (auto& v : x) v = f.mul(c, v);
  return x;
}

inline Vec added(const Field& f, Vec x, const Vec& y) {
  add_scaled(f, x, 1, y);
  return x;
}

inline Vec subtracted(const Field& f, Vec x, const Vec& y) {
  add_scaled(f, x, static_cast<std::uint8_t>(f.modulus() - 1), y);
  return x;
}

inline Vec negated(const Field& f, Vec x) { return scaled(f, f.neg(1), std::move(x)); }

/// Zero-pads on the right; ambient extension appends coordinates.
inline Vec padded(Vec x, std::size_t n) {
  if (n < x.size()) throw Error(ErrorKind::dimension, "cannot pad to a smaller ambient");
  x.resize(n, 0);
  return x;
}

inline void check_same_size(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::dimension, "vector lengths differ (" + std::to_string(x.size()) + " vs " +
                                          std::to_string(y.size()) + ")");
  }
}

namespace detail {

/// Brings rows to reduced row-echelon form in place, dropping zero rows.
/// Returns the pivot column of each surviving row.
inline std::vector<std::size_t> echelonize(const Field& f, std::vector<Vec>& rows,
                                           std::size_t ncols) {
  const unsigned p = f.modulus();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][c] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[r]);
    Vec& piv = rows[r];
    const std::uint8_t s = f.inv(piv[c]);
    if (s != 1) {
      for (std::size_t k = c; k < ncols; ++k) piv[k] = static_cast<std::uint8_t>((piv[k] * s) % p);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const unsigned m = p - rows[i][c];
      Vec& row = rows[i];
      for (std::size_t k = c; k < ncols; ++k) {
        row[k] = static_cast<std::uint8_t>((row[k] + m * piv[k]) % p);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

}  // namespace detail

/// Row-major matrix; linear maps use the row convention (row i = image of basis vector i).
class Matrix {
 public:
  Matrix(Field field, std::size_t cols) : field_(field), cols_(cols) {}
  Matrix(Field field, std::size_t cols, std::vector<Vec> rows)
      : field_(field), cols_(cols), rows_(std::move(rows)) {
    for (auto& r : rows_) {
      if (r.size() != cols_) throw Error(ErrorKind::dimension, "matrix row length mismatch");
      for (auto& x : r) x = field_.reduce(x);
    }
  }

  const Field& field() const { return field_; }
  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  const Vec& row(std::size_t i) const { return rows_.at(i); }
  const std::vector<Vec>& row_vectors() const& { return rows_; }
  std::vector<Vec> row_vectors() && { return std::move(rows_); }

  void append_row(Vec r) {
    if (r.size() != cols_) throw Error(ErrorKind::dimension, "matrix row length mismatch");
    rows_.push_back(std::move(r));
  }

  /// x * M for a row vector x of length rows().
  Vec apply(const Vec& x) const {
    if (x.size() != rows_.size()) throw Error(ErrorKind::dimension, "matrix/vector size mismatch");
    Vec out(cols_, 0);
    for (std::size_t i = 0; i < x.size(); ++i) add_scaled(field_, out, x[i], rows_[i]);
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.cols_ == b.cols_ && a.rows_ == b.rows_;
  }

 private:
  Field field_;
  std::size_t cols_;
  std::vector<Vec> rows_;
};

/// Unique reduced row-echelon form with zero rows stripped.
inline Matrix rref(const Matrix& m) {
  std::vector<Vec> rows = m.row_vectors();
  detail::echelonize(m.field(), rows, m.cols());
  return Matrix(m.field(), m.cols(), std::move(rows));
}

inline std::size_t rank(const Field& f, std::vector<Vec> rows) {
  if (rows.empty()) return 0;
  const std::size_t n = rows.front().size();
  return detail::echelonize(f, rows, n).size();
}

/// A subspace of F_p^n stored by its reduced row-echelon basis.
class Subspace {
 public:
  Subspace(Field field, std::size_t ambient) : field_(field), ambient_(ambient) {}

  static Subspace span(Field field, std::size_t ambient, std::vector<Vec> vectors) {
    for (auto& v : vectors) {
      if (v.size() != ambient) {
        throw Error(ErrorKind::dimension, "vector of length " + std::to_string(v.size()) +
                                              " in ambient " + std::to_string(ambient));
      }
    }
    Subspace s(field, ambient);
    s.pivots_ = detail::echelonize(field, vectors, ambient);
    s.basis_ = std::move(vectors);
    return s;
  }

  static Subspace full(Field field, std::size_t n) {
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < n; ++i) rows.push_back(unit_vector(n, i));
    return span(field, n, std::move(rows));
  }

  const Field& field() const { return field_; }
  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  bool is_zero() const { return basis_.empty(); }
  const std::vector<Vec>& basis() const& { return basis_; }
  std::vector<Vec> basis() && { return std::move(basis_); }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  Matrix basis_matrix() const { return Matrix(field_, ambient_, basis_); }

  /// Canonical coset representative of x modulo this subspace (zero at every pivot).
  Vec reduce(Vec x) const {
    check_vector(x);
    const unsigned p = field_.modulus();
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      const std::uint8_t c = x[pivots_[i]];
      if (c != 0) add_scaled(field_, x, static_cast<std::uint8_t>(p - c), basis_[i]);
    }
    return x;
  }

  bool contains(const Vec& x) const { return nilcover::is_zero(reduce(x)); }

  bool contains(const Subspace& other) const {
    check_compatible(other);
    return std::all_of(other.basis_.begin(), other.basis_.end(),
                       [&](const Vec& v) { return contains(v); });
  }

  /// Coordinates of x in the canonical basis, or nothing when x is outside.
  std::optional<Vec> coordinates(const Vec& x) const {
    check_vector(x);
    Vec coords(basis_.size(), 0);
    Vec rest = x;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      coords[i] = x[pivots_[i]];
      add_scaled(field_, rest, field_.neg(coords[i]), basis_[i]);
    }
    if (!nilcover::is_zero(rest)) return std::nullopt;
    return coords;
  }

  Subspace embed(std::size_t ambient) const {
    std::vector<Vec> rows;
    for (const auto& b : basis_) rows.push_back(padded(b, ambient));
    return span(field_, ambient, std::move(rows));
  }

  void check_compatible(const Subspace& other) const {
    if (!(field_ == other.field_) || ambient_ != other.ambient_) {
      throw Error(ErrorKind::dimension, "subspaces live in different ambients (" +
                                            std::to_string(ambient_) + " vs " +
                                            std::to_string(other.ambient_) + ")");
    }
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.field_ == b.field_ && a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

  /// Canonical order: dimension first, then the echelon basis lexicographically.
  friend bool canonical_less(const Subspace& a, const Subspace& b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    return a.basis_ < b.basis_;
  }

 private:
  void check_vector(const Vec& x) const {
    if (x.size() != ambient_) {
      throw Error(ErrorKind::dimension, "vector of length " + std::to_string(x.size()) +
                                            " in ambient " + std::to_string(ambient_));
    }
  }

  Field field_;
  std::size_t ambient_;
  std::vector<Vec> basis_;
  std::vector<std::size_t> pivots_;
};

inline Subspace sum(const Subspace& u, const Subspace& v) {
  u.check_compatible(v);
  std::vector<Vec> rows = u.basis();
  rows.insert(rows.end(), v.basis().begin(), v.basis().end());
  return Subspace::span(u.field(), u.ambient_dim(), std::move(rows));
}

inline Subspace sum(const Subspace& u, const Vec& x) {
  std::vector<Vec> rows = u.basis();
  rows.push_back(x);
  return Subspace::span(u.field(), u.ambient_dim(), std::move(rows));
}

/// Zassenhaus: echelonize [u|u ; v|0]; rows with vanishing left half span u ∩ v.
inline Subspace intersect(const Subspace& u, const Subspace& v) {
  u.check_compatible(v);
  const std::size_t n = u.ambient_dim();
  std::vector<Vec> rows;
  for (const auto& x : u.basis()) {
    Vec r(2 * n, 0);
    std::copy(x.begin(), x.end(), r.begin());
    std::copy(x.begin(), x.end(), r.begin() + static_cast<std::ptrdiff_t>(n));
    rows.push_back(std::move(r));
  }
  for (const auto& x : v.basis()) {
    Vec r(2 * n, 0);
    std::copy(x.begin(), x.end(), r.begin());
    rows.push_back(std::move(r));
  }
  detail::echelonize(u.field(), rows, 2 * n);
  std::vector<Vec> out;
  for (const auto& r : rows) {
    if (std::all_of(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(n),
                    [](std::uint8_t c) { return c == 0; })) {
      out.emplace_back(r.begin() + static_cast<std::ptrdiff_t>(n), r.end());
    }
  }
  return Subspace::span(u.field(), n, std::move(out));
}

/// Canonical echelon completion: vectors c_1..c_k, reduced modulo b and in
/// reduced echelon form among themselves, with a = b ⊕ span(c).
inline std::vector<Vec> complement_basis(const Subspace& b, const Subspace& a) {
  if (!a.contains(b)) throw Error(ErrorKind::containment, "base is not contained in the target");
  std::vector<Vec> rows;
  for (const auto& x : a.basis()) rows.push_back(b.reduce(x));
  detail::echelonize(a.field(), rows, a.ambient_dim());
  return rows;
}

/// Solves rows * x = rhs (one equation per row). Free variables are set to zero.
inline std::optional<Vec> solve_linear(const Field& f, const std::vector<Vec>& equations,
                                       const Vec& rhs, std::size_t unknowns) {
  if (equations.size() != rhs.size()) throw Error(ErrorKind::dimension, "rhs length mismatch");
  std::vector<Vec> aug;
  aug.reserve(equations.size());
  for (std::size_t i = 0; i < equations.size(); ++i) {
    if (equations[i].size() != unknowns) throw Error(ErrorKind::dimension, "equation width mismatch");
    Vec r = equations[i];
    r.push_back(rhs[i]);
    aug.push_back(std::move(r));
  }
  const auto pivots = detail::echelonize(f, aug, unknowns + 1);
  Vec x(unknowns, 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == unknowns) return std::nullopt;
    x[pivots[i]] = aug[i][unknowns];
  }
  return x;
}

/// Coefficients lambda with sum_i lambda_i gens_i = target, if any.
inline std::optional<Vec> solve_combination(const Field& f, const std::vector<Vec>& gens,
                                            const Vec& target) {
  const std::size_t len = target.size();
  std::vector<Vec> eqs(len, Vec(gens.size(), 0));
  for (std::size_t i = 0; i < gens.size(); ++i) {
    check_same_size(gens[i], target);
    for (std::size_t l = 0; l < len; ++l) eqs[l][i] = gens[i][l];
  }
  return solve_linear(f, eqs, target, gens.size());
}

inline Vec combine(const Field& f, const std::vector<Vec>& gens, const Vec& coeffs,
                   std::size_t len) {
  Vec out(len, 0);
  for (std::size_t i = 0; i < gens.size(); ++i) add_scaled(f, out, coeffs[i], gens[i]);
  return out;
}

}  // namespace nilcover
