#pragma once

#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

#include "nilcover/linalg.hpp"

namespace nilcover {

/// Default bound on the quotient dimension of any exhaustive subspace scan.
inline constexpr std::size_t default_enumeration_cap = 6;

/// Gaussian binomial [n choose k]_q; saturates at UINT64_MAX.
inline std::uint64_t gaussian_binomial(std::size_t n, std::size_t k, std::uint64_t q) {
  if (k > n) return 0;
  // Pascal-type recurrence [n,k] = [n-1,k-1] + q^k [n-1,k].
  std::vector<unsigned __int128> row(k + 1, 0);
  row[0] = 1;
  for (std::size_t m = 1; m <= n; ++m) {
    for (std::size_t j = std::min(m, k); j >= 1; --j) {
      unsigned __int128 qj = 1;
      for (std::size_t t = 0; t < j && qj <= UINT64_MAX; ++t) qj *= q;
      if (row[j] != 0 && qj > UINT64_MAX / row[j]) {
        row[j] = UINT64_MAX;
        continue;
      }
      row[j] = row[j - 1] + qj * row[j];
      if (row[j] > UINT64_MAX) row[j] = UINT64_MAX;
    }
  }
  return static_cast<std::uint64_t>(row[k]);
}

inline std::uint64_t subspace_count(std::size_t n, std::uint64_t q) {
  std::uint64_t total = 0;
  for (std::size_t k = 0; k <= n; ++k) total += gaussian_binomial(n, k, q);
  return total;
}

inline void check_enumeration_cap(std::size_t required, std::size_t cap, const std::string& what) {
  if (required > cap) {
    throw Error(ErrorKind::enumeration_too_large,
                what + " requires quotient dimension " + std::to_string(required) +
                    ", above the cap " + std::to_string(cap));
  }
}

namespace detail {

template <class Visitor, class... Args>
bool visit_continue(Visitor& visit, Args&&... args) {
  if constexpr (std::is_void_v<std::invoke_result_t<Visitor&, Args...>>) {
    visit(std::forward<Args>(args)...);
    return true;
  } else {
    return static_cast<bool>(visit(std::forward<Args>(args)...));
  }
}

/// Visits every j x k reduced row-echelon matrix over F_p (rows given as coefficient vectors).
template <class Visitor>
bool for_each_rref(const Field& f, std::size_t k, std::size_t j, Visitor&& visit) {
  if (j > k) return true;
  const unsigned p = f.modulus();
  std::vector<std::size_t> piv(j);
  for (std::size_t i = 0; i < j; ++i) piv[i] = i;
  while (true) {
    // free slots: (row r, column c) with c > piv[r] and c not a pivot column
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    {
      std::vector<bool> is_piv(k, false);
      for (auto c : piv) is_piv[c] = true;
      for (std::size_t r = 0; r < j; ++r) {
        for (std::size_t c = piv[r] + 1; c < k; ++c) {
          if (!is_piv[c]) slots.emplace_back(r, c);
        }
      }
    }
    std::vector<Vec> m(j, Vec(k, 0));
    for (std::size_t r = 0; r < j; ++r) m[r][piv[r]] = 1;
    std::vector<unsigned> digits(slots.size(), 0);
    while (true) {
      for (std::size_t s = 0; s < slots.size(); ++s) {
        m[slots[s].first][slots[s].second] = static_cast<std::uint8_t>(digits[s]);
      }
      if (!visit_continue(visit, static_cast<const std::vector<Vec>&>(m))) return false;
      std::size_t s = 0;
      while (s < digits.size() && ++digits[s] == p) digits[s++] = 0;
      if (s == digits.size()) break;
    }
    // next pivot combination
    if (j == 0) break;
    std::size_t i = j;
    while (i > 0 && piv[i - 1] == k - j + (i - 1)) --i;
    if (i == 0) break;
    ++piv[i - 1];
    for (std::size_t t = i; t < j; ++t) piv[t] = piv[t - 1] + 1;
  }
  return true;
}

}  // namespace detail

/// Visits every subspace C with b ⊆ C ⊆ b + span(complement) of dimension dim(b) + j.
/// `complement` must be independent modulo b. Returns false if the visitor stopped early.
template <class Visitor>
bool for_each_intermediate_of_dim(const Subspace& b, const std::vector<Vec>& complement,
                                  std::size_t j, Visitor&& visit) {
  const Field& f = b.field();
  const std::size_t n = b.ambient_dim();
  return detail::for_each_rref(f, complement.size(), j, [&](const std::vector<Vec>& m) {
    std::vector<Vec> rows = b.basis();
    for (const auto& coeffs : m) rows.push_back(combine(f, complement, coeffs, n));
    const Subspace c = Subspace::span(f, n, std::move(rows));
    return detail::visit_continue(visit, c);
  });
}

/// Visits every subspace C with b ⊆ C ⊆ a exactly once, by increasing dimension.
/// Enumeration is bijective with the subspaces of a/b; throws when dim(a/b) > cap.
template <class Visitor>
bool for_each_intermediate(const Subspace& b, const Subspace& a, Visitor&& visit,
                           std::size_t cap = default_enumeration_cap) {
  b.check_compatible(a);
  const auto comp = complement_basis(b, a);
  check_enumeration_cap(comp.size(), cap, "intermediate-subspace enumeration");
  for (std::size_t j = 0; j <= comp.size(); ++j) {
    if (!for_each_intermediate_of_dim(b, comp, j, visit)) return false;
  }
  return true;
}

inline std::vector<Subspace> enumerate_intermediate(const Subspace& b, const Subspace& a,
                                                    std::size_t cap = default_enumeration_cap) {
  std::vector<Subspace> out;
  for_each_intermediate(b, a, [&](const Subspace& c) { out.push_back(c); }, cap);
  return out;
}

/// Visits each nonzero element of s up to scalar multiples (first nonzero coefficient 1).
template <class Visitor>
bool for_each_projective_point(const Subspace& s, Visitor&& visit) {
  const Field& f = s.field();
  const unsigned p = f.modulus();
  const std::size_t d = s.dim();
  for (std::size_t lead = 0; lead < d; ++lead) {
    std::vector<unsigned> digits(d - lead - 1, 0);
    while (true) {
      Vec coeffs(d, 0);
      coeffs[lead] = 1;
      for (std::size_t t = 0; t < digits.size(); ++t) {
        coeffs[lead + 1 + t] = static_cast<std::uint8_t>(digits[t]);
      }
      if (!detail::visit_continue(visit, combine(f, s.basis(), coeffs, s.ambient_dim()))) {
        return false;
      }
      std::size_t t = 0;
      while (t < digits.size() && ++digits[t] == p) digits[t++] = 0;
      if (t == digits.size()) break;
    }
  }
  return true;
}

}  // namespace nilcover
