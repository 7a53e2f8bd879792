#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "nilcover/error.hpp"

namespace nilcover {

/// Prime field F_p with p in {3, 5, 7, 11}. Residues are stored as bytes.
class Field {
 public:
  static constexpr unsigned max_modulus = 11;

  explicit Field(unsigned p = 3) : p_(p) {
    if (!supported(p)) {
      throw Error(ErrorKind::malformed_field,
                  "modulus " + std::to_string(p) + " is not one of the supported primes 3, 5, 7, 11");
    }
    inv_.fill(0);
    for (unsigned a = 1; a < p; ++a) {
      for (unsigned b = 1; b < p; ++b) {
        if ((a * b) % p == 1) inv_[a] = static_cast<std::uint8_t>(b);
      }
    }
  }

  static constexpr bool supported(unsigned p) { return p == 3 || p == 5 || p == 7 || p == 11; }

  unsigned modulus() const { return p_; }

  std::uint8_t add(std::uint8_t a, std::uint8_t b) const {
    return static_cast<std::uint8_t>((a + b) % p_);
  }
  std::uint8_t sub(std::uint8_t a, std::uint8_t b) const {
    return static_cast<std::uint8_t>((a + p_ - b) % p_);
  }
  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const {
    return static_cast<std::uint8_t>((a * b) % p_);
  }
  std::uint8_t neg(std::uint8_t a) const { return static_cast<std::uint8_t>((p_ - a) % p_); }

  std::uint8_t inv(std::uint8_t a) const {
    if (a == 0) throw Error(ErrorKind::internal_inconsistency, "inverse of zero");
    return inv_[a];
  }

  /// Reduces an arbitrary integer into [0, p).
  std::uint8_t reduce(long long v) const {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<std::uint8_t>(r);
  }

  friend bool operator==(const Field& a, const Field& b) { return a.p_ == b.p_; }

 private:
  unsigned p_;
  std::array<std::uint8_t, max_modulus + 1> inv_{};
};

}  // namespace nilcover
