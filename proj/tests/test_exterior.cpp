#include <catch_amalgamated.hpp>

#include "nilcover/exterior.hpp"
#include "nilcover/liealg.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace nilcover;

TEST_CASE("pair flattening round trips") {
  for (std::size_t n = 2; n <= 9; ++n) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j, ++idx) {
        CHECK(pair_index(n, i, j) == idx);
        CHECK(index_pair(n, idx) == std::make_pair(i, j));
      }
    }
    CHECK(idx == wedge_dim(n));
  }
}

TEST_CASE("wedge is bilinear and alternating") {
  gen::Rng rng(21);
  const Field f(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = gen::uniform(rng, 2, 6);
    const Vec x = gen::vector(rng, f, n), y = gen::vector(rng, f, n), z = gen::vector(rng, f, n);
    CHECK(wedge(f, x, y) == oracle::wedge(x, y, 7));
    CHECK(is_zero(wedge(f, x, x)));
    CHECK(added(f, wedge(f, x, y), wedge(f, y, x)) == Vec(wedge_dim(n), 0));
    CHECK(wedge(f, added(f, x, z), y) == added(f, wedge(f, x, y), wedge(f, z, y)));
    Vec w = wedge(f, x, y);
    add_wedge(f, w, 3, z, y);
    CHECK(w == added(f, wedge(f, x, y), scaled(f, 3, wedge(f, z, y))));
  }
  const Field g(3);
  // e0 ∧ e2 in dimension 3 is the second basis element
  CHECK(wedge(g, unit_vector(3, 0), unit_vector(3, 2)) == Vec{0, 1, 0});
  CHECK(wedge(g, unit_vector(3, 2), unit_vector(3, 1)) == Vec{0, 0, 2});
}

TEST_CASE("embedding wedge vectors into a larger ambient") {
  gen::Rng rng(22);
  const Field f(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = gen::uniform(rng, 2, 5);
    const std::size_t m = n + gen::uniform(rng, 0, 3);
    const Vec x = gen::vector(rng, f, n), y = gen::vector(rng, f, n);
    CHECK(embed_wedge(wedge(f, x, y), n, m) == wedge(f, padded(x, m), padded(y, m)));
  }
}

TEST_CASE("decomposability is rank two") {
  gen::Rng rng(23);
  const Field f(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = gen::uniform(rng, 2, 5);
    const Vec w = gen::wedge_element(rng, f, n, gen::uniform(rng, 1, 2));
    const auto pair = factor_decomposable(f, n, w);
    CHECK(pair.has_value() == is_decomposable(f, n, w));
    if (pair) CHECK(wedge(f, pair->first, pair->second) == w);
    if (!is_zero(w) && wedge_rank(f, n, w) == 4) CHECK_FALSE(pair.has_value());
  }
  // e0∧e1 + e2∧e3 has rank 4
  Vec w(wedge_dim(4), 0);
  add_wedge(f, w, 1, unit_vector(4, 0), unit_vector(4, 1));
  add_wedge(f, w, 1, unit_vector(4, 2), unit_vector(4, 3));
  CHECK(wedge_rank(f, 4, w) == 4);
  CHECK_FALSE(is_decomposable(f, 4, w));
}

TEST_CASE("decomposable search agrees with a pairwise brute-force scan") {
  gen::Rng rng(24);
  const Field f(3);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = gen::uniform(rng, 2, 4);
    const auto alg = gen::algebra(rng, f, n, 2);
    const auto found = find_decomposable(alg.relations(), n);
    CHECK(found.has_value() == oracle::has_commuting_pair(alg));
    if (found) {
      CHECK(alg.relations().contains(wedge(f, found->first, found->second)));
      CHECK(rank(f, {found->first, found->second}) == 2);
    }
  }
  CHECK_THROWS_AS(find_decomposable(Subspace::full(f, wedge_dim(6)), 6, 1000), Error);
}

TEST_CASE("support is the smallest subspace carrying the wedge") {
  gen::Rng rng(25);
  const Field f(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = gen::uniform(rng, 2, 5);
    const Vec w = gen::wedge_element(rng, f, n, gen::uniform(rng, 1, 2));
    const Subspace s = wedge_support(f, n, {w});
    CHECK(wedge_square(s).contains(w));
    CHECK(s.dim() == wedge_rank(f, n, w));
    // every proper subspace of the support misses w (checked on hyperplanes of s)
    for (const auto& c : enumerate_intermediate(Subspace(f, n), s)) {
      if (c.dim() + 1 == s.dim()) CHECK_FALSE(wedge_square(c).contains(w));
    }
  }
}

TEST_CASE("wedge square coordinates read off pivot pairs") {
  gen::Rng rng(26);
  const Field f(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = gen::uniform(rng, 2, 6);
    const Subspace b = gen::subspace(rng, f, n, 4);
    const auto& basis = b.basis();
    Vec coeffs;
    Vec w(wedge_dim(n), 0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = i + 1; j < basis.size(); ++j) {
        const auto c = static_cast<std::uint8_t>(gen::uniform(rng, 0, 4));
        coeffs.push_back(c);
        add_wedge(f, w, c, basis[i], basis[j]);
      }
    }
    const auto got = wedge_square_coordinates(b, w);
    REQUIRE(got.has_value());
    CHECK(*got == coeffs);
    if (b.dim() < n) {
      const Vec x = gen::nonzero_vector(rng, f, n);
      if (!b.contains(x) && !b.is_zero()) {
        CHECK_FALSE(wedge_square_coordinates(b, added(f, w, wedge(f, x, basis[0]))).has_value());
      }
    }
  }
}

TEST_CASE("Leibniz lift and induced maps") {
  const Field f(3);
  // f(b0) = b1 on B = <b0, b1, b2, b3>; the lift of b0∧b1 + b2∧b3 is b1∧b1 = 0
  const std::size_t n = 4;
  const Subspace b = Subspace::full(f, n);
  Matrix images(f, n, {unit_vector(n, 1), Vec(n, 0), Vec(n, 0), Vec(n, 0)});
  const Matrix lift = leibniz_lift(b, images);
  Vec w = wedge(f, unit_vector(n, 0), unit_vector(n, 1));
  add_wedge(f, w, 1, unit_vector(n, 2), unit_vector(n, 3));
  CHECK(is_zero(apply_lift(b, lift, w)));
  CHECK(apply_lift(b, lift, wedge(f, unit_vector(n, 0), unit_vector(n, 2))) ==
        wedge(f, unit_vector(n, 1), unit_vector(n, 2)));

  gen::Rng rng(27);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = gen::uniform(rng, 2, 4);
    const std::size_t m = gen::uniform(rng, 2, 5);
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < k; ++i) rows.push_back(gen::vector(rng, f, m));
    const Matrix sigma(f, m, rows);
    const Matrix ind = induced_map(sigma);
    const Vec x = gen::vector(rng, f, k), y = gen::vector(rng, f, k);
    CHECK(ind.apply(wedge(f, x, y)) == wedge(f, sigma.apply(x), sigma.apply(y)));
  }
  CHECK_THROWS_AS(leibniz_lift(b, Matrix(f, n)), Error);
}
