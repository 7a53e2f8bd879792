#include <catch_amalgamated.hpp>

#include "nilcover/cover.hpp"
#include "nilcover/io.hpp"
#include "support/generators.hpp"

using namespace nilcover;

namespace {

GradedAlgebra load(const std::string& name) {
  return io::algebra_from_json(io::parse_json(io::read_file(std::string(NILCOVER_DATA_DIR) + "/" + name), name));
}

CoverPoint point(const Vec& a, const Vec& u) { return CoverPoint{a, u}; }

CoverPoint random_point(gen::Rng& rng, const Field& f, std::size_t n) {
  return CoverPoint{gen::vector(rng, f, n), gen::vector(rng, f, n)};
}

// Killing derivations on the canonical W-instance that extend to the whole algebra.
std::vector<PartialDerivation> total_killing_derivations(gen::Rng& rng, const GradedAlgebra& w, std::size_t want) {
  const Field& f = w.field();
  const std::size_t n = w.dim();
  std::vector<PartialDerivation> out;
  for (int attempt = 0; attempt < 400 && out.size() < want; ++attempt) {
    const Vec a = gen::nonzero_vector(rng, f, n);
    std::vector<Vec> bs;
    const std::size_t k = gen::uniform(rng, 0, 2);
    for (std::size_t i = 0; i < k; ++i) bs.push_back(gen::nonzero_vector(rng, f, n));
    const Vec e = gen::vector(rng, f, n);
    try {
      out.push_back(totalize_derivation(w, killing_derivation(w, a, bs, e)));
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::precondition) throw;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("projection and action") {
  const Field f(3);
  gen::Rng rng(70);
  for (int i = 0; i < 50; ++i) {
    const CoverPoint s = random_point(rng, f, 5);
    const Vec b = gen::vector(rng, f, 5);
    const Vec b2 = gen::vector(rng, f, 5);
    CHECK(project(s) == s.a);
    CHECK(act(f, Vec(5, 0), s) == s);
    CHECK(project(act(f, b, s)) == s.a);
    CHECK(act(f, b, act(f, b2, s)) == act(f, added(f, b, b2), s));
    CHECK(act(f, negated(f, s.u), s) == point(s.a, Vec(5, 0)));
  }
  CHECK_THROWS_AS(act(f, Vec(4, 0), point(Vec(5, 0), Vec(5, 0))), Error);
}

TEST_CASE("T_W instances") {
  const Field f(3);
  const auto free4 = GradedAlgebra::free(f, 4);
  const Vec z(4, 0);
  CHECK(tw_holds(free4, TWShape{1}, {point(z, z)}, {point(z, z)}));
  CHECK_FALSE(tw_holds(free4, TWShape{1}, {point(unit_vector(4, 0), z)}, {point(unit_vector(4, 1), z)}));
  // [u, y] alone breaks the second condition
  CHECK_FALSE(tw_holds(free4, TWShape{1}, {point(z, unit_vector(4, 2))}, {point(unit_vector(4, 1), z)}));

  // a0∧b0 + b1∧b2 = 0 in A_alg; coordinates b0, b1, b2, a0
  const auto al = load("a_alg.json");
  const Vec b0 = unit_vector(4, 0), b1 = unit_vector(4, 1), b2 = unit_vector(4, 2), a0 = unit_vector(4, 3);
  CHECK(tw_holds(al, TWShape{2}, {point(a0, z), point(b1, z)}, {point(b0, z), point(b2, z)}));
  CHECK_FALSE(tw_holds(al, TWShape{2}, {point(a0, z), point(b1, z)}, {point(b0, z), point(b0, z)}));
  // u = x, v = y doubles the first sum
  CHECK(tw_holds(al, TWShape{2}, {point(a0, a0), point(b1, b1)}, {point(b0, b0), point(b2, b2)}));
  CHECK_FALSE(tw_holds(al, TWShape{2}, {point(a0, a0), point(b1, z)}, {point(b0, z), point(b2, z)}));

  CHECK_THROWS_AS(tw_holds(al, TWShape{2}, {point(a0, z)}, {point(b0, z)}), Error);
  CHECK_THROWS_AS(tw_holds(al, TWShape{0}, {}, {}), Error);
}

TEST_CASE("σ_f fixes the projection and respects the structure") {
  const Field f(3);
  gen::Rng rng(71);
  const auto w = canonical_w_instance(f);
  const auto fs = total_killing_derivations(rng, w, 6);
  REQUIRE(fs.size() == 6);
  const auto zero = PartialDerivation::zero(w.full_space());
  for (int i = 0; i < 30; ++i) {
    const CoverPoint s = random_point(rng, f, 8);
    const CoverPoint t = random_point(rng, f, 8);
    const Vec b = gen::vector(rng, f, 8);
    CHECK(sigma_f(zero, s) == s);
    for (const auto& d : fs) {
      CHECK(project(sigma_f(d, s)) == s.a);
      CHECK(sigma_f(d, act(f, b, s)) == act(f, b, sigma_f(d, s)));
      CHECK(sigma_f(d, add(f, s, t)) == add(f, sigma_f(d, s), sigma_f(d, t)));
      CHECK(sigma_f(negate_derivation(d), sigma_f(d, s)) == s);
    }
    // σ_f ∘ σ_g = σ_{f+g}
    CHECK(sigma_f(fs[0], sigma_f(fs[1], s)) == sigma_f(add_derivations(fs[0], fs[1]), s));
  }
  const auto partial = killing_derivation(w, unit_vector(8, 4), {}, unit_vector(8, 5));
  try {
    sigma_f(partial, point(Vec(8, 0), Vec(8, 0)));
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain);
  }
}

TEST_CASE("σ_f preserves T_W on every small instance") {
  const Field f(3);
  gen::Rng rng(72);
  const auto w = canonical_w_instance(f);
  const std::size_t n = w.dim();
  const auto fs = total_killing_derivations(rng, w, 3);
  REQUIRE(fs.size() == 3);
  // alphabet: projections among 0, a, b, c, d and second components among 0, t1, c
  std::vector<CoverPoint> alphabet;
  for (int i = -1; i < 4; ++i) {
    const Vec x = i < 0 ? Vec(n, 0) : unit_vector(n, static_cast<std::size_t>(i));
    for (const Vec& u : {Vec(n, 0), unit_vector(n, 4), unit_vector(n, 2)}) alphabet.push_back(point(x, u));
  }
  for (const auto& d : fs) {
    const auto one = automorphism_scan(w, d, alphabet, 1);
    CHECK(one.instances == 225);
    CHECK(one.violations == 0);
    CHECK(one.holding > 0);
    const auto two = automorphism_scan(w, d, alphabet, 2);
    CHECK(two.instances == 50625);
    CHECK(two.violations == 0);
    CHECK(two.holding > one.holding);
  }
}

TEST_CASE("the Leibniz change of the second T_W sum vanishes modulo N") {
  // σ_f adds Σ ([f(a_i), b_i] + [a_i, f(b_i)]) = f̃(Σ a_i ∧ b_i) to the second sum
  const Field f(3);
  gen::Rng rng(73);
  const auto w = canonical_w_instance(f);
  const auto fs = total_killing_derivations(rng, w, 5);
  const Vec r = w.relations().basis()[0];
  for (const auto& d : fs) {
    CHECK(w.relations().contains(d.apply_wedge(r)));
    const Vec a = unit_vector(8, 0), b = unit_vector(8, 1), c = unit_vector(8, 2), dd = unit_vector(8, 3);
    Vec change = wedge(f, d.apply(a), c);
    add_wedge(f, change, 1, a, d.apply(c));
    add_wedge(f, change, 1, d.apply(b), dd);
    add_wedge(f, change, 1, b, d.apply(dd));
    CHECK(change == d.apply_wedge(r));
  }
}

TEST_CASE("killing derivations") {
  const Field f(3);
  const auto free6 = GradedAlgebra::free(f, 6);
  const Vec a = unit_vector(6, 0), b1 = unit_vector(6, 1), b2 = unit_vector(6, 2), e = unit_vector(6, 3);
  const auto k = killing_derivation(free6, a, {b1, b2}, e);
  CHECK(k.apply(a) == e);
  CHECK(k.apply(b1) == Vec(6, 0));
  CHECK(k.apply(b2) == Vec(6, 0));
  CHECK(validate_derivation(free6, k).ok);

  const auto z = killing_derivation(free6, a, {b1}, Vec(6, 0));
  CHECK(z == PartialDerivation::zero(free6.span({a, b1})));

  // two choices of e move (a, u) apart and fix (b_i, v_i)
  const auto k2 = killing_derivation(free6, a, {b1, b2}, unit_vector(6, 4));
  const auto t1 = totalize_derivation(free6, k);
  const auto t2 = totalize_derivation(free6, k2);
  const CoverPoint s = point(a, unit_vector(6, 5));
  CHECK_FALSE(sigma_f(t1, s) == sigma_f(t2, s));
  CHECK(sigma_f(t1, s) == point(a, added(f, unit_vector(6, 5), e)));
  for (const auto& bv : {point(b1, unit_vector(6, 4)), point(b2, Vec(6, 0))}) {
    CHECK(sigma_f(t1, bv) == bv);
    CHECK(sigma_f(t2, bv) == bv);
  }

  // relations on ⟨a, b_i⟩ void the construction
  const auto al = load("a_alg.json");
  try {
    killing_derivation(al, unit_vector(4, 3), {unit_vector(4, 0), unit_vector(4, 1), unit_vector(4, 2)}, Vec(4, 0));
    FAIL("expected a precondition error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::precondition);
  }
  CHECK_THROWS_AS(killing_derivation(free6, a, {b1}, b1), Error);
  CHECK_THROWS_AS(killing_derivation(free6, a, {a}, e), Error);
}

TEST_CASE("totalization") {
  const Field f(3);
  const auto w = canonical_w_instance(f);
  const std::size_t n = w.dim();
  // t1 ↦ t2 extends by zero
  const auto k = killing_derivation(w, unit_vector(n, 4), {unit_vector(n, 0)}, unit_vector(n, 5));
  const auto t = totalize_derivation(w, k);
  CHECK(t.domain() == w.full_space());
  CHECK(t.extends(k));
  CHECK(validate_derivation(w, t).ok);
  // a ↦ t1 cannot be completed inside the instance: t1∧c has nothing to cancel against
  const auto bad = killing_derivation(w, unit_vector(n, 0), {}, unit_vector(n, 4));
  try {
    totalize_derivation(w, bad);
    FAIL("expected a precondition error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::precondition);
  }
  // random total derivations on A_alg are derivations
  gen::Rng rng(74);
  const auto al = load("a_alg.json");
  for (int i = 0; i < 20; ++i) {
    const Vec x = gen::nonzero_vector(rng, f, 4);
    const Vec y = gen::vector(rng, f, 4);
    try {
      const auto d = totalize_derivation(al, PartialDerivation::from_pairs(f, 4, {{x, y}}));
      CHECK(validate_derivation(al, d).ok);
      CHECK(d.apply(x) == y);
    } catch (const Error& err) {
      CHECK(err.kind() == ErrorKind::precondition);
    }
  }
}

TEST_CASE("orbit probe") {
  const Field f(3);
  const auto w = canonical_w_instance(f);
  const std::size_t n = w.dim();
  const CoverPoint s = point(unit_vector(n, 4), unit_vector(n, 1));
  const std::vector<CoverPoint> fixed{point(unit_vector(n, 0), unit_vector(n, 2)), point(unit_vector(n, 1), Vec(n, 0))};
  std::vector<Vec> es;
  for (std::uint8_t x = 0; x < 3; ++x) {
    for (std::uint8_t y = 0; y < 3; ++y) {
      if (x == 0 && y == 0) continue;
      Vec e = scaled(f, x, unit_vector(n, 5));
      add_scaled(f, e, y, unit_vector(n, 6));
      es.push_back(e);
    }
  }
  const auto probe = orbit_probe(w, s, fixed, es);
  CHECK(probe.distinct == es.size());
  CHECK(probe.fixes_base);
  for (std::size_t i = 0; i < es.size(); ++i) CHECK(probe.images[i] == point(s.a, added(f, s.u, es[i])));
}

TEST_CASE("stabilizer residual") {
  const Field f(3);
  const auto w = canonical_w_instance(f);
  const std::size_t n = w.dim();
  const Vec z(n, 0);
  const Vec a = unit_vector(n, 0), b = unit_vector(n, 1), c = unit_vector(n, 2), d = unit_vector(n, 3);
  const std::vector<CoverPoint> pts{point(a, z), point(b, z), point(c, z), point(d, z)};
  CHECK(stabilizer_residual(w, pts, {z, z, z, z}).is_zero());

  const auto tally = stabilizer_scan(w);
  CHECK(tally.tuples == 81);
  CHECK(tally.zero == 1);
  CHECK(tally.zero_only_at_origin);

  // e1 = λa, e2 = λb telescopes to λ(a∧c + b∧d)
  for (std::uint8_t lambda = 1; lambda < 3; ++lambda) {
    CHECK(stabilizer_residual(w, pts, {scaled(f, lambda, a), scaled(f, lambda, b), z, z}).is_zero());
  }
  CHECK_FALSE(stabilizer_residual(w, pts, {a, z, z, z}).is_zero());

  try {
    stabilizer_residual(w, {point(a, z), point(b, z), point(d, z), point(c, z)}, {z, z, z, z});
    FAIL("expected not-on-W");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::not_on_w);
  }
}

TEST_CASE("stabilizer residual expands bilinearly") {
  const Field f(3);
  gen::Rng rng(75);
  const auto w = canonical_w_instance(f);
  const std::size_t n = w.dim();
  const Vec z(n, 0);
  const std::vector<CoverPoint> pts{point(unit_vector(n, 0), z), point(unit_vector(n, 1), z),
                                    point(unit_vector(n, 2), z), point(unit_vector(n, 3), z)};
  for (int i = 0; i < 200; ++i) {
    std::vector<Vec> e, e2, sum_shift;
    for (int j = 0; j < 4; ++j) {
      e.push_back(gen::vector(rng, f, n));
      e2.push_back(gen::vector(rng, f, n));
      sum_shift.push_back(added(f, e.back(), e2.back()));
    }
    Vec expected = added(f, stabilizer_residual(w, pts, e).representative, stabilizer_residual(w, pts, e2).representative);
    add_wedge(f, expected, 1, e[0], e2[2]);
    add_wedge(f, expected, 1, e2[0], e[2]);
    add_wedge(f, expected, 1, e[1], e2[3]);
    add_wedge(f, expected, 1, e2[1], e[3]);
    CHECK(stabilizer_residual(w, pts, sum_shift) == reduce_bracket(w, expected));
  }
}
