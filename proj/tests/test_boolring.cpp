// Boolean quotient-ring arithmetic: monomials, polynomials, evaluation,
// linear substitution, degree conventions, monomial ordering, and the ANF
// text format.

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "multistep/anf_io.hpp"
#include "multistep/boolring.hpp"
#include "test_util.hpp"

using namespace multistep;
using testutil::mono;
using testutil::pin;
using testutil::poly;

namespace {
constexpr VarId X1 = 0, X2 = 1, X3 = 2, X7 = 6;
}

TEST_CASE("monomial product absorbs repeated variables") {
  CHECK(mono_mul(mono({X1}), mono({X1})) == mono({X1}));
  CHECK(mono_mul(mono({X1}), mono({X2})) == mono({X1, X2}));
  CHECK(mono_mul(Monomial{}, mono({X3, X7})) == mono({X3, X7}));
}

TEST_CASE("monomial product is commutative, associative, idempotent") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> var_dist(0, 7);
  auto random_mono = [&] {
    std::vector<VarId> vs;
    for (int i = 0, d = static_cast<int>(rng() % 4); i < d; ++i)
      vs.push_back(static_cast<VarId>(var_dist(rng)));
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return Monomial(vs);
  };
  for (int trial = 0; trial < 200; ++trial) {
    Monomial a = random_mono(), b = random_mono(), c = random_mono();
    CHECK(mono_mul(a, b) == mono_mul(b, a));
    CHECK(mono_mul(mono_mul(a, b), c) == mono_mul(a, mono_mul(b, c)));
    CHECK(mono_mul(a, a) == a);
  }
}

TEST_CASE("polynomial addition is symmetric difference") {
  BoolPoly a = poly({{X1}, {X2}});
  BoolPoly b = poly({{X2}, {}});
  CHECK(poly_add(a, b) == poly({{X1}, {}}));
  CHECK(poly_add(a, a).is_zero());
  CHECK(poly_add(a, BoolPoly::zero()) == a);
}

TEST_CASE("polynomial product follows ring laws") {
  BoolPoly x1p1 = poly({{X1}, {}});
  CHECK(poly_mul(x1p1, x1p1) == x1p1);
  CHECK(poly_mul(BoolPoly::var(X1), poly({{X1}, {X2}})) == poly({{X1}, {X1, X2}}));
  CHECK(poly_mul(BoolPoly::zero(), x1p1).is_zero());
}

TEST_CASE("random polynomials satisfy p+p=0 and p*p=p") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    BoolPoly p = testutil::random_poly(rng, 8, 3, 6);
    CHECK(poly_add(p, p).is_zero());
    CHECK(poly_mul(p, p) == p);
  }
}

TEST_CASE("evaluation on fixed points") {
  Assignment a(3);
  a.set(X1, true);
  a.set(X2, true);
  a.set(X3, true);
  CHECK_FALSE(evaluate(poly({{X1, X2}, {X3}}), a));
  CHECK(evaluate(BoolPoly::one(), a));
}

TEST_CASE("evaluation is a ring homomorphism") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    BoolPoly p = testutil::random_poly(rng, 6, 3, 5);
    BoolPoly q = testutil::random_poly(rng, 6, 3, 5);
    Assignment a = testutil::assignment_from_code(6, rng() & 63);
    CHECK(evaluate(poly_add(p, q), a) == (evaluate(p, a) != evaluate(q, a)));
    CHECK(evaluate(poly_mul(p, q), a) == (evaluate(p, a) && evaluate(q, a)));
  }
}

TEST_CASE("evaluation requires every occurring variable") {
  Assignment a(3);
  a.set(X1, true);
  CHECK_THROWS_AS(evaluate(poly({{X1, X2}}), a), std::invalid_argument);
}

TEST_CASE("linear substitution eliminates leading variables") {
  CHECK(substitute_linear(poly({{X1, X2}}), LinearRules::from_polys({pin(X1, true)})) ==
        BoolPoly::var(X2));
  CHECK(substitute_linear(poly({{X1, X2}}), LinearRules::from_polys({pin(X1, false)})).is_zero());
  // x1 <- x2 sends x1x2 + x3 to x2x2 + x3 = x2 + x3.
  CHECK(substitute_linear(poly({{X1, X2}, {X3}}),
                          LinearRules::from_polys({poly({{X1}, {X2}})})) == poly({{X2}, {X3}}));
}

TEST_CASE("linear substitution agrees with the original wherever the rules hold") {
  std::mt19937_64 rng(4);
  const std::size_t n = 6;
  for (int trial = 0; trial < 50; ++trial) {
    BoolPoly p = testutil::random_poly(rng, n, 3, 6);
    // Rules x1 <- tail over the remaining variables.
    BoolPoly tail = testutil::random_poly(rng, n - 1, 1, 3);
    std::vector<Monomial> shifted;
    for (const Monomial& m : tail.terms()) {
      std::vector<VarId> vs(m.begin(), m.end());
      for (VarId& v : vs) ++v;
      shifted.emplace_back(std::move(vs));
    }
    BoolPoly rule = poly_add(BoolPoly::var(0), BoolPoly::from_terms(std::move(shifted)));
    BoolPoly reduced = substitute_linear(p, LinearRules::from_polys({rule}));
    for (std::uint64_t code = 0; code < (1u << n); ++code) {
      Assignment a = testutil::assignment_from_code(n, code);
      if (evaluate(rule, a)) continue;  // assignment violates the rule
      CHECK(evaluate(reduced, a) == evaluate(p, a));
    }
  }
}

TEST_CASE("linear substitution rejects malformed rule sets") {
  CHECK_THROWS_AS(LinearRules::from_polys({poly({{X1, X2}})}), std::invalid_argument);
  // Two rules with the same leading variable are not interreduced.
  CHECK_THROWS_AS(LinearRules::from_polys({pin(X1, true), pin(X1, false)}), std::invalid_argument);
}

TEST_CASE("maximum degree conventions") {
  std::vector<BoolPoly> g1{poly({{X1}, {}}), poly({{X2, X3}})};
  CHECK(maxdeg(g1) == 2);
  std::vector<BoolPoly> g2{BoolPoly::one()};
  CHECK(maxdeg(g2) == 0);
  std::vector<BoolPoly> solved{pin(X1, true), pin(X2, false), pin(X3, true)};
  CHECK(maxdeg(solved) == 1);
  CHECK(maxdeg(std::vector<BoolPoly>{}) == -1);
  CHECK(maxdeg(std::vector<BoolPoly>{BoolPoly::zero()}) == -1);
  CHECK(BoolPoly::zero().degree() == -1);
}

TEST_CASE("graded reverse-lexicographic order on three variables") {
  // Degree dominates; within a degree, the monomial whose trailing support
  // differs by a larger variable id is smaller. With x1 > x2 > x3 the full
  // descending chain over squarefree monomials is fixed:
  const std::vector<Monomial> descending = {
      mono({X1, X2, X3}), mono({X1, X2}), mono({X1, X3}), mono({X2, X3}),
      mono({X1}),         mono({X2}),     mono({X3}),     Monomial{},
  };
  for (std::size_t i = 0; i < descending.size(); ++i)
    for (std::size_t j = 0; j < descending.size(); ++j) {
      const int cmp = grevlex_cmp(descending[i], descending[j]);
      if (i < j) CHECK(cmp > 0);
      if (i == j) CHECK(cmp == 0);
      if (i > j) CHECK(cmp < 0);
    }
}

TEST_CASE("leading monomial follows the order") {
  CHECK(poly({{X1}, {X2, X3}, {}}).leading_monomial() == mono({X2, X3}));
  CHECK(poly({{X3}, {}}).leading_monomial() == mono({X3}));
}

TEST_CASE("registry maps names to ids and validates") {
  auto reg = testutil::vars(3);
  CHECK(reg->size() == 3);
  CHECK(reg->name(0) == "x1");
  CHECK(reg->find("x3") == std::optional<VarId>{2});
  CHECK_FALSE(reg->find("y").has_value());
  CHECK(VarRegistry::valid_name("k17"));
  CHECK(VarRegistry::valid_name("_a2"));
  CHECK_FALSE(VarRegistry::valid_name("2x"));
  CHECK_FALSE(VarRegistry::valid_name(""));
  CHECK_FALSE(VarRegistry::valid_name("a-b"));
  CHECK_THROWS_AS(reg->name(3), std::out_of_range);
}

TEST_CASE("assignment tracks partial state") {
  Assignment a(4);
  CHECK(a.domain_size() == 4);
  CHECK_FALSE(a.is_set(2));
  a.set(2, true);
  CHECK(a.is_set(2));
  CHECK(a.get(2));
  CHECK(a.assigned_count() == 1);
  a.unset(2);
  CHECK_FALSE(a.is_set(2));
  CHECK_THROWS_AS(a.get(2), std::invalid_argument);
  CHECK_THROWS_AS(a.set(4, true), std::out_of_range);
}

TEST_CASE("anf text round-trips polynomials and tags") {
  AnfDocument doc;
  doc.registry = testutil::vars(3);
  doc.polys = {poly({{X1, X2}, {X3}, {}}), BoolPoly::zero(), pin(X2, true)};
  doc.tags = {{1, 2, "sbox"}, {3, 2, "final"}};
  std::stringstream ss;
  write_anf(ss, doc);

  AnfDocument back = read_anf(ss);
  REQUIRE(back.registry->size() == 3);
  CHECK(back.registry->name(1) == "x2");
  REQUIRE(back.polys.size() == 3);
  CHECK(back.polys[0] == doc.polys[0]);
  CHECK(back.polys[1].is_zero());
  CHECK(back.polys[2] == doc.polys[2]);
  REQUIRE(back.tags.size() == 2);
  CHECK(back.tags[0].ordinal == 1);
  CHECK(back.tags[0].round == 2);
  CHECK(back.tags[0].kind == "sbox");
  CHECK(back.tags[1].ordinal == 3);
  CHECK(back.tags[1].kind == "final");
}

TEST_CASE("anf parser tolerates whitespace and comments") {
  std::stringstream ss(
      "# vars: 2\n"
      "# var 0 a\n"
      "# var 1 b\n"
      "# free comment\n"
      "\n"
      "  a * b +  1 \n"
      "a+ b\n");
  AnfDocument doc = read_anf(ss);
  REQUIRE(doc.polys.size() == 2);
  CHECK(doc.polys[0] == poly({{0, 1}, {}}));
  CHECK(doc.polys[1] == poly({{0}, {1}}));
}

TEST_CASE("anf parser reports malformed input") {
  auto parse = [](const std::string& text) {
    std::stringstream ss(text);
    return read_anf(ss);
  };
  CHECK_THROWS_AS(parse("a + b\n"), std::runtime_error);  // missing header
  CHECK_THROWS_AS(parse("# vars: 2\n# var 0 a\na\n"), std::runtime_error);  // undeclared variable
  CHECK_THROWS_AS(parse("# vars: 1\n# var 0 a\nb\n"), std::runtime_error);  // unknown name
  CHECK_THROWS_AS(parse("# vars: 1\n# var 0 a\na +\n"), std::runtime_error);  // dangling '+'
  CHECK_THROWS_AS(parse("# vars: 1\n# var 0 a\n1 * a\n"), std::runtime_error);  // constant product
}

TEST_CASE("polynomial rendering uses registry names") {
  auto reg = testutil::vars(3);
  CHECK(to_string(poly({{X1, X2}, {X3}, {}}), *reg) == "x1*x2 + x3 + 1");
  CHECK(to_string(BoolPoly::zero(), *reg) == "0");
  CHECK(to_string(BoolPoly::one(), *reg) == "1");
}
