// Bit-packed GF(2) linear algebra: reduced row echelon form with cooperative
// deadlines, and Macaulay matrix construction from polynomial sets.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "multistep/gf2linalg.hpp"
#include "test_util.hpp"

using namespace multistep;
using testutil::mono;
using testutil::poly;

namespace {

constexpr VarId X1 = 0, X2 = 1, X3 = 2;

BitMatrix from_rows(std::size_t cols, const std::vector<std::vector<int>>& rows) {
  BitMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (rows[r][c]) m.set(r, c, true);
  return m;
}

std::vector<std::vector<int>> to_rows(const BitMatrix& m) {
  std::vector<std::vector<int>> out(m.rows(), std::vector<int>(m.cols(), 0));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m.get(r, c) ? 1 : 0;
  return out;
}

// All GF(2) combinations of the rows of m (m must be small).
std::set<std::vector<int>> row_span(const BitMatrix& m) {
  std::set<std::vector<int>> span;
  const std::size_t r = m.rows();
  REQUIRE(r <= 12);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
    std::vector<int> acc(m.cols(), 0);
    for (std::size_t i = 0; i < r; ++i)
      if ((mask >> i) & 1)
        for (std::size_t c = 0; c < m.cols(); ++c) acc[c] ^= m.get(i, c) ? 1 : 0;
    span.insert(std::move(acc));
  }
  return span;
}

// Multiset of the nonzero polynomials encoded by the matrix rows.
std::vector<BoolPoly> sorted_polys(std::vector<BoolPoly> ps) {
  std::sort(ps.begin(), ps.end(), [](const BoolPoly& a, const BoolPoly& b) {
    return poly_cmp(a, b) < 0;
  });
  return ps;
}

}  // namespace

TEST_CASE("rref collapses dependent rows") {
  BitMatrix m = from_rows(2, {{1, 1}, {1, 1}});
  auto res = rref(std::move(m), Deadline::none());
  REQUIRE(res.has_value());
  CHECK(to_rows(res->reduced) == std::vector<std::vector<int>>{{1, 1}});
  CHECK(res->pivots == std::vector<std::size_t>{0});
}

TEST_CASE("rref fixes the identity matrix") {
  const std::size_t n = 9;
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  auto res = rref(m, Deadline::none());
  REQUIRE(res.has_value());
  CHECK(to_rows(res->reduced) == to_rows(m));
  for (std::size_t i = 0; i < n; ++i) CHECK(res->pivots[i] == i);
}

TEST_CASE("rref reduces an invertible matrix to the identity") {
  // Built invertible by construction: random row operations applied to I.
  std::mt19937_64 rng(7);
  const std::size_t n = 64;
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  for (int step = 0; step < 4000; ++step) {
    std::size_t a = rng() % n, b = rng() % n;
    if (a != b) m.xor_rows(a, b);  // row a += row b keeps the matrix invertible
  }
  auto res = rref(m, Deadline::none());
  REQUIRE(res.has_value());
  REQUIRE(res->reduced.rows() == n);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(res->pivots[i] == i);
    for (std::size_t c = 0; c < n; ++c) CHECK(res->reduced.get(i, c) == (i == c));
  }
}

TEST_CASE("rref is idempotent and preserves the row space") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rows = 2 + rng() % 6, cols = 2 + rng() % 7;
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (rng() & 1) m.set(r, c, true);
    auto once = rref(m, Deadline::none());
    REQUIRE(once.has_value());
    auto twice = rref(once->reduced, Deadline::none());
    REQUIRE(twice.has_value());
    CHECK(to_rows(twice->reduced) == to_rows(once->reduced));
    CHECK(twice->pivots == once->pivots);
    CHECK(row_span(m) == row_span(once->reduced));
  }
}

TEST_CASE("rref pivot columns strictly increase and rows are fully reduced") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rows = 3 + rng() % 8, cols = 3 + rng() % 10;
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (rng() & 1) m.set(r, c, true);
    auto res = rref(std::move(m), Deadline::none());
    REQUIRE(res.has_value());
    const auto& piv = res->pivots;
    REQUIRE(piv.size() == res->reduced.rows());
    for (std::size_t i = 0; i + 1 < piv.size(); ++i) CHECK(piv[i] < piv[i + 1]);
    // Each pivot column holds a single 1 (its own row).
    for (std::size_t i = 0; i < piv.size(); ++i)
      for (std::size_t r = 0; r < res->reduced.rows(); ++r)
        CHECK(res->reduced.get(r, piv[i]) == (r == i));
  }
}

TEST_CASE("an expired deadline aborts elimination") {
  const std::size_t n = 32;
  std::mt19937_64 rng(10);
  BitMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (rng() & 1) m.set(r, c, true);
  Deadline dl = Deadline::after(0.0);
  CHECK_FALSE(rref(std::move(m), dl).has_value());
  CHECK_FALSE(Deadline::none().expired());
}

TEST_CASE("macaulay matrix of a single linear polynomial") {
  std::vector<BoolPoly> polys{poly({{X1}, {}})};
  MacaulayMatrix mm = macaulay_build(polys, 1, 1);
  CHECK(mm.matrix.rows() == 1);
  REQUIRE(mm.index.size() == 2);
  CHECK(mm.index.monomial(0) == mono({X1}));
  CHECK(mm.index.monomial(1) == Monomial{});
  CHECK(mm.matrix.get(0, 0));
  CHECK(mm.matrix.get(0, 1));
}

TEST_CASE("degree-saturated input admits only the trivial multiplier") {
  std::vector<BoolPoly> polys{poly({{X1, X2}, {X3}})};
  MacaulayMatrix mm = macaulay_build(polys, 2, 3);
  CHECK(mm.matrix.rows() == 1);
  REQUIRE(mm.index.size() == 2);
  CHECK(mm.index.monomial(0) == mono({X1, X2}));
  CHECK(mm.index.monomial(1) == mono({X3}));
}

TEST_CASE("multiplier rows match independent polynomial products") {
  // p = x1 + x2 at bound 2 over 3 variables: multipliers 1, x1, x2, x3.
  std::vector<BoolPoly> polys{poly({{X1}, {X2}})};
  MacaulayMatrix mm = macaulay_build(polys, 2, 3, MultiplierRule::degree_sum);
  std::vector<BoolPoly> rows = extract_polys(mm.matrix, mm.index);

  std::vector<BoolPoly> expected;
  for (const Monomial& m : {Monomial{}, mono({X1}), mono({X2}), mono({X3})})
    expected.push_back(poly_mul(polys[0], m));
  CHECK(sorted_polys(rows) == sorted_polys(expected));
}

TEST_CASE("absorbing multipliers match a brute-force enumeration") {
  std::mt19937_64 rng(11);
  const std::size_t n = 4;
  for (int trial = 0; trial < 40; ++trial) {
    BoolPoly p = testutil::random_poly(rng, n, 2, 4);
    if (p.is_zero()) continue;
    const int d = 3;
    std::vector<BoolPoly> polys{p};
    MacaulayMatrix mm = macaulay_build(polys, d, n, MultiplierRule::absorbing);
    std::vector<BoolPoly> rows = extract_polys(mm.matrix, mm.index);

    // Oracle: try every squarefree monomial over all n variables.
    std::vector<BoolPoly> expected;
    for (std::uint64_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<VarId> vs;
      for (std::size_t v = 0; v < n; ++v)
        if ((mask >> v) & 1) vs.push_back(static_cast<VarId>(v));
      Monomial mult(vs);
      bool fits = true;
      for (const Monomial& t : p.terms())
        if (mono_mul(mult, t).degree() > static_cast<std::size_t>(d)) {
          fits = false;
          break;
        }
      if (!fits) continue;
      BoolPoly prod = poly_mul(p, mult);
      if (!prod.is_zero()) expected.push_back(std::move(prod));
    }
    CHECK(sorted_polys(rows) == sorted_polys(expected));
  }
}

TEST_CASE("macaulay columns are exactly the occurring monomials in order") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<BoolPoly> polys;
    for (int i = 0; i < 4; ++i) polys.push_back(testutil::random_poly(rng, 5, 2, 4));
    MacaulayMatrix mm = macaulay_build(polys, 3, 5);
    std::vector<BoolPoly> rows = extract_polys(mm.matrix, mm.index);
    std::set<std::string> occurring;
    auto reg = testutil::vars(5);
    for (const BoolPoly& r : rows)
      for (const Monomial& m : r.terms()) occurring.insert(to_string(m, *reg));
    std::set<std::string> columns;
    for (std::size_t c = 0; c < mm.index.size(); ++c)
      columns.insert(to_string(mm.index.monomial(c), *reg));
    CHECK(columns == occurring);
    for (std::size_t c = 0; c + 1 < mm.index.size(); ++c)
      CHECK(grevlex_cmp(mm.index.monomial(c), mm.index.monomial(c + 1)) > 0);
    for (std::size_t c = 0; c < mm.index.size(); ++c)
      CHECK(mm.index.column_of(mm.index.monomial(c)) == c);
  }
}

TEST_CASE("macaulay construction rejects inputs above the bound") {
  std::vector<BoolPoly> polys{poly({{X1, X2, X3}})};
  CHECK_THROWS_AS(macaulay_build(polys, 2, 3), std::invalid_argument);
}

TEST_CASE("row encoding round-trips through extraction") {
  BitMatrix m(2, 2);
  m.set(0, 0, true);
  m.set(0, 1, true);
  // second row left zero: dropped on extraction
  MacaulayIndex idx = MacaulayIndex::from_monomials({mono({X1}), Monomial{}});
  std::vector<BoolPoly> ps = extract_polys(m, idx);
  REQUIRE(ps.size() == 1);
  CHECK(ps[0] == poly({{X1}, {}}));
}

TEST_CASE("extraction recovers every input polynomial") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<BoolPoly> polys;
    for (int i = 0; i < 5; ++i) {
      BoolPoly p = testutil::random_poly(rng, 6, 3, 5);
      if (!p.is_zero()) polys.push_back(p);
    }
    if (polys.empty()) continue;
    MacaulayMatrix mm = macaulay_build(polys, 3, 6);
    std::vector<BoolPoly> rows = extract_polys(mm.matrix, mm.index);
    for (const BoolPoly& p : polys)
      CHECK(std::find(rows.begin(), rows.end(), p) != rows.end());
  }
}

TEST_CASE("eliminated rows stay inside the input ideal") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 6;
    std::vector<BoolPoly> polys;
    for (int i = 0; i < 4; ++i) polys.push_back(testutil::random_poly(rng, n, 2, 4));
    MacaulayMatrix mm = macaulay_build(polys, 3, n);
    auto res = rref(std::move(mm.matrix), Deadline::none());
    REQUIRE(res.has_value());
    std::vector<BoolPoly> out = extract_polys(res->reduced, mm.index);

    // Every output must vanish wherever all inputs vanish.
    for (std::uint64_t code = 0; code < (1u << n); ++code) {
      Assignment a = testutil::assignment_from_code(n, code);
      bool on_variety = true;
      for (const BoolPoly& p : polys)
        if (evaluate(p, a)) {
          on_variety = false;
          break;
        }
      if (!on_variety) continue;
      for (const BoolPoly& p : out) CHECK_FALSE(evaluate(p, a));
    }
  }
}
