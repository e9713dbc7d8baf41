#pragma once
// Shared helpers for the test suite: compact polynomial builders over a small
// registry, random generators, and brute-force evaluation oracles.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "multistep/boolring.hpp"
#include "multistep/gbengine.hpp"

namespace testutil {

using namespace multistep;

// Registry with variables named x1..xn (VarId i holds "x<i+1>").
inline std::shared_ptr<const VarRegistry> vars(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return std::make_shared<VarRegistry>(std::move(names));
}

inline Monomial mono(std::initializer_list<VarId> vs) { return Monomial(std::vector<VarId>(vs)); }

// Polynomial from a list of monomials, each given as its variable list; an
// empty list denotes the constant monomial 1.
inline BoolPoly poly(std::initializer_list<std::initializer_list<VarId>> monos) {
  std::vector<Monomial> terms;
  for (const auto& vs : monos) terms.emplace_back(std::vector<VarId>(vs));
  return BoolPoly::from_terms(std::move(terms));
}

// The pinning polynomial x + c.
inline BoolPoly pin(VarId v, bool c) {
  BoolPoly p = BoolPoly::var(v);
  if (c) p = poly_add(p, BoolPoly::one());
  return p;
}

// Uniform random polynomial: `terms` monomials of degree <= maxdeg over n
// variables (duplicates cancel, so the result may have fewer terms).
inline BoolPoly random_poly(std::mt19937_64& rng, std::size_t n, int maxdeg, std::size_t terms) {
  std::vector<Monomial> monos;
  std::uniform_int_distribution<int> deg_dist(0, maxdeg);
  std::uniform_int_distribution<std::size_t> var_dist(0, n - 1);
  for (std::size_t t = 0; t < terms; ++t) {
    int d = deg_dist(rng);
    std::vector<VarId> vs;
    for (int i = 0; i < d; ++i) vs.push_back(static_cast<VarId>(var_dist(rng)));
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    monos.emplace_back(std::move(vs));
  }
  return BoolPoly::from_terms(std::move(monos));
}

// Total assignment for n variables from the low n bits of `code` (bit v of
// code = value of VarId v).
inline Assignment assignment_from_code(std::size_t n, std::uint64_t code) {
  Assignment a(n);
  for (std::size_t v = 0; v < n; ++v) a.set(static_cast<VarId>(v), (code >> v) & 1);
  return a;
}

// All points of F_2^n satisfying every polynomial (independent of the
// library's own brute_force_variety: plain evaluate-and-filter).
inline std::vector<std::uint64_t> variety_codes(std::span<const BoolPoly> polys, std::size_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    Assignment a = assignment_from_code(n, code);
    bool ok = true;
    for (const BoolPoly& p : polys)
      if (evaluate(p, a)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(code);
  }
  return out;
}

inline std::vector<std::uint64_t> variety_codes(const PolySystem& sys) {
  return variety_codes(sys.polys(), sys.nvars());
}

// Random system of `count` polynomials over n vars. When `plant` is set, each
// polynomial's constant term is adjusted to vanish at the planted point, so
// the variety is nonempty by construction.
//
// The per-poly term count alternates terms/terms+1: every monomial evaluates
// to 1 at the all-ones point and XOR-cancellation preserves parity, so a
// fixed even count would make the all-ones point a solution of every system.
inline PolySystem random_system(std::mt19937_64& rng, std::size_t n, std::size_t count, int maxdeg,
                                std::size_t terms, const std::uint64_t* plant = nullptr) {
  PolySystem sys(vars(n));
  for (std::size_t i = 0; i < count; ++i) {
    BoolPoly p = random_poly(rng, n, maxdeg, terms + i % 2);
    if (plant) {
      Assignment a = assignment_from_code(n, *plant);
      if (evaluate(p, a)) p = poly_add(p, BoolPoly::one());
    }
    sys.insert(p);
  }
  return sys;
}

}  // namespace testutil
