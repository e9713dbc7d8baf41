#pragma once
// Oracle-driven DFS guessing on top of the bounded Groebner engine: each node
// pins a prefix of guess variables, cheap elimination plus an oracle decide
// whether to attempt a full (time-capped) elimination or branch deeper, and
// the walk keeps exact tree statistics for cost accounting.

#include <chrono>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "multistep/gbengine.hpp"

namespace multistep {

// ---------------------------------------------------------------------------
// Oracles: fast predictors of whether a node's system is worth a full
// elimination attempt (tame) or should be split further (wild).
enum class OracleDecision { tame, wild };

struct OracleFn {
  std::string name;
  // Arguments: residual system at the node, number of pinned bits so far.
  std::function<OracleDecision(std::span<const BoolPoly>, std::size_t)> decide;
};

inline OracleFn oracle_t() {
  return {"t", [](std::span<const BoolPoly>, std::size_t) { return OracleDecision::tame; }};
}

inline OracleFn oracle_w() {
  return {"w", [](std::span<const BoolPoly>, std::size_t) { return OracleDecision::wild; }};
}

// Wild until at least `threshold` bits are pinned, tame afterwards.
inline OracleFn oracle_h(std::size_t threshold) {
  return {"h:" + std::to_string(threshold),
          [threshold](std::span<const BoolPoly>, std::size_t k) {
            return k < threshold ? OracleDecision::wild : OracleDecision::tame;
          }};
}

// Tame iff the residual system mentions at most `threshold` distinct variables.
inline OracleFn oracle_nrv(std::size_t threshold) {
  return {"nrv:" + std::to_string(threshold),
          [threshold](std::span<const BoolPoly> polys, std::size_t) {
            std::vector<VarId> vars;
            for (const BoolPoly& p : polys)
              for (const Monomial& m : p.terms()) vars.insert(vars.end(), m.begin(), m.end());
            std::sort(vars.begin(), vars.end());
            vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
            return vars.size() > threshold ? OracleDecision::wild : OracleDecision::tame;
          }};
}

namespace multisolve_detail {

inline std::size_t parse_threshold(const std::string& text, const std::string& spec) {
  if (text.empty()) throw std::invalid_argument("parse_oracle: missing threshold in '" + spec + "'");
  std::size_t value = 0;
  for (char c : text) {
    if (c < '0' || c > '9')
      throw std::invalid_argument("parse_oracle: bad threshold in '" + spec + "'");
    value = value * 10 + static_cast<std::size_t>(c - '0');
  }
  return value;
}

}  // namespace multisolve_detail

// Grammar: "t" | "w" | "h:<N>" | "nrv:<N>".
inline OracleFn parse_oracle(const std::string& spec) {
  if (spec == "t") return oracle_t();
  if (spec == "w") return oracle_w();
  if (spec.rfind("h:", 0) == 0)
    return oracle_h(multisolve_detail::parse_threshold(spec.substr(2), spec));
  if (spec.rfind("nrv:", 0) == 0)
    return oracle_nrv(multisolve_detail::parse_threshold(spec.substr(4), spec));
  throw std::invalid_argument("parse_oracle: unrecognized oracle spec '" + spec + "'");
}

// ---------------------------------------------------------------------------
// A guess: an ordered list of variables to pin, with values supplied for a
// (possibly empty) prefix; the DFS enumerates values for the remainder.
struct Guess {
  std::vector<VarId> order;
  std::vector<std::uint8_t> values;  // values[i] pins order[i]; size <= order.size()
};

// Pinning polynomials x + v for the valued prefix of the guess.
inline std::vector<BoolPoly> eval_set(std::span<const VarId> order,
                                      std::span<const std::uint8_t> values) {
  if (values.size() > order.size())
    throw std::invalid_argument("eval_set: more values than order entries");
  std::vector<BoolPoly> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    // x = v encoded as the vanishing polynomial x + v.
    BoolPoly p = BoolPoly::var(order[i]);
    if (values[i]) p = poly_add(std::move(p), BoolPoly::one());
    out.push_back(std::move(p));
  }
  return out;
}

inline std::vector<BoolPoly> eval_set(const Guess& g) {
  return eval_set(std::span<const VarId>(g.order.data(), g.order.size()),
                  std::span<const std::uint8_t>(g.values.data(), g.values.size()));
}

// ---------------------------------------------------------------------------
// Exact accounting of the explored guessing tree.
struct SolveTree {
  int q = 2;  // branching factor (bit guesses)
  std::uint64_t nodes = 0;
  std::uint64_t internal_nodes = 0;
  std::uint64_t leaves = 0;
  std::uint64_t predicted_tame = 0;  // oracle said tame (elimination attempted)
  std::uint64_t predicted_wild = 0;  // oracle said wild (branched without attempting)
  std::uint64_t computed_tame = 0;   // attempted eliminations that came back tame
  std::uint64_t computed_wild = 0;   // attempted eliminations that came back wild
  std::vector<std::uint64_t> nodes_at_depth;
  std::vector<std::uint64_t> computed_tame_at_depth;
  std::vector<std::uint64_t> computed_wild_at_depth;
  std::vector<std::uint64_t> predicted_wild_at_depth;
  std::vector<double> tame_gb_seconds;  // wall time per tame elimination
  std::vector<double> wild_gb_seconds;  // wall time per wild (failed/timed-out) elimination
  bool early_termination = false;       // a solution cut exploration short

  std::uint64_t tame_total() const { return computed_tame; }
  std::uint64_t wild_total() const { return predicted_wild + computed_wild; }
  int max_depth() const {
    return nodes_at_depth.empty() ? -1 : static_cast<int>(nodes_at_depth.size()) - 1;
  }
};

// Exact rational, kept reduced with positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
};

inline Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("make_rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

// For a complete q-ary guessing tree with L leaves: nodes N = (qL-1)/(q-1)
// and internal nodes M = (L-1)/(q-1); nullopt when L is not a valid leaf
// count for branching factor q.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> tree_counts(std::uint64_t leaves,
                                                                          int q = 2) {
  if (q < 2) throw std::invalid_argument("tree_counts: branching factor must be >= 2");
  if (leaves == 0) throw std::invalid_argument("tree_counts: leaf count must be positive");
  const auto step = static_cast<std::uint64_t>(q - 1);
  if ((leaves - 1) % step != 0) return std::nullopt;
  std::uint64_t internal = (leaves - 1) / step;
  return std::make_pair(static_cast<std::uint64_t>(q) * internal + 1, internal);
}

// Work saved by solving only the L leaves instead of all N nodes:
// N / L = (qL - 1) / (L(q-1)), returned exactly.
inline Rational speedup_ratio(std::uint64_t leaves, int q = 2) {
  if (q < 2) throw std::invalid_argument("speedup_ratio: branching factor must be >= 2");
  if (leaves == 0) throw std::invalid_argument("speedup_ratio: leaf count must be positive");
  return make_rational(static_cast<std::int64_t>(q) * static_cast<std::int64_t>(leaves) - 1,
                       static_cast<std::int64_t>(leaves) * (q - 1));
}

// The structural identities of a completely explored tree.
inline bool tree_verify(const SolveTree& t) {
  if (t.early_termination) return false;
  auto counts = tree_counts(t.leaves, t.q);
  if (!counts) return false;
  return t.nodes == counts->first && t.internal_nodes == counts->second &&
         t.nodes == t.internal_nodes + t.leaves;
}

// ---------------------------------------------------------------------------
struct SolveResult {
  std::vector<BoolPoly> basis;          // solved linear forms, or {1} if no solution
  std::optional<Assignment> solution;   // pinned values when basis != {1}
  SolveTree stats;
  int min_tame_depth = -1;  // over computed-tame nodes; -1 when none
  int max_tame_depth = -1;

  bool solved() const { return solution.has_value(); }
};

namespace multisolve_detail {

struct StopWatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

inline void bump_at(std::vector<std::uint64_t>& hist, std::size_t depth) {
  if (hist.size() <= depth) hist.resize(depth + 1, 0);
  ++hist[depth];
}

inline bool is_conflict(const std::vector<BoolPoly>& basis) {
  return basis.size() == 1 && basis[0].is_one();
}

// Interreduce a set of degree <= 1 polynomials into a canonical solved basis;
// {1} when they are jointly inconsistent.
inline std::vector<BoolPoly> linear_closure(std::span<const BoolPoly> a,
                                            std::span<const BoolPoly> b) {
  LinearBasis lb;
  for (std::span<const BoolPoly> part : {a, b})
    for (const BoolPoly& p : part) {
      if (p.is_zero()) continue;
      if (lb.insert(p) == LinearBasis::Insert::inconsistent) return {BoolPoly::one()};
    }
  return lb.polys();
}

struct SolveCtx {
  const PolySystem* system = nullptr;
  const OracleFn* oracle = nullptr;
  int d1 = 0;
  int d2 = 2;
  double tau = 1.0;
  std::size_t guessed_base = 0;
  std::vector<VarId> order;
  std::vector<std::uint8_t> vals;
  SolveTree* stats = nullptr;
  int min_tame_depth = -1;
  int max_tame_depth = -1;
};

inline std::vector<BoolPoly> solve_node(SolveCtx& c, std::size_t depth) {
  SolveTree& st = *c.stats;
  ++st.nodes;
  bump_at(st.nodes_at_depth, depth);

  bool branch = false;
  std::vector<BoolPoly> leaf_basis;
  {
    std::span<const BoolPoly> sys = c.system->polys();
    std::vector<BoolPoly> joined;
    joined.reserve(c.vals.size() + sys.size());
    for (std::size_t i = 0; i < c.vals.size(); ++i) {
      BoolPoly pin = BoolPoly::var(c.order[i]);
      if (c.vals[i]) pin = poly_add(std::move(pin), BoolPoly::one());
      joined.push_back(std::move(pin));
    }
    joined.insert(joined.end(), sys.begin(), sys.end());

    GbElimLinResult pre = gb_elim_lin(std::span<const BoolPoly>(joined.data(), joined.size()),
                                      c.d1, c.system->nvars());
    if (maxdeg(pre.residual) <= 1) {
      leaf_basis = linear_closure(pre.linear, pre.residual);
    } else if (c.vals.size() == c.order.size()) {
      // Every variable is pinned yet the raw set was passed through nonlinear
      // (d1 = 0): settle the leaf by direct evaluation.
      Assignment a(c.system->nvars());
      for (std::size_t i = 0; i < c.order.size(); ++i) a.set(c.order[i], c.vals[i] != 0);
      bool consistent = true;
      for (const BoolPoly& p : sys)
        if (evaluate(p, a)) {
          consistent = false;
          break;
        }
      if (consistent) {
        std::vector<BoolPoly> pins = eval_set(c.order, c.vals);
        leaf_basis =
            linear_closure(std::span<const BoolPoly>(pins.data(), pins.size()), {});
      } else {
        leaf_basis = {BoolPoly::one()};
      }
    } else {
      OracleDecision dec =
          c.oracle->decide(std::span<const BoolPoly>(pre.residual.data(), pre.residual.size()),
                           c.guessed_base + c.vals.size());
      if (dec == OracleDecision::wild) {
        ++st.predicted_wild;
        bump_at(st.predicted_wild_at_depth, depth);
        branch = true;
      } else {
        ++st.predicted_tame;
        StopWatch watch;
        GbOutcome out = groebner_safe(
            std::span<const BoolPoly>(pre.residual.data(), pre.residual.size()), c.d2, c.tau,
            c.system->nvars());
        double secs = watch.seconds();
        if (out.tame()) {
          ++st.computed_tame;
          bump_at(st.computed_tame_at_depth, depth);
          st.tame_gb_seconds.push_back(secs);
          int di = static_cast<int>(depth);
          if (c.min_tame_depth < 0 || di < c.min_tame_depth) c.min_tame_depth = di;
          if (di > c.max_tame_depth) c.max_tame_depth = di;
          leaf_basis = linear_closure(pre.linear, out.basis);
        } else {
          ++st.computed_wild;
          bump_at(st.computed_wild_at_depth, depth);
          st.wild_gb_seconds.push_back(secs);
          branch = true;
        }
      }
    }
  }

  if (!branch) {
    ++st.leaves;
    return leaf_basis;
  }

  ++st.internal_nodes;
  for (std::uint8_t bit = 0; bit <= 1; ++bit) {
    c.vals.push_back(bit);
    std::vector<BoolPoly> sub = solve_node(c, depth + 1);
    c.vals.pop_back();
    if (!is_conflict(sub)) {
      if (bit == 0) st.early_termination = true;
      return sub;
    }
  }
  return {BoolPoly::one()};
}

}  // namespace multisolve_detail

// DFS key search. `guess.values` pins a prefix of `guess.order`; the walk
// branches over the remaining order entries (extended with any registry
// variables missing from it, ascending) until nodes settle as solved or
// inconsistent. `guessed_base` offsets the bit count reported to the oracle,
// for trees that logically continue an outer guess.
inline SolveResult multi_solve(const PolySystem& system, const Guess& guess,
                               const OracleFn& oracle, int d1, int d2, double tau_seconds,
                               std::size_t guessed_base = 0) {
  if (!system.registry()) throw std::invalid_argument("multi_solve: system lacks a registry");
  if (!oracle.decide) throw std::invalid_argument("multi_solve: oracle is empty");
  if (d1 < 0) throw std::invalid_argument("multi_solve: d1 must be >= 0");
  const int sys_deg = system.max_degree();
  if (d2 < d1 || d2 < sys_deg)
    throw std::invalid_argument("multi_solve: need d2 >= max(system degree, d1)");
  if (tau_seconds <= 0) throw std::invalid_argument("multi_solve: tau must be positive");
  if (guess.values.size() > guess.order.size())
    throw std::invalid_argument("multi_solve: more guess values than order entries");

  const std::size_t nvars = system.nvars();
  std::vector<bool> in_order(nvars, false);
  for (VarId v : guess.order) {
    if (v >= nvars) throw std::invalid_argument("multi_solve: guess variable out of range");
    if (in_order[v]) throw std::invalid_argument("multi_solve: duplicate variable in guess order");
    in_order[v] = true;
  }
  for (std::uint8_t b : guess.values)
    if (b > 1) throw std::invalid_argument("multi_solve: guess values must be bits");

  multisolve_detail::SolveCtx ctx;
  ctx.system = &system;
  ctx.oracle = &oracle;
  ctx.d1 = d1;
  ctx.d2 = d2;
  ctx.tau = tau_seconds;
  ctx.guessed_base = guessed_base;
  ctx.order = guess.order;
  for (VarId v = 0; v < nvars; ++v)
    if (!in_order[v]) ctx.order.push_back(v);
  ctx.vals.assign(guess.values.begin(), guess.values.end());

  SolveTree stats;
  ctx.stats = &stats;
  std::vector<BoolPoly> basis = multisolve_detail::solve_node(ctx, 0);

  SolveResult res;
  res.stats = std::move(stats);
  res.min_tame_depth = ctx.min_tame_depth;
  res.max_tame_depth = ctx.max_tame_depth;
  if (!multisolve_detail::is_conflict(basis)) {
    Assignment a(nvars);
    LinearBasis lb;
    for (const BoolPoly& p : basis) lb.insert(p);
    lb.pin_solution(a);
    res.solution = std::move(a);
  }
  res.basis = std::move(basis);
  return res;
}

// Exhaustive variety enumeration for cross-checking small systems.
inline std::vector<Assignment> brute_force_variety(const PolySystem& system) {
  const std::size_t n = system.nvars();
  if (n > 24) throw std::invalid_argument("brute_force_variety: too many variables (max 24)");
  std::vector<Assignment> out;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t code = 0; code < total; ++code) {
    Assignment a(n);
    for (std::size_t v = 0; v < n; ++v) a.set(static_cast<VarId>(v), (code >> v) & 1);
    bool ok = true;
    for (const BoolPoly& p : system.polys())
      if (evaluate(p, a)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(std::move(a));
  }
  return out;
}

}  // namespace multistep
