#pragma once
// Degree-bounded Groebner elimination for Boolean polynomial systems:
// iterated Macaulay linearization + linear back-substitution to a pivot
// fixpoint, with a cooperative timeout that classifies runs tame/wild.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "multistep/boolring.hpp"
#include "multistep/gf2linalg.hpp"

namespace multistep {

// Ordered multiset of nonzero polynomials over a shared registry.
class PolySystem {
 public:
  PolySystem() = default;
  explicit PolySystem(std::shared_ptr<const VarRegistry> registry) : registry_(std::move(registry)) {}

  // Zero polynomials are dropped silently.
  void insert(BoolPoly p) {
    if (!p.is_zero()) polys_.push_back(std::move(p));
  }
  void insert_all(std::span<const BoolPoly> ps) {
    for (const BoolPoly& p : ps) insert(p);
  }

  std::span<const BoolPoly> polys() const { return {polys_.data(), polys_.size()}; }
  std::size_t size() const { return polys_.size(); }
  const std::shared_ptr<const VarRegistry>& registry() const { return registry_; }
  std::size_t nvars() const { return registry_ ? registry_->size() : 0; }
  int max_degree() const { return maxdeg(polys()); }

 private:
  std::shared_ptr<const VarRegistry> registry_;
  std::vector<BoolPoly> polys_;
};

// ---------------------------------------------------------------------------
// LinearBasis: fully interreduced solved forms x_lead = tail with an
// occurrence index so inserts back-substitute in time proportional to the
// affected tails.
class LinearBasis {
 public:
  enum class Insert { added, redundant, inconsistent };

  bool inconsistent() const { return inconsistent_; }
  std::size_t size() const { return tails_.size(); }
  bool empty() const { return tails_.empty(); }

  const BoolPoly* tail_for(VarId v) const {
    auto it = tails_.find(v);
    return it == tails_.end() ? nullptr : &it->second;
  }

  // Normal form modulo the basis (any degree).
  BoolPoly reduce(const BoolPoly& p) const { return substitute_linear_with(p, *this); }

  // p must have degree <= 1.
  Insert insert(const BoolPoly& p) {
    if (inconsistent_) return Insert::inconsistent;
    if (p.degree() > 1) throw std::invalid_argument("LinearBasis: insert requires degree <= 1");
    BoolPoly q = reduce(p);
    if (q.is_zero()) return Insert::redundant;
    if (q.is_one()) {
      inconsistent_ = true;
      return Insert::inconsistent;
    }
    VarId lead = q.leading_monomial()[0];
    BoolPoly tail = poly_add(q, BoolPoly::var(lead));
    // Back-substitute the new rule into every tail that mentions `lead`.
    auto occ = occurs_.find(lead);
    if (occ != occurs_.end()) {
      std::vector<VarId> users(occ->second.begin(), occ->second.end());
      for (VarId u : users) {
        BoolPoly& ut = tails_[u];
        BoolPoly updated = poly_add(poly_add(ut, BoolPoly::var(lead)), tail);
        sync_occurrences(u, ut, updated);
        ut = std::move(updated);
      }
      occurs_.erase(lead);
    }
    for (const Monomial& m : tail.terms())
      for (VarId v : m) occurs_[v].insert(lead);
    tails_.emplace(lead, std::move(tail));
    return Insert::added;
  }

  // Solved forms x_lead + tail, ascending by leading variable id.
  std::vector<BoolPoly> polys() const {
    std::vector<std::pair<VarId, const BoolPoly*>> items;
    items.reserve(tails_.size());
    for (const auto& [v, t] : tails_) items.emplace_back(v, &t);
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<BoolPoly> out;
    out.reserve(items.size());
    for (const auto& [v, t] : items) out.push_back(poly_add(BoolPoly::var(v), *t));
    return out;
  }

  // Reads off x_lead = c for every rule with a constant tail.
  void pin_solution(Assignment& a) const {
    for (const auto& [v, t] : tails_) {
      if (t.is_zero())
        a.set(v, false);
      else if (t.is_one())
        a.set(v, true);
    }
  }

 private:
  // substitute_linear over this lookup; tails are interreduced by invariant.
  template <class Rules>
  static BoolPoly substitute_linear_with(const BoolPoly& p, const Rules& rules) {
    bool touched = false;
    for (const Monomial& m : p.terms()) {
      for (VarId v : m)
        if (rules.tail_for(v)) {
          touched = true;
          break;
        }
      if (touched) break;
    }
    if (!touched) return p;
    std::vector<Monomial> out;
    out.reserve(p.term_count());
    std::vector<VarId> kept;
    for (const Monomial& m : p.terms()) {
      kept.clear();
      BoolPoly image;
      bool have_image = false, dead = false;
      for (VarId v : m) {
        const BoolPoly* tail = rules.tail_for(v);
        if (!tail) {
          kept.push_back(v);
          continue;
        }
        if (tail->is_zero()) {
          dead = true;
          break;
        }
        if (!have_image) {
          image = *tail;
          have_image = true;
        } else {
          image = poly_mul(image, *tail);
          if (image.is_zero()) {
            dead = true;
            break;
          }
        }
      }
      if (dead) continue;
      Monomial base = Monomial::from_sorted(kept.data(), kept.size());
      if (!have_image)
        out.push_back(std::move(base));
      else
        for (const Monomial& im : image.terms()) out.push_back(mono_mul(base, im));
    }
    return BoolPoly::from_terms(std::move(out));
  }

  void sync_occurrences(VarId user, const BoolPoly& before, const BoolPoly& after) {
    for (const Monomial& m : before.terms())
      for (VarId v : m) {
        auto it = occurs_.find(v);
        if (it != occurs_.end()) it->second.erase(user);
      }
    for (const Monomial& m : after.terms())
      for (VarId v : m) occurs_[v].insert(user);
  }

  std::unordered_map<VarId, BoolPoly> tails_;
  std::unordered_map<VarId, std::unordered_set<VarId>> occurs_;  // var -> leads whose tail mentions it
  bool inconsistent_ = false;
};

namespace gb_detail {

// Folds `incoming` into (L, G): linear content joins the basis, everything in
// G is kept reduced modulo L, cascading degree drops are replayed until
// stable. Returns false iff 1 lands in the ideal.
inline bool absorb(LinearBasis& L, std::vector<BoolPoly>& G, std::vector<BoolPoly> incoming) {
  std::vector<BoolPoly> work = std::move(incoming);
  while (!work.empty()) {
    bool basis_grew = false;
    for (const BoolPoly& p : work) {
      BoolPoly q = L.reduce(p);
      if (q.is_zero()) continue;
      if (q.degree() <= 1) {
        auto r = L.insert(q);
        if (r == LinearBasis::Insert::inconsistent) return false;
        if (r == LinearBasis::Insert::added) basis_grew = true;
      } else {
        G.push_back(std::move(q));
      }
    }
    work.clear();
    if (basis_grew) {
      std::vector<BoolPoly> keep;
      keep.reserve(G.size());
      for (const BoolPoly& g : G) {
        BoolPoly q = L.reduce(g);
        if (q.is_zero()) continue;
        if (q.degree() <= 1)
          work.push_back(std::move(q));
        else
          keep.push_back(std::move(q));
      }
      G = std::move(keep);
    }
  }
  return true;
}

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return grevlex_cmp(a, b) < 0; }
};

}  // namespace gb_detail

// Bounded-degree Groebner elimination: absorb linear content, then repeat
// {Macaulay matrix at degree d, RREF, extract, absorb} until an elimination
// round yields no new pivot leading monomial and no new linear polynomial.
// Result is the interreduced linear basis plus the residual (degree >= 2)
// polynomials; {1} signals an inconsistent system. nullopt = deadline fired.
inline std::optional<std::vector<BoolPoly>> groebner_bounded(
    std::span<const BoolPoly> polys, int d, std::size_t nvars,
    const Deadline& dl = Deadline::none()) {
  if (d < 0) throw std::invalid_argument("groebner_bounded: negative degree bound");
  for (const BoolPoly& p : polys)
    if (p.degree() > d) throw std::invalid_argument("groebner_bounded: input degree exceeds bound d");

  LinearBasis L;
  std::vector<BoolPoly> G;
  if (!gb_detail::absorb(L, G, {polys.begin(), polys.end()})) return {{BoolPoly::one()}};

  std::set<Monomial, gb_detail::MonoLess> seen_pivots;
  while (!G.empty()) {
    if (dl.expired()) return std::nullopt;
    MacaulayMatrix mac = macaulay_build(std::span<const BoolPoly>(G.data(), G.size()), d, nvars,
                                        MultiplierRule::absorbing);
    auto rr = rref(std::move(mac.matrix), dl);
    if (!rr) return std::nullopt;
    std::vector<BoolPoly> extracted = extract_polys(rr->reduced, mac.index);
    bool new_pivot = false;
    for (const BoolPoly& p : extracted)
      if (seen_pivots.insert(p.leading_monomial()).second) new_pivot = true;
    std::size_t basis_before = L.size();
    G.clear();
    if (!gb_detail::absorb(L, G, std::move(extracted))) return {{BoolPoly::one()}};
    if (L.size() == basis_before && !new_pivot) break;
  }

  std::vector<BoolPoly> out = L.polys();
  out.insert(out.end(), G.begin(), G.end());
  return out;
}

inline std::optional<std::vector<BoolPoly>> groebner_bounded(
    const PolySystem& sys, int d, const Deadline& dl = Deadline::none()) {
  return groebner_bounded(sys.polys(), d, sys.nvars(), dl);
}

// Substitutes the solved forms L into every polynomial of G; zero results are
// dropped. L must be interreduced linear forms (validated).
inline std::vector<BoolPoly> reduce_full(std::span<const BoolPoly> G, const std::vector<BoolPoly>& L) {
  LinearRules rules = LinearRules::from_polys(L);
  std::vector<BoolPoly> out;
  out.reserve(G.size());
  for (const BoolPoly& g : G) {
    BoolPoly q = substitute_linear(g, rules);
    if (!q.is_zero()) out.push_back(std::move(q));
  }
  return out;
}

struct GbElimLinResult {
  std::vector<BoolPoly> linear;    // interreduced solved forms (empty if none extracted)
  std::vector<BoolPoly> residual;  // everything else, reduced modulo `linear`
};

// Cheap preprocessing pass: run bounded elimination on the degree <= d1 slice,
// pull out the linear part, substitute it through the rest. d1 = 0 disables
// the pass entirely and hands the system through untouched.
inline GbElimLinResult gb_elim_lin(std::span<const BoolPoly> polys, int d1, std::size_t nvars) {
  if (d1 < 0) throw std::invalid_argument("gb_elim_lin: negative degree bound");
  GbElimLinResult res;
  if (d1 == 0) {
    res.residual.reserve(polys.size());
    for (const BoolPoly& p : polys)
      if (!p.is_zero()) res.residual.push_back(p);
    return res;
  }
  std::vector<BoolPoly> low, high;
  for (const BoolPoly& p : polys) {
    if (p.is_zero()) continue;
    (p.degree() <= d1 ? low : high).push_back(p);
  }
  auto gb = groebner_bounded(std::span<const BoolPoly>(low.data(), low.size()), d1, nvars);
  std::vector<BoolPoly> combined = std::move(*gb);  // no deadline: always completes
  combined.insert(combined.end(), high.begin(), high.end());
  if (maxdeg(combined) <= 1) {
    res.residual = std::move(combined);
    return res;
  }
  std::vector<BoolPoly> rest;
  for (BoolPoly& p : combined) {
    if (p.degree() == 1)
      res.linear.push_back(std::move(p));
    else
      rest.push_back(std::move(p));
  }
  res.residual = reduce_full(std::span<const BoolPoly>(rest.data(), rest.size()), res.linear);
  return res;
}

inline GbElimLinResult gb_elim_lin(const PolySystem& sys, int d1) {
  return gb_elim_lin(sys.polys(), d1, sys.nvars());
}

// ---------------------------------------------------------------------------
enum class GbStatus { tame, wild };

struct GbOutcome {
  GbStatus status = GbStatus::wild;
  std::vector<BoolPoly> basis;  // nonempty iff tame; {1} marks inconsistency

  bool tame() const { return status == GbStatus::tame; }
};

// Wall-clock-guarded elimination: tame iff the run finishes within tau and
// the basis is entirely linear (including the {1} case); wild on timeout or
// a residual of degree >= 2.
inline GbOutcome groebner_safe(std::span<const BoolPoly> polys, int d2, double tau_seconds,
                               std::size_t nvars) {
  if (tau_seconds <= 0) throw std::invalid_argument("groebner_safe: tau must be positive");
  for (const BoolPoly& p : polys)
    if (p.degree() > d2) throw std::invalid_argument("groebner_safe: input degree exceeds d2");
  auto res = groebner_bounded(polys, d2, nvars, Deadline::after(tau_seconds));
  if (!res) return {GbStatus::wild, {}};
  if (maxdeg(*res) <= 1) return {GbStatus::tame, std::move(*res)};
  return {GbStatus::wild, {}};
}

inline GbOutcome groebner_safe(const PolySystem& sys, int d2, double tau_seconds) {
  return groebner_safe(sys.polys(), d2, tau_seconds, sys.nvars());
}

}  // namespace multistep
