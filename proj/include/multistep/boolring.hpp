#pragma once
// Boolean quotient ring GF(2)[x_0..x_{n-1}] / <x_i^2 + x_i>.
// Monomials are squarefree variable sets, polynomials are XOR-sets of
// monomials, so the field equations never need to be carried explicitly.

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace multistep {

using VarId = std::uint32_t;

// ---------------------------------------------------------------------------
// VarRegistry: immutable name table. A variable's id is its position, and the
// monomial order treats *lower ids as greater variables*, so registries should
// list the variables to eliminate first (e.g. intermediates) before the rest.
class VarRegistry {
 public:
  VarRegistry() = default;

  explicit VarRegistry(std::vector<std::string> names) : names_(std::move(names)) {
    index_.reserve(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (!valid_name(names_[i]))
        throw std::invalid_argument("VarRegistry: invalid variable name '" + names_[i] + "'");
      if (!index_.emplace(names_[i], static_cast<VarId>(i)).second)
        throw std::invalid_argument("VarRegistry: duplicate variable name '" + names_[i] + "'");
    }
  }

  std::size_t size() const { return names_.size(); }

  const std::string& name(VarId v) const {
    if (v >= names_.size()) throw std::out_of_range("VarRegistry: variable id out of range");
    return names_[v];
  }

  std::optional<VarId> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Identifier grammar: [A-Za-z_][A-Za-z0-9_]*
  static bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    auto alnum = [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); };
    if (!alpha(s[0])) return false;
    return std::all_of(s.begin() + 1, s.end(), alnum);
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, VarId> index_;
};

// ---------------------------------------------------------------------------
// Monomial: strictly increasing VarId list. Degree <= 2 lives inline (the
// dominant case in quadratic workloads); larger monomials spill to the heap.
class Monomial {
 public:
  Monomial() : size_(0), cap_(0) {}

  Monomial(std::initializer_list<VarId> vars) : Monomial(std::vector<VarId>(vars)) {}

  explicit Monomial(std::vector<VarId> vars) {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    init_from_sorted(vars.data(), vars.size());
  }

  static Monomial var(VarId v) {
    Monomial m;
    m.size_ = 1;
    m.inline_[0] = v;
    return m;
  }

  // Caller guarantees data is strictly increasing.
  static Monomial from_sorted(const VarId* data, std::size_t n) {
    Monomial m;
    m.init_from_sorted(data, n);
    return m;
  }

  Monomial(const Monomial& o) { copy_from(o); }
  Monomial(Monomial&& o) noexcept { steal_from(o); }
  Monomial& operator=(const Monomial& o) {
    if (this != &o) {
      release();
      copy_from(o);
    }
    return *this;
  }
  Monomial& operator=(Monomial&& o) noexcept {
    if (this != &o) {
      release();
      steal_from(o);
    }
    return *this;
  }
  ~Monomial() { release(); }

  std::size_t degree() const { return size_; }
  bool is_one() const { return size_ == 0; }

  const VarId* data() const { return size_ <= kInline ? inline_ : heap_; }
  const VarId* begin() const { return data(); }
  const VarId* end() const { return data() + size_; }
  VarId operator[](std::size_t i) const { return data()[i]; }
  std::span<const VarId> vars() const { return {data(), size_}; }

  bool contains(VarId v) const {
    const VarId* d = data();
    return std::binary_search(d, d + size_, v);
  }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.size_ == b.size_ && std::equal(a.begin(), a.end(), b.begin());
  }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

 private:
  static constexpr std::size_t kInline = 2;

  void init_from_sorted(const VarId* d, std::size_t n) {
    size_ = static_cast<std::uint32_t>(n);
    if (n <= kInline) {
      cap_ = 0;
      std::memcpy(inline_, d, n * sizeof(VarId));
    } else {
      cap_ = size_;
      heap_ = new VarId[n];
      std::memcpy(heap_, d, n * sizeof(VarId));
    }
  }
  void copy_from(const Monomial& o) { init_from_sorted(o.data(), o.size_); }
  void steal_from(Monomial& o) noexcept {
    size_ = o.size_;
    cap_ = o.cap_;
    if (size_ <= kInline)
      std::memcpy(inline_, o.inline_, kInline * sizeof(VarId));
    else
      heap_ = o.heap_;
    o.size_ = 0;
    o.cap_ = 0;
  }
  void release() {
    if (size_ > kInline) delete[] heap_;
  }

  union {
    VarId inline_[kInline];
    VarId* heap_;
  };
  std::uint32_t size_;
  std::uint32_t cap_;
};

// Graded reverse lexicographic order with x_i > x_j iff i < j.
// Returns >0 if a > b, 0 if equal, <0 if a < b.
inline int grevlex_cmp(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
  // Equal degree: scan from the least variable (largest id) backwards; at the
  // first difference the monomial holding the larger id is the smaller one.
  const VarId* pa = a.data();
  const VarId* pb = b.data();
  for (std::size_t i = a.degree(); i-- > 0;) {
    if (pa[i] != pb[i]) return pa[i] > pb[i] ? -1 : 1;
  }
  return 0;
}

inline bool grevlex_greater(const Monomial& a, const Monomial& b) { return grevlex_cmp(a, b) > 0; }

// Squarefree product (set union): x1 * x1x2 = x1x2.
inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  VarId stack_buf[64];
  std::vector<VarId> heap_buf;
  VarId* out = stack_buf;
  if (a.degree() + b.degree() > 64) {
    heap_buf.resize(a.degree() + b.degree());
    out = heap_buf.data();
  }
  const VarId* end = std::set_union(a.begin(), a.end(), b.begin(), b.end(), out);
  return Monomial::from_sorted(out, static_cast<std::size_t>(end - out));
}

// ---------------------------------------------------------------------------
// Assignment: partial map VarId -> bit over a registry-sized domain.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t nvars) : values_(nvars, kUnset) {}

  std::size_t domain_size() const { return values_.size(); }

  void set(VarId v, bool bit) {
    check(v);
    if (values_[v] == kUnset) ++assigned_;
    values_[v] = bit ? 1 : 0;
  }
  void unset(VarId v) {
    check(v);
    if (values_[v] != kUnset) --assigned_;
    values_[v] = kUnset;
  }
  bool is_set(VarId v) const { return v < values_.size() && values_[v] != kUnset; }
  bool get(VarId v) const {
    check(v);
    if (values_[v] == kUnset)
      throw std::invalid_argument("Assignment: variable " + std::to_string(v) + " is unassigned");
    return values_[v] != 0;
  }
  std::size_t assigned_count() const { return assigned_; }
  bool total() const { return assigned_ == values_.size(); }

  friend bool operator==(const Assignment& a, const Assignment& b) { return a.values_ == b.values_; }

 private:
  static constexpr std::int8_t kUnset = -1;
  void check(VarId v) const {
    if (v >= values_.size()) throw std::out_of_range("Assignment: variable id out of range");
  }
  std::vector<std::int8_t> values_;
  std::size_t assigned_ = 0;
};

// ---------------------------------------------------------------------------
// BoolPoly: XOR-set of monomials, stored strictly descending in grevlex order
// so the leading monomial is terms()[0]. The payload is immutable and shared
// between copies, making copies O(1).
class BoolPoly {
 public:
  BoolPoly() = default;  // zero

  static BoolPoly zero() { return BoolPoly(); }
  static BoolPoly one() { return from_monomial(Monomial()); }
  static BoolPoly constant(bool b) { return b ? one() : zero(); }
  static BoolPoly var(VarId v) { return from_monomial(Monomial::var(v)); }

  static BoolPoly from_monomial(Monomial m) {
    std::vector<Monomial> t;
    t.push_back(std::move(m));
    return BoolPoly(std::move(t));
  }

  // Canonicalizes: sorts descending and cancels pairs (mod-2 multiplicity).
  static BoolPoly from_terms(std::vector<Monomial> terms) {
    canonicalize(terms);
    return BoolPoly(std::move(terms));
  }

  bool is_zero() const { return !terms_ || terms_->empty(); }
  bool is_one() const { return term_count() == 1 && (*terms_)[0].is_one(); }

  std::size_t term_count() const { return terms_ ? terms_->size() : 0; }

  std::span<const Monomial> terms() const {
    if (!terms_) return {};
    return {terms_->data(), terms_->size()};
  }

  // Degree of the zero polynomial is -1 by convention.
  int degree() const {
    if (is_zero()) return -1;
    return static_cast<int>((*terms_)[0].degree());
  }

  const Monomial& leading_monomial() const {
    if (is_zero()) throw std::invalid_argument("BoolPoly: zero polynomial has no leading monomial");
    return (*terms_)[0];
  }

  bool constant_term() const { return term_count() > 0 && terms_->back().is_one(); }

  friend bool operator==(const BoolPoly& a, const BoolPoly& b) {
    if (a.terms_ == b.terms_) return true;
    if (a.term_count() != b.term_count()) return false;
    return std::equal(a.terms().begin(), a.terms().end(), b.terms().begin());
  }
  friend bool operator!=(const BoolPoly& a, const BoolPoly& b) { return !(a == b); }

  static void canonicalize(std::vector<Monomial>& terms) {
    std::sort(terms.begin(), terms.end(), grevlex_greater);
    std::size_t out = 0;
    std::size_t i = 0;
    while (i < terms.size()) {
      std::size_t j = i + 1;
      while (j < terms.size() && terms[j] == terms[i]) ++j;
      if ((j - i) & 1) {
        if (out != i) terms[out] = std::move(terms[i]);
        ++out;
      }
      i = j;
    }
    terms.resize(out);
  }

 private:
  explicit BoolPoly(std::vector<Monomial> terms) {
    if (!terms.empty()) terms_ = std::make_shared<const std::vector<Monomial>>(std::move(terms));
  }

  std::shared_ptr<const std::vector<Monomial>> terms_;
};

// XOR of term sets: merge of two descending lists with pair cancellation.
inline BoolPoly poly_add(const BoolPoly& a, const BoolPoly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  auto ta = a.terms();
  auto tb = b.terms();
  std::vector<Monomial> out;
  out.reserve(ta.size() + tb.size());
  std::size_t i = 0, j = 0;
  while (i < ta.size() && j < tb.size()) {
    int c = grevlex_cmp(ta[i], tb[j]);
    if (c > 0)
      out.push_back(ta[i++]);
    else if (c < 0)
      out.push_back(tb[j++]);
    else {
      ++i;
      ++j;  // equal monomials cancel
    }
  }
  out.insert(out.end(), ta.begin() + i, ta.end());
  out.insert(out.end(), tb.begin() + j, tb.end());
  // already sorted and duplicate-free
  return BoolPoly::from_terms(std::move(out));
}

inline BoolPoly operator+(const BoolPoly& a, const BoolPoly& b) { return poly_add(a, b); }

inline BoolPoly poly_mul(const BoolPoly& a, const BoolPoly& b) {
  if (a.is_zero() || b.is_zero()) return BoolPoly();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  std::vector<Monomial> out;
  out.reserve(a.term_count() * b.term_count());
  for (const Monomial& ma : a.terms())
    for (const Monomial& mb : b.terms()) out.push_back(mono_mul(ma, mb));
  return BoolPoly::from_terms(std::move(out));
}

inline BoolPoly operator*(const BoolPoly& a, const BoolPoly& b) { return poly_mul(a, b); }

inline BoolPoly poly_mul(const BoolPoly& a, const Monomial& m) {
  if (a.is_zero()) return a;
  if (m.is_one()) return a;
  std::vector<Monomial> out;
  out.reserve(a.term_count());
  for (const Monomial& ma : a.terms()) out.push_back(mono_mul(ma, m));
  return BoolPoly::from_terms(std::move(out));
}

// Total evaluation; throws if any occurring variable is unassigned.
inline bool evaluate(const Monomial& m, const Assignment& a) {
  for (VarId v : m)
    if (!a.get(v)) return false;
  return true;
}

inline bool evaluate(const BoolPoly& p, const Assignment& a) {
  bool acc = false;
  for (const Monomial& m : p.terms()) acc ^= evaluate(m, a);
  return acc;
}

// Deterministic total order on polynomials (leading terms first); used only
// for canonical output ordering, not algebra.
inline int poly_cmp(const BoolPoly& a, const BoolPoly& b) {
  auto ta = a.terms();
  auto tb = b.terms();
  std::size_t n = std::min(ta.size(), tb.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = grevlex_cmp(ta[i], tb[i]);
    if (c != 0) return c;
  }
  if (ta.size() != tb.size()) return ta.size() < tb.size() ? -1 : 1;
  return 0;
}

// ---------------------------------------------------------------------------
// LinearRules: interreduced solved forms x_lead = tail, used as rewrite rules.
// Validation enforces the substitute_linear preconditions: every polynomial
// has degree exactly 1, leading variables are distinct, and no tail mentions
// any leading variable.
class LinearRules {
 public:
  LinearRules() = default;

  static LinearRules from_polys(std::span<const BoolPoly> polys) {
    LinearRules r;
    for (const BoolPoly& p : polys) {
      if (p.degree() != 1)
        throw std::invalid_argument("substitute_linear: set contains a non-linear polynomial");
      VarId lead = p.leading_monomial()[0];
      BoolPoly tail = poly_add(p, BoolPoly::var(lead));
      if (!r.tails_.emplace(lead, std::move(tail)).second)
        throw std::invalid_argument("substitute_linear: duplicate leading variable");
    }
    for (const auto& [lead, tail] : r.tails_) {
      (void)lead;
      for (const Monomial& m : tail.terms())
        for (VarId v : m)
          if (r.tails_.count(v))
            throw std::invalid_argument("substitute_linear: set is not interreduced");
    }
    return r;
  }

  static LinearRules from_polys(const std::vector<BoolPoly>& polys) {
    return from_polys(std::span<const BoolPoly>(polys.data(), polys.size()));
  }

  bool empty() const { return tails_.empty(); }
  std::size_t size() const { return tails_.size(); }
  const BoolPoly* tail_for(VarId v) const {
    auto it = tails_.find(v);
    return it == tails_.end() ? nullptr : &it->second;
  }

 private:
  std::unordered_map<VarId, BoolPoly> tails_;
};

// Normal form of p modulo the solved linear forms. One pass suffices because
// rule tails are free of leading variables.
inline BoolPoly substitute_linear(const BoolPoly& p, const LinearRules& rules) {
  if (rules.empty() || p.is_zero()) return p;
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
    BoolPoly image;  // product of substituted tails; zero marks "untouched so far"
    bool have_image = false;
    bool dead = false;
    for (VarId v : m) {
      const BoolPoly* tail = rules.tail_for(v);
      if (!tail) {
        kept.push_back(v);
        continue;
      }
      if (tail->is_zero()) {
        dead = true;  // x -> 0 kills the whole monomial
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
    if (!have_image) {
      out.push_back(std::move(base));
    } else {
      for (const Monomial& im : image.terms()) out.push_back(mono_mul(base, im));
    }
  }
  return BoolPoly::from_terms(std::move(out));
}

inline BoolPoly substitute_linear(const BoolPoly& p, const std::vector<BoolPoly>& L) {
  return substitute_linear(p, LinearRules::from_polys(L));
}

// Constant propagation: assigned variables collapse to their bits, unassigned
// variables survive. Equivalent to substitute_linear with constant tails but
// cheaper on the guessed-key hot path.
inline BoolPoly substitute_partial(const BoolPoly& p, const Assignment& a) {
  bool touched = false;
  for (const Monomial& m : p.terms()) {
    for (VarId v : m)
      if (a.is_set(v)) {
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
    bool dead = false;
    for (VarId v : m) {
      if (!a.is_set(v))
        kept.push_back(v);
      else if (!a.get(v)) {
        dead = true;
        break;
      }
    }
    if (!dead) out.push_back(Monomial::from_sorted(kept.data(), kept.size()));
  }
  return BoolPoly::from_terms(std::move(out));
}

// max degree over a set; zero polynomials are ignored; empty -> -1.
inline int maxdeg(std::span<const BoolPoly> polys) {
  int d = -1;
  for (const BoolPoly& p : polys) d = std::max(d, p.degree());
  return d;
}

inline int maxdeg(const std::vector<BoolPoly>& polys) {
  return maxdeg(std::span<const BoolPoly>(polys.data(), polys.size()));
}

// ---------------------------------------------------------------------------
// Text form: monomials joined by " + ", variables joined by "*", constant "1".
inline std::string to_string(const Monomial& m, const VarRegistry& reg) {
  if (m.is_one()) return "1";
  std::string s;
  for (std::size_t i = 0; i < m.degree(); ++i) {
    if (i) s += "*";
    s += reg.name(m[i]);
  }
  return s;
}

inline std::string to_string(const BoolPoly& p, const VarRegistry& reg) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const Monomial& m : p.terms()) {
    if (!first) s += " + ";
    s += to_string(m, reg);
    first = false;
  }
  return s;
}

}  // namespace multistep
