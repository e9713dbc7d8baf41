#pragma once
// Dense GF(2) linear algebra over 64-bit packed rows, plus the Macaulay
// (bounded-degree multiple) matrix bridge between polynomial sets and rows.

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "multistep/boolring.hpp"

namespace multistep {

// Cooperative wall-clock budget. Checked at pivot boundaries, so overshoot is
// bounded by one elimination pass.
struct Deadline {
  std::optional<std::chrono::steady_clock::time_point> at;

  static Deadline none() { return {}; }
  static Deadline after(double seconds) {
    if (seconds < 0) seconds = 0;
    return {std::chrono::steady_clock::now() +
            std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                std::chrono::duration<double>(seconds))};
  }
  bool expired() const { return at && std::chrono::steady_clock::now() >= *at; }
};

class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), data_(rows * wpr_, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_row() const { return wpr_; }

  bool get(std::size_t r, std::size_t c) const {
    return (data_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    std::uint64_t& w = data_[r * wpr_ + (c >> 6)];
    std::uint64_t mask = std::uint64_t{1} << (c & 63);
    if (v)
      w |= mask;
    else
      w &= ~mask;
  }

  std::uint64_t* row(std::size_t r) { return data_.data() + r * wpr_; }
  const std::uint64_t* row(std::size_t r) const { return data_.data() + r * wpr_; }

  // dst ^= src, starting at word index `from_word` (earlier words known zero).
  void xor_rows(std::size_t dst, std::size_t src, std::size_t from_word = 0) {
    std::uint64_t* d = row(dst);
    const std::uint64_t* s = row(src);
    for (std::size_t w = from_word; w < wpr_; ++w) d[w] ^= s[w];
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::uint64_t* ra = row(a);
    std::uint64_t* rb = row(b);
    for (std::size_t w = 0; w < wpr_; ++w) std::swap(ra[w], rb[w]);
  }

  bool row_is_zero(std::size_t r) const {
    const std::uint64_t* p = row(r);
    for (std::size_t w = 0; w < wpr_; ++w)
      if (p[w]) return false;
    return true;
  }

  // Keeps the first `n` rows.
  void truncate_rows(std::size_t n) {
    rows_ = n;
    data_.resize(n * wpr_);
  }

 private:
  std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
  std::vector<std::uint64_t> data_;
};

struct RrefResult {
  BitMatrix reduced;               // zero rows dropped
  std::vector<std::size_t> pivots; // ascending column indices, one per row
};

// Gauss-Jordan elimination. Returns nullopt iff the deadline fires; the
// deadline is polled once per pivot column.
inline std::optional<RrefResult> rref(BitMatrix m, const Deadline& dl = Deadline::none()) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    if (dl.expired()) return std::nullopt;
    const std::size_t word = c >> 6;
    const std::uint64_t mask = std::uint64_t{1} << (c & 63);
    std::size_t pivot = rank;
    while (pivot < rows && !(m.row(pivot)[word] & mask)) ++pivot;
    if (pivot == rows) continue;
    m.swap_rows(rank, pivot);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r != rank && (m.row(r)[word] & mask)) m.xor_rows(r, rank, word);
    }
    pivots.push_back(c);
    ++rank;
  }
  m.truncate_rows(rank);
  return RrefResult{std::move(m), std::move(pivots)};
}

// ---------------------------------------------------------------------------
// Column dictionary: every monomial occurring in the row polynomials, sorted
// strictly descending, so column 0 carries the greatest monomial and row
// leading monomials coincide with pivot columns.
class MacaulayIndex {
 public:
  MacaulayIndex() = default;

  static MacaulayIndex from_monomials(std::vector<Monomial> monos) {
    std::sort(monos.begin(), monos.end(), grevlex_greater);
    monos.erase(std::unique(monos.begin(), monos.end()), monos.end());
    MacaulayIndex idx;
    idx.cols_ = std::move(monos);
    return idx;
  }

  std::size_t size() const { return cols_.size(); }
  const Monomial& monomial(std::size_t col) const { return cols_[col]; }
  std::span<const Monomial> columns() const { return {cols_.data(), cols_.size()}; }

  std::optional<std::size_t> column_of(const Monomial& m) const {
    auto it = std::lower_bound(cols_.begin(), cols_.end(), m,
                               [](const Monomial& a, const Monomial& b) { return grevlex_greater(a, b); });
    if (it == cols_.end() || !(*it == m)) return std::nullopt;
    return static_cast<std::size_t>(it - cols_.begin());
  }

 private:
  std::vector<Monomial> cols_;
};

struct MacaulayMatrix {
  BitMatrix matrix;
  MacaulayIndex index;
};

// Which monomial multiples of each generator become rows.
//   degree_sum: multipliers m with deg(m) + deg(p) <= d.
//   absorbing:  multipliers m with deg(m * t) <= d for every term t of p,
//               where the product absorbs repeated variables. This is the row
//               set of the quotient ring and is what bounded-degree
//               elimination needs for completeness at high d.
enum class MultiplierRule { degree_sum, absorbing };

namespace macaulay_detail {

// All multipliers m with deg(m ⊙ t) <= d for every term t of p, where ⊙
// absorbs repeated variables. Split m into support variables of p (absorption
// possible) and the rest (each costs +1 on every term); cost is monotone in m,
// so the subset search prunes cleanly.
inline void enumerate_absorbing(const BoolPoly& p, int d, std::size_t nvars,
                                std::vector<Monomial>& out_multipliers) {
  std::vector<VarId> support;
  for (const Monomial& t : p.terms())
    for (VarId v : t) support.push_back(v);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());

  std::vector<VarId> nonsupport;
  for (VarId v = 0; v < nvars; ++v)
    if (!std::binary_search(support.begin(), support.end(), v)) nonsupport.push_back(v);

  std::vector<VarId> chosen;  // current support subset, ascending
  auto cost = [&]() {
    std::size_t worst = 0;
    for (const Monomial& t : p.terms()) {
      std::size_t c = t.degree();
      for (VarId v : chosen)
        if (!t.contains(v)) ++c;
      worst = std::max(worst, c);
    }
    return worst;
  };

  std::vector<VarId> extended;
  auto emit_extensions = [&](auto&& self, std::size_t from, std::size_t budget) -> void {
    out_multipliers.push_back(Monomial(extended));
    if (budget == 0) return;
    for (std::size_t i = from; i < nonsupport.size(); ++i) {
      extended.push_back(nonsupport[i]);
      self(self, i + 1, budget - 1);
      extended.pop_back();
    }
  };

  auto dfs = [&](auto&& self, std::size_t from) -> void {
    std::size_t c = cost();
    if (c <= static_cast<std::size_t>(d)) {
      extended = chosen;
      emit_extensions(emit_extensions, 0, static_cast<std::size_t>(d) - c);
    }
    for (std::size_t i = from; i < support.size(); ++i) {
      chosen.push_back(support[i]);
      if (cost() <= static_cast<std::size_t>(d)) self(self, i + 1);
      chosen.pop_back();
    }
  };
  dfs(dfs, 0);
}

}  // namespace macaulay_detail

// Rows are monomial multiples of the generators within the degree bound;
// columns are exactly the monomials occurring in those rows.
inline MacaulayMatrix macaulay_build(std::span<const BoolPoly> polys, int d, std::size_t nvars,
                                     MultiplierRule rule = MultiplierRule::degree_sum) {
  if (d < 0) throw std::invalid_argument("macaulay_build: negative degree bound");
  for (const BoolPoly& p : polys)
    if (p.degree() > d)
      throw std::invalid_argument("macaulay_build: input degree exceeds bound d");

  std::vector<BoolPoly> rows;
  std::vector<Monomial> multipliers;
  for (const BoolPoly& p : polys) {
    if (p.is_zero()) continue;
    multipliers.clear();
    if (rule == MultiplierRule::degree_sum) {
      int slack = d - p.degree();
      // all squarefree monomials of degree <= slack over the registry
      multipliers.emplace_back();
      std::vector<VarId> combo;
      auto rec = [&](auto&& self, VarId from, int remaining) -> void {
        if (remaining == 0) return;
        for (VarId v = from; v < nvars; ++v) {
          combo.push_back(v);
          multipliers.push_back(Monomial::from_sorted(combo.data(), combo.size()));
          self(self, v + 1, remaining - 1);
          combo.pop_back();
        }
      };
      rec(rec, 0, slack);
    } else {
      macaulay_detail::enumerate_absorbing(p, d, nvars, multipliers);
    }
    for (const Monomial& m : multipliers) {
      BoolPoly row = poly_mul(p, m);
      if (!row.is_zero()) rows.push_back(std::move(row));
    }
  }

  std::vector<Monomial> monos;
  for (const BoolPoly& r : rows)
    for (const Monomial& t : r.terms()) monos.push_back(t);
  MacaulayIndex index = MacaulayIndex::from_monomials(std::move(monos));

  BitMatrix m(rows.size(), index.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const Monomial& t : rows[r].terms()) m.set(r, *index.column_of(t), true);
  return MacaulayMatrix{std::move(m), std::move(index)};
}

inline MacaulayMatrix macaulay_build(const std::vector<BoolPoly>& polys, int d, std::size_t nvars,
                                     MultiplierRule rule = MultiplierRule::degree_sum) {
  return macaulay_build(std::span<const BoolPoly>(polys.data(), polys.size()), d, nvars, rule);
}

// Rows back to polynomials. Columns are scanned ascending, which yields terms
// already in descending monomial order; zero rows are skipped.
inline std::vector<BoolPoly> extract_polys(const BitMatrix& m, const MacaulayIndex& index) {
  if (m.cols() != index.size())
    throw std::invalid_argument("extract_polys: column count does not match index");
  std::vector<BoolPoly> out;
  out.reserve(m.rows());
  std::vector<Monomial> terms;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    terms.clear();
    const std::uint64_t* row = m.row(r);
    for (std::size_t w = 0; w < m.words_per_row(); ++w) {
      std::uint64_t bits = row[w];
      while (bits) {
        unsigned b = static_cast<unsigned>(__builtin_ctzll(bits));
        bits &= bits - 1;
        terms.push_back(index.monomial((w << 6) + b));
      }
    }
    if (!terms.empty()) out.push_back(BoolPoly::from_terms(std::move(terms)));
    terms = {};
  }
  return out;
}

}  // namespace multistep
