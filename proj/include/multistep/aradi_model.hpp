#pragma once
// Symbolic Boolean-polynomial model of the Aradi cipher: round keys as
// affine forms in the 256 master key variables, 21 quadratic constraints per
// 4-bit S-box slice (128 fresh output variables per round), linear diffusion
// forms, and plaintext/ciphertext instantiation into a PolySystem.
//
// Bit-entry convention: a symbolic word stores 32 polynomials entry-indexed
// MSB-first, i.e. entry j corresponds to machine bit 31 - j. This matches
// the key packing (k_j = bit 31 - (j mod 32) of K[j/32]) so schedule words,
// state words and diffusion all share one indexing.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "multistep/anf_io.hpp"
#include "multistep/aradi.hpp"
#include "multistep/boolring.hpp"
#include "multistep/gbengine.hpp"

namespace multistep {

struct SymbolicWord {
  std::array<BoolPoly, 32> bits;  // entry j = machine bit 31 - j
};

inline SymbolicWord word_xor(const SymbolicWord& a, const SymbolicWord& b) {
  SymbolicWord out;
  for (int j = 0; j < 32; ++j)
    out.bits[static_cast<std::size_t>(j)] =
        poly_add(a.bits[static_cast<std::size_t>(j)], b.bits[static_cast<std::size_t>(j)]);
  return out;
}

// Entry-space mirror of a machine left rotation by m: bit 31-j of
// rotl32(v, m) is bit 31-j-m of v, i.e. entry j takes old entry j+m.
inline SymbolicWord word_rotl(const SymbolicWord& a, int m) {
  SymbolicWord out;
  for (int j = 0; j < 32; ++j)
    out.bits[static_cast<std::size_t>(j)] = a.bits[static_cast<std::size_t>((j + m) % 32)];
  return out;
}

inline SymbolicWord constant_word(std::uint32_t v) {
  SymbolicWord out;
  for (int j = 0; j < 32; ++j)
    out.bits[static_cast<std::size_t>(j)] = BoolPoly::constant((v >> (31 - j)) & 1u);
  return out;
}

inline std::uint32_t evaluate_word(const SymbolicWord& sw, const Assignment& a) {
  std::uint32_t v = 0;
  for (int j = 0; j < 32; ++j)
    if (evaluate(sw.bits[static_cast<std::size_t>(j)], a)) v |= 1u << (31 - j);
  return v;
}

// ---------------------------------------------------------------------------
// Linear diffusion on symbolic entries. With halves l = entries 0..15 and
// r = entries 16..31 and offsets (a, b, c) selected by round index mod 4:
//   l'_e = l_e + l_{(e+a) mod 16} + r_{(e+c) mod 16}
//   r'_e = r_e + r_{(e+a) mod 16} + l_{(e+b) mod 16}
// which is exactly l_map under the MSB-first entry mapping.
inline SymbolicWord diffusion_forms(const SymbolicWord& in, int round_index) {
  if (round_index < 0) throw std::invalid_argument("diffusion_forms: negative round index");
  const auto& ofs = kLambdaOffsets[static_cast<std::size_t>(round_index % 4)];
  const int a = ofs[0], b = ofs[1], c = ofs[2];
  SymbolicWord out;
  for (int e = 0; e < 16; ++e) {
    out.bits[static_cast<std::size_t>(e)] =
        poly_add(poly_add(in.bits[static_cast<std::size_t>(e)],
                          in.bits[static_cast<std::size_t>((e + a) % 16)]),
                 in.bits[static_cast<std::size_t>(16 + (e + c) % 16)]);
    out.bits[static_cast<std::size_t>(16 + e)] =
        poly_add(poly_add(in.bits[static_cast<std::size_t>(16 + e)],
                          in.bits[static_cast<std::size_t>(16 + (e + a) % 16)]),
                 in.bits[static_cast<std::size_t>((e + b) % 16)]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// The 21 quadratic constraints of one 4-bit S-box, in formal symbols
// 0..3 = x0..x3 (inputs) and 4..7 = y0..y3 (outputs); each term is a pair
// (s, t) with t = -1 for a linear term. Their common zero set in F_2^8 has
// exactly 16 points and is the graph of the substitution layer's bit-slice.
using SboxTerm = std::pair<int, int>;

inline const std::array<std::vector<SboxTerm>, 21>& sbox_template() {
  static const std::array<std::vector<SboxTerm>, 21> kTemplate = {{
      {{0, 2}, {1, 2}, {3, -1}, {7, -1}},
      {{0, 1}, {0, 2}, {0, 5}},
      {{0, 2}, {0, 6}, {0, 7}},
      {{0, 2}, {0, 3}, {1, 5}, {0, 6}, {5, -1}},
      {{0, 3}, {1, 3}, {0, 4}, {0, 6}, {1, 6}, {4, -1}},
      {{0, 2}, {0, 3}, {1, 3}, {0, 6}, {1, 7}, {3, -1}, {7, -1}},
      {{0, 2}, {1, -1}, {5, -1}},
      {{0, 2}, {0, 6}, {2, -1}, {6, -1}},
      {{2, 5}, {3, -1}, {7, -1}},
      {{0, 2}, {0, 3}, {1, 3}, {0, 6}, {2, 6}, {0, -1}, {2, -1}, {3, -1}, {4, -1}, {7, -1}},
      {{2, 3}, {2, 7}, {3, -1}, {7, -1}},
      {{0, 2}, {0, 3}, {2, 4}, {3, 4}, {0, -1}, {4, -1}},
      {{3, 5}, {0, -1}, {3, -1}, {4, -1}, {7, -1}},
      {{0, 1}, {0, 2}, {2, 3}, {1, 4}, {0, 6}, {3, 6}, {0, -1}, {4, -1}},
      {{0, 2}, {2, 4}, {3, 7}, {7, -1}},
      {{0, 1}, {0, 2}, {4, 5}, {0, -1}, {4, -1}},
      {{0, 2}, {0, 4}, {2, 4}, {0, 6}, {4, 6}, {0, -1}},
      {{0, 2}, {0, 6}, {4, 7}, {0, -1}, {4, -1}},
      {{0, 4}, {5, 6}, {0, -1}, {3, -1}, {7, -1}},
      {{5, 7}, {0, -1}, {4, -1}},
      {{0, 2}, {2, 3}, {0, 6}, {6, 7}, {3, -1}, {7, -1}},
  }};
  return kTemplate;
}

// Instantiates the template at four input polynomials and four output
// variables, reducing in the Boolean ring. Shared input-input products are
// computed once per call.
inline std::vector<BoolPoly> sbox_constraints(const std::array<BoolPoly, 4>& inp,
                                              const std::array<VarId, 4>& out) {
  std::array<std::array<BoolPoly, 8>, 8> prod_cache;
  std::array<std::array<bool, 8>, 8> cached{};
  auto symbol_poly = [&](int s) -> BoolPoly {
    return s < 4 ? inp[static_cast<std::size_t>(s)]
                 : BoolPoly::var(out[static_cast<std::size_t>(s - 4)]);
  };
  auto product = [&](int s, int t) -> const BoolPoly& {
    if (s > t) std::swap(s, t);
    auto& slot = prod_cache[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
    auto& have = cached[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
    if (!have) {
      if (t >= 4)
        slot = poly_mul(symbol_poly(s), Monomial::var(out[static_cast<std::size_t>(t - 4)]));
      else
        slot = poly_mul(symbol_poly(s), symbol_poly(t));
      have = true;
    }
    return slot;
  };
  std::vector<BoolPoly> result;
  result.reserve(21);
  for (const auto& terms : sbox_template()) {
    BoolPoly acc;
    for (const SboxTerm& term : terms) {
      const BoolPoly& part = term.second < 0 ? symbol_poly(term.first)
                                             : product(term.first, term.second);
      acc = poly_add(acc, part);
    }
    result.push_back(std::move(acc));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Symbolic key schedule shared by the standalone entry point and the model
// builder: mirrors key_schedule with entry-space word operations; emits
// RK^0..RK^rounds.
namespace model_detail {

template <class KeyPolyFn>
std::vector<std::array<SymbolicWord, 4>> schedule_forms(int rounds, KeyPolyFn key_poly) {
  std::array<SymbolicWord, 8> k;
  for (int r = 0; r < 8; ++r)
    for (int j = 0; j < 32; ++j)
      k[static_cast<std::size_t>(r)].bits[static_cast<std::size_t>(j)] =
          key_poly(static_cast<std::size_t>(32 * r + j));
  std::vector<std::array<SymbolicWord, 4>> out;
  out.reserve(static_cast<std::size_t>(rounds) + 1);
  for (int i = 0; i <= rounds; ++i) {
    if (i % 2 == 0)
      out.push_back({k[0], k[1], k[2], k[3]});
    else
      out.push_back({k[4], k[5], k[6], k[7]});
    if (i == rounds) break;
    if (i % 2 == 0) {
      auto m0 = [](SymbolicWord& a, SymbolicWord& b) {
        SymbolicWord t = word_xor(word_rotl(a, 1), b);
        b = word_xor(word_rotl(b, 3), t);
        a = std::move(t);
      };
      m0(k[0], k[1]);
      m0(k[4], k[5]);
      std::swap(k[1], k[2]);
      std::swap(k[5], k[6]);
    } else {
      auto m1 = [](SymbolicWord& a, SymbolicWord& b) {
        SymbolicWord t = word_xor(word_rotl(a, 9), b);
        b = word_xor(word_rotl(b, 28), t);
        a = std::move(t);
      };
      m1(k[2], k[3]);
      m1(k[6], k[7]);
      std::swap(k[1], k[4]);
      std::swap(k[3], k[6]);
    }
    k[7] = word_xor(k[7], constant_word(static_cast<std::uint32_t>(i)));
  }
  return out;
}

inline void check_model_rounds(int rounds) {
  if (rounds < 1 || rounds > 16)
    throw std::invalid_argument("aradi model: rounds must lie in [1, 16]");
}

}  // namespace model_detail

struct SymbolicRoundKeys {
  std::shared_ptr<const VarRegistry> registry;  // k0..k255
  std::vector<std::array<SymbolicWord, 4>> round_keys;  // RK^0..RK^rounds
};

// Standalone symbolic schedule over a key-only registry.
inline SymbolicRoundKeys symbolic_round_keys(int rounds) {
  model_detail::check_model_rounds(rounds);
  std::vector<std::string> names;
  names.reserve(256);
  for (int j = 0; j < 256; ++j) names.push_back("k" + std::to_string(j));
  SymbolicRoundKeys out;
  out.registry = std::make_shared<VarRegistry>(std::move(names));
  out.round_keys = model_detail::schedule_forms(
      rounds, [](std::size_t j) { return BoolPoly::var(static_cast<VarId>(j)); });
  return out;
}

// ---------------------------------------------------------------------------
struct ModelConfig {
  int rounds = 16;
  bool include_final_whitening = false;
  Block plaintext;
  Block ciphertext;
};

// The instantiated polynomial system plus provenance tags. Variable layout:
// S-box outputs of the last round first, then earlier rounds, then the key
// variables — so elimination order prefers removing late intermediates.
struct AradiSystem {
  PolySystem system;
  std::vector<AnfTag> tags;  // parallel to system.polys(), 1-based ordinals
  int rounds = 0;
  bool whitening = false;

  VarId key_var(std::size_t j) const {
    if (j >= 256) throw std::out_of_range("AradiSystem: key variable index out of range");
    return static_cast<VarId>(static_cast<std::size_t>(128 * rounds) + j);
  }
  // word 0..3 = w,x,y,z; round 1-based; entry 0..31 MSB-first.
  VarId sbox_var(int word, int round, int entry) const {
    if (word < 0 || word > 3 || round < 1 || round > rounds || entry < 0 || entry > 31)
      throw std::out_of_range("AradiSystem: sbox variable coordinates out of range");
    return static_cast<VarId>((rounds - round) * 128 + word * 32 + entry);
  }
};

inline AnfDocument to_anf_document(const AradiSystem& sys) {
  AnfDocument doc;
  doc.registry = sys.system.registry();
  doc.polys.assign(sys.system.polys().begin(), sys.system.polys().end());
  doc.tags = sys.tags;
  return doc;
}

// ---------------------------------------------------------------------------
// Builds the model in two phases: everything independent of (pt, ct) — the
// registry, symbolic round keys, the round >= 2 S-box constraints and the
// final diffusion forms — is precomputed once per round count; build() then
// instantiates round 1 and the 128 final equations cheaply.
class ModelBuilder {
 public:
  explicit ModelBuilder(int rounds) : rounds_(rounds) {
    model_detail::check_model_rounds(rounds);
    registry_ = make_registry(rounds);
    rks_ = model_detail::schedule_forms(rounds, [this](std::size_t j) {
      return BoolPoly::var(static_cast<VarId>(static_cast<std::size_t>(128 * rounds_) + j));
    });
    std::size_t ordinal = 672;  // round 1 occupies ordinals 1..672
    for (int round = 2; round <= rounds_; ++round) {
      std::array<SymbolicWord, 4> input;
      for (int word = 0; word < 4; ++word) {
        SymbolicWord prev = sbox_word(round - 1, word);
        input[static_cast<std::size_t>(word)] =
            word_xor(diffusion_forms(prev, round - 2),
                     rks_[static_cast<std::size_t>(round - 1)][static_cast<std::size_t>(word)]);
      }
      append_round_constraints(input, round, later_quads_, &later_tags_, ordinal);
    }
    for (int word = 0; word < 4; ++word)
      final_forms_[static_cast<std::size_t>(word)] =
          diffusion_forms(sbox_word(rounds_, word), rounds_ - 1);
  }

  int rounds() const { return rounds_; }
  const std::shared_ptr<const VarRegistry>& registry() const { return registry_; }
  const std::vector<std::array<SymbolicWord, 4>>& round_key_forms() const { return rks_; }

  AradiSystem build(const Block& pt, const Block& ct, bool include_final_whitening) const {
    AradiSystem sys;
    sys.rounds = rounds_;
    sys.whitening = include_final_whitening;
    sys.system = PolySystem(registry_);

    std::vector<BoolPoly> round1;
    std::vector<AnfTag> round1_tags;
    std::size_t ordinal = 0;
    std::array<SymbolicWord, 4> input;
    for (int word = 0; word < 4; ++word) {
      SymbolicWord in;
      for (int j = 0; j < 32; ++j)
        in.bits[static_cast<std::size_t>(j)] =
            poly_add(BoolPoly::constant(block_entry(pt, word, static_cast<std::size_t>(j))),
                     rks_[0][static_cast<std::size_t>(word)].bits[static_cast<std::size_t>(j)]);
      input[static_cast<std::size_t>(word)] = std::move(in);
    }
    append_round_constraints(input, 1, round1, &round1_tags, ordinal);

    for (std::size_t i = 0; i < round1.size(); ++i) sys.system.insert(round1[i]);
    sys.tags = round1_tags;
    for (const BoolPoly& p : later_quads_) sys.system.insert(p);
    sys.tags.insert(sys.tags.end(), later_tags_.begin(), later_tags_.end());

    std::size_t final_ordinal = static_cast<std::size_t>(672 * rounds_);
    for (int word = 0; word < 4; ++word)
      for (int j = 0; j < 32; ++j) {
        BoolPoly form = final_forms_[static_cast<std::size_t>(word)].bits[static_cast<std::size_t>(j)];
        if (include_final_whitening)
          form = poly_add(std::move(form),
                          rks_[static_cast<std::size_t>(rounds_)][static_cast<std::size_t>(word)]
                              .bits[static_cast<std::size_t>(j)]);
        form = poly_add(std::move(form),
                        BoolPoly::constant(block_entry(ct, word, static_cast<std::size_t>(j))));
        sys.system.insert(std::move(form));
        sys.tags.push_back(AnfTag{++final_ordinal, rounds_, "final"});
      }
    return sys;
  }

 private:
  static std::shared_ptr<const VarRegistry> make_registry(int rounds) {
    static constexpr char kWordLetter[4] = {'w', 'x', 'y', 'z'};
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(128 * rounds) + 256);
    for (int round = rounds; round >= 1; --round)
      for (int word = 0; word < 4; ++word)
        for (int j = 0; j < 32; ++j)
          names.push_back(std::string("s_") + kWordLetter[word] + "_" + std::to_string(round) +
                          "_" + std::to_string(j));
    for (int j = 0; j < 256; ++j) names.push_back("k" + std::to_string(j));
    return std::make_shared<VarRegistry>(std::move(names));
  }

  // The word of round-`round` S-box output variables (1-based round).
  SymbolicWord sbox_word(int round, int word) const {
    SymbolicWord out;
    for (int j = 0; j < 32; ++j)
      out.bits[static_cast<std::size_t>(j)] = BoolPoly::var(
          static_cast<VarId>((rounds_ - round) * 128 + word * 32 + j));
    return out;
  }

  // 32 bit-slices of one round: slice j has inputs (W,X,Y,Z) entry j and
  // outputs the four round-`round` S-box variables at entry j.
  void append_round_constraints(const std::array<SymbolicWord, 4>& input, int round,
                                std::vector<BoolPoly>& sink, std::vector<AnfTag>* tags,
                                std::size_t& ordinal) const {
    for (int j = 0; j < 32; ++j) {
      std::array<BoolPoly, 4> inp;
      std::array<VarId, 4> out{};
      for (int word = 0; word < 4; ++word) {
        inp[static_cast<std::size_t>(word)] =
            input[static_cast<std::size_t>(word)].bits[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(word)] =
            static_cast<VarId>((rounds_ - round) * 128 + word * 32 + j);
      }
      for (BoolPoly& p : sbox_constraints(inp, out)) {
        sink.push_back(std::move(p));
        if (tags) tags->push_back(AnfTag{++ordinal, round, "sbox"});
      }
    }
  }

  int rounds_;
  std::shared_ptr<const VarRegistry> registry_;
  std::vector<std::array<SymbolicWord, 4>> rks_;
  std::vector<BoolPoly> later_quads_;
  std::vector<AnfTag> later_tags_;
  std::array<SymbolicWord, 4> final_forms_;
};

// Process-wide builder cache: the expensive (pt, ct)-independent phase runs
// once per round count.
inline const ModelBuilder& shared_model_builder(int rounds) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<ModelBuilder>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(rounds);
  if (it == cache.end())
    it = cache.emplace(rounds, std::make_unique<ModelBuilder>(rounds)).first;
  return *it->second;
}

inline AradiSystem build_system(const ModelConfig& cfg) {
  return shared_model_builder(cfg.rounds)
      .build(cfg.plaintext, cfg.ciphertext, cfg.include_final_whitening);
}

// Uncached variant (used to time a from-scratch construction).
inline AradiSystem build_system_fresh(const ModelConfig& cfg) {
  return ModelBuilder(cfg.rounds).build(cfg.plaintext, cfg.ciphertext, cfg.include_final_whitening);
}

// ---------------------------------------------------------------------------
// Witness assignment from an encryption trace: key bits plus the after-pi
// states, which are exactly the S-box outputs of each round.
inline Assignment trace_assignment(const AradiSystem& sys, const EncryptionTrace& trace) {
  if (trace.rounds != sys.rounds)
    throw std::invalid_argument("trace_assignment: trace round count does not match the model");
  Assignment a(sys.system.nvars());
  for (std::size_t j = 0; j < 256; ++j) a.set(sys.key_var(j), key_bit(trace.key, j));
  for (int round = 1; round <= sys.rounds; ++round)
    for (int word = 0; word < 4; ++word)
      for (int j = 0; j < 32; ++j)
        a.set(sys.sbox_var(word, round, j),
              block_entry(trace.after_pi[static_cast<std::size_t>(round - 1)], word,
                          static_cast<std::size_t>(j)));
  return a;
}

}  // namespace multistep
