#pragma once
// Bit-exact reference implementation of the Aradi block cipher: 128-bit
// blocks as four 32-bit words (W, X, Y, Z), 256-bit keys as eight words,
// 16 rounds of key addition + Toffoli substitution + word-wise linear
// diffusion, plus a final key addition. Conventions (documented in the
// README): within a word, bit j is the coefficient of 2^j; "left rotation"
// moves toward higher bit indices; hex strings are big-endian word order;
// key bit index j (k_j) is bit 31 - (j mod 32) of word j / 32.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace multistep {

struct CipherState {
  std::uint32_t w = 0, x = 0, y = 0, z = 0;

  std::uint32_t word(int i) const {
    switch (i) {
      case 0: return w;
      case 1: return x;
      case 2: return y;
      case 3: return z;
      default: throw std::out_of_range("CipherState: word index out of range");
    }
  }
  void set_word(int i, std::uint32_t v) {
    switch (i) {
      case 0: w = v; return;
      case 1: x = v; return;
      case 2: y = v; return;
      case 3: z = v; return;
      default: throw std::out_of_range("CipherState: word index out of range");
    }
  }
  friend bool operator==(const CipherState&, const CipherState&) = default;
};

using Block = CipherState;

struct KeyState {
  std::array<std::uint32_t, 8> k{};

  friend bool operator==(const KeyState&, const KeyState&) = default;
};

using MasterKey = KeyState;

struct RoundKey {
  std::array<std::uint32_t, 4> words{};

  friend bool operator==(const RoundKey&, const RoundKey&) = default;
};

// ---------------------------------------------------------------------------
// Rotations.
namespace aradi_detail {

inline std::uint32_t rotl32(std::uint32_t v, int m) {
  m &= 31;
  return m == 0 ? v : ((v << m) | (v >> (32 - m)));
}

inline std::uint32_t rotl16(std::uint32_t v, int m) {
  v &= 0xFFFFu;
  m &= 15;
  return m == 0 ? v : (((v << m) | (v >> (16 - m))) & 0xFFFFu);
}

}  // namespace aradi_detail

// Checked left circular rotation for width 16 or 32.
inline std::uint32_t rotl(std::uint32_t v, int m, int width) {
  if (width != 16 && width != 32) throw std::invalid_argument("rotl: width must be 16 or 32");
  if (m < 0 || m >= width) throw std::invalid_argument("rotl: shift out of range");
  return width == 32 ? aradi_detail::rotl32(v, m) : aradi_detail::rotl16(v, m);
}

// ---------------------------------------------------------------------------
// Substitution layer: a cascade of Toffoli gates, each update seeing the
// already-updated words.
inline CipherState pi_layer(CipherState s) {
  s.x ^= s.w & s.y;
  s.z ^= s.x & s.y;
  s.y ^= s.w & s.z;
  s.w ^= s.x & s.z;
  return s;
}

inline CipherState pi_layer_inverse(CipherState s) {
  s.w ^= s.x & s.z;
  s.y ^= s.w & s.z;
  s.z ^= s.x & s.y;
  s.x ^= s.w & s.y;
  return s;
}

// Shift offsets (a, b, c) of the linear layer, indexed by round mod 4.
inline constexpr std::array<std::array<int, 3>, 4> kLambdaOffsets{{
    {{11, 8, 14}},
    {{10, 9, 11}},
    {{9, 4, 14}},
    {{8, 9, 7}},
}};

// Word-wise linear map: the word splits into 16-bit halves (u, l) =
// (bits 31..16, bits 15..0) and maps to
//   (u + rotl16(u, a) + rotl16(l, c), l + rotl16(l, a) + rotl16(u, b)).
inline std::uint32_t l_map(std::uint32_t word, int a, int b, int c) {
  using aradi_detail::rotl16;
  const std::uint32_t u = word >> 16;
  const std::uint32_t l = word & 0xFFFFu;
  const std::uint32_t nu = u ^ rotl16(u, a) ^ rotl16(l, c);
  const std::uint32_t nl = l ^ rotl16(l, a) ^ rotl16(u, b);
  return (nu << 16) | nl;
}

inline CipherState lambda_layer(CipherState s, int round_index) {
  if (round_index < 0) throw std::invalid_argument("lambda_layer: negative round index");
  const auto& ofs = kLambdaOffsets[static_cast<std::size_t>(round_index % 4)];
  s.w = l_map(s.w, ofs[0], ofs[1], ofs[2]);
  s.x = l_map(s.x, ofs[0], ofs[1], ofs[2]);
  s.y = l_map(s.y, ofs[0], ofs[1], ofs[2]);
  s.z = l_map(s.z, ofs[0], ofs[1], ofs[2]);
  return s;
}

// ---------------------------------------------------------------------------
// Key schedule. RK^i reads (K0..K3) for even i and (K4..K7) for odd i; the
// state update at step i applies M0 (even) or M1 (odd) to two register
// pairs, swaps registers, and finally XORs the 32-bit step counter into K7.
inline std::array<RoundKey, 17> key_schedule(const MasterKey& master) {
  using aradi_detail::rotl32;
  std::array<std::uint32_t, 8> k = master.k;
  std::array<RoundKey, 17> out{};
  for (int i = 0; i <= 16; ++i) {
    if (i % 2 == 0)
      out[static_cast<std::size_t>(i)] = RoundKey{{k[0], k[1], k[2], k[3]}};
    else
      out[static_cast<std::size_t>(i)] = RoundKey{{k[4], k[5], k[6], k[7]}};
    if (i == 16) break;
    if (i % 2 == 0) {
      // M0(a, b) = (rotl32(a,1) ^ b, rotl32(b,3) ^ rotl32(a,1) ^ b)
      auto m0 = [](std::uint32_t& a, std::uint32_t& b) {
        const std::uint32_t t = rotl32(a, 1) ^ b;
        b = rotl32(b, 3) ^ t;
        a = t;
      };
      m0(k[0], k[1]);
      m0(k[4], k[5]);
      std::swap(k[1], k[2]);
      std::swap(k[5], k[6]);
    } else {
      // M1(a, b) = (rotl32(a,9) ^ b, rotl32(b,28) ^ rotl32(a,9) ^ b)
      auto m1 = [](std::uint32_t& a, std::uint32_t& b) {
        const std::uint32_t t = rotl32(a, 9) ^ b;
        b = rotl32(b, 28) ^ t;
        a = t;
      };
      m1(k[2], k[3]);
      m1(k[6], k[7]);
      std::swap(k[1], k[4]);
      std::swap(k[3], k[6]);
    }
    k[7] ^= static_cast<std::uint32_t>(i);
  }
  return out;
}

// ---------------------------------------------------------------------------
inline CipherState xor_round_key(CipherState s, const RoundKey& rk) {
  s.w ^= rk.words[0];
  s.x ^= rk.words[1];
  s.y ^= rk.words[2];
  s.z ^= rk.words[3];
  return s;
}

struct EncryptionTrace {
  int rounds = 0;
  MasterKey key;
  Block plaintext;
  Block ciphertext;
  std::vector<RoundKey> round_keys;      // RK^0 .. RK^rounds
  std::vector<CipherState> after_key_add;  // one entry per round
  std::vector<CipherState> after_pi;
  std::vector<CipherState> after_lambda;
};

namespace aradi_detail {

inline void check_rounds(int rounds) {
  if (rounds < 1 || rounds > 16)
    throw std::invalid_argument("aradi: rounds must lie in [1, 16]");
}

}  // namespace aradi_detail

// Reduced-round variants run rounds 0..rounds-1 and use RK^rounds as the
// final whitening key.
inline Block encrypt(const MasterKey& key, Block pt, int rounds = 16) {
  aradi_detail::check_rounds(rounds);
  const auto rks = key_schedule(key);
  CipherState s = pt;
  for (int i = 0; i < rounds; ++i) {
    s = xor_round_key(s, rks[static_cast<std::size_t>(i)]);
    s = pi_layer(s);
    s = lambda_layer(s, i);
  }
  return xor_round_key(s, rks[static_cast<std::size_t>(rounds)]);
}

inline EncryptionTrace encrypt_with_trace(const MasterKey& key, Block pt, int rounds = 16) {
  aradi_detail::check_rounds(rounds);
  const auto rks = key_schedule(key);
  EncryptionTrace t;
  t.rounds = rounds;
  t.key = key;
  t.plaintext = pt;
  t.round_keys.assign(rks.begin(), rks.begin() + rounds + 1);
  CipherState s = pt;
  for (int i = 0; i < rounds; ++i) {
    s = xor_round_key(s, rks[static_cast<std::size_t>(i)]);
    t.after_key_add.push_back(s);
    s = pi_layer(s);
    t.after_pi.push_back(s);
    s = lambda_layer(s, i);
    t.after_lambda.push_back(s);
  }
  t.ciphertext = xor_round_key(s, rks[static_cast<std::size_t>(rounds)]);
  return t;
}

inline Block decrypt(const MasterKey& key, Block ct, int rounds = 16) {
  aradi_detail::check_rounds(rounds);
  const auto rks = key_schedule(key);
  CipherState s = xor_round_key(ct, rks[static_cast<std::size_t>(rounds)]);
  for (int i = rounds - 1; i >= 0; --i) {
    s = lambda_layer(s, i);  // involution
    s = pi_layer_inverse(s);
    s = xor_round_key(s, rks[static_cast<std::size_t>(i)]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Key-bit packing: k_j is bit 31 - (j mod 32) of key word j / 32 (MSB-first
// within each word, words in K0..K7 order).
inline bool key_bit(const MasterKey& key, std::size_t j) {
  if (j >= 256) throw std::out_of_range("key_bit: index out of range");
  return (key.k[j / 32] >> (31 - (j % 32))) & 1u;
}

inline void set_key_bit(MasterKey& key, std::size_t j, bool bit) {
  if (j >= 256) throw std::out_of_range("set_key_bit: index out of range");
  const std::uint32_t mask = 1u << (31 - (j % 32));
  if (bit)
    key.k[j / 32] |= mask;
  else
    key.k[j / 32] &= ~mask;
}

// Block entry j of word i: MSB-first bit indexing matching the key packing.
inline bool block_entry(const Block& b, int word, std::size_t j) {
  if (j >= 32) throw std::out_of_range("block_entry: bit index out of range");
  return (b.word(word) >> (31 - j)) & 1u;
}

// ---------------------------------------------------------------------------
// Hex encodings: big-endian, first hex char = most significant nibble of
// K0 (keys, 64 chars) or W (blocks, 32 chars).
namespace aradi_detail {

inline void append_word_hex(std::string& out, std::uint32_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  for (int shift = 28; shift >= 0; shift -= 4) out.push_back(digits[(v >> shift) & 0xF]);
}

inline std::uint32_t parse_word_hex(const std::string& s, std::size_t pos) {
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    const char c = s[pos + i];
    std::uint32_t nibble = 0;
    if (c >= '0' && c <= '9')
      nibble = static_cast<std::uint32_t>(c - '0');
    else if (c >= 'a' && c <= 'f')
      nibble = static_cast<std::uint32_t>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F')
      nibble = static_cast<std::uint32_t>(c - 'A' + 10);
    else
      throw std::invalid_argument("hex decode: invalid character");
    v = (v << 4) | nibble;
  }
  return v;
}

}  // namespace aradi_detail

inline std::string key_to_hex(const MasterKey& key) {
  std::string out;
  out.reserve(64);
  for (std::uint32_t w : key.k) aradi_detail::append_word_hex(out, w);
  return out;
}

inline MasterKey key_from_hex(const std::string& hex) {
  if (hex.size() != 64) throw std::invalid_argument("key_from_hex: expected 64 hex characters");
  MasterKey key;
  for (std::size_t i = 0; i < 8; ++i) key.k[i] = aradi_detail::parse_word_hex(hex, 8 * i);
  return key;
}

inline std::string block_to_hex(const Block& b) {
  std::string out;
  out.reserve(32);
  for (int i = 0; i < 4; ++i) aradi_detail::append_word_hex(out, b.word(i));
  return out;
}

inline Block block_from_hex(const std::string& hex) {
  if (hex.size() != 32) throw std::invalid_argument("block_from_hex: expected 32 hex characters");
  Block b;
  for (int i = 0; i < 4; ++i) b.set_word(i, aradi_detail::parse_word_hex(hex, 8 * static_cast<std::size_t>(i)));
  return b;
}

inline std::string round_key_to_hex(const RoundKey& rk) {
  std::string out;
  out.reserve(32);
  for (std::uint32_t w : rk.words) aradi_detail::append_word_hex(out, w);
  return out;
}

}  // namespace multistep
