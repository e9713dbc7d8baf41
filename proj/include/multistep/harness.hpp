#pragma once
// Experiment orchestration: guess plans over 32-variable key blocks, seeded
// instance generation, single-trial key-recovery runs and whole campaigns
// with CSV reporting and aggregate timing statistics.

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "multistep/aradi.hpp"
#include "multistep/aradi_model.hpp"
#include "multistep/multisolve.hpp"

namespace multistep {

// ---------------------------------------------------------------------------
// Guess plans. The 256 key bits split into 8 blocks of 32; a plan fixes a
// block permutation and takes the first k bits of the concatenated permuted
// blocks. Indices here are key-bit ordinals 0..255 (identical to variable ids
// in a key-only registry); model systems map them through key_var().
inline std::array<std::array<std::size_t, 32>, 8> guess_blocks() {
  std::array<std::array<std::size_t, 32>, 8> blocks{};
  for (std::size_t l = 0; l < 8; ++l)
    for (std::size_t i = 0; i < 32; ++i) blocks[l][i] = 32 * l + i;
  return blocks;
}

inline constexpr std::array<int, 8> kReversePermutation{7, 6, 5, 4, 3, 2, 1, 0};
inline constexpr std::array<int, 8> kIdentityPermutation{0, 1, 2, 3, 4, 5, 6, 7};

// "reverse" | "identity" | comma-separated list of the digits 0..7.
inline std::array<int, 8> parse_permutation(const std::string& text) {
  if (text == "reverse") return kReversePermutation;
  if (text == "identity") return kIdentityPermutation;
  std::array<int, 8> perm{};
  std::array<bool, 8> seen{};
  std::stringstream ss(text);
  std::string item;
  std::size_t count = 0;
  while (std::getline(ss, item, ',')) {
    if (count >= 8) throw std::invalid_argument("permutation: more than 8 entries in '" + text + "'");
    std::size_t pos = 0;
    int v;
    try {
      v = std::stoi(item, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("permutation: bad entry '" + item + "'");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size() || v < 0 || v > 7)
      throw std::invalid_argument("permutation: bad entry '" + item + "'");
    if (seen[static_cast<std::size_t>(v)])
      throw std::invalid_argument("permutation: duplicate block " + std::to_string(v));
    seen[static_cast<std::size_t>(v)] = true;
    perm[count++] = v;
  }
  if (count != 8) throw std::invalid_argument("permutation: expected 8 entries in '" + text + "'");
  return perm;
}

struct GuessPlan {
  std::array<int, 8> permutation{};
  std::size_t k = 0;
  std::vector<std::size_t> key_indices;  // first k of the concatenated permuted blocks
};

inline GuessPlan guess_plan(const std::array<int, 8>& perm, std::size_t k) {
  std::array<bool, 8> seen{};
  for (int b : perm) {
    if (b < 0 || b > 7) throw std::invalid_argument("guess_plan: block index out of range");
    if (seen[static_cast<std::size_t>(b)])
      throw std::invalid_argument("guess_plan: permutation repeats a block");
    seen[static_cast<std::size_t>(b)] = true;
  }
  if (k > 256) throw std::invalid_argument("guess_plan: at most 256 variables can be guessed");
  GuessPlan plan;
  plan.permutation = perm;
  plan.k = k;
  plan.key_indices.reserve(k);
  for (int b : perm)
    for (std::size_t i = 0; i < 32 && plan.key_indices.size() < k; ++i)
      plan.key_indices.push_back(static_cast<std::size_t>(32 * b) + i);
  return plan;
}

// The full concatenated sequence; entries k.. are the in-plan unguessed bits.
inline std::vector<std::size_t> full_plan_sequence(const std::array<int, 8>& perm) {
  return guess_plan(perm, 256).key_indices;
}

// ---------------------------------------------------------------------------
enum class GuessMode { random_bits, true_key_bits };

inline std::string guess_mode_name(GuessMode m) {
  return m == GuessMode::random_bits ? "random" : "truekey";
}

inline GuessMode parse_guess_mode(const std::string& text) {
  if (text == "random") return GuessMode::random_bits;
  if (text == "truekey") return GuessMode::true_key_bits;
  throw std::invalid_argument("guess mode must be 'random' or 'truekey', got '" + text + "'");
}

struct ExperimentConfig {
  int rounds = 2;
  std::size_t guesses = 0;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::string oracle_spec = "t";
  int d1 = 0;
  int d2 = 2;
  double tau_seconds = 60.0;
  std::array<int, 8> permutation = kReversePermutation;
  GuessMode mode = GuessMode::random_bits;
};

// Per-trial sub-seed via the splitmix64 finalizer, so trials are independent
// of execution order and campaigns can be resumed or sharded.
inline std::uint64_t sub_seed(std::uint64_t seed, std::size_t trial) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(trial) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
struct TrialInstance {
  std::size_t trial = 0;
  MasterKey key;
  Block plaintext;
  Block ciphertext;
  std::vector<std::uint8_t> guess_values;  // parallel to the plan's key indices
};

// Deterministically derives (key, pt, ct, guess values) for one trial. In
// random-bits mode an accidental draw of the true key bits is redrawn, so the
// guessed system is wrong by construction.
inline TrialInstance derive_instance(const ExperimentConfig& cfg, std::size_t trial) {
  std::mt19937_64 rng(sub_seed(cfg.seed, trial));
  TrialInstance inst;
  inst.trial = trial;
  for (std::size_t i = 0; i < 8; ++i) inst.key.k[i] = static_cast<std::uint32_t>(rng());
  for (int w = 0; w < 4; ++w) inst.plaintext.set_word(w, static_cast<std::uint32_t>(rng()));
  inst.ciphertext = encrypt(inst.key, inst.plaintext, cfg.rounds);

  const GuessPlan plan = guess_plan(cfg.permutation, cfg.guesses);
  std::vector<std::uint8_t> truth;
  truth.reserve(plan.k);
  for (std::size_t idx : plan.key_indices)
    truth.push_back(static_cast<std::uint8_t>(key_bit(inst.key, idx)));

  if (cfg.mode == GuessMode::true_key_bits) {
    inst.guess_values = std::move(truth);
  } else {
    do {
      inst.guess_values.clear();
      for (std::size_t i = 0; i < plan.k; ++i)
        inst.guess_values.push_back(static_cast<std::uint8_t>(rng() & 1));
    } while (plan.k > 0 && inst.guess_values == truth);
  }
  return inst;
}

// ---------------------------------------------------------------------------
struct PreparedTrial {
  AradiSystem model;
  PolySystem reduced;                    // model with the guess constants folded in
  std::vector<VarId> guessed_vars;       // registry ids of the guessed key bits
  std::vector<VarId> remaining_order;    // in-plan order of the unguessed key bits
};

// Builds the cipher model (with final whitening, since the instance
// ciphertext comes from the complete encryption) and folds the guessed bits
// in by constant propagation, which is the cheap equivalent of adjoining the
// pinning polynomials at d1 = 0.
inline PreparedTrial prepare_trial(const ExperimentConfig& cfg, const TrialInstance& inst) {
  ModelConfig mc;
  mc.rounds = cfg.rounds;
  mc.include_final_whitening = true;
  mc.plaintext = inst.plaintext;
  mc.ciphertext = inst.ciphertext;

  PreparedTrial prep;
  prep.model = build_system(mc);

  const std::vector<std::size_t> sequence = full_plan_sequence(cfg.permutation);
  if (inst.guess_values.size() > sequence.size())
    throw std::invalid_argument("prepare_trial: more guess values than key bits");

  Assignment pinned(prep.model.system.nvars());
  for (std::size_t i = 0; i < inst.guess_values.size(); ++i) {
    VarId v = prep.model.key_var(sequence[i]);
    prep.guessed_vars.push_back(v);
    pinned.set(v, inst.guess_values[i] != 0);
  }
  for (std::size_t i = inst.guess_values.size(); i < sequence.size(); ++i)
    prep.remaining_order.push_back(prep.model.key_var(sequence[i]));

  prep.reduced = PolySystem(prep.model.system.registry());
  for (const BoolPoly& p : prep.model.system.polys())
    prep.reduced.insert(substitute_partial(p, pinned));
  return prep;
}

// ---------------------------------------------------------------------------
struct TrialRecord {
  std::size_t trial = 0;
  std::string key_hex;  // generating instance digest
  std::string pt_hex;
  std::string outcome;  // "solved" | "inconsistent" | "unresolved"
  std::optional<MasterKey> recovered_key;
  SolveTree stats;
  int min_tame_depth = -1;
  double gb_time_mean_s = 0.0;
  double gb_time_std_s = 0.0;
  double total_s = 0.0;
};

inline double mean_of(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

// Sample standard deviation (n - 1 denominator); 0 for fewer than two points.
inline double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

// Runs the solver on an already-derived instance. Outcome "solved" requires a
// full key reconstruction that re-encrypts the plaintext to the instance
// ciphertext; a {1} basis is "inconsistent"; anything else is "unresolved".
inline TrialRecord run_trial_instance(const ExperimentConfig& cfg, const TrialInstance& inst) {
  const auto t0 = std::chrono::steady_clock::now();

  TrialRecord rec;
  rec.trial = inst.trial;
  rec.key_hex = key_to_hex(inst.key);
  rec.pt_hex = block_to_hex(inst.plaintext);

  PreparedTrial prep = prepare_trial(cfg, inst);
  const OracleFn oracle = parse_oracle(cfg.oracle_spec);
  Guess root{prep.remaining_order, {}};
  SolveResult result = multi_solve(prep.reduced, root, oracle, cfg.d1, cfg.d2, cfg.tau_seconds,
                                   inst.guess_values.size());

  rec.stats = result.stats;
  rec.min_tame_depth = result.min_tame_depth;
  rec.gb_time_mean_s = mean_of(result.stats.tame_gb_seconds);
  rec.gb_time_std_s = sample_std(result.stats.tame_gb_seconds);

  if (result.basis.size() == 1 && result.basis.front().is_one()) {
    rec.outcome = "inconsistent";
  } else if (result.solution) {
    MasterKey candidate{};
    bool complete = true;
    const std::vector<std::size_t> sequence = full_plan_sequence(cfg.permutation);
    for (std::size_t i = 0; i < inst.guess_values.size(); ++i)
      set_key_bit(candidate, sequence[i], inst.guess_values[i] != 0);
    for (std::size_t i = inst.guess_values.size(); i < sequence.size(); ++i) {
      VarId v = prep.model.key_var(sequence[i]);
      if (!result.solution->is_set(v)) {
        complete = false;
        break;
      }
      set_key_bit(candidate, sequence[i], result.solution->get(v));
    }
    if (complete && encrypt(candidate, inst.plaintext, cfg.rounds) == inst.ciphertext) {
      rec.outcome = "solved";
      rec.recovered_key = candidate;
    } else {
      rec.outcome = "unresolved";
    }
  } else {
    rec.outcome = "unresolved";
  }

  rec.total_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

inline TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t trial) {
  return run_trial_instance(cfg, derive_instance(cfg, trial));
}

// Independent ground truth for small residual key spaces: enumerate every
// completion of the unguessed key bits and count those consistent with the
// instance's (pt, ct) under real encryption. 0 certifies inconsistency of the
// guessed system; 1 certifies a unique recoverable key.
inline std::size_t key_completion_count(const ExperimentConfig& cfg, const TrialInstance& inst,
                                        MasterKey* found = nullptr) {
  const std::vector<std::size_t> sequence = full_plan_sequence(cfg.permutation);
  const std::size_t k = inst.guess_values.size();
  const std::size_t free_bits = sequence.size() - k;
  if (free_bits > 24)
    throw std::invalid_argument("key_completion_count: too many unguessed bits (max 24)");

  MasterKey candidate{};
  for (std::size_t i = 0; i < k; ++i)
    set_key_bit(candidate, sequence[i], inst.guess_values[i] != 0);

  std::size_t count = 0;
  const std::uint64_t total = std::uint64_t{1} << free_bits;
  for (std::uint64_t code = 0; code < total; ++code) {
    for (std::size_t b = 0; b < free_bits; ++b)
      set_key_bit(candidate, sequence[k + b], (code >> b) & 1);
    if (encrypt(candidate, inst.plaintext, cfg.rounds) == inst.ciphertext) {
      ++count;
      if (found) *found = candidate;
    }
  }
  return count;
}

// ---------------------------------------------------------------------------
// Campaigns.
struct CampaignSummary {
  std::size_t guessed_vars = 0;
  std::size_t trials = 0;
  std::size_t solved = 0;
  std::size_t inconsistent = 0;
  std::size_t unresolved = 0;
  std::uint64_t computed_tame = 0;
  std::uint64_t computed_wild = 0;
  std::uint64_t predicted_wild = 0;
  double tame_time_mean_s = 0.0;  // pooled over every tame elimination
  double tame_time_std_s = 0.0;
  std::vector<std::uint64_t> nodes_at_depth;  // merged across trials
  std::vector<std::uint64_t> tame_at_depth;
  std::vector<std::uint64_t> wild_computed_at_depth;
  std::vector<std::uint64_t> wild_predicted_at_depth;
};

namespace harness_detail {

inline void merge_depths(std::vector<std::uint64_t>& into, const std::vector<std::uint64_t>& from) {
  if (into.size() < from.size()) into.resize(from.size(), 0);
  for (std::size_t i = 0; i < from.size(); ++i) into[i] += from[i];
}

}  // namespace harness_detail

inline CampaignSummary summarize(const ExperimentConfig& cfg,
                                 std::span<const TrialRecord> records) {
  CampaignSummary s;
  s.guessed_vars = cfg.guesses;
  s.trials = records.size();
  std::vector<double> tame_times;
  for (const TrialRecord& r : records) {
    if (r.outcome == "solved")
      ++s.solved;
    else if (r.outcome == "inconsistent")
      ++s.inconsistent;
    else
      ++s.unresolved;
    s.computed_tame += r.stats.computed_tame;
    s.computed_wild += r.stats.computed_wild;
    s.predicted_wild += r.stats.predicted_wild;
    tame_times.insert(tame_times.end(), r.stats.tame_gb_seconds.begin(),
                      r.stats.tame_gb_seconds.end());
    harness_detail::merge_depths(s.nodes_at_depth, r.stats.nodes_at_depth);
    harness_detail::merge_depths(s.tame_at_depth, r.stats.computed_tame_at_depth);
    harness_detail::merge_depths(s.wild_computed_at_depth, r.stats.computed_wild_at_depth);
    harness_detail::merge_depths(s.wild_predicted_at_depth, r.stats.predicted_wild_at_depth);
  }
  s.tame_time_mean_s = mean_of(tame_times);
  s.tame_time_std_s = sample_std(tame_times);
  return s;
}

struct CampaignReport {
  std::vector<TrialRecord> records;
  CampaignSummary summary;
};

inline CampaignReport run_campaign(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("run_campaign: need at least one trial");
  CampaignReport report;
  report.records.reserve(cfg.trials);
  for (std::size_t t = 0; t < cfg.trials; ++t) report.records.push_back(run_trial(cfg, t));
  report.summary = summarize(cfg, report.records);
  return report;
}

// ---------------------------------------------------------------------------
// Reporting.
inline void write_report_csv(std::ostream& os, const ExperimentConfig& cfg,
                             std::span<const TrialRecord> records) {
  os << "trial,rounds,guesses,mode,oracle,outcome,tame_count,wild_count_computed,"
        "wild_count_predicted,max_depth,min_tame_depth,gb_time_mean_s,gb_time_std_s,total_s\n";
  char buf[64];
  auto secs = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  for (const TrialRecord& r : records) {
    os << r.trial << ',' << cfg.rounds << ',' << cfg.guesses << ',' << guess_mode_name(cfg.mode)
       << ',' << cfg.oracle_spec << ',' << r.outcome << ',' << r.stats.tame_total() << ','
       << r.stats.computed_wild << ',' << r.stats.predicted_wild << ',' << r.stats.max_depth()
       << ',' << r.min_tame_depth << ',' << secs(r.gb_time_mean_s) << ','
       << secs(r.gb_time_std_s) << ',' << secs(r.total_s) << '\n';
  }
}

inline void write_report_csv(const std::string& path, const ExperimentConfig& cfg,
                             std::span<const TrialRecord> records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open report file '" + path + "' for writing");
  write_report_csv(out, cfg, records);
  if (!out.good()) throw std::runtime_error("error while writing report file '" + path + "'");
}

// One aggregate row in the style of a runtime table (guessed vars, mean
// seconds, standard deviation), plus outcome counts and per-depth cases.
inline void write_summary_text(std::ostream& os, const CampaignSummary& s) {
  char buf[64];
  auto secs = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };
  os << "guessed_vars=" << s.guessed_vars << " tame_gb_mean_s=" << secs(s.tame_time_mean_s)
     << " tame_gb_std_s=" << secs(s.tame_time_std_s) << "\n";
  os << "trials=" << s.trials << " solved=" << s.solved << " inconsistent=" << s.inconsistent
     << " unresolved=" << s.unresolved << "\n";
  const std::uint64_t cases = s.computed_tame + s.computed_wild + s.predicted_wild;
  os << "cases: tame=" << s.computed_tame << " wild_computed=" << s.computed_wild
     << " wild_predicted=" << s.predicted_wild;
  if (cases > 0) {
    std::snprintf(buf, sizeof buf, "%.4f",
                  static_cast<double>(s.computed_tame) / static_cast<double>(cases));
    os << " tame_fraction=" << buf;
  }
  os << "\n";
  for (std::size_t d = 0; d < s.nodes_at_depth.size(); ++d) {
    os << "depth " << d << ": nodes=" << s.nodes_at_depth[d];
    auto at = [d](const std::vector<std::uint64_t>& v) -> std::uint64_t {
      return d < v.size() ? v[d] : 0;
    };
    os << " tame=" << at(s.tame_at_depth) << " wild_computed=" << at(s.wild_computed_at_depth)
       << " wild_predicted=" << at(s.wild_predicted_at_depth) << "\n";
  }
}

}  // namespace multistep
