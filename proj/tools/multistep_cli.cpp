// Command-line front end: cipher encryption with optional trace dumps,
// polynomial model generation, single-system solving, and seeded
// key-recovery attack campaigns.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "multistep/anf_io.hpp"
#include "multistep/aradi.hpp"
#include "multistep/aradi_model.hpp"
#include "multistep/harness.hpp"
#include "multistep/multisolve.hpp"
#include "multistep/stats_json.hpp"

namespace {

using namespace multistep;

nlohmann::json trace_to_json(const EncryptionTrace& tr) {
  nlohmann::json j;
  j["rounds"] = tr.rounds;
  j["key"] = key_to_hex(tr.key);
  j["plaintext"] = block_to_hex(tr.plaintext);
  j["ciphertext"] = block_to_hex(tr.ciphertext);
  auto blocks_hex = [](const std::vector<Block>& v) {
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const Block& b : v) out.push_back(block_to_hex(b));
    return out;
  };
  std::vector<std::string> rks;
  rks.reserve(tr.round_keys.size());
  for (const RoundKey& rk : tr.round_keys) rks.push_back(round_key_to_hex(rk));
  j["round_keys"] = rks;
  j["after_key_add"] = blocks_hex(tr.after_key_add);
  j["after_pi"] = blocks_hex(tr.after_pi);
  j["after_lambda"] = blocks_hex(tr.after_lambda);
  return j;
}

int cmd_encrypt(const std::string& key_hex, const std::string& pt_hex, int rounds,
                const std::string& trace_path) {
  const MasterKey key = key_from_hex(key_hex);
  const Block pt = block_from_hex(pt_hex);
  if (trace_path.empty()) {
    std::cout << block_to_hex(encrypt(key, pt, rounds)) << "\n";
    return 0;
  }
  const EncryptionTrace tr = encrypt_with_trace(key, pt, rounds);
  std::ofstream out(trace_path);
  if (!out) throw std::runtime_error("cannot open trace file '" + trace_path + "' for writing");
  out << trace_to_json(tr).dump(2) << "\n";
  std::cout << block_to_hex(tr.ciphertext) << "\n";
  return 0;
}

int cmd_model_gen(int rounds, const std::string& key_hex, const std::string& pt_hex,
                  bool whitening, const std::string& ct_hex, const std::string& out_path) {
  const MasterKey key = key_from_hex(key_hex);
  ModelConfig cfg;
  cfg.rounds = rounds;
  cfg.include_final_whitening = whitening;
  cfg.plaintext = block_from_hex(pt_hex);
  if (!ct_hex.empty()) {
    cfg.ciphertext = block_from_hex(ct_hex);
  } else if (whitening) {
    cfg.ciphertext = encrypt(key, cfg.plaintext, rounds);
  } else {
    // Without the final key addition the matching right-hand side is the
    // state after the last diffusion layer, so the emitted system stays
    // consistent with the generating key.
    const EncryptionTrace tr = encrypt_with_trace(key, cfg.plaintext, rounds);
    cfg.ciphertext = tr.after_lambda.back();
  }
  const AradiSystem sys = build_system(cfg);
  const AnfDocument doc = to_anf_document(sys);
  if (out_path.empty()) {
    write_anf(std::cout, doc);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file '" + out_path + "' for writing");
    write_anf(out, doc);
    if (!out.good()) throw std::runtime_error("error while writing '" + out_path + "'");
    std::cout << "wrote " << doc.polys.size() << " polynomials over " << doc.registry->size()
              << " variables to " << out_path << "\n";
  }
  return 0;
}

int cmd_solve(const std::string& system_path, const std::string& oracle_spec, int d1, int d2,
              double timeout, const std::string& stats_path) {
  std::ifstream in(system_path);
  if (!in) throw std::runtime_error("cannot open system file '" + system_path + "'");
  const AnfDocument doc = read_anf(in);
  PolySystem system(doc.registry);
  for (const BoolPoly& p : doc.polys) system.insert(p);

  const OracleFn oracle = parse_oracle(oracle_spec);
  const SolveResult result = multi_solve(system, Guess{}, oracle, d1, d2, timeout);

  const bool inconsistent = result.basis.size() == 1 && result.basis.front().is_one();
  std::cout << "status: " << (inconsistent ? "inconsistent" : result.solved() ? "solved" : "open")
            << "\n";
  std::cout << "basis:\n";
  for (const BoolPoly& p : result.basis) std::cout << "  " << to_string(p, *doc.registry) << "\n";
  if (!inconsistent && result.solution) {
    std::cout << "assignment:\n";
    for (VarId v = 0; v < doc.registry->size(); ++v)
      if (result.solution->is_set(v))
        std::cout << "  " << doc.registry->name(v) << " = " << (result.solution->get(v) ? 1 : 0)
                  << "\n";
  }
  std::cout << "nodes=" << result.stats.nodes << " tame=" << result.stats.tame_total()
            << " wild_computed=" << result.stats.computed_wild
            << " wild_predicted=" << result.stats.predicted_wild
            << " max_depth=" << result.stats.max_depth() << "\n";
  if (!stats_path.empty()) {
    std::ofstream out(stats_path);
    if (!out) throw std::runtime_error("cannot open stats file '" + stats_path + "' for writing");
    out << to_json(result.stats).dump(2) << "\n";
  }
  return inconsistent ? 2 : 0;
}

int cmd_attack(const ExperimentConfig& cfg, const std::string& out_path, bool full_scale) {
  if (cfg.rounds > 4 && !full_scale)
    throw std::runtime_error(
        "attack: more than 4 rounds is a long-running full-scale experiment; pass --full-scale "
        "to confirm");
  const CampaignReport report = run_campaign(cfg);
  if (out_path.empty()) {
    write_report_csv(std::cout, cfg, report.records);
  } else {
    write_report_csv(out_path, cfg, report.records);
    write_summary_text(std::cout, report.summary);
    std::cout << "report written to " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boolean polynomial system solver and Aradi key-recovery experiments"};
  app.require_subcommand(1);

  // encrypt
  std::string key_hex, pt_hex, trace_path;
  int enc_rounds = 16;
  CLI::App* enc = app.add_subcommand("encrypt", "Encrypt one block, optionally dumping a trace");
  enc->add_option("--key", key_hex, "256-bit key, 64 hex digits")->required();
  enc->add_option("--pt", pt_hex, "128-bit plaintext, 32 hex digits")->required();
  enc->add_option("--rounds", enc_rounds, "number of rounds (1..16)")->default_val(16);
  enc->add_option("--trace", trace_path, "write the full encryption trace as JSON");

  // model-gen
  std::string mg_key, mg_pt, mg_ct, mg_out;
  int mg_rounds = 2;
  bool mg_whitening = false;
  CLI::App* mg = app.add_subcommand("model-gen", "Emit the polynomial model of an instance");
  mg->add_option("--rounds", mg_rounds, "number of rounds (1..16)")->required();
  mg->add_option("--key", mg_key, "generating key, 64 hex digits")->required();
  mg->add_option("--pt", mg_pt, "plaintext, 32 hex digits")->required();
  mg->add_flag("--whitening", mg_whitening, "include the final key addition in the model");
  mg->add_option("--ct", mg_ct, "override the right-hand-side ciphertext, 32 hex digits");
  mg->add_option("--out", mg_out, "output path (default: stdout)");

  // solve
  std::string sv_system, sv_oracle = "t", sv_stats;
  int sv_d1 = 0, sv_d2 = 2;
  double sv_timeout = 60.0;
  CLI::App* sv = app.add_subcommand("solve", "Solve a polynomial system from a file");
  sv->add_option("--system", sv_system, "input system file")->required();
  sv->add_option("--oracle", sv_oracle, "oracle spec: t | w | h:<B> | nrv:<B>");
  sv->add_option("--d1", sv_d1, "preprocessing elimination degree (0 disables)");
  sv->add_option("--d2", sv_d2, "solving degree bound");
  sv->add_option("--timeout", sv_timeout, "per-elimination time limit in seconds");
  sv->add_option("--stats", sv_stats, "write tree statistics as JSON");

  // attack
  ExperimentConfig cfg;
  std::string at_perm = "reverse", at_mode = "random", at_out;
  bool at_full_scale = false;
  CLI::App* at = app.add_subcommand("attack", "Run a seeded key-recovery campaign");
  at->add_option("--rounds", cfg.rounds, "number of rounds (1..16)")->required();
  std::uint64_t at_guesses = 0, at_trials = 1;
  at->add_option("--guesses", at_guesses, "number of guessed key bits (0..256)")->required();
  at->add_option("--trials", at_trials, "number of trials")->required();
  at->add_option("--seed", cfg.seed, "campaign seed")->required();
  at->add_option("--perm", at_perm, "block permutation: reverse | identity | comma list");
  at->add_option("--mode", at_mode, "guess mode: random | truekey");
  at->add_option("--oracle", cfg.oracle_spec, "oracle spec: t | w | h:<B> | nrv:<B>");
  at->add_option("--d1", cfg.d1, "preprocessing elimination degree");
  at->add_option("--d2", cfg.d2, "solving degree bound");
  at->add_option("--timeout", cfg.tau_seconds, "per-elimination time limit in seconds");
  at->add_option("--out", at_out, "CSV report path (default: CSV to stdout)");
  at->add_flag("--full-scale", at_full_scale, "allow long-running configurations (rounds > 4)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (enc->parsed()) return cmd_encrypt(key_hex, pt_hex, enc_rounds, trace_path);
    if (mg->parsed()) return cmd_model_gen(mg_rounds, mg_key, mg_pt, mg_whitening, mg_ct, mg_out);
    if (sv->parsed()) return cmd_solve(sv_system, sv_oracle, sv_d1, sv_d2, sv_timeout, sv_stats);
    if (at->parsed()) {
      cfg.guesses = static_cast<std::size_t>(at_guesses);
      cfg.trials = static_cast<std::size_t>(at_trials);
      cfg.permutation = parse_permutation(at_perm);
      cfg.mode = parse_guess_mode(at_mode);
      return cmd_attack(cfg, at_out, at_full_scale);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
