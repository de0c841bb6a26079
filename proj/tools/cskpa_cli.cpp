#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cskpa/cskpa.hpp"

using namespace cskpa;

namespace {

struct Common {
  std::uint64_t seed = 0;
  std::string summary;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Master seed (required for every run)")->required();
  sub->add_option("--summary", c.summary, "Write the run summary JSON here instead of stdout");
}

void emit_summary(const Common& c, const std::string& command, const Json& config, const Json& results) {
  const auto s = run_summary(command, config, c.seed, results).dump(2) + "\n";
  if (c.summary.empty()) {
    std::cout << s;
  } else {
    write_text(c.summary, s);
  }
}

Plaintext load_plaintext(const std::string& path) {
  const auto j = parse_json(read_text(path), path);
  try {
    return Plaintext(j.at("x").get<std::vector<std::int64_t>>(), j.at("L").get<std::int64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": expected {\"x\": [...], \"L\": bound}: " + e.what());
  }
}

std::vector<std::int8_t> parse_row(const std::string& text) {
  std::vector<std::int8_t> row;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "1" || item == "+1") {
      row.push_back(1);
    } else if (item == "-1") {
      row.push_back(-1);
    } else {
      throw DomainError("row entries must be +1 or -1, got '" + item + "'");
    }
  }
  return row;
}

/// "a:b" or "a:b:step"; the default step is 4.
std::vector<std::size_t> parse_range(const std::string& text) {
  std::vector<std::size_t> parts;
  std::stringstream ss(text);
  std::string item;
  try {
    while (std::getline(ss, item, ':')) parts.push_back(std::stoul(item));
  } catch (const std::logic_error&) {
    throw DomainError("bad range '" + text + "'");
  }
  if (parts.size() == 1) parts.push_back(parts[0]);
  if (parts.size() == 2) parts.push_back(4);
  if (parts.size() != 3 || parts[2] == 0 || parts[0] > parts[1]) throw DomainError("bad range '" + text + "'");
  std::vector<std::size_t> out;
  for (auto n = parts[0]; n <= parts[1]; n += parts[2]) out.push_back(n);
  return out;
}

Keystream load_key(const std::string& path, std::uint64_t seed) {
  if (path.empty()) return lfsr_key(seed);
  return key_from_json(parse_json(read_text(path), path));
}

Json points_json(const std::vector<CountPoint>& pts) {
  Json arr = Json::array();
  for (const auto& p : pts) {
    arr.push_back({{"n", p.n}, {"h", p.h}, {"mean_count", p.mean_count}, {"theory", count_to_json(p.theory)}});
  }
  return arr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Known-plaintext attack laboratory for antipodal compressed-sensing encryption"};
  app.require_subcommand(1);
  Common common;

  // encode
  auto* enc = app.add_subcommand("encode", "Encode a plaintext with a keyed antipodal matrix");
  std::string plaintext_path, key_path, matrix_out;
  std::size_t m = 32;
  std::uint64_t matrix_index = 0;
  enc->add_option("--plaintext", plaintext_path, "JSON {\"x\": [...], \"L\": bound}")->required();
  enc->add_option("--key", key_path, "Key JSON; default is the standard LFSR seeded from --seed");
  enc->add_option("--m", m, "Number of measurements");
  enc->add_option("--t", matrix_index, "Matrix index within the keystream");
  enc->add_option("--matrix-out", matrix_out, "Write the matrix in binary form");
  add_common(enc, common);

  // keystream-attack
  auto* ks = app.add_subcommand("keystream-attack", "Recover an LFSR from 2B observed bits");
  std::size_t continuation = 1000;
  ks->add_option("--key", key_path, "Key JSON; default is the standard LFSR seeded from --seed");
  ks->add_option("--continuation", continuation, "Bits checked after the observed prefix");
  add_common(ks, common);

  // reduce
  auto* red = app.add_subcommand("reduce", "Turn one known (x, y_j) pair into a subset-sum instance");
  std::string attacker = "eve", row_text, a0_text, instance_out;
  std::int64_t y_j = 0;
  std::size_t flips = 0;
  red->add_option("--plaintext", plaintext_path, "JSON {\"x\": [...], \"L\": bound}")->required();
  red->add_option("--y", y_j, "Ciphertext entry y_j")->required();
  red->add_option("--attacker", attacker, "eve or steve")->check(CLI::IsMember({"eve", "steve"}));
  red->add_option("--row", row_text, "True row A1_j as comma-separated +-1, to record the true solution");
  red->add_option("--a0-row", a0_text, "Public row A0_j (steve)");
  red->add_option("--c", flips, "Number of flips c_j in the row (steve)");
  red->add_option("--out", instance_out, "Instance JSON output");
  add_common(red, common);

  // count
  auto* cnt = app.add_subcommand("count", "Exact number of solutions of an instance");
  std::string instance_path;
  std::uint64_t budget = kDefaultTableBudget;
  cnt->add_option("--instance", instance_path, "Instance JSON {u, upsilon[, gamma]}")->required();
  cnt->add_option("--budget", budget, "Table size ceiling");
  add_common(cnt, common);

  // enumerate
  auto* en = app.add_subcommand("enumerate", "List every solution of an instance");
  std::string csv_out;
  std::uint64_t solution_budget = kDefaultSolutionBudget;
  en->add_option("--instance", instance_path, "Instance JSON {u, upsilon[, gamma]}")->required();
  en->add_option("--budget", solution_budget, "Maximum number of listed solutions");
  en->add_option("--out", csv_out, "Solutions CSV")->required();
  add_common(en, common);

  // predict
  auto* pr = app.add_subcommand("predict", "Expected solution counts and key lifetimes");
  std::uint64_t n = 0, bound = 0;
  std::optional<double> density;
  std::optional<unsigned> max_h;
  double zeta = 0.9999;
  pr->add_option("--n", n, "Plaintext length")->required();
  pr->add_option("--L", bound, "Plaintext magnitude bound")->required();
  pr->add_option("--r", density, "Flip density per row; adds the second-class prediction");
  pr->add_option("--max-h", max_h, "Also report candidates within Hamming distance h");
  pr->add_option("--zeta", zeta, "Target probability for the key lifetime");
  add_common(pr, common);

  // ph-table
  auto* ph = app.add_subcommand("ph-table", "Exact coefficients of the balanced-configuration polynomials");
  unsigned table_h = 15;
  ph->add_option("--max-h", table_h, "Largest h")->check(CLI::Range(2U, kMaxFitDegree));
  ph->add_option("--out", csv_out, "CSV output")->required();
  add_common(ph, common);

  // attack
  auto* at = app.add_subcommand("attack", "Known-plaintext attack experiment with recovery and verification");
  KpaConfig kpa;
  std::string out_dir = ".";
  at->add_option("--attacker", attacker, "eve or steve")->check(CLI::IsMember({"eve", "steve"}));
  at->add_option("--n", kpa.n, "Plaintext length");
  at->add_option("--m", kpa.m, "Measurements");
  at->add_option("--k", kpa.k, "Sparsity");
  at->add_option("--L", kpa.bound, "Plaintext magnitude bound");
  at->add_option("--eta", kpa.eta, "Flip density");
  at->add_option("--candidates", kpa.candidates, "Candidate matrices");
  at->add_option("--max-draws", kpa.max_draws, "Draw limit per row search");
  at->add_flag("--greedy", kpa.greedy, "Repair draws greedily (not uniform over solutions)");
  at->add_option("--out-dir", out_dir, "Directory for kpa.csv");
  add_common(at, common);

  // eta-sweep
  auto* es = app.add_subcommand("eta-sweep", "Second-class recovery quality against flip density");
  EtaSweepConfig sweep;
  sweep.etas = {0.0, 0.005, 0.01, 0.02, 0.03, 0.05, 0.1};
  es->add_option("--etas", sweep.etas, "Flip densities");
  es->add_option("--n", sweep.n, "Plaintext length");
  es->add_option("--m", sweep.m, "Measurements");
  es->add_option("--k", sweep.k, "Sparsity");
  es->add_option("--L", sweep.bound, "Plaintext magnitude bound");
  es->add_option("--seeds", sweep.seeds, "Seeds per density");
  es->add_option("--out", csv_out, "CSV output")->required();
  add_common(es, common);

  // fig2, fig3, fig5
  std::string range_text;
  CountProtocol proto;
  unsigned fig_h = 8;
  double fig_flips = 5.0;
  auto add_fig = [&](const char* name, const char* help, const char* default_range, std::int64_t default_bound) {
    auto* f = app.add_subcommand(name, help);
    f->add_option("--n-range", range_text, "a:b[:step] (step defaults to 4)")->default_str(default_range);
    f->add_option("--L", proto.bound, "Plaintext magnitude bound")->default_val(default_bound);
    f->add_option("--instances", proto.instances, "Instances per n");
    f->add_option("--out", csv_out, "CSV output")->required();
    add_common(f, common);
    return f;
  };
  auto* f2 = add_fig("fig2", "Sample-average eavesdropper counts against the closed form", "16:32", 10'000);
  auto* f3 = add_fig("fig3", "Sample-average counts by Hamming distance", "21:29", 10'000);
  f3->add_option("--max-h", fig_h, "Largest Hamming distance");
  auto* f5 = add_fig("fig5", "Sample-average second-class counts against the closed form", "32:48", 5'000);
  f5->add_option("--flips", fig_flips, "Flips per row (r = flips / n)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return DomainError("").exit_code();
  }

  try {
    if (*enc) {
      const auto x = load_plaintext(plaintext_path);
      const auto key = load_key(key_path, common.seed);
      const auto a = expand_matrix(key, m, x.size(), matrix_index);
      const auto y = encode(x, a);
      if (!matrix_out.empty()) write_text(matrix_out, matrix_to_binary(a));
      std::cout << "y:";
      for (auto v : y.entries) std::cout << ' ' << v;
      std::cout << "\n";
      emit_summary(common, "encode", {{"plaintext", plaintext_path}, {"m", m}, {"t", matrix_index}, {"key", key_to_json(key)}},
                   {{"y", y.entries}, {"word_bits", y.word_bits}});
    } else if (*ks) {
      const auto key = load_key(key_path, common.seed);
      const std::size_t observed = 2 * key.degree();
      const auto bits = key.bits(observed + continuation);
      const auto spec = berlekamp_massey(std::span<const std::uint8_t>(bits).first(observed));
      const bool match = regenerate(spec, bits.size()) == bits;
      std::cout << "degree: " << spec.degree << "\nmatch: " << (match ? "yes" : "no") << "\n";
      emit_summary(common, "keystream-attack", {{"key", key_to_json(key)}, {"continuation", continuation}},
                   {{"degree", spec.degree}, {"taps", spec.taps}, {"seed", spec.seed},
                    {"continuation_match", match}});
      if (!match) throw VerificationError("keystream-attack: regenerated stream diverges");
    } else if (*red) {
      const auto x = load_plaintext(plaintext_path);
      const auto row = parse_row(row_text);
      std::optional<std::span<const std::int8_t>> row_span;
      if (!row.empty()) row_span.emplace(row);
      Json inst;
      if (attacker == "eve") {
        inst = instance_to_json(eve_reduction(x, y_j, row_span));
      } else {
        const auto a0 = parse_row(a0_text);
        inst = instance_to_json(steve_reduction(x, y_j, a0, flips, row_span));
      }
      if (!instance_out.empty()) write_text(instance_out, inst.dump(2) + "\n");
      emit_summary(common, "reduce", {{"plaintext", plaintext_path}, {"y", y_j}, {"attacker", attacker}}, inst);
    } else if (*cnt) {
      const auto loaded = instance_from_json(parse_json(read_text(instance_path), instance_path));
      const auto c = loaded.constrained ? count_gamma_solutions(loaded.instance, budget)
                                        : count_solutions(loaded.instance, budget);
      std::cout << "count: " << c.exact << "\n";
      auto res = count_to_json(c.log());
      res["exact"] = c.exact.str();
      emit_summary(common, "count", {{"instance", instance_path}, {"budget", budget}}, res);
    } else if (*en) {
      const auto loaded = instance_from_json(parse_json(read_text(instance_path), instance_path));
      const auto set = loaded.constrained ? enumerate_gamma_solutions(loaded.instance, solution_budget)
                                          : enumerate_solutions(loaded.instance, solution_budget);
      solutions_csv(set, loaded.instance.true_solution).save(csv_out);
      std::cout << "solutions: " << set.count.exact << (set.exact ? "" : " (listing truncated)") << "\n";
      emit_summary(common, "enumerate", {{"instance", instance_path}, {"budget", solution_budget}, {"out", csv_out}},
                   {{"count", set.count.exact.str()}, {"listed", set.members.size()}, {"exact", set.exact}});
    } else if (*pr) {
      const auto se = s_eve_expected(n, bound).count;
      Json res{{"s_eve", count_to_json(se)}, {"t_eve", count_to_json(key_lifetime(se, zeta))}};
      std::cout << "S_Eve: " << se.str() << "\nT_Eve: " << key_lifetime(se, zeta).str() << "\n";
      if (density) {
        const auto ss = s_steve_expected(n, bound, *density).count;
        std::cout << "S_Steve: " << ss.str() << "\nT_Steve: " << key_lifetime(ss, zeta).str() << "\n";
        res["s_steve"] = count_to_json(ss);
        res["t_steve"] = count_to_json(key_lifetime(ss, zeta));
      }
      if (max_h) {
        const auto sh = s_eve_hamming_cumulative(n, bound, *max_h).count;
        std::cout << "S_Eve(h <= " << *max_h << "): " << sh.str() << "\n";
        res["s_eve_hamming_cumulative"] = count_to_json(sh);
      }
      Json cfg{{"n", n}, {"L", bound}, {"zeta", zeta}};
      if (density) cfg["r"] = *density;
      if (max_h) cfg["h"] = *max_h;
      emit_summary(common, "predict", cfg, res);
    } else if (*ph) {
      const PhTable table(table_h);
      ph_table_csv(table, table_h).save(csv_out);
      emit_summary(common, "ph-table", {{"max_h", table_h}, {"out", csv_out}}, {{"rows_written", true}});
    } else if (*at) {
      kpa.attacker = attacker == "eve" ? Attacker::eve : Attacker::steve;
      kpa.master_seed = common.seed;
      const auto exp = run_kpa_experiment(kpa);
      const auto csv_path = std::filesystem::path(out_dir) / "kpa.csv";
      kpa_csv(exp).save(csv_path);
      std::cout << "mean RSNR'': " << format_double(exp.summary.mean_rsnr2_db) << " dB\n";
      emit_summary(common, "attack",
                   {{"attacker", attacker}, {"n", kpa.n}, {"m", kpa.m}, {"k", kpa.k}, {"L", kpa.bound}, {"eta", kpa.eta},
                    {"candidates", kpa.candidates}, {"max_draws", kpa.max_draws}, {"greedy", kpa.greedy},
                    {"out", csv_path.string()}},
                   kpa_summary_json(exp.summary));
    } else if (*es) {
      sweep.master_seed = common.seed;
      const auto curve = eta_sweep(sweep);
      eta_csv(curve).save(csv_out);
      emit_summary(common, "eta-sweep",
                   {{"etas", sweep.etas}, {"n", sweep.n}, {"m", sweep.m}, {"k", sweep.k}, {"L", sweep.bound},
                    {"seeds", sweep.seeds}, {"out", csv_out}},
                   {{"points", curve.size()}});
    } else {
      const std::string name = *f2 ? "fig2" : (*f3 ? "fig3" : "fig5");
      if (range_text.empty()) range_text = *f2 ? "16:32" : (*f3 ? "21:29" : "32:48");
      proto.ns = parse_range(range_text);
      proto.seed = common.seed;
      const auto pts = *f2 ? eve_count_protocol(proto)
                           : (*f3 ? hamming_count_protocol(proto, fig_h) : steve_count_protocol(proto, fig_flips));
      count_points_csv(pts, proto.bound).save(csv_out);
      Json cfg{{"n_range", range_text}, {"L", proto.bound}, {"instances", proto.instances}, {"out", csv_out}};
      if (*f3) cfg["max_h"] = fig_h;
      if (*f5) cfg["flips"] = fig_flips;
      emit_summary(common, name, cfg, points_json(pts));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  }
  return 0;
}
