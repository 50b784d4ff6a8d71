// Command line front end: parse an automorphism, compute cylinder images,
// dual images (both paths), the suffix-set collection, the dual growth
// rate, Nielsen decompositions, and run the verification harness.
//
// Exit codes: 0 ok, 1 usage, 2 property violation/disagreement,
// 3 inconclusive or out of budget.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fgdual/fgdual.hpp"

using namespace fgdual;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;
constexpr int kExitInconclusive = 3;

struct CommonOptions {
  int rank = 2;
  std::string moves;
  std::string auto_file;
  bool json_output = false;
  std::uint64_t budget = 10'000'000;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool needs_auto = true) {
  cmd->add_option("--rank", opt.rank, "free group rank N")->required();
  if (needs_auto) {
    cmd->add_option("--moves", opt.moves,
                    "automorphism as ;-separated elementary moves");
    cmd->add_option("--auto", opt.auto_file, "automorphism spec file");
  }
  cmd->add_flag("--json", opt.json_output, "JSON output");
  cmd->add_option("--budget", opt.budget, "word-evaluation budget");
}

Automorphism load_automorphism(const CommonOptions& opt, const Basis& basis) {
  if (!opt.moves.empty() && !opt.auto_file.empty())
    throw UsageError("give either --moves or --auto, not both");
  if (!opt.moves.empty())
    return Automorphism::from_moves(basis, parse_moves(opt.moves, basis));
  if (!opt.auto_file.empty()) {
    std::ifstream in(opt.auto_file);
    if (!in) throw UsageError("cannot open " + opt.auto_file);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_automorphism_spec(buffer.str(), basis);
  }
  throw UsageError("an automorphism is required (--moves or --auto)");
}

json set_to_json(const PrefixSet& u, const Basis& basis) {
  json arr = json::array();
  for (const Word& w : u.words()) arr.push_back(word_to_string(w, basis));
  return arr;
}

int run_image(const CommonOptions& opt, const std::string& word_text) {
  Basis basis(opt.rank);
  Automorphism phi = load_automorphism(opt, basis);
  Word u = parse_word(word_text, basis);
  Budget budget(opt.budget);
  const std::uint64_t s = static_cast<std::uint64_t>(stretch_factor(phi));
  const std::uint64_t k = s * s + s * s * s + s * s * s * s;
  bool exact = sphere_size(basis, u.empty(), static_cast<int>(k)) <=
               std::min<std::uint64_t>(opt.budget, 200000);
  PrefixSet raw;
  PrefixSet reduced;
  if (exact) {
    raw = cylinder_image_general(phi, u, budget);
    reduced = reduce_prefix_set(raw, basis);
  } else {
    reduced = cylinder_image_adaptive(phi, u, budget);
  }
  if (opt.json_output) {
    json out;
    out["mode"] = exact ? "exact" : "adaptive";
    if (exact) out["raw"] = set_to_json(raw, basis);
    out["reduced"] = set_to_json(reduced, basis);
    std::cout << out.dump() << "\n";
  } else {
    if (exact)
      std::cout << "raw (k=" << k << "): " << prefix_set_to_string(raw, basis)
                << "\n";
    else
      std::cout << "raw set skipped (k=" << k
                << " is out of budget; adaptive depth used)\n";
    std::cout << "U_min: " << prefix_set_to_string(reduced, basis) << "\n";
  }
  return kExitOk;
}

int run_dual(const CommonOptions& opt, const std::string& word_text) {
  Basis basis(opt.rank);
  Automorphism phi = load_automorphism(opt, basis);
  Word w = parse_word(word_text, basis);
  SuffixTable table = table_for(phi);
  PrefixSet fast = dual_apply_fast(table, w);
  bool checked = false;
  Budget budget(opt.budget);
  try {
    PrefixSet general = dual_apply_general(phi, w, budget);
    checked = true;
    if (!(general == fast)) {
      std::cerr << "path disagreement: fast "
                << prefix_set_to_string(fast, basis) << " general "
                << prefix_set_to_string(general, basis) << "\n";
      return kExitViolation;
    }
  } catch (const ResourceError&) {
    // general path out of budget; report the fast result alone
  }
  if (opt.json_output) {
    json out;
    out["dual"] = set_to_json(fast, basis);
    out["cross_checked"] = checked;
    std::cout << out.dump() << "\n";
  } else {
    std::cout << prefix_set_to_string(fast, basis)
              << (checked ? "" : "  (general path skipped: budget)") << "\n";
  }
  return kExitOk;
}

int run_collection(const CommonOptions& opt) {
  Basis basis(opt.rank);
  Automorphism phi = load_automorphism(opt, basis);
  SuffixTable table = table_for(phi);
  if (opt.json_output) {
    json out;
    json sets;
    for (Letter x = 0; x < basis.letter_count(); ++x) {
      json arr = json::array();
      for (const Word& u : table.entry(x))
        arr.push_back(word_to_string(u, basis));
      sets[std::string(1, basis.letter_name(x))] = arr;
    }
    out["collection"] = sets;
    out["t"] = table.nielsen_count();
    out["card_bound"] = static_cast<std::uint64_t>(1)
                        << std::min(table.nielsen_count(), 62);
    out["reduction_fired"] = fast_path_reduction_fired.load();
    std::cout << out.dump() << "\n";
  } else {
    for (Letter x = 0; x < basis.letter_count(); ++x) {
      PrefixSet entry(table.entry(x));
      std::cout << "U(" << basis.letter_name(x)
                << ") = " << prefix_set_to_string(entry, basis) << "\n";
    }
    std::cout << "t = " << table.nielsen_count() << ", card bound 2^t = "
              << (static_cast<std::uint64_t>(1)
                  << std::min(table.nielsen_count(), 62))
              << "\n";
  }
  return kExitOk;
}

int run_growth(const CommonOptions& opt, int kmax, double tol) {
  Basis basis(opt.rank);
  Automorphism phi = load_automorphism(opt, basis);
  SuffixTable table = table_for(phi);
  Budget budget(opt.budget);
  GrowthEstimate est = empirical_growth(table, kmax, budget, tol);
  TransitionMatrix matrix = build_transition_matrix(table);
  json out;
  out["lambda"] = est.lambda_matrix;
  json rows = json::array();
  for (const auto& row : matrix.entries) rows.push_back(row);
  out["matrix"] = rows;
  json order = json::array();
  for (Letter x = 0; x < basis.letter_count(); ++x)
    order.push_back(std::string(1, basis.letter_name(x)));
  out["letter_order"] = order;
  json emp = json::array();
  for (const GrowthStep& step : est.empirical)
    emp.push_back({{"k", step.k}, {"card", step.max_card},
                   {"ratio", step.ratio}});
  out["empirical"] = emp;
  out["t"] = table.nielsen_count();
  out["partial"] = est.partial;
  out["limsup_tail_window"] = est.limsup_tail;  // tail window of length 3
  std::cout << out.dump() << "\n";
  return est.partial ? kExitInconclusive : kExitOk;
}

int run_decompose(const CommonOptions& opt) {
  Basis basis(opt.rank);
  Automorphism phi = load_automorphism(opt, basis);
  std::vector<ElementaryMove> moves = phi.has_factorization()
                                          ? phi.factorization()
                                          : nielsen_decompose(phi.forward());
  std::cout << "moves: " << moves_to_string(moves, basis) << "\n";
  return kExitOk;
}

int run_oracle_check(const CommonOptions& opt, const std::string& word_text,
                     int depth) {
  Basis basis(opt.rank);
  Automorphism phi = load_automorphism(opt, basis);
  Word u = parse_word(word_text, basis);
  Budget budget(opt.budget);
  PrefixSet claimed = dual_apply_general(phi, u, budget);
  OracleConfig cfg = default_oracle_config(phi, depth);
  cfg.budget = opt.budget;
  std::set<Word> got = boundary_image_prefixes(phi, u, cfg);
  std::set<Word> expected = touching_cover(claimed, basis, cfg.out_depth);
  if (got == expected) {
    std::cout << "agree: " << prefix_set_to_string(claimed, basis) << "\n";
    return kExitOk;
  }
  std::cout << "DISAGREE; symmetric difference at depth " << depth << ":\n";
  for (const Word& w : got)
    if (!expected.count(w))
      std::cout << "  oracle only: " << word_to_string(w, basis) << "\n";
  for (const Word& w : expected)
    if (!got.count(w))
      std::cout << "  claimed only: " << word_to_string(w, basis) << "\n";
  return kExitViolation;
}

// Randomized invariant suite; prints its seed, reproducible by fixing it.
int run_verify(const CommonOptions& opt, std::uint32_t seed) {
  Basis basis(opt.rank);
  std::mt19937 rng(seed);
  std::cout << "seed: " << seed << "\n";
  std::uniform_int_distribution<int> move_count(0, 4);
  std::uniform_int_distribution<int> gen(0, basis.rank() - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<ElementaryMove> moves;
    int count = move_count(rng);
    for (int i = 0; i < count; ++i) {
      int a = gen(rng);
      int b = gen(rng);
      while (b == a) b = gen(rng);
      if (coin(rng) < 0.75)
        moves.push_back(NielsenMove{a, b, coin(rng) < 0.5 ? 1 : -1});
      else
        moves.push_back(InversionMove{a});
    }
    Automorphism phi = Automorphism::from_moves(basis, moves);
    SuffixTable table = build_collection(moves, basis);
    // random word, both paths
    std::vector<Letter> letters;
    std::uniform_int_distribution<int> letter(0, basis.letter_count() - 1);
    std::uniform_int_distribution<int> len(1, 6);
    int want = len(rng);
    while (static_cast<int>(letters.size()) < want) {
      Letter x = static_cast<Letter>(letter(rng));
      if (!letters.empty() && x == inverse_of(letters.back())) continue;
      letters.push_back(x);
    }
    Word w = Word::from_reduced(letters);
    PrefixSet fast = dual_apply_fast(table, w);
    try {
      Budget budget(opt.budget);
      PrefixSet general = dual_apply_general(phi, w, budget);
      if (!(fast == general)) {
        std::cerr << "violation: paths disagree for moves '"
                  << moves_to_string(moves, basis) << "' on word "
                  << word_to_string(w, basis) << "\n";
        return kExitViolation;
      }
      ++checked;
    } catch (const ResourceError&) {
      // skip instances that are out of budget
    }
  }
  std::cout << "path equivalence: " << checked << " instances ok\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dual automorphisms of free groups"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string word_text;
  int kmax = 8;
  double tol = 1e-9;
  int depth = 3;
  std::uint32_t seed = 0;

  CLI::App* image = app.add_subcommand(
      "image", "Theorem-1 cylinder image of a word: raw set and U_min");
  add_common(image, opt);
  image->add_option("word", word_text)->required();

  CLI::App* dual = app.add_subcommand(
      "dual", "dual image of a word, fast path cross-checked");
  add_common(dual, opt);
  dual->add_option("word", word_text)->required();

  CLI::App* collection =
      app.add_subcommand("collection", "the 2N suffix sets U(x)");
  add_common(collection, opt);

  CLI::App* growth = app.add_subcommand("growth", "dual growth rate (JSON)");
  add_common(growth, opt);
  growth->add_option("--kmax", kmax, "empirical iteration depth");
  growth->add_option("--tol", tol, "eigenvalue tolerance");

  CLI::App* verify =
      app.add_subcommand("verify", "randomized invariant suite");
  add_common(verify, opt, /*needs_auto=*/false);
  verify->add_option("--seed", seed, "random seed (printed, default 0)");

  CLI::App* decompose =
      app.add_subcommand("decompose", "elementary move word for the map");
  add_common(decompose, opt);

  CLI::App* oracle = app.add_subcommand(
      "oracle-check", "brute-force boundary oracle vs the general path");
  add_common(oracle, opt);
  oracle->add_option("word", word_text)->required();
  oracle->add_option("--depth", depth, "oracle out-depth m");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (image->parsed()) return run_image(opt, word_text);
    if (dual->parsed()) return run_dual(opt, word_text);
    if (collection->parsed()) return run_collection(opt);
    if (growth->parsed()) return run_growth(opt, kmax, tol);
    if (verify->parsed()) return run_verify(opt, seed);
    if (decompose->parsed()) return run_decompose(opt);
    if (oracle->parsed()) return run_oracle_check(opt, word_text, depth);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NotAnAutomorphismError& e) {
    std::cerr << "not an automorphism: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResourceError& e) {
    std::cerr << "out of budget: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const InconclusiveOracle& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitInconclusive;
  }
  return kExitUsage;
}
