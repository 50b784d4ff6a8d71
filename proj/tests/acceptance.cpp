// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Every randomized block uses a fixed seed so runs are reproducible.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fgdual/fgdual.hpp"
#include "test_util.hpp"

using namespace fgdual;

namespace {

int failures = 0;

void report(int index, const char* title, bool ok, const std::string& detail) {
  std::printf("C%d %-28s %s%s%s\n", index, title, ok ? "PASS" : "FAIL",
              detail.empty() ? "" : "  -- ", detail.c_str());
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// --- C1: the six closed-form suffix sets of the one-move table ------------

bool check_fundamental_table(int rank, std::string& detail) {
  Basis basis(rank);
  SuffixTable t = elementary_suffix_table(NielsenMove{0, 1, 1}, basis);
  auto is = [&](const char* letter, std::initializer_list<const char*> ws) {
    std::set<Word> want;
    for (const char* s : ws) want.insert(parse_word(s, basis));
    return t.entry(parse_word(letter, basis).back()) == want;
  };
  bool ok = is("a", {"a"}) && is("A", {"BA"}) && is("b", {"b", "A"}) &&
            is("B", {"BB", "Ba"});
  for (int g = 2; g < rank; ++g) {
    char lo = static_cast<char>('a' + g);
    char up = static_cast<char>('A' + g);
    std::string slo(1, lo), sup(1, up);
    ok = ok && is(slo.c_str(), {slo.c_str()}) && is(sup.c_str(), {sup.c_str()});
  }
  if (!ok) detail = "table mismatch at rank " + std::to_string(rank);
  return ok;
}

void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = check_fundamental_table(2, detail) &&
            check_fundamental_table(3, detail);
  double dt = seconds_since(t0);
  if (ok && dt >= 1.0) {
    ok = false;
    detail = "took " + std::to_string(dt) + "s (limit 1s)";
  }
  report(1, "fundamental formulas", ok, detail);
}

// --- C2: general image formula end-to-end at N=2 --------------------------

void criterion2() {
  auto t0 = std::chrono::steady_clock::now();
  Basis basis(2);
  std::mt19937 rng(20240202);
  std::vector<std::vector<ElementaryMove>> maps;
  maps.push_back(parse_moves("N(a,b)", basis));
  maps.push_back(parse_moves("N(a,b); N(b,a)", basis));
  maps.push_back(fgdual::testing::random_moves(rng, basis, 3, 1.0));

  int mismatches = 0, oracle_mismatches = 0, inconclusive = 0, full_runs = 0;
  std::string detail;
  for (const auto& moves : maps) {
    SuffixTable table = build_collection(moves, basis);
    const Automorphism& phi = table.automorphism();
    for (int i = 0; i < 50; ++i) {
      Word u = fgdual::testing::random_reduced_word(rng, basis, 5, 1);
      PrefixSet fast = dual_apply_fast(table, u);
      // general path (full Theorem-style enumeration only when S = 1)
      try {
        Budget budget(50'000'000);
        PrefixSet general =
            stretch_factor(phi) == 1
                ? reduce_prefix_set(cylinder_image_general(phi, u, budget),
                                    basis)
                : cylinder_image_adaptive(phi, u, budget);
        if (stretch_factor(phi) == 1) ++full_runs;
        if (!(general == fast)) {
          ++mismatches;
          continue;
        }
        // adaptive result must also agree with the boundary oracle
        int m = static_cast<int>(
            std::max<std::size_t>(1, std::min<std::size_t>(
                                         general.max_word_length(), 4)));
        if (!assert_image_equal(phi, u, general,
                                default_oracle_config(phi, m)))
          ++oracle_mismatches;
      } catch (const ResourceError&) {
        ++inconclusive;
      } catch (const InconclusiveOracle&) {
        ++inconclusive;
      }
    }
  }
  double dt = seconds_since(t0);
  bool ok = mismatches == 0 && oracle_mismatches == 0 && inconclusive == 0 &&
            dt < 300.0;
  std::ostringstream os;
  os << mismatches << " path / " << oracle_mismatches
     << " oracle mismatches, " << inconclusive << " inconclusive, "
     << full_runs << " full-k runs, " << static_cast<int>(dt) << "s";
  report(2, "general image end-to-end", ok, os.str());
}

// --- C3: tripartite agreement grid ----------------------------------------

void criterion3() {
  std::mt19937 rng(33);
  int instances = 0, disagreements = 0, inconclusive = 0;
  for (int rank : {2, 3}) {
    Basis basis(rank);
    for (int trial = 0; trial < 110; ++trial) {
      auto moves =
          fgdual::testing::random_moves(rng, basis, trial % 5);  // <= 4 moves
      SuffixTable table = build_collection(moves, basis);
      const Automorphism& phi = table.automorphism();
      Word u = fgdual::testing::random_reduced_word(rng, basis, 6, 1);
      int m = 1 + trial % 4;  // out_depth <= 4
      ++instances;
      PrefixSet fast = dual_apply_fast(table, u);
      try {
        Budget budget(30'000'000);
        PrefixSet general = dual_apply_general(phi, u, budget);
        if (!(general == fast)) {
          ++disagreements;
          continue;
        }
        if (!assert_image_equal(phi, u, general,
                                default_oracle_config(phi, m)))
          ++disagreements;
      } catch (const ResourceError&) {
        ++inconclusive;
      } catch (const InconclusiveOracle&) {
        ++inconclusive;
      }
    }
  }
  bool ok = instances >= 200 && disagreements == 0 &&
            inconclusive * 20 < instances;
  std::ostringstream os;
  os << instances << " instances, " << disagreements << " disagreements, "
     << inconclusive << " inconclusive";
  report(3, "tripartite agreement", ok, os.str());
}

// --- C4: reduction confluence ----------------------------------------------

void criterion4() {
  Basis basis(2);
  std::mt19937 rng(44);
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    PrefixSet u = fgdual::testing::random_prefix_set(rng, basis, 12, 6);
    PrefixSet r = reduce_prefix_set(u, basis);
    if (!(reduce_prefix_set(r, basis) == r)) ++bad;
    if (!u.empty() && !(covers_at_depth(u, basis, 8) ==
                        covers_at_depth(r, basis, 8)))
      ++bad;
    for (int order = 0; order < 5; ++order)
      if (!(reduce_prefix_set_randomized(u, basis, rng) == r)) ++bad;
  }
  report(4, "reduction confluence", bad == 0,
         bad == 0 ? "1000 sets x 5 orders"
                  : std::to_string(bad) + " violations");
}

// --- C5: suffix-table structure --------------------------------------------

void criterion5() {
  std::mt19937 rng(55);
  int violations = 0, tables = 0, skipped_letters = 0;
  while (tables < 20) {
    int rank = 2 + tables % 2;
    Basis basis(rank);
    auto moves = fgdual::testing::random_moves(rng, basis, tables % 7);
    SuffixTable table = build_collection(moves, basis);
    if (table.nielsen_count() > 6) continue;
    ++tables;
    const Automorphism& phi = table.automorphism();
    std::size_t cap = static_cast<std::size_t>(1)
                      << std::min(table.nielsen_count(), 20);
    // the 2N single-letter sets match the general path
    for (Letter x = 0; x < basis.letter_count(); ++x) {
      if (table.entry(x).size() > cap) ++violations;
      try {
        Budget budget(30'000'000);
        if (!(PrefixSet(table.entry(x), true) ==
              dual_apply_general(phi, Word::single(x), budget)))
          ++violations;
      } catch (const ResourceError&) {
        ++skipped_letters;
      }
    }
    // fast application has the predicted left-factor structure
    for (int i = 0; i < 100; ++i) {
      Word w = fgdual::testing::random_reduced_word(rng, basis, 8, 1);
      PrefixSet got = dual_apply_fast(table, w);
      if (got.size() > cap) ++violations;
      Word left = phi.apply(truncate_right(w, 1));
      std::set<Word> predicted;
      for (const Word& s : table.entry(w.back()))
        predicted.insert(reduce_concat(left, s));
      if (!(reduce_prefix_set(PrefixSet(predicted), basis) == got))
        ++violations;
    }
  }
  std::ostringstream os;
  os << violations << " violations over 20 tables";
  if (skipped_letters)
    os << ", " << skipped_letters << " letters out of budget";
  report(5, "suffix-table structure", violations == 0, os.str());
}

// --- C6: growth-rate consistency --------------------------------------------

void criterion6() {
  Basis basis(2);
  std::mt19937 rng(66);
  bool ok = true;
  std::string detail;

  auto lam = [&](const std::vector<ElementaryMove>& moves, const Basis& b) {
    return pf_eigenvalue(build_transition_matrix(build_collection(moves, b)),
                         1e-12);
  };
  if (std::abs(lam({}, basis) - 1.0) > 1e-12) {
    ok = false;
    detail = "identity lambda != 1";
  }
  if (std::abs(lam(parse_moves("P(ab); I(b)", basis), basis) - 1.0) > 1e-12) {
    ok = false;
    detail = "permutation lambda != 1";
  }
  if (std::abs(lam(parse_moves("N(a,b)", basis), basis) - 1.0) > 1e-9) {
    ok = false;
    detail = "N(a,b) spectral radius != 1";
  }
  double harness_golden = (3.0 + std::sqrt(5.0)) / 2.0;
  TransitionMatrix harness;
  harness.dim = 2;
  harness.entries = {{1, 1}, {1, 2}};
  if (std::abs(pf_eigenvalue(harness, 1e-12) - harness_golden) > 1e-9) {
    ok = false;
    detail = "harness matrix off";
  }

  int checked = 0, partial = 0;
  while (ok && checked < 10) {
    int rank = 2 + checked % 2;
    Basis b(rank);
    auto moves = fgdual::testing::random_moves(rng, b, checked % 6);
    SuffixTable table = build_collection(moves, b);
    if (table.nielsen_count() > 5) continue;
    ++checked;
    Budget budget(200'000'000);
    GrowthEstimate est = empirical_growth(table, 10, budget, 1e-9);
    if (est.empirical.empty()) {
      ok = false;
      detail = "no empirical data";
      break;
    }
    if (est.partial) ++partial;
    double at_last = est.empirical.back().ratio;
    if (std::abs(at_last - est.lambda_matrix) / est.lambda_matrix > 0.15) {
      ok = false;
      std::ostringstream os;
      os << "empirical " << at_last << " vs matrix " << est.lambda_matrix
         << " for '" << moves_to_string(moves, b) << "'";
      detail = os.str();
    }
  }
  if (ok && partial)
    detail = std::to_string(partial) + " runs budget-truncated";
  report(6, "growth-rate consistency", ok, detail);
}

// --- C7: basis independence --------------------------------------------------

void criterion7() {
  Basis basis(2);
  std::mt19937 rng(77);
  int bad = 0;
  for (int pair = 0; pair < 10; ++pair) {
    auto phi = fgdual::testing::random_moves(rng, basis, 1 + pair % 4);
    auto psi = fgdual::testing::random_moves(rng, basis, 1 + (pair / 2) % 3);
    if (!basis_independence_check(phi, psi, basis, 1e-4)) ++bad;
  }
  // permutation conjugators must agree bit for bit
  auto phi = parse_moves("N(a,b); N(b,a)", basis);
  for (const char* p : {"P(ab)", "I(a)", "P(ab); I(b)"}) {
    auto psi = parse_moves(p, basis);
    auto conj = invert_move_word(psi);
    conj.insert(conj.end(), phi.begin(), phi.end());
    conj.insert(conj.end(), psi.begin(), psi.end());
    double l1 = pf_eigenvalue(
        build_transition_matrix(build_collection(phi, basis)), 1e-10);
    double l2 = pf_eigenvalue(
        build_transition_matrix(build_collection(conj, basis)), 1e-10);
    if (l1 != l2) ++bad;
  }
  report(7, "basis independence", bad == 0,
         bad ? std::to_string(bad) + " pairs off" : "10 pairs + 3 exact");
}

// --- C8: decomposition round-trip ---------------------------------------------

void criterion8() {
  std::mt19937 rng(88);
  int bad = 0;
  for (int trial = 0; trial < 50; ++trial) {
    int rank = 2 + trial % 2;
    Basis basis(rank);
    auto moves = fgdual::testing::random_moves(rng, basis, trial % 9);
    GeneratorMap fwd = moves_to_map(moves, basis);
    try {
      auto decomposition = nielsen_decompose(fwd);
      GeneratorMap back = moves_to_map(decomposition, basis);
      for (Letter x = 0; x < basis.letter_count(); ++x)
        if (!(back.image_of(x) == fwd.image_of(x))) ++bad;
    } catch (const NotAnAutomorphismError&) {
      ++bad;
    }
  }
  // ten non-automorphisms: all have non-unimodular abelianization
  Basis basis(2);
  const char* frauds[10][2] = {
      {"ab", "ab"},  {"aa", "b"},    {"abAB", "b"}, {"a", "bb"},
      {"ab", "AB"},  {"aba", "bab"}, {"abab", "b"}, {"ab", "Ab"},
      {"aa", "bb"},  {"abab", "ba"},
  };
  int rejected = 0;
  for (auto& f : frauds) {
    try {
      nielsen_decompose(GeneratorMap(
          basis, {parse_word(f[0], basis), parse_word(f[1], basis)}));
    } catch (const NotAnAutomorphismError&) {
      ++rejected;
    }
  }
  bool ok = bad == 0 && rejected == 10;
  std::ostringstream os;
  os << bad << " round-trip failures, " << rejected << "/10 frauds rejected";
  report(8, "decomposition round-trip", ok, os.str());
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
