#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fgdual/fgdual.hpp"
#include "test_util.hpp"

using namespace fgdual;

namespace {

Letter letter(const char* name, const Basis& basis) {
  return parse_word(name, basis).back();
}

}  // namespace

TEST_CASE("transition matrix construction") {
  Basis basis(2);

  TransitionMatrix id = build_transition_matrix(identity_table(basis));
  for (int y = 0; y < id.dim; ++y)
    for (int x = 0; x < id.dim; ++x)
      CHECK(id.entries[y][x] == (y == x ? 1 : 0));

  // one Nielsen move: columns a -> e_a, A -> e_A, b -> e_b + e_A,
  // B -> e_B + e_a, in letter order a, A, b, B
  SuffixTable t = build_collection({NielsenMove{0, 1, 1}}, basis);
  TransitionMatrix m = build_transition_matrix(t);
  int a = letter("a", basis), A = letter("A", basis);
  int b = letter("b", basis), B = letter("B", basis);
  std::vector<std::vector<std::uint64_t>> expected(
      4, std::vector<std::uint64_t>(4, 0));
  expected[a][a] = 1;
  expected[A][A] = 1;
  expected[b][b] = 1;
  expected[A][b] = 1;
  expected[B][B] = 1;
  expected[a][B] = 1;
  CHECK(m.entries == expected);

  SuffixTable perm = build_collection(
      {PermutationMove{{1, 0}}}, basis);
  TransitionMatrix pm = build_transition_matrix(perm);
  for (int x = 0; x < pm.dim; ++x) {
    std::uint64_t sum = 0;
    for (int y = 0; y < pm.dim; ++y) sum += pm.entries[y][x];
    CHECK(sum == 1);
  }
}

TEST_CASE("column sums equal the set cardinalities") {
  Basis basis(2);
  std::mt19937 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    auto moves = fgdual::testing::random_moves(rng, basis, trial % 5);
    SuffixTable t = build_collection(moves, basis);
    TransitionMatrix m = build_transition_matrix(t);
    for (Letter x = 0; x < basis.letter_count(); ++x) {
      std::uint64_t sum = 0;
      for (int y = 0; y < m.dim; ++y) sum += m.entries[y][x];
      CHECK(sum == t.entry(x).size());
    }
  }
}

TEST_CASE("spectral radius") {
  Basis basis(2);
  CHECK(pf_eigenvalue(build_transition_matrix(identity_table(basis)), 1e-9) ==
        doctest::Approx(1.0).epsilon(1e-9));

  SuffixTable t = build_collection({NielsenMove{0, 1, 1}}, basis);
  CHECK(pf_eigenvalue(build_transition_matrix(t), 1e-9) ==
        doctest::Approx(1.0).epsilon(1e-9));

  TransitionMatrix harness;
  harness.dim = 2;
  harness.entries = {{1, 1}, {1, 2}};
  double golden = (3.0 + std::sqrt(5.0)) / 2.0;
  CHECK(std::abs(pf_eigenvalue(harness, 1e-12) - golden) <= 1e-9);
}

TEST_CASE("permutation conjugation leaves the eigenvalue unchanged") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<std::uint64_t> entry(0, 4);
  for (int trial = 0; trial < 20; ++trial) {
    TransitionMatrix m;
    m.dim = 4;
    m.entries.assign(4, std::vector<std::uint64_t>(4, 0));
    for (auto& row : m.entries)
      for (auto& e : row) e = entry(rng);
    std::vector<int> p{0, 1, 2, 3};
    std::shuffle(p.begin(), p.end(), rng);
    TransitionMatrix c;
    c.dim = 4;
    c.entries.assign(4, std::vector<std::uint64_t>(4, 0));
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 4; ++x)
        c.entries[p[y]][p[x]] = m.entries[y][x];
    CHECK(pf_eigenvalue(m, 1e-10) == pf_eigenvalue(c, 1e-10));
  }
}

TEST_CASE("empirical growth") {
  Basis basis(2);

  Budget b1 = default_budget();
  GrowthEstimate id =
      empirical_growth(identity_table(basis), 6, b1, 1e-9);
  for (const GrowthStep& step : id.empirical) {
    CHECK(step.max_card == 1);
    CHECK(step.ratio == doctest::Approx(1.0));
  }
  CHECK(id.lambda_matrix == doctest::Approx(1.0).epsilon(1e-9));

  // a polynomially growing map: cardinalities stay subexponential
  SuffixTable one = build_collection({NielsenMove{0, 1, 1}}, basis);
  Budget b2 = default_budget();
  GrowthEstimate lin = empirical_growth(one, 8, b2, 1e-9);
  CHECK(lin.lambda_matrix == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_FALSE(lin.partial);
  for (const GrowthStep& step : lin.empirical)
    CHECK(step.max_card <= static_cast<std::uint64_t>(step.k) + 1);

  SuffixTable two = build_collection(
      {NielsenMove{0, 1, 1}, NielsenMove{1, 0, 1}}, basis);
  Budget b3(100'000'000);
  GrowthEstimate exp = empirical_growth(two, 10, b3, 1e-9);
  // element lengths grow with the stretch factor, so the budget may stop
  // the iteration early; the estimate at the largest computed k counts
  REQUIRE(exp.empirical.size() >= 5);
  double last = exp.empirical.back().ratio;
  CHECK(std::abs(last - exp.lambda_matrix) / exp.lambda_matrix < 0.15);
}

TEST_CASE("basis independence") {
  Basis basis(2);
  auto phi = parse_moves("N(a,b); N(b,a)", basis);
  CHECK(basis_independence_check({}, phi, basis, 1e-9));
  CHECK(basis_independence_check(phi, parse_moves("N(a,b)", basis), basis,
                                 1e-6));

  // conjugating by a permutation relabels the matrix: exact equality
  auto psi = parse_moves("P(ab)", basis);
  auto conj = invert_move_word(psi);
  conj.insert(conj.end(), phi.begin(), phi.end());
  conj.insert(conj.end(), psi.begin(), psi.end());
  double l1 = pf_eigenvalue(
      build_transition_matrix(build_collection(phi, basis)), 1e-10);
  double l2 = pf_eigenvalue(
      build_transition_matrix(build_collection(conj, basis)), 1e-10);
  CHECK(l1 == l2);
}
