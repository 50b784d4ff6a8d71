#pragma once

#include <atomic>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "fgdual/automorphism.hpp"
#include "fgdual/cylinders.hpp"
#include "fgdual/errors.hpp"
#include "fgdual/words.hpp"

namespace fgdual {

// Counts how often the closing reduction in dual_apply_fast actually
// changed the set; lets the CLI report whether composed tables ever
// produce non-reduced output.
inline std::atomic<std::uint64_t> fast_path_reduction_fired{0};

/// The Theorem-4 collection: one suffix set U(x) per letter x, with the
/// Nielsen-move count t bounding every card U(x) by 2^t.
class SuffixTable {
 public:
  SuffixTable(Automorphism phi, std::vector<std::set<Word>> table,
              int nielsen_count)
      : phi_(std::move(phi)),
        table_(std::move(table)),
        nielsen_count_(nielsen_count) {
    if (static_cast<int>(table_.size()) != phi_.basis().letter_count())
      throw UsageError("suffix table needs exactly 2N entries");
    for (const auto& entry : table_)
      if (entry.empty())
        throw UsageError("every suffix set must be nonempty");
  }

  const Automorphism& automorphism() const { return phi_; }
  const Basis& basis() const { return phi_.basis(); }
  int nielsen_count() const { return nielsen_count_; }

  const std::set<Word>& entry(Letter x) const {
    return table_[static_cast<std::size_t>(x)];
  }

  std::size_t max_card() const {
    std::size_t n = 0;
    for (const auto& e : table_) n = std::max(n, e.size());
    return n;
  }

 private:
  Automorphism phi_;
  std::vector<std::set<Word>> table_;
  int nielsen_count_;
};

inline SuffixTable identity_table(const Basis& basis) {
  std::vector<std::set<Word>> table(
      static_cast<std::size_t>(basis.letter_count()));
  for (Letter x = 0; x < basis.letter_count(); ++x)
    table[static_cast<std::size_t>(x)].insert(Word::single(x));
  return SuffixTable(Automorphism::identity(basis), std::move(table), 0);
}

// The fundamental formulas. For a Nielsen move a -> a*b^sign (writing
// beta for the letter b^sign):
//   U(a) = {a},  U(a^-1) = {beta^-1 a^-1},
//   U(beta) = {beta, a^-1},  U(beta^-1) = {beta^-1 beta^-1, beta^-1 a},
// every other letter maps to itself. Permutations and inversions never
// cancel, so U(x) = {phi(x)}.
inline SuffixTable elementary_suffix_table(const ElementaryMove& m,
                                           const Basis& basis) {
  Automorphism phi = elementary_to_automorphism(m, basis);
  std::vector<std::set<Word>> table(
      static_cast<std::size_t>(basis.letter_count()));
  if (const auto* n = std::get_if<NielsenMove>(&m)) {
    const Letter a = make_letter(n->i, false);
    const Letter beta = make_letter(n->j, n->sign < 0);
    for (Letter x = 0; x < basis.letter_count(); ++x)
      table[static_cast<std::size_t>(x)].insert(Word::single(x));
    table[static_cast<std::size_t>(inverse_of(a))] = {
        Word::from_reduced({inverse_of(beta), inverse_of(a)})};
    table[static_cast<std::size_t>(beta)] = {Word::single(beta),
                                             Word::single(inverse_of(a))};
    table[static_cast<std::size_t>(inverse_of(beta))] = {
        Word::from_reduced({inverse_of(beta), inverse_of(beta)}),
        Word::from_reduced({inverse_of(beta), a})};
    return SuffixTable(std::move(phi), std::move(table), 1);
  }
  for (Letter x = 0; x < basis.letter_count(); ++x)
    table[static_cast<std::size_t>(x)].insert(phi.forward().image_of(x));
  return SuffixTable(std::move(phi), std::move(table), 0);
}

// Iterates the fundamental formulas: for phi o psi,
//   U(x) = union over s in U_psi(x) of phi(s minus last letter) * U_phi(last(s)).
inline SuffixTable compose_suffix_tables(const SuffixTable& outer,
                                         const SuffixTable& inner) {
  if (!(outer.basis() == inner.basis()))
    throw UsageError("cannot compose suffix tables over different bases");
  const Basis& basis = outer.basis();
  std::vector<std::set<Word>> table(
      static_cast<std::size_t>(basis.letter_count()));
  for (Letter x = 0; x < basis.letter_count(); ++x) {
    for (const Word& s : inner.entry(x)) {
      Word v = outer.automorphism().apply(truncate_right(s, 1));
      for (const Word& tail : outer.entry(s.back()))
        table[static_cast<std::size_t>(x)].insert(reduce_concat(v, tail));
    }
  }
  return SuffixTable(compose(outer.automorphism(), inner.automorphism()),
                     std::move(table),
                     outer.nielsen_count() + inner.nielsen_count());
}

// Left fold over the move word (product order, rightmost move acts first).
inline SuffixTable build_collection(const std::vector<ElementaryMove>& moves,
                                    const Basis& basis) {
  SuffixTable acc = identity_table(basis);
  for (const ElementaryMove& m : moves)
    acc = compose_suffix_tables(acc, elementary_suffix_table(m, basis));
  return acc;
}

inline SuffixTable table_for(const Automorphism& phi) {
  if (phi.has_factorization())
    return build_collection(phi.factorization(), phi.basis());
  return build_collection(nielsen_decompose(phi.forward()), phi.basis());
}

// Theorem 4 with k = 1, K = 0: phi^*(w) = phi(w minus last letter) * U(last(w)).
inline PrefixSet dual_apply_fast(const SuffixTable& T, const Word& w) {
  if (w.empty()) return PrefixSet::full_boundary();
  Word v = T.automorphism().apply(truncate_right(w, 1));
  std::set<Word> raw;
  for (const Word& u : T.entry(w.back())) raw.insert(reduce_concat(v, u));
  PrefixSet out = reduce_prefix_set(PrefixSet(raw), T.basis());
  if (out.words() != raw) ++fast_path_reduction_fired;
  return out;
}

// (phi^k)^*(x) by iterating the fast path over reduced unions.
inline PrefixSet dual_iterate(const SuffixTable& T, Letter x, int k,
                              Budget& budget) {
  if (k <= 0) throw UsageError("iteration count must be positive");
  PrefixSet v(std::set<Word>{Word::single(x)}, true);
  for (int step = 0; step < k; ++step) {
    std::set<Word> next;
    for (const Word& w : v.words()) {
      PrefixSet part = dual_apply_fast(T, w);
      // charge letters, not words: element lengths grow with the stretch
      // factor per step, and they dominate time and memory
      std::uint64_t letters = 0;
      for (const Word& u : part.words()) letters += u.size();
      budget.charge(part.size() + letters);
      next.insert(part.words().begin(), part.words().end());
    }
    v = reduce_prefix_set(PrefixSet(std::move(next)), T.basis());
  }
  return v;
}

}  // namespace fgdual
