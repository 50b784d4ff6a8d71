#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "fgdual/automorphism.hpp"
#include "fgdual/errors.hpp"
#include "fgdual/words.hpp"

namespace fgdual {

/// A finite prefix set U standing for the multi-cylinder C^1_U.
class PrefixSet {
 public:
  PrefixSet() = default;
  explicit PrefixSet(std::set<Word> words, bool reduced = false)
      : words_(std::move(words)), reduced_(reduced) {}

  static PrefixSet full_boundary() {
    return PrefixSet(std::set<Word>{Word{}}, true);
  }

  const std::set<Word>& words() const { return words_; }
  bool is_reduced() const { return reduced_; }
  bool contains(const Word& w) const { return words_.count(w) != 0; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  std::size_t max_word_length() const {
    std::size_t n = 0;
    for (const Word& w : words_) n = std::max(n, w.size());
    return n;
  }

  // Set equality of the words; the reduced flag is derived data.
  bool operator==(const PrefixSet& o) const { return words_ == o.words_; }

 private:
  std::set<Word> words_;
  bool reduced_ = false;
};

namespace detail {

// True when removing w or collapsing a star keeps C^1_U unchanged; these
// are the two rewrite steps of the reduction.
inline bool has_proper_prefix_in(const std::set<Word>& s, const Word& w) {
  for (std::size_t l = 0; l < w.size(); ++l)
    if (s.count(w.prefix(l))) return true;
  return false;
}

// parent -> number of distinct one-letter extensions present in s
inline std::map<Word, int> star_counts(const std::set<Word>& s) {
  std::map<Word, int> counts;
  for (const Word& w : s)
    if (!w.empty()) counts[w.prefix(w.size() - 1)]++;
  return counts;
}

inline int star_degree(const Basis& basis, const Word& parent) {
  return parent.empty() ? basis.letter_count() : basis.letter_count() - 1;
}

inline void erase_star(std::set<Word>& s, const Basis& basis,
                       const Word& parent) {
  for (Letter x = 0; x < basis.letter_count(); ++x) {
    if (!parent.empty() && x == inverse_of(parent.back())) continue;
    s.erase(reduce_concat(parent, Word::single(x)));
  }
}

}  // namespace detail

// Computes the unique minimal prefix set with the same multi-cylinder.
// A trie node is "covered" when it is an input word or when all of its
// reduced one-letter extensions are covered (star collapse); the answer is
// the antichain of minimal covered nodes (prefix absorption). This is the
// fixpoint of the two rewrite steps, computed in one bottom-up pass.
inline PrefixSet reduce_prefix_set(const PrefixSet& in, const Basis& basis) {
  if (in.contains(Word{})) return PrefixSet::full_boundary();
  const int nletters = basis.letter_count();
  struct Node {
    std::vector<std::int32_t> child;
    bool in_set = false;
  };
  std::vector<Node> trie(1, Node{std::vector<std::int32_t>(nletters, -1), {}});
  for (const Word& w : in.words()) {
    std::int32_t at = 0;
    for (Letter x : w.letters()) {
      std::int32_t& slot = trie[at].child[x];
      if (slot < 0) {
        slot = static_cast<std::int32_t>(trie.size());
        trie.push_back(Node{std::vector<std::int32_t>(nletters, -1), {}});
      }
      at = slot;
    }
    trie[at].in_set = true;
  }
  // covered flags, children before parents (children have larger indices)
  std::vector<char> covered(trie.size(), 0);
  for (std::size_t i = trie.size(); i-- > 0;) {
    if (trie[i].in_set) {
      covered[i] = 1;
      continue;
    }
    bool all = true;
    int present = 0;
    for (Letter x = 0; x < nletters; ++x) {
      std::int32_t c = trie[i].child[x];
      if (c < 0) continue;
      ++present;
      if (!covered[c]) {
        all = false;
        break;
      }
    }
    // a complete star has 2N-1 reduced children (2N at the root); checking
    // the count against the child slots works because a reduced word never
    // extends by the inverse of its last letter, so that slot stays empty
    int degree = (i == 0) ? nletters : nletters - 1;
    covered[i] = all && present == degree;
  }
  if (covered[0]) return PrefixSet::full_boundary();
  // minimal covered nodes, depth-first so words come out build-ready
  std::set<Word> out;
  std::vector<Letter> path;
  auto walk = [&](auto&& self, std::int32_t at) -> void {
    if (covered[at]) {
      out.insert(Word::from_reduced(path));
      return;
    }
    for (Letter x = 0; x < nletters; ++x) {
      std::int32_t c = trie[at].child[x];
      if (c < 0) continue;
      path.push_back(x);
      self(self, c);
      path.pop_back();
    }
  };
  walk(walk, 0);
  return PrefixSet(std::move(out), true);
}

// Same fixpoint, but applies one randomly chosen applicable rewrite at a
// time. Used to exercise confluence of the reduction.
inline PrefixSet reduce_prefix_set_randomized(const PrefixSet& in,
                                              const Basis& basis,
                                              std::mt19937& rng) {
  std::set<Word> s = in.words();
  for (;;) {
    if (s.count(Word{})) return PrefixSet::full_boundary();
    struct Event {
      bool collapse;
      Word word;  // word to absorb, or star parent
    };
    std::vector<Event> events;
    for (const Word& w : s)
      if (detail::has_proper_prefix_in(s, w)) events.push_back({false, w});
    for (const auto& [parent, n] : detail::star_counts(s))
      if (n == detail::star_degree(basis, parent))
        events.push_back({true, parent});
    if (events.empty()) return PrefixSet(std::move(s), true);
    const Event& e = events[std::uniform_int_distribution<std::size_t>(
        0, events.size() - 1)(rng)];
    if (e.collapse) {
      detail::erase_star(s, basis, e.word);
      s.insert(e.word);
    } else {
      s.erase(e.word);
    }
  }
}

// All reduced words of length d whose cylinder lies inside C^1_U.
inline std::set<Word> covers_at_depth(const PrefixSet& U, const Basis& basis,
                                      int d) {
  if (static_cast<std::size_t>(d) < U.max_word_length())
    throw UsageError("cover depth below maximal word length");
  std::set<Word> out;
  for (const Word& u : U.words()) {
    Budget budget(UINT64_MAX);
    enumerate_sphere(basis, u, d - static_cast<int>(u.size()), budget,
                     [&](const Word& w) { out.insert(w); });
  }
  return out;
}

// All reduced words of length m whose cylinder merely meets C^1_U, i.e.
// that are prefix-comparable with some element. Agrees with
// covers_at_depth once m reaches the maximal element length.
inline std::set<Word> touching_cover(const PrefixSet& U, const Basis& basis,
                                     int m) {
  std::set<Word> out;
  for (const Word& u : U.words()) {
    if (u.size() >= static_cast<std::size_t>(m)) {
      out.insert(u.prefix(static_cast<std::size_t>(m)));
    } else {
      Budget budget(UINT64_MAX);
      enumerate_sphere(basis, u, m - static_cast<int>(u.size()), budget,
                       [&](const Word& w) { out.insert(w); });
    }
  }
  return out;
}

inline bool sets_equivalent(const PrefixSet& U, const PrefixSet& V,
                            const Basis& basis) {
  return reduce_prefix_set(U, basis) == reduce_prefix_set(V, basis);
}

namespace detail {

// Streams phi(u') over all reduced extensions u' of u by `depth` letters,
// maintaining the image incrementally with an undo stack. fn sees the
// reduced image letters of each full-length extension.
template <class Fn>
void for_each_extension_image(const GeneratorMap& map, const Basis& basis,
                              const Word& u, int depth, Budget& budget,
                              Fn&& fn) {
  std::vector<Letter> img = map.apply(u).letters();
  std::vector<Letter> stem = u.letters();
  const int nletters = basis.letter_count();

  struct Undo {
    std::vector<Letter> popped;
    std::size_t pushed;
  };

  auto push_letter = [&](Letter x) -> Undo {
    Undo undo{{}, 0};
    for (Letter c : map.image_of(x).letters()) {
      if (!img.empty() && img.back() == inverse_of(c)) {
        if (undo.pushed > 0) {
          --undo.pushed;
        } else {
          undo.popped.push_back(img.back());
        }
        img.pop_back();
      } else {
        img.push_back(c);
        ++undo.pushed;
      }
    }
    return undo;
  };
  auto pop_letter = [&](const Undo& undo) {
    img.resize(img.size() - undo.pushed);
    for (auto it = undo.popped.rbegin(); it != undo.popped.rend(); ++it)
      img.push_back(*it);
  };

  auto dfs = [&](auto&& self, int remaining) -> void {
    if (remaining == 0) {
      budget.charge(1);
      fn(std::span<const Letter>(img));
      return;
    }
    for (Letter x = 0; x < nletters; ++x) {
      if (!stem.empty() && x == inverse_of(stem.back())) continue;
      stem.push_back(x);
      Undo undo = push_letter(x);
      self(self, remaining - 1);
      pop_letter(undo);
      stem.pop_back();
    }
  };
  dfs(dfs, depth);
}

inline Word truncated_image(std::span<const Letter> img, std::size_t margin) {
  std::size_t keep = img.size() > margin ? img.size() - margin : 0;
  return Word::from_reduced(
      std::vector<Letter>(img.begin(), img.begin() + static_cast<long>(keep)));
}

}  // namespace detail

// The raw set of Theorem-1 type: extend u by k letters, push through phi,
// truncate the stretch-squared margin. Deduplicated but not reduced.
inline PrefixSet cylinder_image_general(const Automorphism& phi, const Word& u,
                                        Budget& budget) {
  const Basis& basis = phi.basis();
  const std::uint64_t s = static_cast<std::uint64_t>(stretch_factor(phi));
  const std::uint64_t k = s * s + s * s * s + s * s * s * s;
  if (!budget.can_afford(sphere_size(basis, u.empty(), static_cast<int>(k))))
    throw ResourceError(
        "full Theorem-1 enumeration exceeds the budget; use the adaptive "
        "variant or the fast path");
  std::set<Word> raw;
  detail::for_each_extension_image(
      phi.forward(), basis, u, static_cast<int>(k), budget,
      [&](std::span<const Letter> img) {
        raw.insert(detail::truncated_image(img, s * s));
      });
  return PrefixSet(std::move(raw), false);
}

// Adaptive variant: grows the extension depth with the theorem's margin
// replaced by a small fixed one, and stops once the reduced set is stable
// in BOTH directions: equal at two consecutive depths and insensitive to
// bumping the margin by one. A single margin can stabilize transiently on
// a coarse superset; the bumped margin lags by a few depths, so the two
// only agree once the set is genuinely stable. Levels where truncation
// clamps an image to the empty word are never considered stable.
inline PrefixSet cylinder_image_adaptive(const Automorphism& phi,
                                         const Word& u, Budget& budget) {
  const Basis& basis = phi.basis();
  if (u.empty()) return PrefixSet::full_boundary();
  const std::size_t margin = static_cast<std::size_t>(
      std::max(2, cancellation_bound(phi)));
  // reduced sets at margin / margin+1, and clamp-free flags, per depth
  std::vector<std::array<PrefixSet, 2>> history;
  std::vector<bool> clean;
  for (int level = 1;; ++level) {
    std::uint64_t cost = sphere_size(basis, false, level);
    if (!budget.can_afford(cost))
      throw ResourceError("adaptive cylinder image exceeded its budget");
    std::set<Word> raw0, raw1;
    bool clamped = false;
    detail::for_each_extension_image(
        phi.forward(), basis, u, level, budget,
        [&](std::span<const Letter> img) {
          Word t0 = detail::truncated_image(img, margin);
          Word t1 = detail::truncated_image(img, margin + 1);
          if (t0.empty() || t1.empty()) clamped = true;
          // charge what is actually retained: distinct truncated words
          // dominate memory once levels get deep
          std::size_t stored = 0;
          stored += raw0.insert(std::move(t0)).second ? 1 : 0;
          stored += raw1.insert(std::move(t1)).second ? 1 : 0;
          if (stored) budget.charge(stored * (img.size() + 1));
        });
    history.push_back({reduce_prefix_set(PrefixSet(std::move(raw0)), basis),
                       reduce_prefix_set(PrefixSet(std::move(raw1)), basis)});
    clean.push_back(!clamped);
    std::size_t n = history.size();
    if (n >= 2 && clean[n - 1] && clean[n - 2] &&
        history[n - 1][0] == history[n - 1][1] &&
        history[n - 2][0] == history[n - 2][1] &&
        history[n - 1][0] == history[n - 2][0])
      return history[n - 1][0];
  }
}

// phi^*_A(u): the reduced set with C^1 equal to phi(C^1_u). Runs the exact
// Theorem-1 formula when its sphere is small and falls back to the
// depth-adaptive variant otherwise.
inline PrefixSet dual_apply_general(const Automorphism& phi, const Word& u,
                                    Budget& budget) {
  const Basis& basis = phi.basis();
  if (u.empty()) return PrefixSet::full_boundary();
  const std::uint64_t s = static_cast<std::uint64_t>(stretch_factor(phi));
  const std::uint64_t k = s * s + s * s * s + s * s * s * s;
  constexpr std::uint64_t kExactCap = 200000;
  if (sphere_size(basis, false, static_cast<int>(k)) <= kExactCap &&
      budget.can_afford(sphere_size(basis, false, static_cast<int>(k))))
    return reduce_prefix_set(cylinder_image_general(phi, u, budget), basis);
  return cylinder_image_adaptive(phi, u, budget);
}

inline Budget default_budget() { return Budget(10'000'000); }

}  // namespace fgdual
