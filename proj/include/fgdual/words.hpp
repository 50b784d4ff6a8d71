#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fgdual/errors.hpp"

namespace fgdual {

// Letters are packed as 2*generator + (1 if inverted), so the required
// order a < a^-1 < b < b^-1 < ... is the natural integer order and
// inversion is a single bit flip.
using Letter = std::uint8_t;

constexpr Letter make_letter(int generator, bool inverted) {
  return static_cast<Letter>(2 * generator + (inverted ? 1 : 0));
}
constexpr Letter inverse_of(Letter x) { return static_cast<Letter>(x ^ 1u); }
constexpr int generator_of(Letter x) { return x >> 1; }
constexpr bool is_inverted(Letter x) { return (x & 1u) != 0; }

/// A fixed free basis a_1..a_N with single lowercase character names.
class Basis {
 public:
  explicit Basis(int rank) : Basis(rank, default_names(rank)) {}

  Basis(int rank, std::string names) : rank_(rank), names_(std::move(names)) {
    if (rank < 2 || rank > 26)
      throw UsageError("rank must be between 2 and 26");
    if (static_cast<int>(names_.size()) != rank)
      throw UsageError("basis needs exactly one name per generator");
    for (int i = 0; i < rank; ++i) {
      char c = names_[static_cast<std::size_t>(i)];
      if (c < 'a' || c > 'z')
        throw UsageError("generator names must be lowercase letters");
      for (int j = 0; j < i; ++j)
        if (names_[static_cast<std::size_t>(j)] == c)
          throw UsageError("generator names must be pairwise distinct");
    }
  }

  int rank() const { return rank_; }
  int letter_count() const { return 2 * rank_; }
  char name(int generator) const {
    return names_[static_cast<std::size_t>(generator)];
  }

  // -1 when the character does not name a generator of this basis.
  int generator_index(char lower) const {
    for (int i = 0; i < rank_; ++i)
      if (names_[static_cast<std::size_t>(i)] == lower) return i;
    return -1;
  }

  char letter_name(Letter x) const {
    char c = name(generator_of(x));
    return is_inverted(x) ? static_cast<char>(c - 'a' + 'A') : c;
  }

  bool operator==(const Basis& o) const = default;

 private:
  static std::string default_names(int rank) {
    std::string s;
    for (int i = 0; i < rank && i < 26; ++i)
      s.push_back(static_cast<char>('a' + i));
    return s;
  }

  int rank_;
  std::string names_;
};

/// A freely reduced word. The empty word is the identity.
class Word {
 public:
  Word() = default;

  static Word single(Letter x) { return Word(std::vector<Letter>{x}); }

  // Trusts the caller; verifies the no-cancellation invariant.
  static Word from_reduced(std::vector<Letter> letters) {
    for (std::size_t i = 1; i < letters.size(); ++i)
      if (letters[i] == inverse_of(letters[i - 1]))
        throw UsageError("word is not freely reduced");
    return Word(std::move(letters));
  }

  static Word reduce(std::span<const Letter> letters) {
    std::vector<Letter> out;
    out.reserve(letters.size());
    for (Letter x : letters) {
      if (!out.empty() && out.back() == inverse_of(x))
        out.pop_back();
      else
        out.push_back(x);
    }
    return Word(std::move(out));
  }

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  const std::vector<Letter>& letters() const { return letters_; }

  Word prefix(std::size_t n) const {
    n = std::min(n, letters_.size());
    return Word(std::vector<Letter>(letters_.begin(),
                                    letters_.begin() + static_cast<long>(n)));
  }

  auto operator<=>(const Word&) const = default;

 private:
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  std::vector<Letter> letters_;
};

inline Word reduce_concat(const Word& u, const Word& v) {
  std::vector<Letter> out = u.letters();
  out.reserve(u.size() + v.size());
  for (Letter x : v.letters()) {
    if (!out.empty() && out.back() == inverse_of(x))
      out.pop_back();
    else
      out.push_back(x);
  }
  return Word::from_reduced(std::move(out));
}

inline Word invert(const Word& w) {
  std::vector<Letter> out(w.letters().rbegin(), w.letters().rend());
  for (Letter& x : out) x = inverse_of(x);
  return Word::from_reduced(std::move(out));
}

// w|_l: erase the last l letters, clamping at the empty word.
inline Word truncate_right(const Word& w, std::size_t l) {
  if (l >= w.size()) return Word{};
  return w.prefix(w.size() - l);
}

inline bool is_prefix(const Word& u, const Word& w) {
  if (u.size() > w.size()) return false;
  return std::equal(u.letters().begin(), u.letters().end(),
                    w.letters().begin());
}

// Number of reduced words of length depth extending the given stem,
// saturating at uint64 max.
inline std::uint64_t sphere_size(const Basis& basis, bool from_empty_word,
                                 int depth) {
  if (depth <= 0) return 1;
  const std::uint64_t branch =
      static_cast<std::uint64_t>(2 * basis.rank() - 1);
  std::uint64_t n = from_empty_word
                        ? static_cast<std::uint64_t>(2 * basis.rank())
                        : branch;
  for (int i = 1; i < depth; ++i) {
    if (n > UINT64_MAX / branch) return UINT64_MAX;
    n *= branch;
  }
  return n;
}

// w|^l streamed in lexicographic order. fn receives each full extension.
template <class Fn>
void enumerate_sphere(const Basis& basis, const Word& prefix, int depth,
                      Budget& budget, Fn&& fn) {
  std::vector<Letter> stack = prefix.letters();
  const int nletters = basis.letter_count();
  auto dfs = [&](auto&& self, int remaining) -> void {
    if (remaining == 0) {
      budget.charge(1);
      fn(Word::from_reduced(stack));
      return;
    }
    for (Letter x = 0; x < nletters; ++x) {
      if (!stack.empty() && x == inverse_of(stack.back())) continue;
      stack.push_back(x);
      self(self, remaining - 1);
      stack.pop_back();
    }
  };
  dfs(dfs, depth);
}

inline std::vector<Word> extend_right(const Basis& basis, const Word& w,
                                      int l) {
  std::vector<Word> out;
  Budget budget(sphere_size(basis, w.empty(), l) == UINT64_MAX
                    ? UINT64_MAX
                    : sphere_size(basis, w.empty(), l));
  enumerate_sphere(basis, w, l, budget, [&](const Word& u) {
    out.push_back(u);
  });
  return out;
}

}  // namespace fgdual
