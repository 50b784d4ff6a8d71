#pragma once

#include <random>
#include <set>
#include <vector>

#include "fgdual/fgdual.hpp"

namespace fgdual::testing {

inline Word random_reduced_word(std::mt19937& rng, const Basis& basis,
                                int max_len, int min_len = 0) {
  std::uniform_int_distribution<int> len_dist(min_len, max_len);
  int len = len_dist(rng);
  std::vector<Letter> letters;
  std::uniform_int_distribution<int> letter_dist(0, basis.letter_count() - 1);
  while (static_cast<int>(letters.size()) < len) {
    Letter x = static_cast<Letter>(letter_dist(rng));
    if (!letters.empty() && x == inverse_of(letters.back())) continue;
    letters.push_back(x);
  }
  return Word::from_reduced(std::move(letters));
}

// Random move word in product order. nielsen_weight biases the mix toward
// Nielsen moves (the ones that drive the 2^t bound).
inline std::vector<ElementaryMove> random_moves(std::mt19937& rng,
                                                const Basis& basis, int count,
                                                double nielsen_weight = 0.7) {
  std::vector<ElementaryMove> moves;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> gen(0, basis.rank() - 1);
  for (int k = 0; k < count; ++k) {
    if (coin(rng) < nielsen_weight) {
      int i = gen(rng);
      int j = gen(rng);
      while (j == i) j = gen(rng);
      moves.push_back(NielsenMove{i, j, coin(rng) < 0.5 ? +1 : -1});
    } else if (coin(rng) < 0.5) {
      moves.push_back(InversionMove{gen(rng)});
    } else {
      int i = gen(rng);
      int j = gen(rng);
      while (j == i) j = gen(rng);
      std::vector<int> mapping(static_cast<std::size_t>(basis.rank()));
      for (int g = 0; g < basis.rank(); ++g)
        mapping[static_cast<std::size_t>(g)] = g;
      std::swap(mapping[static_cast<std::size_t>(i)],
                mapping[static_cast<std::size_t>(j)]);
      moves.push_back(PermutationMove{std::move(mapping)});
    }
  }
  return moves;
}

inline PrefixSet random_prefix_set(std::mt19937& rng, const Basis& basis,
                                   int max_words, int max_len) {
  std::uniform_int_distribution<int> count_dist(1, max_words);
  int count = count_dist(rng);
  std::set<Word> words;
  for (int i = 0; i < count; ++i)
    words.insert(random_reduced_word(rng, basis, max_len));
  return PrefixSet(std::move(words));
}

}  // namespace fgdual::testing
