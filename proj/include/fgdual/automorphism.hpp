#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "fgdual/errors.hpp"
#include "fgdual/words.hpp"

namespace fgdual {

// The three elementary move kinds. A move word is kept in product order:
// moves[0] is the outermost factor, moves.back() acts first.
struct PermutationMove {
  std::vector<int> mapping;  // mapping[i] = image generator of a_i
  bool operator==(const PermutationMove&) const = default;
};
struct InversionMove {
  int generator;
  bool operator==(const InversionMove&) const = default;
};
struct NielsenMove {  // a_i -> a_i * a_j^sign, everything else fixed
  int i;
  int j;
  int sign;  // +1 or -1
  bool operator==(const NielsenMove&) const = default;
};
using ElementaryMove = std::variant<PermutationMove, InversionMove, NielsenMove>;

inline ElementaryMove invert_move(const ElementaryMove& m) {
  if (const auto* p = std::get_if<PermutationMove>(&m)) {
    std::vector<int> inv(p->mapping.size());
    for (std::size_t i = 0; i < p->mapping.size(); ++i)
      inv[static_cast<std::size_t>(p->mapping[i])] = static_cast<int>(i);
    return PermutationMove{std::move(inv)};
  }
  if (const auto* n = std::get_if<NielsenMove>(&m))
    return NielsenMove{n->i, n->j, -n->sign};
  return m;  // inversions are involutions
}

inline std::vector<ElementaryMove> invert_move_word(
    const std::vector<ElementaryMove>& moves) {
  std::vector<ElementaryMove> out;
  out.reserve(moves.size());
  for (auto it = moves.rbegin(); it != moves.rend(); ++it)
    out.push_back(invert_move(*it));
  return out;
}

inline int nielsen_move_count(const std::vector<ElementaryMove>& moves) {
  int t = 0;
  for (const auto& m : moves)
    if (std::holds_alternative<NielsenMove>(m)) ++t;
  return t;
}

/// Images of the positive generators; evaluation caches the 2N letter images.
class GeneratorMap {
 public:
  GeneratorMap(Basis basis, std::vector<Word> images)
      : basis_(std::move(basis)), images_(std::move(images)) {
    if (static_cast<int>(images_.size()) != basis_.rank())
      throw UsageError("generator map needs one image per generator");
    for (const Word& w : images_) {
      if (w.empty())
        throw UsageError("an automorphism never kills a generator");
      for (Letter x : w.letters())
        if (generator_of(x) >= basis_.rank())
          throw UsageError("image letter outside of basis");
    }
    letter_images_.reserve(static_cast<std::size_t>(basis_.letter_count()));
    for (Letter x = 0; x < basis_.letter_count(); ++x) {
      const Word& img = images_[static_cast<std::size_t>(generator_of(x))];
      letter_images_.push_back(is_inverted(x) ? invert(img) : img);
    }
  }

  static GeneratorMap identity(const Basis& basis) {
    std::vector<Word> images;
    for (int i = 0; i < basis.rank(); ++i)
      images.push_back(Word::single(make_letter(i, false)));
    return GeneratorMap(basis, std::move(images));
  }

  const Basis& basis() const { return basis_; }
  const std::vector<Word>& images() const { return images_; }
  const Word& image_of(Letter x) const {
    return letter_images_[static_cast<std::size_t>(x)];
  }

  Word apply(const Word& w) const {
    std::vector<Letter> out;
    for (Letter x : w.letters()) {
      for (Letter c : image_of(x).letters()) {
        if (!out.empty() && out.back() == inverse_of(c))
          out.pop_back();
        else
          out.push_back(c);
      }
    }
    return Word::from_reduced(std::move(out));
  }

  std::size_t total_length() const {
    std::size_t n = 0;
    for (const Word& w : images_) n += w.size();
    return n;
  }

  std::size_t max_image_length() const {
    std::size_t n = 0;
    for (const Word& w : images_) n = std::max(n, w.size());
    return n;
  }

  bool is_identity() const {
    for (int i = 0; i < basis_.rank(); ++i) {
      const Word& w = images_[static_cast<std::size_t>(i)];
      if (w.size() != 1 || w.front() != make_letter(i, false)) return false;
    }
    return true;
  }

  bool operator==(const GeneratorMap& o) const {
    return basis_ == o.basis_ && images_ == o.images_;
  }

 private:
  Basis basis_;
  std::vector<Word> images_;
  std::vector<Word> letter_images_;
};

inline bool verify_automorphism(const GeneratorMap& fwd,
                                const GeneratorMap& inv) {
  if (!(fwd.basis() == inv.basis())) return false;
  for (int i = 0; i < fwd.basis().rank(); ++i) {
    Word gen = Word::single(make_letter(i, false));
    if (inv.apply(fwd.images()[static_cast<std::size_t>(i)]) != gen)
      return false;
    if (fwd.apply(inv.images()[static_cast<std::size_t>(i)]) != gen)
      return false;
  }
  return true;
}

inline GeneratorMap move_to_map(const ElementaryMove& m, const Basis& basis) {
  std::vector<Word> images;
  images.reserve(static_cast<std::size_t>(basis.rank()));
  for (int i = 0; i < basis.rank(); ++i)
    images.push_back(Word::single(make_letter(i, false)));
  if (const auto* p = std::get_if<PermutationMove>(&m)) {
    if (static_cast<int>(p->mapping.size()) != basis.rank())
      throw UsageError("permutation move has wrong size");
    for (int i = 0; i < basis.rank(); ++i)
      images[static_cast<std::size_t>(i)] =
          Word::single(make_letter(p->mapping[static_cast<std::size_t>(i)],
                                   false));
  } else if (const auto* v = std::get_if<InversionMove>(&m)) {
    images[static_cast<std::size_t>(v->generator)] =
        Word::single(make_letter(v->generator, true));
  } else {
    const auto& n = std::get<NielsenMove>(m);
    if (n.i == n.j) throw UsageError("Nielsen move requires i != j");
    images[static_cast<std::size_t>(n.i)] = Word::from_reduced(
        {make_letter(n.i, false), make_letter(n.j, n.sign < 0)});
  }
  return GeneratorMap(basis, std::move(images));
}

// Composes the map given by the move word (product order) on the identity.
inline GeneratorMap moves_to_map(const std::vector<ElementaryMove>& moves,
                                 const Basis& basis) {
  GeneratorMap acc = GeneratorMap::identity(basis);
  for (const auto& m : moves) {
    GeneratorMap step = move_to_map(m, basis);
    std::vector<Word> images;
    images.reserve(static_cast<std::size_t>(basis.rank()));
    for (int i = 0; i < basis.rank(); ++i)
      images.push_back(acc.apply(step.images()[static_cast<std::size_t>(i)]));
    acc = GeneratorMap(basis, std::move(images));
  }
  return acc;
}

std::vector<ElementaryMove> nielsen_decompose(const GeneratorMap& fwd);

/// phi together with its inverse and, when known, an elementary-move word.
class Automorphism {
 public:
  static Automorphism identity(const Basis& basis) {
    return Automorphism(GeneratorMap::identity(basis),
                        GeneratorMap::identity(basis),
                        std::vector<ElementaryMove>{});
  }

  // Inverse derived (and the map certified) through Nielsen decomposition.
  static Automorphism from_images(GeneratorMap fwd) {
    std::vector<ElementaryMove> moves = nielsen_decompose(fwd);
    GeneratorMap inv = moves_to_map(invert_move_word(moves), fwd.basis());
    return Automorphism(std::move(fwd), std::move(inv), std::move(moves));
  }

  static Automorphism from_pair(GeneratorMap fwd, GeneratorMap inv) {
    if (!verify_automorphism(fwd, inv))
      throw UsageError("given maps are not mutually inverse");
    return Automorphism(std::move(fwd), std::move(inv), std::nullopt);
  }

  static Automorphism from_moves(const Basis& basis,
                                 std::vector<ElementaryMove> moves) {
    GeneratorMap fwd = moves_to_map(moves, basis);
    GeneratorMap inv = moves_to_map(invert_move_word(moves), basis);
    return Automorphism(std::move(fwd), std::move(inv), std::move(moves));
  }

  const Basis& basis() const { return fwd_.basis(); }
  const GeneratorMap& forward() const { return fwd_; }
  const GeneratorMap& inverse() const { return inv_; }

  Word apply(const Word& w) const { return fwd_.apply(w); }
  Word apply_inverse(const Word& w) const { return inv_.apply(w); }

  bool has_factorization() const { return fact_.has_value(); }
  const std::vector<ElementaryMove>& factorization() const {
    if (!fact_) throw UsageError("automorphism carries no factorization");
    return *fact_;
  }

  Automorphism inverted() const {
    std::optional<std::vector<ElementaryMove>> fact;
    if (fact_) fact = invert_move_word(*fact_);
    return Automorphism(inv_, fwd_, std::move(fact));
  }

  bool operator==(const Automorphism& o) const { return fwd_ == o.fwd_; }

 private:
  Automorphism(GeneratorMap fwd, GeneratorMap inv,
               std::optional<std::vector<ElementaryMove>> fact)
      : fwd_(std::move(fwd)), inv_(std::move(inv)), fact_(std::move(fact)) {}

  GeneratorMap fwd_;
  GeneratorMap inv_;
  std::optional<std::vector<ElementaryMove>> fact_;
};

inline Automorphism compose(const Automorphism& outer,
                            const Automorphism& inner) {
  if (!(outer.basis() == inner.basis()))
    throw UsageError("cannot compose automorphisms over different bases");
  const Basis& basis = outer.basis();
  if (outer.has_factorization() && inner.has_factorization()) {
    std::vector<ElementaryMove> moves = outer.factorization();
    moves.insert(moves.end(), inner.factorization().begin(),
                 inner.factorization().end());
    return Automorphism::from_moves(basis, std::move(moves));
  }
  std::vector<Word> fwd, inv;
  for (int i = 0; i < basis.rank(); ++i) {
    fwd.push_back(
        outer.apply(inner.forward().images()[static_cast<std::size_t>(i)]));
    inv.push_back(inner.apply_inverse(
        outer.inverse().images()[static_cast<std::size_t>(i)]));
  }
  return Automorphism::from_pair(GeneratorMap(basis, std::move(fwd)),
                                 GeneratorMap(basis, std::move(inv)));
}

inline Automorphism elementary_to_automorphism(const ElementaryMove& m,
                                               const Basis& basis) {
  return Automorphism::from_moves(basis, {m});
}

// S(phi): maximal length among the phi(a_i) and phi^-1(a_i).
inline int stretch_factor(const Automorphism& phi) {
  return static_cast<int>(std::max(phi.forward().max_image_length(),
                                   phi.inverse().max_image_length()));
}

// Max letters cancelled in reducing phi(x)phi(y) over reduced letter pairs.
inline int cancellation_bound(const Automorphism& phi) {
  const int nletters = phi.basis().letter_count();
  std::size_t worst = 0;
  for (Letter x = 0; x < nletters; ++x) {
    for (Letter y = 0; y < nletters; ++y) {
      if (y == inverse_of(x)) continue;
      const Word& u = phi.forward().image_of(x);
      const Word& v = phi.forward().image_of(y);
      std::size_t cancelled =
          (u.size() + v.size() - reduce_concat(u, v).size()) / 2;
      worst = std::max(worst, cancelled);
    }
  }
  return static_cast<int>(worst);
}

namespace detail {

// One Nielsen step on the image tuple: w[i] <- w[i]*w[j]^sign or
// w[j]^sign*w[i]. The inverse elementary factor is emitted later.
struct TupleMove {
  bool left;
  int i;
  int j;
  int sign;
  auto operator<=>(const TupleMove&) const = default;
};

inline Word tuple_move_result(const std::vector<Word>& tuple,
                              const TupleMove& m) {
  Word factor = m.sign > 0 ? tuple[static_cast<std::size_t>(m.j)]
                           : invert(tuple[static_cast<std::size_t>(m.j)]);
  const Word& w = tuple[static_cast<std::size_t>(m.i)];
  return m.left ? reduce_concat(factor, w) : reduce_concat(w, factor);
}

inline std::vector<TupleMove> all_tuple_moves(int rank) {
  std::vector<TupleMove> out;
  for (bool left : {false, true})
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j) {
        if (i == j) continue;
        for (int sign : {+1, -1}) out.push_back(TupleMove{left, i, j, sign});
      }
  return out;
}

// Strict greedy descent can stall on a length plateau for some genuine
// automorphisms; a bounded breadth-first walk over length-preserving moves
// looks for a state that admits a strictly decreasing step.
inline bool plateau_escape(std::vector<Word>& tuple,
                           std::vector<TupleMove>& applied, int rank) {
  constexpr std::size_t kStateCap = 20000;
  const std::vector<TupleMove> moves = all_tuple_moves(rank);
  struct Node {
    std::vector<Word> state;
    std::size_t parent;
    TupleMove via;
  };
  std::vector<Node> nodes;
  std::set<std::vector<Word>> visited;
  nodes.push_back(Node{tuple, SIZE_MAX, TupleMove{}});
  visited.insert(tuple);
  for (std::size_t head = 0; head < nodes.size() && nodes.size() < kStateCap;
       ++head) {
    const std::vector<Word> state = nodes[head].state;
    for (const TupleMove& m : moves) {
      Word next = tuple_move_result(state, m);
      if (next.empty()) continue;
      const Word& cur = state[static_cast<std::size_t>(m.i)];
      if (next.size() > cur.size()) continue;
      std::vector<Word> succ = state;
      succ[static_cast<std::size_t>(m.i)] = std::move(next);
      if (!visited.insert(succ).second) continue;
      bool strict =
          succ[static_cast<std::size_t>(m.i)].size() < cur.size();
      nodes.push_back(Node{std::move(succ), head, m});
      if (strict) {
        // unwind the path and replay it onto the caller's tuple
        std::vector<TupleMove> path;
        for (std::size_t at = nodes.size() - 1; at != SIZE_MAX && at != 0;
             at = nodes[at].parent)
          path.push_back(nodes[at].via);
        std::reverse(path.begin(), path.end());
        for (const TupleMove& step : path) {
          tuple[static_cast<std::size_t>(step.i)] =
              tuple_move_result(tuple, step);
          applied.push_back(step);
        }
        return true;
      }
    }
  }
  return false;
}

}  // namespace detail

// Greedy Nielsen reduction of the image tuple. Certifies the map and
// returns an elementary-move word in product order whose composition
// equals fwd on every generator.
inline std::vector<ElementaryMove> nielsen_decompose(const GeneratorMap& fwd) {
  const Basis& basis = fwd.basis();
  const int rank = basis.rank();
  std::vector<Word> tuple = fwd.images();
  std::vector<detail::TupleMove> applied;
  const std::vector<detail::TupleMove> moves = detail::all_tuple_moves(rank);

  for (;;) {
    std::size_t total = 0;
    for (const Word& w : tuple) total += w.size();
    if (total == static_cast<std::size_t>(rank)) break;

    std::size_t best_gain = 0;
    const detail::TupleMove* best = nullptr;
    Word best_word;
    for (const detail::TupleMove& m : moves) {
      Word next = detail::tuple_move_result(tuple, m);
      if (next.empty()) continue;
      const Word& cur = tuple[static_cast<std::size_t>(m.i)];
      if (next.size() >= cur.size()) continue;
      std::size_t gain = cur.size() - next.size();
      if (gain > best_gain) {  // ties resolved by enumeration order
        best_gain = gain;
        best = &m;
        best_word = next;
      }
    }
    if (best != nullptr) {
      tuple[static_cast<std::size_t>(best->i)] = best_word;
      applied.push_back(*best);
      continue;
    }
    if (!detail::plateau_escape(tuple, applied, rank))
      throw NotAnAutomorphismError(
          "Nielsen reduction stalled above minimal total length");
  }

  // Terminal tuple: single letters forming a permuted, possibly inverted
  // basis, i.e. an elementary automorphism of type (b).
  std::vector<int> mapping(static_cast<std::size_t>(rank), -1);
  std::vector<bool> inverted(static_cast<std::size_t>(rank), false);
  std::vector<bool> seen(static_cast<std::size_t>(rank), false);
  for (int i = 0; i < rank; ++i) {
    const Word& w = tuple[static_cast<std::size_t>(i)];
    if (w.size() != 1)
      throw NotAnAutomorphismError("terminal tuple is not a letter tuple");
    Letter x = w.front();
    int g = generator_of(x);
    if (seen[static_cast<std::size_t>(g)])
      throw NotAnAutomorphismError("terminal tuple repeats a generator");
    seen[static_cast<std::size_t>(g)] = true;
    mapping[static_cast<std::size_t>(i)] = g;
    inverted[static_cast<std::size_t>(i)] = is_inverted(x);
  }

  std::vector<ElementaryMove> out;
  for (int i = 0; i < rank; ++i)
    if (inverted[static_cast<std::size_t>(i)])
      out.push_back(InversionMove{mapping[static_cast<std::size_t>(i)]});
  bool is_id_perm = true;
  for (int i = 0; i < rank; ++i)
    if (mapping[static_cast<std::size_t>(i)] != i) is_id_perm = false;
  if (!is_id_perm) out.push_back(PermutationMove{mapping});

  // Each applied tuple move corresponds to precomposition with an
  // elementary map; its inverse is appended, innermost last.
  for (auto it = applied.rbegin(); it != applied.rend(); ++it) {
    if (!it->left) {
      out.push_back(NielsenMove{it->i, it->j, -it->sign});
    } else {
      // a_i -> a_j^{-s} a_i realized as inversion-Nielsen-inversion
      out.push_back(InversionMove{it->i});
      out.push_back(NielsenMove{it->i, it->j, it->sign});
      out.push_back(InversionMove{it->i});
    }
  }

  if (!(moves_to_map(out, basis) == fwd))
    throw NotAnAutomorphismError(
        "internal: decomposition does not recompose to the input map");
  return out;
}

}  // namespace fgdual
