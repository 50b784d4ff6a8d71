#pragma once

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fgdual/automorphism.hpp"
#include "fgdual/cylinders.hpp"
#include "fgdual/errors.hpp"
#include "fgdual/words.hpp"

namespace fgdual {

// Lowercase letter = generator, uppercase = its inverse. The empty word
// is rendered as "1" and accepted as "1" or "".
inline std::string word_to_string(const Word& w, const Basis& basis) {
  if (w.empty()) return "1";
  std::string s;
  s.reserve(w.size());
  for (Letter x : w.letters()) s.push_back(basis.letter_name(x));
  return s;
}

inline Word parse_word(std::string_view text, const Basis& basis) {
  if (text.empty() || text == "1") return Word{};
  std::vector<Letter> letters;
  letters.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    bool inverted = std::isupper(static_cast<unsigned char>(c)) != 0;
    int gen = basis.generator_index(
        inverted ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
                 : c);
    if (gen < 0)
      throw ParseError(std::string("'") + c + "' is not a basis letter", 1,
                       static_cast<int>(i) + 1);
    letters.push_back(make_letter(gen, inverted));
  }
  Word w = Word::reduce(letters);
  if (w.size() != letters.size())
    throw UsageError("word '" + std::string(text) + "' is not freely reduced");
  return w;
}

inline std::string prefix_set_to_string(const PrefixSet& u,
                                        const Basis& basis) {
  std::string s = "{";
  bool first = true;
  for (const Word& w : u.words()) {
    if (!first) s += ", ";
    s += word_to_string(w, basis);
    first = false;
  }
  return s + "}";
}

inline std::string move_to_string(const ElementaryMove& m,
                                  const Basis& basis) {
  if (const auto* p = std::get_if<PermutationMove>(&m)) {
    // emitted as a product of cycles
    std::string s;
    std::vector<bool> done(p->mapping.size(), false);
    for (std::size_t i = 0; i < p->mapping.size(); ++i) {
      if (done[i] || p->mapping[i] == static_cast<int>(i)) continue;
      s += "P(";
      std::size_t at = i;
      while (!done[at]) {
        done[at] = true;
        s.push_back(basis.name(static_cast<int>(at)));
        at = static_cast<std::size_t>(p->mapping[at]);
      }
      s += ")";
    }
    return s.empty() ? "P()" : s;
  }
  if (const auto* v = std::get_if<InversionMove>(&m))
    return std::string("I(") + basis.name(v->generator) + ")";
  const auto& n = std::get<NielsenMove>(m);
  char other = basis.name(n.j);
  if (n.sign < 0) other = static_cast<char>(other - 'a' + 'A');
  return std::string("N(") + basis.name(n.i) + "," + other + ")";
}

inline std::string moves_to_string(const std::vector<ElementaryMove>& moves,
                                   const Basis& basis) {
  std::string s;
  for (const auto& m : moves) {
    if (!s.empty()) s += "; ";
    s += move_to_string(m, basis);
  }
  return s;
}

namespace detail {

inline void skip_spaces(std::string_view s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

inline ElementaryMove parse_one_move(std::string_view tok, const Basis& basis,
                                     int line) {
  std::size_t i = 0;
  skip_spaces(tok, i);
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError(msg, line, static_cast<int>(i) + 1);
  };
  if (i >= tok.size()) throw fail("empty move token");
  char kind = tok[i++];
  skip_spaces(tok, i);
  if (i >= tok.size() || tok[i] != '(') throw fail("expected '('");
  ++i;
  auto read_gen = [&](bool allow_upper) -> std::pair<int, bool> {
    skip_spaces(tok, i);
    if (i >= tok.size()) throw fail("expected a basis letter");
    char c = tok[i];
    bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
    if (upper && !allow_upper) throw fail("expected a lowercase letter");
    int gen = basis.generator_index(
        upper ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
              : c);
    if (gen < 0) throw fail(std::string("'") + c + "' is not a basis letter");
    ++i;
    return {gen, upper};
  };
  auto expect = [&](char c) {
    skip_spaces(tok, i);
    if (i >= tok.size() || tok[i] != c)
      throw fail(std::string("expected '") + c + "'");
    ++i;
  };
  if (kind == 'N') {
    auto [a, au] = read_gen(false);
    expect(',');
    auto [b, bu] = read_gen(true);
    expect(')');
    if (a == b) throw fail("Nielsen move requires two distinct generators");
    return NielsenMove{a, b, bu ? -1 : +1};
  }
  if (kind == 'I') {
    auto [a, au] = read_gen(false);
    (void)au;
    expect(')');
    return InversionMove{a};
  }
  if (kind == 'P') {
    std::vector<int> cycle;
    skip_spaces(tok, i);
    while (i < tok.size() && tok[i] != ')') {
      auto [g, up] = read_gen(false);
      (void)up;
      cycle.push_back(g);
      skip_spaces(tok, i);
    }
    expect(')');
    if (cycle.size() < 2) throw fail("permutation cycle needs >= 2 letters");
    std::vector<int> mapping(static_cast<std::size_t>(basis.rank()));
    for (int g = 0; g < basis.rank(); ++g)
      mapping[static_cast<std::size_t>(g)] = g;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      int from = cycle[k];
      int to = cycle[(k + 1) % cycle.size()];
      if (mapping[static_cast<std::size_t>(from)] != from && to != from)
        throw fail("cycle repeats a letter");
      mapping[static_cast<std::size_t>(from)] = to;
    }
    return PermutationMove{std::move(mapping)};
  }
  throw fail(std::string("unknown move kind '") + kind + "'");
}

}  // namespace detail

// ;-separated move tokens: N(a,b), N(a,B), I(a), P(abc).
inline std::vector<ElementaryMove> parse_moves(std::string_view text,
                                               const Basis& basis,
                                               int line = 1) {
  std::vector<ElementaryMove> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view tok = text.substr(start, end - start);
    std::size_t i = 0;
    detail::skip_spaces(tok, i);
    if (i < tok.size()) out.push_back(detail::parse_one_move(tok, basis, line));
    start = end + 1;
  }
  return out;
}

// Automorphism spec text: either a `moves:` line, or one `x -> word` line
// per generator with an optional `inverse:` block.
inline Automorphism parse_automorphism_spec(const std::string& text,
                                            const Basis& basis) {
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool in_inverse = false;
  std::vector<std::optional<Word>> fwd(static_cast<std::size_t>(basis.rank()));
  std::vector<std::optional<Word>> inv(static_cast<std::size_t>(basis.rank()));
  bool any_inverse = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view lv(raw);
    std::size_t i = 0;
    detail::skip_spaces(lv, i);
    if (i >= lv.size() || lv[i] == '#') continue;
    std::string_view body = lv.substr(i);
    while (!body.empty() && (body.back() == ' ' || body.back() == '\t' ||
                             body.back() == '\r'))
      body.remove_suffix(1);
    if (body.rfind("moves:", 0) == 0) {
      auto moves = parse_moves(body.substr(6), basis, lineno);
      return Automorphism::from_moves(basis, std::move(moves));
    }
    if (body == "inverse:") {
      in_inverse = true;
      continue;
    }
    std::size_t arrow = body.find("->");
    if (arrow == std::string_view::npos)
      throw ParseError("expected 'x -> word'", lineno,
                       static_cast<int>(i) + 1);
    std::string_view lhs = body.substr(0, arrow);
    std::string_view rhs = body.substr(arrow + 2);
    while (!lhs.empty() && (lhs.back() == ' ' || lhs.back() == '\t'))
      lhs.remove_suffix(1);
    std::size_t r = 0;
    detail::skip_spaces(rhs, r);
    rhs = rhs.substr(r);
    if (lhs.size() != 1)
      throw ParseError("left side must be a single generator", lineno, 1);
    int gen = basis.generator_index(lhs[0]);
    if (gen < 0)
      throw ParseError(std::string("'") + lhs[0] + "' is not a basis letter",
                       lineno, 1);
    Word image = parse_word(rhs, basis);
    auto& slot = (in_inverse ? inv : fwd)[static_cast<std::size_t>(gen)];
    if (slot.has_value())
      throw ParseError("duplicate image for a generator", lineno, 1);
    slot = std::move(image);
    if (in_inverse) any_inverse = true;
  }
  std::vector<Word> fwd_images;
  for (int g = 0; g < basis.rank(); ++g) {
    if (!fwd[static_cast<std::size_t>(g)])
      throw UsageError(std::string("missing image for generator '") +
                       basis.name(g) + "'");
    fwd_images.push_back(*fwd[static_cast<std::size_t>(g)]);
  }
  GeneratorMap forward(basis, std::move(fwd_images));
  if (any_inverse) {
    std::vector<Word> inv_images;
    for (int g = 0; g < basis.rank(); ++g) {
      if (!inv[static_cast<std::size_t>(g)])
        throw UsageError(std::string("missing inverse image for '") +
                         basis.name(g) + "'");
      inv_images.push_back(*inv[static_cast<std::size_t>(g)]);
    }
    return Automorphism::from_pair(std::move(forward),
                                   GeneratorMap(basis, std::move(inv_images)));
  }
  return Automorphism::from_images(std::move(forward));
}

}  // namespace fgdual
