#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "fgdual/dual.hpp"
#include "fgdual/errors.hpp"

namespace fgdual {

/// Last-letter transition counts: entries[y][x] = #{u in U(x) : last(u) = y}.
struct TransitionMatrix {
  int dim = 0;
  std::vector<std::vector<std::uint64_t>> entries;  // [row y][column x]
};

inline TransitionMatrix build_transition_matrix(const SuffixTable& T) {
  const int dim = T.basis().letter_count();
  TransitionMatrix m;
  m.dim = dim;
  m.entries.assign(static_cast<std::size_t>(dim),
                   std::vector<std::uint64_t>(static_cast<std::size_t>(dim)));
  for (Letter x = 0; x < dim; ++x)
    for (const Word& u : T.entry(x))
      m.entries[static_cast<std::size_t>(u.back())]
               [static_cast<std::size_t>(x)]++;
  return m;
}

namespace detail {

using SquareMatrix = std::vector<std::vector<long double>>;

// Sums in descending order so that simultaneously permuted matrices give
// bitwise identical results (needed for the exact permutation-conjugacy
// equalities).
inline long double sorted_sum(std::vector<long double>& terms) {
  std::sort(terms.begin(), terms.end(), std::greater<>());
  long double s = 0;
  for (long double t : terms) s += t;
  return s;
}

inline long double max_column_sum(const SquareMatrix& m) {
  const std::size_t n = m.size();
  long double best = 0;
  std::vector<long double> col(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = m[i][j];
    best = std::max(best, sorted_sum(col));
  }
  return best;
}

inline SquareMatrix square(const SquareMatrix& m) {
  const std::size_t n = m.size();
  SquareMatrix out(n, std::vector<long double>(n));
  std::vector<long double> terms(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) terms[k] = m[i][k] * m[k][j];
      out[i][j] = sorted_sum(terms);
    }
  return out;
}

}  // namespace detail

// Spectral radius of the nonnegative matrix M, computed by the Gelfand
// scheme on the shift M+I: repeated squaring with norm normalization,
// rho = lim ||(M+I)^(2^j)||^(1/2^j), minus the shift. The shift makes the
// dominant eigenvalue real and strictly maximal in modulus, so the scheme
// is immune to periodicity and reducibility.
inline double pf_eigenvalue(const TransitionMatrix& m, double tol) {
  if (tol <= 0) throw UsageError("tolerance must be positive");
  if (m.dim <= 0) throw UsageError("empty matrix");
  const std::size_t n = static_cast<std::size_t>(m.dim);
  detail::SquareMatrix b(n, std::vector<long double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      b[i][j] = static_cast<long double>(m.entries[i][j]) +
                (i == j ? 1.0L : 0.0L);

  long double log_scale = 0;  // log ||(M+I)^(2^j)|| accumulated
  {
    long double norm = detail::max_column_sum(b);
    log_scale = std::log(norm);
    for (auto& row : b)
      for (auto& v : row) v /= norm;
  }
  constexpr int kMaxSquarings = 60;
  long double prev = -1;
  for (int j = 1; j <= kMaxSquarings; ++j) {
    b = detail::square(b);
    long double norm = detail::max_column_sum(b);
    log_scale = 2 * log_scale + std::log(norm);
    for (auto& row : b)
      for (auto& v : row) v /= norm;
    long double rho = std::exp(log_scale / std::exp2(static_cast<long double>(j)));
    if (prev >= 0 && std::abs(rho - prev) <= std::max<long double>(tol / 4, 1e-14L))
      return static_cast<double>(rho - 1.0L);
    prev = rho;
  }
  throw NumericError("spectral radius iteration did not converge");
}

struct GrowthStep {
  int k = 0;
  std::uint64_t max_card = 0;  // max over letters x of card (phi^k)^*(x)
  double ratio = 0;            // max_card^(1/k)
};

struct GrowthEstimate {
  double lambda_matrix = 1.0;
  std::vector<GrowthStep> empirical;
  double tolerance = 0;
  bool partial = false;     // budget ran out before kmax
  double limsup_tail = 1.0; // max ratio over the last (up to) 3 steps
};

// Runs the dual iteration for every starting letter alongside the matrix
// eigenvalue; the empirical sequence is evidence, not the reported value.
inline GrowthEstimate empirical_growth(const SuffixTable& T, int kmax,
                                       Budget& budget, double tol = 1e-9) {
  if (kmax <= 0) throw UsageError("kmax must be positive");
  GrowthEstimate est;
  est.tolerance = tol;
  est.lambda_matrix = pf_eigenvalue(build_transition_matrix(T), tol);

  const int nletters = T.basis().letter_count();
  std::vector<PrefixSet> fronts;
  for (Letter x = 0; x < nletters; ++x)
    fronts.push_back(PrefixSet(std::set<Word>{Word::single(x)}, true));
  for (int k = 1; k <= kmax; ++k) {
    std::uint64_t max_card = 0;
    try {
      for (auto& front : fronts) {
        std::set<Word> next;
        for (const Word& w : front.words()) {
          PrefixSet part = dual_apply_fast(T, w);
          std::uint64_t letters = 0;
          for (const Word& u : part.words()) letters += u.size();
          budget.charge(part.size() + letters);
          next.insert(part.words().begin(), part.words().end());
        }
        front = reduce_prefix_set(PrefixSet(std::move(next)), T.basis());
        max_card = std::max<std::uint64_t>(max_card, front.size());
      }
    } catch (const ResourceError&) {
      est.partial = true;
      break;
    }
    est.empirical.push_back(
        {k, max_card,
         std::pow(static_cast<double>(max_card), 1.0 / static_cast<double>(k))});
  }
  if (!est.empirical.empty()) {
    std::size_t tail = std::min<std::size_t>(3, est.empirical.size());
    double best = 0;
    for (std::size_t i = est.empirical.size() - tail;
         i < est.empirical.size(); ++i)
      best = std::max(best, est.empirical[i].ratio);
    est.limsup_tail = best;
  }
  return est;
}

// Theorem-5 check: lambda for phi versus lambda for psi^-1 o phi o psi,
// the expression of phi in the basis psi(A).
inline bool basis_independence_check(const std::vector<ElementaryMove>& phi,
                                     const std::vector<ElementaryMove>& psi,
                                     const Basis& basis, double tol) {
  double l1 =
      pf_eigenvalue(build_transition_matrix(build_collection(phi, basis)), tol);
  std::vector<ElementaryMove> conjugate = invert_move_word(psi);
  conjugate.insert(conjugate.end(), phi.begin(), phi.end());
  conjugate.insert(conjugate.end(), psi.begin(), psi.end());
  double l2 = pf_eigenvalue(
      build_transition_matrix(build_collection(conjugate, basis)), tol);
  return std::abs(l1 - l2) <= tol;
}

}  // namespace fgdual
