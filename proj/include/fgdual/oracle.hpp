#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "fgdual/automorphism.hpp"
#include "fgdual/cylinders.hpp"
#include "fgdual/errors.hpp"
#include "fgdual/words.hpp"

namespace fgdual {

struct OracleConfig {
  int probe_depth_start = 1;  // first sphere depth L0
  int out_depth = 3;          // m: length of the recorded image prefixes
  int max_depth = 16;
  std::uint64_t budget = 10'000'000;
};

// L0 = m + 2*cancellation_bound skips rounds that cannot have stabilized
// yet; correctness rests solely on the agreement test below.
inline OracleConfig default_oracle_config(const Automorphism& phi,
                                          int out_depth) {
  OracleConfig cfg;
  cfg.out_depth = out_depth;
  cfg.probe_depth_start = out_depth + 2 * cancellation_bound(phi);
  cfg.max_depth = cfg.probe_depth_start + 14;
  return cfg;
}

// Ground truth by brute force: push every depth-L extension of u through
// phi and record the first m letters of the image. The answer is the set
// P_L once P_L = P_{L+1}, reconfirmed at L+2. Identical machinery to
// nothing else in the library: no suffix tables, no Theorem-1 truncation.
inline std::set<Word> boundary_image_prefixes(const Automorphism& phi,
                                              const Word& u,
                                              const OracleConfig& cfg) {
  if (cfg.probe_depth_start > cfg.max_depth)
    throw UsageError("probe depth exceeds max depth");
  const Basis& basis = phi.basis();
  const std::size_t m = static_cast<std::size_t>(cfg.out_depth);
  Budget budget(cfg.budget);
  std::vector<std::set<Word>> history;
  for (int level = cfg.probe_depth_start; level <= cfg.max_depth; ++level) {
    std::set<Word> prefixes;
    try {
      detail::for_each_extension_image(
          phi.forward(), basis, u, level, budget,
          [&](std::span<const Letter> img) {
            std::size_t keep = std::min(img.size(), m);
            prefixes.insert(Word::from_reduced(std::vector<Letter>(
                img.begin(), img.begin() + static_cast<long>(keep))));
          });
    } catch (const ResourceError&) {
      throw InconclusiveOracle("oracle budget exhausted before stabilization");
    }
    history.push_back(std::move(prefixes));
    std::size_t n = history.size();
    if (n >= 3 && history[n - 1] == history[n - 2] &&
        history[n - 2] == history[n - 3])
      return history[n - 1];
  }
  throw InconclusiveOracle("oracle hit max depth before stabilization");
}

// Does the multi-cylinder of U match phi(C^1_u)? Compares the oracle's
// stabilized m-prefixes with the words of length m that are
// prefix-comparable with U; for m at or above the longest element this is
// exactly the depth-m cover.
inline bool assert_image_equal(const Automorphism& phi, const Word& u,
                               const PrefixSet& U, const OracleConfig& cfg) {
  std::set<Word> got = boundary_image_prefixes(phi, u, cfg);
  std::set<Word> expected = touching_cover(U, phi.basis(), cfg.out_depth);
  return got == expected;
}

}  // namespace fgdual
