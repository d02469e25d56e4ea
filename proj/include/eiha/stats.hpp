#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "eiha/rng.hpp"

namespace eiha {

/// Rows are groups, columns are (success, failure).
using Table2x2 = std::array<std::array<std::int64_t, 2>, 2>;

struct FisherResult {
  double upper = 0.0;      // P(top-left >= observed)
  double lower = 0.0;      // P(top-left <= observed)
  double two_sided = 0.0;  // tables no more probable than the observed one
  double point = 0.0;      // probability of the observed table itself

  /// The tail in the direction "first group succeeds more".
  double one_sided() const noexcept { return upper; }
};

/// Fisher's exact test with fixed margins. Throws std::invalid_argument on a
/// negative or all-zero table.
FisherResult fisher_exact(const Table2x2& table);

/// Hypergeometric probability of `k` marked items in a draw of `n` from a
/// population of `total` holding `marked`.
double hypergeometric_pmf(std::int64_t k, std::int64_t total, std::int64_t marked,
                          std::int64_t n);

struct PermutationResult {
  double p_value = 0.0;
  double observed = 0.0;  // mean(a) - mean(b)
  bool exhaustive = false;
  std::int64_t assignments = 0;  // label assignments examined
};

/// Largest number of label assignments enumerated exhaustively.
inline constexpr std::int64_t kExhaustiveLimit = 10000;

/// Two-sided permutation test on the difference of means. Enumerates every
/// assignment of the pooled values to groups when there are at most
/// kExhaustiveLimit of them, otherwise draws `resamples` random permutations.
/// Throws std::invalid_argument if either sample is empty.
PermutationResult permutation_test(std::span<const double> a, std::span<const double> b,
                                   int resamples, Rng& rng);

}  // namespace eiha
