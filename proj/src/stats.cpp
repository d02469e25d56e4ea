#include "eiha/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace eiha {
namespace {

// Exact while the result fits a double's integer range, log-gamma beyond.
double choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  if (n <= 1000) {
    double c = 1.0;
    for (std::int64_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    if (c < 0x1.0p53) return std::round(c);
  }
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// Relative slack when comparing probabilities or statistics that should tie.
constexpr double kTieSlack = 1e-9;

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double hypergeometric_pmf(std::int64_t k, std::int64_t total, std::int64_t marked,
                          std::int64_t n) {
  return choose(marked, k) * choose(total - marked, n - k) / choose(total, n);
}

FisherResult fisher_exact(const Table2x2& t) {
  for (const auto& row : t)
    for (auto v : row)
      if (v < 0) throw std::invalid_argument("fisher_exact: negative count");
  const std::int64_t row0 = t[0][0] + t[0][1];
  const std::int64_t col0 = t[0][0] + t[1][0];
  const std::int64_t total = row0 + t[1][0] + t[1][1];
  if (total == 0) throw std::invalid_argument("fisher_exact: empty table");

  const std::int64_t lo = std::max<std::int64_t>(0, row0 + col0 - total);
  const std::int64_t hi = std::min(row0, col0);
  const std::int64_t x = t[0][0];
  FisherResult r;
  r.point = hypergeometric_pmf(x, total, col0, row0);
  for (std::int64_t k = lo; k <= hi; ++k) {
    const double p = hypergeometric_pmf(k, total, col0, row0);
    if (k >= x) r.upper += p;
    if (k <= x) r.lower += p;
    if (p <= r.point * (1.0 + kTieSlack)) r.two_sided += p;
  }
  r.upper = std::min(r.upper, 1.0);
  r.lower = std::min(r.lower, 1.0);
  r.two_sided = std::min(r.two_sided, 1.0);
  return r;
}

PermutationResult permutation_test(std::span<const double> a, std::span<const double> b,
                                   int resamples, Rng& rng) {
  if (a.empty() || b.empty()) throw std::invalid_argument("permutation_test: empty sample");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto n = static_cast<std::int64_t>(pooled.size());
  const auto na = static_cast<std::int64_t>(a.size());
  const double sum = std::accumulate(pooled.begin(), pooled.end(), 0.0);

  PermutationResult r;
  r.observed = mean(a) - mean(b);
  const double threshold = std::abs(r.observed) * (1.0 - kTieSlack) - kTieSlack;
  auto diff_for = [&](double sum_a) {
    return sum_a / static_cast<double>(na) - (sum - sum_a) / static_cast<double>(n - na);
  };

  std::int64_t hits = 0;
  if (choose(n, na) <= static_cast<double>(kExhaustiveLimit)) {
    r.exhaustive = true;
    std::vector<std::int64_t> idx(static_cast<std::size_t>(na));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      double s = 0.0;
      for (auto i : idx) s += pooled[static_cast<std::size_t>(i)];
      if (std::abs(diff_for(s)) >= threshold) ++hits;
      ++r.assignments;
      // Next combination in lexicographic order.
      std::int64_t i = na - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - na + i) --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (std::int64_t j = i + 1; j < na; ++j)
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  } else {
    if (resamples <= 0) throw std::invalid_argument("permutation_test: resamples must be positive");
    std::vector<double> work = pooled;
    for (int s = 0; s < resamples; ++s) {
      for (std::int64_t i = n - 1; i > 0; --i)
        std::swap(work[static_cast<std::size_t>(i)],
                  work[rng.below(static_cast<std::uint64_t>(i) + 1)]);
      const double sa = std::accumulate(work.begin(), work.begin() + na, 0.0);
      if (std::abs(diff_for(sa)) >= threshold) ++hits;
    }
    r.assignments = resamples;
  }
  r.p_value = static_cast<double>(hits) / static_cast<double>(r.assignments);
  return r;
}

}  // namespace eiha
