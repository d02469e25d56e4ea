#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <vector>

#include "eiha/experience_space.hpp"
#include "eiha/information.hpp"
#include "eiha/rng.hpp"

namespace eiha {
namespace {

// Entropy of a sample sequence via std::map, independent of the library path.
double entropy_of(const std::map<int, int>& counts, int n) {
  double h = 0;
  for (auto [_, c] : counts) {
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

double distance_by_joint(const std::vector<std::uint8_t>& x, const std::vector<std::uint8_t>& y) {
  std::map<int, int> cx, cy, cxy;
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    ++cx[x[i]];
    ++cy[y[i]];
    ++cxy[x[i] * 256 + y[i]];
  }
  return 2 * entropy_of(cxy, n) - entropy_of(cx, n) - entropy_of(cy, n);
}

std::vector<std::uint8_t> random_samples(Rng& rng, int w, int bins) {
  std::vector<std::uint8_t> v(w);
  for (auto& s : v) s = static_cast<std::uint8_t>(rng.below(bins));
  return v;
}

Experience random_experience(Rng& rng, int channels, int w, int bins) {
  Experience e(channels, w);
  for (auto& s : e.samples) s = static_cast<std::uint8_t>(rng.below(bins));
  return e;
}

TEST(ChannelEntropy, Examples) {
  const std::vector<std::uint32_t> point{20, 0, 0, 0, 0, 0, 0, 0};
  EXPECT_EQ(channel_entropy(point), 0.0);
  const std::vector<std::uint32_t> mixed{4, 4, 4, 4, 1, 1, 1, 1};
  EXPECT_NEAR(channel_entropy(mixed), 2.7219, 1e-4);
  for (std::uint32_t k : {1u, 3u, 250u}) {
    const std::vector<std::uint32_t> uniform(8, k);
    EXPECT_EQ(channel_entropy(uniform), 3.0) << k;
  }
}

TEST(ChannelEntropy, EmptyHistogramThrows) {
  EXPECT_THROW(channel_entropy(std::vector<std::uint32_t>{}), std::invalid_argument);
  EXPECT_THROW(channel_entropy(std::vector<std::uint32_t>{0, 0}), std::invalid_argument);
}

TEST(ChannelDistance, Examples) {
  const std::vector<std::uint8_t> x{0, 0, 1, 1}, y{0, 1, 0, 1}, z{0, 0, 0, 0};
  EXPECT_EQ(channel_information_distance(x, x), 0.0);
  EXPECT_NEAR(channel_information_distance(x, y), 2.0, 1e-12);
  EXPECT_NEAR(channel_information_distance(z, y), 1.0, 1e-12);
}

TEST(ChannelDistance, LengthMismatchThrows) {
  const std::vector<std::uint8_t> a{0, 1, 2}, b{0, 1};
  EXPECT_THROW(channel_information_distance(a, b), std::invalid_argument);
  EXPECT_THROW(channel_information_distance(std::span<const std::uint8_t>{},
                                            std::span<const std::uint8_t>{}),
               std::invalid_argument);
}

TEST(ChannelDistance, MatchesJointEntropyForm) {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int w = std::vector<int>{4, 8, 20}[trial % 3];
    const int bins = 2 + static_cast<int>(rng.below(7));
    const auto x = random_samples(rng, w, bins), y = random_samples(rng, w, bins);
    EXPECT_NEAR(channel_information_distance(x, y), distance_by_joint(x, y), 1e-9);
  }
}

TEST(ChannelDistance, OnlyPartitionMatters) {
  const std::vector<std::uint8_t> x{3, 3, 7, 1, 7}, relabeled{0, 0, 5, 2, 5}, y{1, 2, 2, 1, 0};
  EXPECT_EQ(canonical_labels(x), canonical_labels(relabeled));
  EXPECT_EQ(channel_information_distance(x, y), channel_information_distance(relabeled, y));
}

TEST(ExperienceDistance, ToyTwoChannelSum) {
  Experience a(2, 4), b(2, 4);
  a.samples = {0, 0, 1, 1, 0, 0, 0, 0};
  b.samples = {0, 1, 0, 1, 0, 1, 0, 1};
  EXPECT_NEAR(experience_distance(a, b), 3.0, 1e-12);
}

TEST(ExperienceDistance, ShapeMismatchThrows) {
  EXPECT_THROW(experience_distance(Experience(2, 4), Experience(3, 4)), std::invalid_argument);
  EXPECT_THROW(experience_distance(Experience(2, 4), Experience(2, 5)), std::invalid_argument);
}

TEST(ExperienceDistance, MetricAxioms) {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const int w = std::vector<int>{4, 8, 20}[trial % 3];
    const int bins = 2 + trial % 7;
    const auto a = random_experience(rng, 5, w, bins);
    const auto b = random_experience(rng, 5, w, bins);
    const auto c = random_experience(rng, 5, w, bins);
    const double ab = experience_distance(a, b), bc = experience_distance(b, c),
                 ac = experience_distance(a, c);
    EXPECT_GE(ab, 0.0);
    EXPECT_EQ(experience_distance(a, a), 0.0);
    EXPECT_EQ(ab, experience_distance(b, a));
    EXPECT_LE(ac, ab + bc + 1e-9);
  }
}

}  // namespace
}  // namespace eiha
