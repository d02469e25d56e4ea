#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "eiha/experience_space.hpp"
#include "eiha/rng.hpp"

namespace eiha {
namespace {

Experience make(int channels, int w, std::vector<std::uint8_t> samples,
                ActionId a = ActionId::home, double reward = 0.0, std::int64_t tick = 0) {
  Experience e(channels, w);
  e.samples = std::move(samples);
  e.action = a;
  e.reward = reward;
  e.created_tick = tick;
  return e;
}

Experience random_experience(Rng& rng, int channels, int w, int bins, std::int64_t tick) {
  Experience e(channels, w);
  for (auto& s : e.samples) s = static_cast<std::uint8_t>(rng.below(bins));
  e.action = kAllActions[rng.below(kActionCount)];
  e.created_tick = tick;
  return e;
}

// Brute-force reference: minimal experience_distance, ties to the newest.
std::optional<Recall> linear_scan(const ExperienceSpace& s, const Experience& probe,
                                  bool need_successor = false) {
  std::optional<Recall> best;
  for (const auto& e : s.experiences()) {
    if (need_successor && !e.next_id) continue;
    const double d = experience_distance(probe, e);
    if (!best || d < best->distance ||
        (d == best->distance && e.created_tick >= s.at(best->id).created_tick))
      best = Recall{e.id, d};
  }
  return best;
}

TEST(Nearest, EmptySpace) {
  ExperienceSpace s(2, 4, 1.0, 0.2);
  EXPECT_FALSE(s.nearest(Experience(2, 4)).has_value());
}

TEST(Nearest, SingletonAlwaysWins) {
  ExperienceSpace s(2, 4, 0.0, 0.2);
  s.insert_or_merge(make(2, 4, {0, 0, 1, 1, 0, 1, 0, 1}));
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    auto r = s.nearest(random_experience(rng, 2, 4, 4, i));
    ASSERT_TRUE(r);
    EXPECT_EQ(r->id, 0u);
  }
}

TEST(Nearest, PicksCloser) {
  // Probe vs e1: channel distances 2 + 1 = 3; probe vs e2: 1 + 0 = 1.
  ExperienceSpace s(2, 4, 0.0, 0.2);
  const auto probe = make(2, 4, {0, 0, 1, 1, 0, 0, 0, 0});
  s.insert_or_merge(make(2, 4, {0, 1, 0, 1, 0, 1, 0, 1}, ActionId::home, 0, 1));
  s.insert_or_merge(make(2, 4, {0, 0, 0, 0, 1, 1, 1, 1}, ActionId::home, 0, 2));
  auto r = s.nearest(probe);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->id, 1u);
  EXPECT_NEAR(r->distance, 1.0, 1e-12);
  EXPECT_NEAR(experience_distance(probe, s.at(0)), 3.0, 1e-12);
}

TEST(Nearest, TiesGoToMostRecent) {
  ExperienceSpace s(1, 4, 0.0, 0.2);
  s.insert_or_merge(make(1, 4, {0, 0, 1, 1}, ActionId::home, 0, 1));
  s.insert_or_merge(make(1, 4, {1, 1, 0, 0}, ActionId::hide_face, 0, 2));
  auto r = s.nearest(make(1, 4, {0, 0, 1, 1}));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->distance, 0.0);
  EXPECT_EQ(r->id, 1u);
}

TEST(Nearest, AgreesWithLinearScanBitForBit) {
  Rng rng(99);
  ExperienceSpace s(6, 8, 3.0, 0.2);
  for (int t = 0; t < 300; ++t) s.insert_or_merge(random_experience(rng, 6, 8, 3, t));
  for (int q = 0; q < 200; ++q) {
    const auto probe = random_experience(rng, 6, 8, 3, 0);
    for (bool succ : {false, true}) {
      const auto got = succ ? s.nearest_with_successor(probe) : s.nearest(probe);
      const auto want = linear_scan(s, probe, succ);
      ASSERT_EQ(got.has_value(), want.has_value());
      if (!got) continue;
      EXPECT_EQ(got->id, want->id);
      EXPECT_EQ(got->distance, want->distance);
    }
  }
}

TEST(InsertOrMerge, EmptySpaceInserts) {
  ExperienceSpace s(1, 4, 5.0, 0.2);
  auto out = s.insert_or_merge(make(1, 4, {0, 1, 2, 3}));
  EXPECT_EQ(out.kind, InsertOutcome::Kind::inserted);
  EXPECT_EQ(s.size(), 1u);
}

TEST(InsertOrMerge, DuplicateMergesWithEma) {
  ExperienceSpace s(1, 4, 0.5, 0.2);
  s.insert_or_merge(make(1, 4, {0, 1, 2, 3}, ActionId::home, 0.0));
  auto out = s.insert_or_merge(make(1, 4, {0, 1, 2, 3}, ActionId::home, 1.0, 5));
  EXPECT_EQ(out.kind, InsertOutcome::Kind::merged);
  EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(s.at(0).visit_count, 2u);
  EXPECT_NEAR(s.at(0).reward, 0.2, 1e-15);
}

TEST(InsertOrMerge, DifferentActionNeverMerges) {
  ExperienceSpace s(1, 4, 100.0, 0.2);
  s.insert_or_merge(make(1, 4, {0, 1, 2, 3}, ActionId::home));
  auto out = s.insert_or_merge(make(1, 4, {0, 1, 2, 3}, ActionId::drum_hit, 0, 1));
  EXPECT_EQ(out.kind, InsertOutcome::Kind::inserted);
  EXPECT_EQ(s.size(), 2u);
}

TEST(InsertOrMerge, ThresholdIsStrict) {
  // Distance exactly at the threshold inserts.
  ExperienceSpace s(1, 4, 2.0, 0.2);
  s.insert_or_merge(make(1, 4, {0, 0, 1, 1}));
  auto out = s.insert_or_merge(make(1, 4, {0, 1, 0, 1}, ActionId::home, 0, 1));
  EXPECT_EQ(out.kind, InsertOutcome::Kind::inserted);
}

TEST(InsertOrMerge, LinksFollowLatestContinuation) {
  ExperienceSpace s(1, 4, 0.5, 0.2);
  const auto a = make(1, 4, {0, 0, 0, 1}, ActionId::home);
  const auto b = make(1, 4, {0, 0, 1, 1}, ActionId::hide_face);
  const auto c = make(1, 4, {0, 1, 1, 1}, ActionId::no_op);
  s.insert_or_merge(a);  // 0
  s.insert_or_merge(b);  // 1
  EXPECT_EQ(s.at(0).next_id, 1u);
  EXPECT_EQ(s.at(1).prev_id, 0u);
  EXPECT_EQ(s.at(0).followers[index_of(ActionId::hide_face)], 1u);
  s.insert_or_merge(a);  // merges into 0, linked from 1
  EXPECT_EQ(s.at(1).next_id, 0u);
  s.insert_or_merge(c);  // 2, now the continuation of 0
  EXPECT_EQ(s.at(0).next_id, 2u);
  EXPECT_EQ(s.at(0).followers[index_of(ActionId::hide_face)], 1u);
  EXPECT_EQ(s.at(0).followers[index_of(ActionId::no_op)], 2u);
}

TEST(InsertOrMerge, GrowthAndShape) {
  Rng rng(5);
  ExperienceSpace s(4, 6, 4.0, 0.3);
  for (int t = 0; t < 200; ++t) {
    s.insert_or_merge(random_experience(rng, 4, 6, 4, t));
    EXPECT_LE(s.size(), static_cast<std::size_t>(t + 1));
  }
  for (const auto& e : s.experiences()) {
    EXPECT_EQ(e.channels, 4);
    EXPECT_EQ(e.window, 6);
    EXPECT_EQ(e.samples.size(), 24u);
    EXPECT_GE(e.visit_count, 1u);
    EXPECT_TRUE(std::isfinite(e.reward));
  }
  EXPECT_THROW(s.insert_or_merge(Experience(4, 5)), std::invalid_argument);
}

TEST(FutureReward, Mean) {
  ExperienceSpace s(1, 4, 0.0, 0.2);
  s.insert_or_merge(make(1, 4, {0, 1, 2, 3}, ActionId::home, 0.7));
  const std::vector<double> zeros(10, 0.0);
  EXPECT_EQ(s.apply_future_reward(0, zeros), 0.0);
  const std::vector<double> r{1, 1, 0, 0, 0, 0, 0, 0, 0, 0};
  EXPECT_NEAR(s.apply_future_reward(0, r), 0.2, 1e-15);
  const std::vector<double> one{0.9};
  EXPECT_EQ(s.apply_future_reward(0, one), 0.9);
  EXPECT_EQ(s.apply_future_reward(0, std::vector<double>{}), 0.9);
  EXPECT_THROW(s.apply_future_reward(7, one), std::out_of_range);
}

TEST(Snapshot, RoundTripIsExact) {
  Rng rng(8);
  ExperienceSpace s(3, 5, 2.5, 0.2);
  for (int t = 0; t < 80; ++t) {
    auto e = random_experience(rng, 3, 5, 3, t);
    e.reward = rng.uniform(-0.5, 2.0);
    s.insert_or_merge(std::move(e));
  }
  const auto doc = s.snapshot();
  auto back = ExperienceSpace::from_snapshot(nlohmann::json::parse(doc.dump()));
  EXPECT_EQ(back.experiences(), s.experiences());
  EXPECT_EQ(back.snapshot(), doc);
  // Both keep evolving identically.
  for (int t = 80; t < 120; ++t) {
    const auto e = random_experience(rng, 3, 5, 3, t);
    auto a = s.insert_or_merge(e), b = back.insert_or_merge(e);
    EXPECT_EQ(a.kind, b.kind);
    EXPECT_EQ(a.id, b.id);
  }
  EXPECT_EQ(back.snapshot(), s.snapshot());
}

TEST(Snapshot, RejectsBrokenLinks) {
  ExperienceSpace s(1, 4, 0.0, 0.2);
  s.insert_or_merge(make(1, 4, {0, 1, 2, 3}));
  auto doc = s.snapshot();
  doc["experiences"][0]["next"] = 5;
  EXPECT_THROW(ExperienceSpace::from_snapshot(doc), std::invalid_argument);
  doc = s.snapshot();
  doc["format"] = "other";
  EXPECT_THROW(ExperienceSpace::from_snapshot(doc), std::invalid_argument);
}

}  // namespace
}  // namespace eiha
