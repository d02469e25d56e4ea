#include <gtest/gtest.h>

#include "eiha/config.hpp"
#include "eiha/rng.hpp"
#include "eiha/stm.hpp"

namespace eiha {
namespace {

FlagSums recount(const StmWindow& w) {
  FlagSums s;
  for (const auto& f : w.entries()) {
    s.human_hide += f.human_hide;
    s.robot_hide += f.robot_hide;
    s.human_only_hide += f.human_only_hide;
    s.robot_drum += f.robot_drum;
    s.human_drum += f.human_drum;
    s.both_drum += f.both_drum;
  }
  return s;
}

TickFlags random_flags(Rng& rng) {
  return TickFlags::from(rng.chance(0.5), rng.chance(0.5), rng.chance(0.5), rng.chance(0.5));
}

// The engagement formulas, written out independently of the library.
double hide_reference(int only, int robot, double res, double mem, double lo, double hi) {
  if (res * lo < only && only < res * hi) return (only + robot) / (res * mem);
  return 0.0;
}

double drum_reference(int robot, int human, int both, bool hiding_now, bool human_now,
                      double res, double mem) {
  double score = 0.0;
  if (hiding_now) {
    if (human_now) score = -0.5;
  } else if (human > 0) {
    score = (0.5 * (robot + human) - both) / (res * mem);
  }
  return score;
}

TEST(TickFlags, DerivedFlags) {
  auto f = TickFlags::from(true, false, true, true);
  EXPECT_TRUE(f.human_only_hide);
  EXPECT_TRUE(f.both_drum);
  f = TickFlags::from(true, true, false, true);
  EXPECT_FALSE(f.human_only_hide);
  EXPECT_FALSE(f.both_drum);
}

TEST(StmWindow, FreshIsZero) {
  StmWindow w(40);
  EXPECT_EQ(w.sums(), FlagSums{});
  EXPECT_EQ(w.size(), 0);
}

TEST(StmWindow, Eviction) {
  StmWindow w(40);
  const auto one = TickFlags::from(true, false, false, false);
  for (int i = 0; i < 40; ++i) w.push(one);
  w.push(TickFlags{});
  EXPECT_EQ(w.sums().human_hide, 39);
  EXPECT_EQ(w.size(), 40);
}

TEST(StmWindow, SumsMatchRecount) {
  Rng rng(1);
  for (int cap : {1, 3, 10, 40}) {
    StmWindow w(cap);
    for (int i = 0; i < 500; ++i) {
      w.push(random_flags(rng));
      ASSERT_EQ(w.sums(), recount(w));
      ASSERT_LE(w.sums().human_hide, cap);
    }
    w.clear();
    EXPECT_EQ(w.sums(), FlagSums{});
  }
}

TEST(HideScore, Examples) {
  const EihaConfig cfg;
  FlagSums s;
  s.human_only_hide = 10;
  s.robot_hide = 8;
  EXPECT_NEAR(hide_score(s, cfg), 0.45, 1e-12);
  s.human_only_hide = 30;
  EXPECT_EQ(hide_score(s, cfg), 0.0);
  s.human_only_hide = 0;
  EXPECT_EQ(hide_score(s, cfg), 0.0);
}

TEST(HideScore, StrictBounds) {
  const EihaConfig cfg;
  FlagSums s;
  s.human_only_hide = 5;  // resolution x min_time
  EXPECT_EQ(hide_score(s, cfg), 0.0);
  s.human_only_hide = 25;  // resolution x max_time
  EXPECT_EQ(hide_score(s, cfg), 0.0);
  for (int k = 6; k < 25; ++k) {
    s.human_only_hide = k;
    s.robot_hide = 0;
    EXPECT_GT(hide_score(s, cfg), 0.0) << k;
  }
}

TEST(HideScore, MatchesReferenceAndBound) {
  Rng rng(4);
  for (double mem : {4.0, 1.0}) {
    EihaConfig cfg;
    cfg.mem_length = mem;
    const int cap = cfg.stm_capacity();
    StmWindow w(cap);
    const double bound = (cfg.max_time + mem) / mem;
    for (int i = 0; i < 20000; ++i) {
      w.push(TickFlags::from(rng.chance(0.4), rng.chance(0.3), false, false));
      const auto& s = w.sums();
      const double h = hide_score(s, cfg);
      EXPECT_NEAR(h, hide_reference(s.human_only_hide, s.robot_hide, 10, mem, 0.5, 2.5), 1e-12);
      EXPECT_GE(h, 0.0);
      EXPECT_LE(h, bound);
      EXPECT_LE(h, 1.0);  // the two hide flags never coincide
    }
  }
}

TEST(DrumScore, Examples) {
  const EihaConfig cfg;
  FlagSums s;
  s.robot_drum = 12;
  s.human_drum = 10;
  s.both_drum = 2;
  EXPECT_NEAR(drum_score(s, TickFlags{}, cfg), 0.225, 1e-12);
  const auto hiding_while_drummed = TickFlags::from(false, true, false, true);
  EXPECT_EQ(drum_score(s, hiding_while_drummed, cfg), -0.5);
  s.human_drum = 0;
  s.both_drum = 0;
  EXPECT_EQ(drum_score(s, TickFlags{}, cfg), 0.0);
}

TEST(DrumScore, BoundOverRandomWindows) {
  Rng rng(77);
  const EihaConfig cfg;
  StmWindow w(cfg.stm_capacity());
  for (int i = 0; i < 100000; ++i) {
    const auto f = TickFlags::from(rng.chance(0.2), rng.chance(0.2), rng.chance(rng.uniform()),
                                   rng.chance(rng.uniform()));
    w.push(f);
    const auto& s = w.sums();
    const double d = drum_score(s, f, cfg);
    ASSERT_GE(d, -0.5);
    ASSERT_LE(d, 0.5);
    ASSERT_NEAR(d, drum_reference(s.robot_drum, s.human_drum, s.both_drum, f.robot_hide,
                                  f.human_drum, 10, 4.0),
                1e-12);
  }
}

TEST(DrumScore, AnalyticMaximum) {
  // Robot and human split the window without ever drumming together.
  const EihaConfig cfg;
  const int cap = cfg.stm_capacity();
  for (int human = 1; human <= cap; ++human) {
    StmWindow w(cap);
    for (int i = 0; i < cap; ++i)
      w.push(TickFlags::from(false, false, i >= human, i < human));
    EXPECT_EQ(w.sums().both_drum, 0);
    EXPECT_NEAR(drum_score(w.sums(), TickFlags{}, cfg), 0.5, 1e-12) << human;
  }
}

TEST(VisualAttention, Rectangle) {
  const PixelRect box{300, 360, 220, 280};
  EXPECT_EQ(visual_attention({320, 240}, box, true), 1);
  EXPECT_EQ(visual_attention({300, 280}, box, true), 1);
  EXPECT_EQ(visual_attention({299, 240}, box, true), 0);
  EXPECT_EQ(visual_attention({320, 281}, box, true), 0);
  EXPECT_EQ(visual_attention({320, 240}, box, false), 0);
}

TEST(TotalReward, Sums) {
  EXPECT_NEAR(total_reward({1, 0.45, 0.0}), 1.45, 1e-15);
  EXPECT_EQ(total_reward({1, 0.0, 0.0}), 1.0);
  EXPECT_EQ(total_reward({0, 0.0, -0.5}), -0.5);
}

TEST(ScoreTick, NoStmIsAttentionOnly) {
  EihaConfig cfg;
  cfg.mem_length = 0;
  StmWindow w(1);
  const auto f = TickFlags::from(true, true, true, true);
  for (int att : {0, 1}) {
    const auto s = score_tick(w, f, att, cfg);
    EXPECT_EQ(s.hide_score, 0.0);
    EXPECT_EQ(s.drum_score, 0.0);
    EXPECT_EQ(total_reward(s), static_cast<double>(att));
  }
}

TEST(ScoreTick, PureFunction) {
  Rng rng(12);
  const EihaConfig cfg;
  StmWindow w(cfg.stm_capacity());
  for (int i = 0; i < 200; ++i) {
    const auto f = random_flags(rng);
    w.push(f);
    EXPECT_EQ(score_tick(w, f, 1, cfg), score_tick(w, f, 1, cfg));
  }
}

}  // namespace
}  // namespace eiha
