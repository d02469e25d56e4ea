#include <gtest/gtest.h>

#include "eiha/trial.hpp"

namespace eiha {
namespace {

TrialConfig short_trial(Condition c, PartnerVariant p, std::uint64_t seed, double seconds = 60) {
  TrialConfig tc;
  tc.condition = c;
  tc.partner = p;
  tc.seed = seed;
  tc.base.max_trial_seconds = seconds;
  return tc;
}

TEST(Conditions, Names) {
  for (auto c : kConditions) EXPECT_EQ(parse_condition(condition_name(c)), c);
  EXPECT_THROW(parse_condition("stm2"), std::invalid_argument);
  EXPECT_EQ(mem_length_for(Condition::stm4), 4.0);
  EXPECT_EQ(mem_length_for(Condition::stm1), 1.0);
  EXPECT_EQ(mem_length_for(Condition::none), 0.0);
}

TEST(RunTrial, Deterministic) {
  const auto tc = short_trial(Condition::stm4, PartnerVariant::dual_teacher, 7);
  const auto a = run_trial(tc), b = run_trial(tc);
  EXPECT_EQ(a.log_hash, b.log_hash);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.events, b.events);
  EXPECT_EQ(a.behaviors, b.behaviors);
  EXPECT_NE(run_trial(short_trial(Condition::stm4, PartnerVariant::dual_teacher, 8)).log_hash,
            a.log_hash);
}

TEST(RunTrial, ZeroLength) {
  const auto r = run_trial(short_trial(Condition::stm4, PartnerVariant::dual_teacher, 1, 0));
  EXPECT_EQ(r.ticks, 0);
  EXPECT_EQ(r.log_hash, kHashSeed);
  EXPECT_TRUE(r.trace.total.empty());
  EXPECT_FALSE(r.outcome(Behavior::peekaboo).learned);
}

TEST(RunTrial, InattentivePartnerTeachesNothing) {
  const auto r = run_trial(short_trial(Condition::none, PartnerVariant::inattentive, 3, 120));
  EXPECT_EQ(r.ticks, 1200);
  for (auto b : kBehaviors) EXPECT_FALSE(r.outcome(b).learned);
  for (std::size_t t = 0; t < r.trace.total.size(); ++t) EXPECT_EQ(r.trace.total[t], 0.0);
}

TEST(RunTrial, NoMemoryRewardIsAttention) {
  const auto r = run_trial(short_trial(Condition::none, PartnerVariant::dual_teacher, 5, 120));
  ASSERT_EQ(r.trace.total.size(), static_cast<std::size_t>(r.ticks));
  int attended = 0;
  for (std::size_t t = 0; t < r.trace.total.size(); ++t) {
    EXPECT_EQ(r.trace.total[t], static_cast<double>(r.trace.attention[t])) << t;
    EXPECT_EQ(r.trace.hide[t], 0.0);
    EXPECT_EQ(r.trace.drum[t], 0.0);
    attended += r.trace.attention[t];
  }
  EXPECT_GT(attended, 0);
}

TEST(RunTrial, TimesToLearnAreConsistent) {
  const auto r = run_trial(short_trial(Condition::stm4, PartnerVariant::peekaboo_teacher, 2, 300));
  for (auto b : kBehaviors) {
    const auto& o = r.outcome(b);
    if (!o.learned) {
      EXPECT_FALSE(o.time_to_learn);
      continue;
    }
    ASSERT_TRUE(o.learned_tick && o.first_characteristic_tick && o.time_to_learn);
    EXPECT_EQ(*o.time_to_learn, (*o.learned_tick - *o.first_characteristic_tick) / 10.0);
    EXPECT_GE(*o.time_to_learn, 0.0);
  }
}

TEST(RunBatch, ShapeAndAggregates) {
  BatchSpec spec;
  spec.conditions = {kConditions.begin(), kConditions.end()};
  spec.trials_per_condition = 5;
  spec.seed = 11;
  spec.base.max_trial_seconds = 20;
  const auto results = run_batch(spec);
  ASSERT_EQ(results.size(), 15u);
  for (std::size_t i = 0; i < results.size(); ++i) {
    EXPECT_EQ(results[i].config.condition, kConditions[i / 5]);
    EXPECT_EQ(results[i].config.trial_index, static_cast<int>(i % 5));
    EXPECT_EQ(results[i].config.seed, trial_seed(11, kConditions[i / 5], i % 5));
  }
  EXPECT_NE(results[0].config.seed, results[1].config.seed);

  const auto doc = results_document(spec, results);
  for (auto c : kConditions)
    for (auto b : kBehaviors) {
      int learned = 0;
      for (const auto& r : results)
        if (r.config.condition == c) learned += r.outcome(b).learned;
      const auto& s = doc["summary"][std::string(condition_name(c))][std::string(behavior_name(b))];
      EXPECT_EQ(s["trials"], 5);
      EXPECT_EQ(s["learned"], learned);
    }
  EXPECT_EQ(run_batch(spec)[7].log_hash, results[7].log_hash);
}

TEST(ResultsDocument, RoundTrip) {
  BatchSpec spec;
  spec.conditions = {Condition::stm4};
  spec.trials_per_condition = 1;
  spec.partner = PartnerVariant::switching_teacher;
  spec.base.max_trial_seconds = 30;
  const auto results = run_batch(spec);
  const auto text = results_document(spec, results).dump();
  const auto back = results_from_document(nlohmann::json::parse(text));
  ASSERT_EQ(back.size(), 1u);
  const auto& a = results[0];
  const auto& b = back[0];
  EXPECT_EQ(b.config.seed, a.config.seed);
  EXPECT_EQ(b.config.base, a.config.base);
  EXPECT_EQ(b.config.partner, a.config.partner);
  EXPECT_EQ(b.log_hash, a.log_hash);
  EXPECT_EQ(b.ticks, a.ticks);
  EXPECT_EQ(b.behaviors, a.behaviors);
  EXPECT_EQ(b.events, a.events);
  EXPECT_EQ(b.switching, a.switching);
  EXPECT_EQ(b.trace, a.trace);

  const auto brief = trial_to_json(a, false);
  EXPECT_FALSE(brief.contains("trace"));
  EXPECT_THROW(results_from_document(nlohmann::json::object()), std::runtime_error);
}

}  // namespace
}  // namespace eiha
