#include <gtest/gtest.h>

#include "eiha/config.hpp"

namespace eiha {
namespace {

TEST(Config, Defaults) {
  const auto cfg = load_config("");
  EXPECT_EQ(cfg.resolution, 10);
  EXPECT_EQ(cfg.experience_length, 2.0);
  EXPECT_EQ(cfg.mem_length, 4.0);
  EXPECT_EQ(cfg.min_time, 0.5);
  EXPECT_EQ(cfg.max_time, 2.5);
  EXPECT_EQ(cfg.bins, 8);
  EXPECT_EQ(cfg.exploration_epsilon, 0.1);
  EXPECT_EQ(cfg.merge_threshold, 8.0);
  EXPECT_EQ(cfg.reward_update_rate, 0.2);
  EXPECT_EQ(cfg.reward_horizon, 1.0);
  EXPECT_EQ(cfg.max_trial_seconds, 600.0);
  EXPECT_EQ(cfg.window_ticks(), 20);
  EXPECT_EQ(cfg.stm_capacity(), 40);
  EXPECT_EQ(cfg.horizon_ticks(), 10);
  EXPECT_EQ(cfg.max_ticks(), 6000);
  EXPECT_EQ(cfg, EihaConfig{});
}

TEST(Config, MinMustBeBelowMax) {
  try {
    load_config(R"({"min_time": 3.0, "max_time": 2.5})");
    FAIL() << "accepted min_time >= max_time";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "min_time");
  }
  EXPECT_THROW(load_config("", {{"min_time", "2.5"}}), ConfigError);
}

TEST(Config, ShortMemoryAccepted) {
  const auto one = load_config(R"({"mem_length": 1.0})");
  EXPECT_EQ(one.stm_capacity(), 10);
  const auto none = load_config("", {{"mem_length", "0"}});
  EXPECT_FALSE(none.stm_enabled());
}

TEST(Config, RoundTrip) {
  auto cfg = load_config("", {{"softmax_temperature", "0.3"}, {"bins", "6"}, {"rng_seed", "99"}});
  EXPECT_EQ(cfg.softmax_temperature, 0.3);
  EXPECT_EQ(cfg.bins, 6);
  const auto doc = config_to_json(cfg);
  EXPECT_EQ(config_from_json(doc), cfg);
  EXPECT_EQ(load_config(doc.dump()), cfg);
  EXPECT_EQ(doc.size(), config_keys().size());
}

TEST(Config, Rejections) {
  EXPECT_THROW(load_config(R"({"colour": 1})"), ConfigError);
  EXPECT_THROW(load_config("", {{"colour", "1"}}), ConfigError);
  EXPECT_THROW(load_config(R"({"bins": "many"})"), ConfigError);
  EXPECT_THROW(load_config(R"({"bins": [8]})"), ConfigError);
  EXPECT_THROW(load_config("[1]"), ConfigError);
  EXPECT_THROW(load_config("{"), ConfigError);
  EXPECT_THROW(load_config("", {{"bins", "1"}}), ConfigError);
  EXPECT_THROW(load_config("", {{"softmax_temperature", "0"}}), ConfigError);
  EXPECT_THROW(load_config("", {{"exploration_epsilon", "1.5"}}), ConfigError);
  EXPECT_THROW(load_config("", {{"resolution", "2.5"}}), ConfigError);
  EXPECT_THROW(load_config("", {{"mem_length", "-1"}}), ConfigError);
}

TEST(Config, ErrorNamesField) {
  try {
    load_config("", {{"bins", "x"}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "bins");
    EXPECT_NE(std::string(e.what()).find("bins"), std::string::npos);
  }
}

}  // namespace
}  // namespace eiha
