#include <gtest/gtest.h>

#include "eiha/actions.hpp"
#include "eiha/config.hpp"
#include "eiha/partner.hpp"

namespace eiha {
namespace {

using A = ActionId;

// A robot that plays turns of both games mixed with random motions.
class RandomRobot {
 public:
  explicit RandomRobot(std::uint64_t seed) : rng_(seed) {}

  RobotObservation tick() {
    RobotObservation o;
    if (!exec_.busy()) {
      if (plan_.empty()) plan();
      exec_.load(plan_.front());
      plan_.erase(plan_.begin());
      o.action_started = true;
    }
    const auto s = exec_.step();
    o.action = s.action;
    o.action_finished = s.finished;
    o.robot_beat = s.beat;
    return o;
  }

 private:
  void plan() {
    switch (rng_.below(4)) {
      case 0:
        plan_ = {A::hide_face, A::home};
        break;
      case 1:
        plan_ = {A::start_drum};
        for (int i = rng_.between(1, 4); i > 0; --i) plan_.push_back(A::drum_hit);
        plan_.push_back(rng_.chance(0.5) ? A::right_arm_down : A::home);
        break;
      case 2:
        plan_ = std::vector<A>(rng_.between(1, 40), A::no_op);
        break;
      default:
        plan_ = {kAllActions[rng_.below(kActionCount)]};
    }
  }

  Rng rng_;
  ActionExecutor exec_;
  std::vector<A> plan_;
};

struct Run {
  std::vector<PartnerState> states;
  std::vector<RobotObservation> seen;
};

Run drive(PartnerVariant v, std::uint64_t seed, int ticks) {
  const EihaConfig cfg;
  ScriptedPartner partner(make_script(v, cfg, seed));
  RandomRobot robot(seed + 1);
  Run run;
  RobotObservation last;
  for (int t = 0; t < ticks; ++t) {
    run.states.push_back(partner.step(last, t));
    run.seen.push_back(last);
    last = robot.tick();
  }
  return run;
}

TEST(PartnerEvents, NamesRoundTrip) {
  for (int i = 0; i < 7; ++i) {
    const auto e = static_cast<PartnerEvent>(i);
    EXPECT_EQ(parse_event(event_name(e)), e);
  }
  EXPECT_THROW(parse_event("wave"), std::invalid_argument);
}

TEST(PartnerEvents, HideAgesAndBeatPulses) {
  PartnerState s;
  s = apply_external_event(begin_tick(s), PartnerEvent::hide_start);
  EXPECT_TRUE(s.hiding);
  EXPECT_EQ(s.hide_elapsed, 1);
  s = begin_tick(s);
  EXPECT_EQ(s.hide_elapsed, 2);
  s = apply_external_event(s, PartnerEvent::hide_start);  // already hiding
  EXPECT_EQ(s.hide_elapsed, 2);
  s = apply_external_event(s, PartnerEvent::drum_beat);
  EXPECT_TRUE(s.drummed_this_tick);
  s = begin_tick(s);
  EXPECT_FALSE(s.drummed_this_tick);
  s = apply_external_event(s, PartnerEvent::absent);
  EXPECT_FALSE(s.present);
  EXPECT_FALSE(s.hiding);
  EXPECT_FALSE(s.gaze_on_robot);
}

TEST(PartnerVariants, Parse) {
  EXPECT_EQ(parse_variant("dual"), PartnerVariant::dual_teacher);
  EXPECT_EQ(parse_variant("switching_teacher"), PartnerVariant::switching_teacher);
  EXPECT_THROW(parse_variant("teacher"), std::invalid_argument);
  for (int i = 0; i < 5; ++i) {
    const auto v = static_cast<PartnerVariant>(i);
    EXPECT_EQ(parse_variant(variant_name(v)), v);
  }
}

TEST(ScriptedPartner, InattentiveNeverEngages) {
  const auto run = drive(PartnerVariant::inattentive, 3, 6000);
  for (const auto& s : run.states) {
    EXPECT_FALSE(s.hiding);
    EXPECT_FALSE(s.drummed_this_tick);
    EXPECT_FALSE(s.gaze_on_robot);
  }
}

TEST(ScriptedPartner, BeatIsOneTickPulse) {
  for (auto v : {PartnerVariant::drum_teacher, PartnerVariant::dual_teacher}) {
    const auto run = drive(v, 11, 6000);
    int beats = 0;
    for (std::size_t t = 1; t < run.states.size(); ++t) {
      if (run.states[t].drummed_this_tick) {
        ++beats;
        EXPECT_FALSE(run.states[t - 1].drummed_this_tick) << t;
      }
    }
    EXPECT_GT(beats, 0) << variant_name(v);
  }
}

TEST(ScriptedPartner, DrumTeacherNeverDrumsOverRobotTurn) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto run = drive(PartnerVariant::drum_teacher, seed, 8000);
    TurnRecognizer robot;
    int beats = 0;
    for (std::size_t t = 0; t < run.states.size(); ++t) {
      const auto& o = run.seen[t];
      if (o.action_started) robot.on_action_start(o.action);
      if (o.action_finished) robot.on_action_complete(o.action);
      if (run.states[t].drummed_this_tick) {
        ++beats;
        EXPECT_FALSE(robot.mid_drum_turn()) << "tick " << t;
      }
    }
    EXPECT_GT(beats, 10);
  }
}

TEST(ScriptedPartner, DualTeacherNeverHidesAndDrumsAtOnce) {
  int hides = 0, beats = 0;
  for (std::uint64_t seed : {4, 5, 6}) {
    const auto run = drive(PartnerVariant::dual_teacher, seed, 8000);
    for (const auto& s : run.states) {
      EXPECT_FALSE(s.hiding && s.drummed_this_tick);
      if (s.hiding) EXPECT_FALSE(s.gaze_on_robot);
      hides += s.hiding;
      beats += s.drummed_this_tick;
    }
  }
  EXPECT_GT(hides, 0);
  EXPECT_GT(beats, 0);
}

TEST(ScriptedPartner, HidesLastWithinScript) {
  const EihaConfig cfg;
  const auto script = make_script(PartnerVariant::peekaboo_teacher, cfg, 0);
  const auto run = drive(PartnerVariant::peekaboo_teacher, 8, 8000);
  int hides = 0;
  for (std::size_t t = 1; t < run.states.size(); ++t) {
    if (run.states[t - 1].hiding && !run.states[t].hiding) {
      ++hides;
      const int length = run.states[t - 1].hide_elapsed;
      EXPECT_GE(length, script.hide_min);
      EXPECT_LE(length, script.hide_max + 1);
    }
    EXPECT_FALSE(run.states[t].drummed_this_tick);
  }
  EXPECT_GT(hides, 5);
}

TEST(ScriptedPartner, AnswersPeekabooAfterLatency) {
  const EihaConfig cfg;
  ScriptedPartner partner(make_script(PartnerVariant::peekaboo_teacher, cfg, 0));
  RobotObservation o;
  std::int64_t t = 0;
  auto play = [&](A a) {
    const int d = action_spec(a).duration;
    for (int k = 0; k < d; ++k) {
      o.action = a;
      o.action_started = k == 0;
      o.action_finished = k == d - 1;
      partner.step(o, ++t);
    }
  };
  play(A::hide_face);
  play(A::home);
  // The turn completed on the last tick; the hide starts after the latency.
  RobotObservation idle;
  idle.action = A::no_op;
  std::int64_t started = -1;
  for (int k = 0; k < 20 && started < 0; ++k)
    if (partner.step(idle, ++t).hiding) started = t;
  ASSERT_GT(started, 0);
  EXPECT_EQ(started - 25, cfg.ticks(cfg.partner_latency));
}

TEST(ScriptedPartner, Deterministic) {
  const auto a = drive(PartnerVariant::switching_teacher, 42, 5000);
  const auto b = drive(PartnerVariant::switching_teacher, 42, 5000);
  EXPECT_EQ(a.states, b.states);
}

}  // namespace
}  // namespace eiha
