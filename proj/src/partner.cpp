#include "eiha/partner.hpp"

#include <array>
#include <string>

#include "eiha/config.hpp"

namespace eiha {
namespace {

constexpr std::array<std::string_view, 7> kEventNames = {
    "hide_start", "hide_end", "drum_beat", "gaze_on", "gaze_off", "present", "absent",
};

constexpr std::array<std::string_view, 5> kVariantNames = {
    "peekaboo_teacher", "drum_teacher", "dual_teacher", "inattentive", "switching_teacher",
};

// Ticks of uninterrupted no-op after which a teacher stops watching.
constexpr int kIdleAttention = 30;

}  // namespace

std::string_view event_name(PartnerEvent e) noexcept { return kEventNames[static_cast<int>(e)]; }

PartnerEvent parse_event(std::string_view name) {
  for (std::size_t i = 0; i < kEventNames.size(); ++i)
    if (kEventNames[i] == name) return static_cast<PartnerEvent>(i);
  throw std::invalid_argument("unknown partner event '" + std::string(name) + "'");
}

PartnerState begin_tick(PartnerState state) {
  state.drummed_this_tick = false;
  if (state.hiding) ++state.hide_elapsed;
  return state;
}

PartnerState apply_external_event(PartnerState state, PartnerEvent event) {
  switch (event) {
    case PartnerEvent::hide_start:
      if (!state.hiding) {
        state.hiding = true;
        state.hide_elapsed = 1;
      }
      break;
    case PartnerEvent::hide_end:
      state.hiding = false;
      state.hide_elapsed = 0;
      break;
    case PartnerEvent::drum_beat:
      state.drummed_this_tick = true;
      break;
    case PartnerEvent::gaze_on:
      state.gaze_on_robot = true;
      break;
    case PartnerEvent::gaze_off:
      state.gaze_on_robot = false;
      break;
    case PartnerEvent::present:
      state.present = true;
      break;
    case PartnerEvent::absent:
      state.present = false;
      state.gaze_on_robot = false;
      state.hiding = false;
      state.hide_elapsed = 0;
      break;
  }
  return state;
}

std::string_view variant_name(PartnerVariant v) noexcept {
  return kVariantNames[static_cast<int>(v)];
}

PartnerVariant parse_variant(std::string_view name) {
  for (std::size_t i = 0; i < kVariantNames.size(); ++i)
    if (kVariantNames[i] == name) return static_cast<PartnerVariant>(i);
  if (name == "peekaboo") return PartnerVariant::peekaboo_teacher;
  if (name == "drum") return PartnerVariant::drum_teacher;
  if (name == "dual") return PartnerVariant::dual_teacher;
  if (name == "switching") return PartnerVariant::switching_teacher;
  throw std::invalid_argument("unknown partner '" + std::string(name) + "'");
}

PartnerScript make_script(PartnerVariant variant, const EihaConfig& cfg, std::uint64_t seed) {
  PartnerScript s;
  s.variant = variant;
  s.latency = cfg.ticks(cfg.partner_latency);
  s.hide_min = cfg.ticks(cfg.partner_hide_min);
  s.hide_max = cfg.ticks(cfg.partner_hide_max);
  s.beats_min = cfg.partner_beats_min;
  s.beats_max = cfg.partner_beats_max;
  s.beat_interval = cfg.ticks(cfg.partner_beat_interval);
  s.seed_period = cfg.partner_seed_period > 0 ? cfg.ticks(cfg.partner_seed_period) : 0;
  s.phase_timeout = cfg.ticks(cfg.partner_phase_timeout);
  s.seed = seed;
  return s;
}

ScriptedPartner::ScriptedPartner(PartnerScript script)
    : script_(script),
      rng_(script.seed),
      // The teacher keeps its own tally of finished exchanges with the same
      // hiding bounds it samples from, widened by one tick on each side.
      ledger_(script.hide_min - 1, script.hide_max + 1, script.beat_interval * 2 + 2) {
  if (script_.variant == PartnerVariant::drum_teacher) phase_ = Behavior::drumming;
  if (script_.variant == PartnerVariant::inattentive) state_.gaze_on_robot = false;
}

std::optional<Behavior> ScriptedPartner::teaching() const noexcept {
  if (script_.variant == PartnerVariant::inattentive) return std::nullopt;
  return phase_;
}

bool ScriptedPartner::responds_to(Behavior b) const noexcept {
  switch (script_.variant) {
    case PartnerVariant::inattentive:
      return false;
    case PartnerVariant::peekaboo_teacher:
      return b == Behavior::peekaboo;
    case PartnerVariant::drum_teacher:
      return b == Behavior::drumming;
    case PartnerVariant::switching_teacher:
      return !(quit_tick_ && b == Behavior::peekaboo);
    case PartnerVariant::dual_teacher:
      return true;
  }
  return false;
}

void ScriptedPartner::update_phase(std::int64_t tick) {
  const auto v = script_.variant;
  if (v != PartnerVariant::dual_teacher && v != PartnerVariant::switching_teacher) return;
  for (Behavior b : kBehaviors)
    if (ledger_.progress(b).learned) taught_[static_cast<int>(b)] = true;

  const bool both = taught_[0] && taught_[1];
  Behavior next = phase_;
  if (v == PartnerVariant::switching_teacher && both) {
    // Go back to peek-a-boo once, then give it up for good after the robot
    // has played one answered round.
    if (!revisiting_peekaboo_ && !quit_tick_) {
      revisiting_peekaboo_ = true;
      next = Behavior::peekaboo;
      answered_ = 0;
    } else if (revisiting_peekaboo_ && answered_ >= 1 && activity_ == Activity::idle) {
      revisiting_peekaboo_ = false;
      quit_tick_ = tick;
      next = Behavior::drumming;
    }
  } else if (taught_[static_cast<int>(phase_)] && !both) {
    next = phase_ == Behavior::peekaboo ? Behavior::drumming : Behavior::peekaboo;
  } else if (!both && tick - phase_start_ >= script_.phase_timeout) {
    next = phase_ == Behavior::peekaboo ? Behavior::drumming : Behavior::peekaboo;
    if (taught_[static_cast<int>(next)]) next = phase_;
  }
  if (next != phase_) {
    phase_ = next;
    phase_start_ = tick;
    last_game_tick_ = tick;
  }
  if (tick - phase_start_ >= script_.phase_timeout) phase_start_ = tick;
}

bool ScriptedPartner::plays_peekaboo() const noexcept {
  // The game alternates hiding and coming back; anything else, including
  // hiding twice in a row, is not playing.
  switch (last_motion_) {
    case ActionId::hide_face:
      return previous_motion_ != ActionId::hide_face;
    case ActionId::home:
      return previous_motion_ != ActionId::home;
    default:
      return false;
  }
}

void ScriptedPartner::start_hide(int delay) {
  activity_ = Activity::waiting_to_hide;
  countdown_ = delay;
}

void ScriptedPartner::start_drum(int delay) {
  activity_ = Activity::waiting_to_drum;
  countdown_ = delay;
}

PartnerState ScriptedPartner::step(const RobotObservation& observed, std::int64_t tick) {
  state_ = begin_tick(state_);
  const bool inattentive = script_.variant == PartnerVariant::inattentive;

  // What the robot did during the previous tick.
  if (observed.action_started) {
    robot_turns_.on_action_start(observed.action);
    ledger_.on_robot_action_start(observed.action, tick - 1);
    if (observed.action != ActionId::no_op) {
      previous_motion_ = last_motion_;
      last_motion_ = observed.action;
    }
  }
  idle_ticks_ = observed.action == ActionId::no_op ? idle_ticks_ + 1 : 0;
  last_action_ = observed.action;
  if (observed.action_finished) {
    if (auto turn = robot_turns_.on_action_complete(observed.action)) {
      ledger_.on_robot_turn(*turn, tick - 1);
      last_game_tick_ = tick;
      if (responds_to(*turn) && activity_ == Activity::idle) {
        if (*turn == Behavior::peekaboo)
          start_hide(script_.latency);
        else
          start_drum(script_.latency);
      }
    }
  }
  ledger_.on_tick_end(tick - 1);
  update_phase(tick);

  if (inattentive) {
    state_.gaze_on_robot = false;
    return state_;
  }

  // Seed the current game when nothing has happened for a while.
  if (activity_ == Activity::idle && script_.seed_period > 0 &&
      tick - last_game_tick_ >= script_.seed_period) {
    last_game_tick_ = tick;
    if (responds_to(phase_)) {
      if (phase_ == Behavior::peekaboo)
        start_hide(0);
      else
        start_drum(0);
    }
  }

  switch (activity_) {
    case Activity::idle:
      break;
    case Activity::waiting_to_hide:
      if (countdown_-- <= 0) {
        activity_ = Activity::hiding;
        hide_remaining_ = rng_.between(script_.hide_min, script_.hide_max);
        state_ = apply_external_event(state_, PartnerEvent::hide_start);
        ledger_.on_human_hide_start(tick);
      }
      break;
    case Activity::waiting_to_drum:
      if (robot_turns_.mid_drum_turn()) {
        activity_ = Activity::idle;
      } else if (countdown_-- <= 0) {
        activity_ = Activity::drumming;
        beats_remaining_ = rng_.between(script_.beats_min, script_.beats_max);
        countdown_ = 0;
      }
      break;
    default:
      break;
  }

  if (activity_ == Activity::hiding) {
    if (--hide_remaining_ < 0) {
      const int duration = state_.hide_elapsed - 1;
      state_ = apply_external_event(state_, PartnerEvent::hide_end);
      ledger_.on_human_hide_end(duration, tick);
      activity_ = Activity::idle;
      last_game_tick_ = tick;
      if (revisiting_peekaboo_) ++answered_;
    }
  } else if (activity_ == Activity::drumming) {
    // Never drum over the robot's own drumming turn.
    if (robot_turns_.mid_drum_turn() || beats_remaining_ == 0) {
      activity_ = Activity::idle;
      last_game_tick_ = tick;
    } else if (countdown_-- <= 0) {
      state_ = apply_external_event(state_, PartnerEvent::drum_beat);
      ledger_.on_human_beat(robot_turns_.mid_drum_turn(), tick);
      --beats_remaining_;
      countdown_ = script_.beat_interval - 1;
    }
  }

  // Eye contact: the partner watches the robot's face while it plays
  // peek-a-boo and watches the drum while teaching drumming.
  bool gaze = false;
  if (!state_.hiding && responds_to(Behavior::peekaboo))
    gaze = plays_peekaboo() && idle_ticks_ < kIdleAttention;
  state_.gaze_on_robot = gaze;
  return state_;
}

}  // namespace eiha
