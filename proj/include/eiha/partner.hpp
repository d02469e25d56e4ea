#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "eiha/action_id.hpp"
#include "eiha/ledger.hpp"
#include "eiha/rng.hpp"

namespace eiha {

struct EihaConfig;

/// What the robot perceives of its human partner at one tick.
struct PartnerState {
  bool present = true;
  bool hiding = false;
  int hide_elapsed = 0;  // ticks hidden so far, including this one
  bool drummed_this_tick = false;
  bool gaze_on_robot = true;

  bool operator==(const PartnerState&) const = default;
};

/// Shared vocabulary of the live protocol.
enum class PartnerEvent : std::uint8_t {
  hide_start,
  hide_end,
  drum_beat,
  gaze_on,
  gaze_off,
  present,
  absent,
};

std::string_view event_name(PartnerEvent e) noexcept;

/// Throws std::invalid_argument for unknown names.
PartnerEvent parse_event(std::string_view name);

/// Start-of-tick bookkeeping: clears the one-tick drum pulse and ages an
/// ongoing hide.
PartnerState begin_tick(PartnerState state);

PartnerState apply_external_event(PartnerState state, PartnerEvent event);

enum class PartnerVariant : std::uint8_t {
  peekaboo_teacher,
  drum_teacher,
  dual_teacher,
  inattentive,
  switching_teacher,
};

std::string_view variant_name(PartnerVariant v) noexcept;
/// Accepts the variant names plus the short forms "peekaboo", "drum", "dual"
/// and "switching". Throws std::invalid_argument otherwise.
PartnerVariant parse_variant(std::string_view name);

/// Behavioral constants of a scripted partner, in ticks.
struct PartnerScript {
  PartnerVariant variant = PartnerVariant::dual_teacher;
  int latency = 3;
  int hide_min = 8;
  int hide_max = 20;
  int beats_min = 2;
  int beats_max = 5;
  int beat_interval = 4;
  int seed_period = 150;  // 0 disables seeding
  int phase_timeout = 1200;
  std::uint64_t seed = 0;
};

PartnerScript make_script(PartnerVariant variant, const EihaConfig& cfg, std::uint64_t seed);

/// What the partner sees the robot do during one tick.
struct RobotObservation {
  ActionId action = ActionId::no_op;
  bool action_started = false;
  bool action_finished = false;
  bool robot_beat = false;
};

/// A scripted human teacher. Teachers answer completed robot turns of the
/// games they play after a short latency (hiding for a peek-a-boo turn, a
/// short burst of beats for a drumming turn), seed a game when the robot has
/// been idle for a while, and give eye contact while the robot plays
/// peek-a-boo face to face. The dual teacher answers both games and
/// alternates which one it seeds; the switching teacher does the same until
/// it gives up on peek-a-boo. The inattentive partner never engages.
class ScriptedPartner {
 public:
  explicit ScriptedPartner(PartnerScript script);

  const PartnerScript& script() const noexcept { return script_; }
  const PartnerState& state() const noexcept { return state_; }

  /// Advances to `tick` having observed what the robot did during the
  /// previous tick, and returns the partner's state for `tick`.
  PartnerState step(const RobotObservation& observed, std::int64_t tick);

  /// The behavior currently being taught, if any.
  std::optional<Behavior> teaching() const noexcept;

  /// Tick at which a switching teacher stopped answering peek-a-boo.
  std::optional<std::int64_t> quit_peekaboo_tick() const noexcept { return quit_tick_; }

 private:
  enum class Activity { idle, waiting_to_hide, hiding, waiting_to_drum, drumming };

  bool responds_to(Behavior b) const noexcept;
  bool plays_peekaboo() const noexcept;
  void update_phase(std::int64_t tick);
  void start_hide(int delay);
  void start_drum(int delay);

  PartnerScript script_;
  Rng rng_;
  PartnerState state_;
  TurnRecognizer robot_turns_;
  TurnLedger ledger_;

  Activity activity_ = Activity::idle;
  int countdown_ = 0;
  int hide_remaining_ = 0;
  int beats_remaining_ = 0;

  Behavior phase_ = Behavior::peekaboo;
  std::int64_t phase_start_ = 0;
  std::int64_t last_game_tick_ = 0;
  bool taught_[2] = {false, false};
  bool revisiting_peekaboo_ = false;
  int answered_ = 0;  // peek-a-boo rounds answered while revisiting
  std::optional<std::int64_t> quit_tick_;
  ActionId last_action_ = ActionId::home;
  ActionId last_motion_ = ActionId::home;
  ActionId previous_motion_ = ActionId::no_op;
  int idle_ticks_ = 0;
};

}  // namespace eiha
