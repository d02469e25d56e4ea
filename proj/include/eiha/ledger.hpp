#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "eiha/action_id.hpp"

namespace eiha {

/// Streaming recognizer of completed robot turns.
///
///   peek-a-boo: hide-face, home
///   drumming:   start-drum, drum-hit (one or more), right-arm-down | home
///
/// with any number of no-ops interspersed. Any other action abandons the
/// partial turn.
class TurnRecognizer {
 public:
  void on_action_start(ActionId a) noexcept;
  /// Returns the behavior whose turn `a` completes, if any.
  std::optional<Behavior> on_action_complete(ActionId a) noexcept;

  /// Between the start of start-drum and the completion of the turn.
  bool mid_drum_turn() const noexcept { return drum_active_; }
  void reset() noexcept { *this = TurnRecognizer{}; }

 private:
  enum class State : std::uint8_t { none, hid, drum_started, hitting };
  State state_ = State::none;
  bool drum_active_ = false;
};

/// Recognizes a sequence that is exactly one robot turn (no-ops allowed
/// anywhere), or returns nothing.
std::optional<Behavior> behavior_turn_of(std::span<const ActionId> actions);

struct BehaviorProgress {
  int count = 0;  // consecutive robot->human alternations
  bool learned = false;
  std::optional<std::int64_t> first_characteristic_tick;
  std::optional<std::int64_t> learned_tick;

  bool operator==(const BehaviorProgress&) const = default;
};

struct LedgerEvent {
  enum class Kind : std::uint8_t { robot_turn, human_turn, reset, learned };
  std::int64_t tick;
  Behavior behavior;
  Kind kind;
  int count;

  bool operator==(const LedgerEvent&) const = default;
};

/// Counts consecutive robot-then-human turn alternations per behavior. A
/// behavior is learned at the completion of its third alternation. Foreign
/// robot actions, repeated robot turns without a human reply and badly timed
/// human hides break the streak.
class TurnLedger {
 public:
  /// Human hides count as a peek-a-boo turn when their length in ticks lies
  /// strictly between the two bounds. A drumming turn ends once no beat has
  /// arrived for `drum_gap` ticks.
  TurnLedger(int hide_min_exclusive, int hide_max_exclusive, int drum_gap);

  void on_robot_action_start(ActionId a, std::int64_t tick);
  void on_robot_turn(Behavior b, std::int64_t tick);
  void on_human_hide_start(std::int64_t tick);
  void on_human_hide_end(int duration_ticks, std::int64_t tick);
  void on_human_beat(bool robot_mid_drum_turn, std::int64_t tick);
  /// Closes a drumming reply whose gap has elapsed.
  void on_tick_end(std::int64_t tick);

  const BehaviorProgress& progress(Behavior b) const noexcept {
    return progress_[static_cast<int>(b)];
  }
  bool all_learned() const noexcept { return progress_[0].learned && progress_[1].learned; }
  const std::vector<LedgerEvent>& events() const noexcept { return events_; }

 private:
  struct Pending {
    bool robot_turn = false;   // a robot turn awaits its human reply
    bool reply_open = false;   // the human is replying to it right now
    bool queued_turn = false;  // robot turn completed during the reply
  };

  void reset(Behavior b, std::int64_t tick);
  void credit_reply(Behavior b, std::int64_t tick);
  void close_drum_burst(std::int64_t tick);

  int hide_min_;
  int hide_max_;
  int drum_gap_;
  std::array<BehaviorProgress, 2> progress_{};
  std::array<Pending, 2> pending_{};
  bool burst_active_ = false;
  std::int64_t last_beat_ = 0;
  std::vector<LedgerEvent> events_;
};

}  // namespace eiha
