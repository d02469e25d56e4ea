#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "eiha/actions.hpp"
#include "eiha/config.hpp"
#include "eiha/experience_space.hpp"
#include "eiha/ledger.hpp"
#include "eiha/partner.hpp"
#include "eiha/sensor_model.hpp"
#include "eiha/stm.hpp"

namespace eiha {

/// Everything observable about one tick of the loop.
struct TickRecord {
  std::int64_t tick = 0;
  ActionId action = ActionId::no_op;
  bool action_started = false;
  bool action_finished = false;
  bool robot_beat = false;
  PartnerState partner;
  bool face_detected = false;
  EngagementScores scores;
  double reward = 0.0;
  std::uint32_t experience_count = 0;

  bool operator==(const TickRecord&) const = default;
};

/// Folds a tick record into a running 64-bit FNV-1a digest.
std::uint64_t hash_record(std::uint64_t h, const TickRecord& r);
inline constexpr std::uint64_t kHashSeed = 0xcbf29ce484222325ULL;

/// The 10 Hz learning loop, independent of where the partner's state comes
/// from. Per tick: step the body, sense, push the interaction flags, score,
/// form the trailing-window experience, store experiences whose reward
/// horizon has elapsed, update the turn ledger and, when the running action
/// finishes, choose the next one (it starts on the following tick).
class InteractionCore {
 public:
  InteractionCore(const EihaConfig& cfg, std::uint64_t seed);

  const EihaConfig& config() const noexcept { return cfg_; }
  std::int64_t now() const noexcept { return tick_; }  // index of the next tick

  /// What the partner could see of the robot during the last tick.
  const RobotObservation& last_observation() const noexcept { return observation_; }

  /// Runs one tick with the partner in `partner`.
  const TickRecord& tick(const PartnerState& partner);

  const ExperienceSpace& space() const noexcept { return space_; }
  const TurnLedger& ledger() const noexcept { return ledger_; }
  const TurnRecognizer& robot_turns() const noexcept { return robot_turns_; }
  std::optional<ActionId> current_action() const noexcept { return executor_.current(); }
  std::uint64_t log_hash() const noexcept { return hash_; }

  /// Completed robot drumming turns as (tick of start-drum, completion tick).
  const std::vector<std::pair<std::int64_t, std::int64_t>>& drum_turns() const noexcept {
    return drum_turns_;
  }

 private:
  struct Pending {
    Experience experience;
    double reward_sum = 0.0;
    int seen = 0;
  };

  void record_window(const DiscreteFrame& frame);
  Experience trailing_experience() const;
  void choose_next();

  EihaConfig cfg_;
  Rng select_rng_;
  Rng sense_rng_;
  ExperienceSpace space_;
  StmWindow stm_;
  ActionExecutor executor_;
  TurnRecognizer robot_turns_;
  TurnLedger ledger_;

  std::int64_t tick_ = 0;
  int window_;
  int horizon_;
  std::vector<std::uint8_t> frames_;  // ring of the last `window_` frames, frame-major
  int frames_seen_ = 0;
  std::deque<Pending> pending_;
  bool hands_over_eyes_ = false;  // drawn per hide-face
  EngagementScores last_scores_;
  PartnerState last_partner_;
  RobotObservation observation_;
  TickRecord record_;
  std::uint64_t hash_ = kHashSeed;
  std::optional<std::int64_t> drum_turn_start_;
  std::vector<std::pair<std::int64_t, std::int64_t>> drum_turns_;
};

}  // namespace eiha
