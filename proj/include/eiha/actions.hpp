#pragma once

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "eiha/action_id.hpp"
#include "eiha/experience_space.hpp"
#include "eiha/rng.hpp"
#include "eiha/sensor_model.hpp"

namespace eiha {

struct EihaConfig;

/// Target for a subset of joints; joints not listed keep their value.
using JointTargets = std::vector<std::pair<int, double>>;

struct ActionSpec {
  ActionId id = ActionId::no_op;
  std::vector<JointTargets> keyframes;  // reached at evenly spaced ticks
  int duration = 1;                     // ticks
  std::optional<Behavior> characteristic_for;
  int beat_tick = 0;  // tick (1-based) of the drum stick impact, 0 if none
};

const ActionSpec& action_spec(ActionId a);

/// Resting pose the robot starts in and returns to with `home`.
const JointPose& home_pose();

/// Full-pose keyframes of `spec` when started from `start`; element 0 is
/// `start` itself.
std::vector<JointPose> trajectory_from(const JointPose& start, const ActionSpec& spec);

/// Plays one action at a time, one tick per call. Actions are atomic: a new
/// action can only be loaded once the current one has finished.
class ActionExecutor {
 public:
  explicit ActionExecutor(JointPose start = home_pose());

  bool busy() const noexcept { return current_.has_value(); }
  std::optional<ActionId> current() const noexcept { return current_; }
  const JointPose& pose() const noexcept { return pose_; }
  int offset() const noexcept { return offset_; }

  /// Throws std::logic_error while another action is still running.
  void load(ActionId a);

  struct Step {
    JointPose pose;
    ActionId action;
    bool finished;
    bool beat;  // drum stick impact on this tick
  };
  /// Emits the pose for the next tick by linear interpolation between
  /// keyframes. Throws std::logic_error when idle.
  Step step();

 private:
  JointPose pose_;
  std::optional<ActionId> current_;
  std::vector<JointPose> keyframes_;
  int duration_ = 0;
  int offset_ = 0;
};

/// Softmax over per-action rewards: P(a) proportional to
/// exp(reward_a / temperature). Entries equal to -infinity are excluded.
std::array<double, kActionCount> softmax_distribution(
    const std::array<double, kActionCount>& rewards, double temperature);

/// Draws an index from a discrete distribution.
int sample_index(std::span<const double> probabilities, Rng& rng);

/// Best of the rewards along the remembered sequence starting at `start`,
/// through up to `depth` actions, each later action weighted by a further
/// factor of `discount`.
double sequence_value(const ExperienceSpace& space, ExperienceId start, int depth,
                      double discount);

/// Actions that followed `from` in memory, each with the value of the best
/// sequence it began, following next links through up to `depth` changes of
/// action. `finished` is the action that just ended, if known.
std::array<std::optional<double>, kActionCount> successor_candidates(
    const ExperienceSpace& space, ExperienceId from, int depth, double discount,
    std::optional<ActionId> finished = std::nullopt);

/// The per-action reward vector the softmax sees for a recall: candidate
/// rewards where present, `floor` elsewhere.
std::array<double, kActionCount> selection_rewards(
    const std::array<std::optional<double>, kActionCount>& candidates, double floor);

struct Selection {
  ActionId action;
  enum class Reason { explore, novel, recalled } reason;
  std::optional<Recall> recall;
};

/// Reward-weighted probabilistic choice of the next action: explore with
/// probability epsilon or when nothing close enough is remembered, otherwise
/// softmax over the actions that followed the nearest remembered experience.
Selection select_action(const ExperienceSpace& space, const Experience* probe,
                        const EihaConfig& cfg, Rng& rng,
                        std::optional<ActionId> finished = std::nullopt);

}  // namespace eiha
