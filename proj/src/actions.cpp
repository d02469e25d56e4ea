#include "eiha/actions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "eiha/config.hpp"

namespace eiha {
namespace {

constexpr std::array<std::string_view, kActionCount> kNames = {
    "right-arm-down", "left-arm-down",  "home",          "hide-face",
    "right-arm-up",   "left-arm-up",    "right-arm-wave", "left-arm-wave",
    "start-drum",     "drum-hit",       "no-op",
};

// Joint indices within a pose.
namespace j {
constexpr int head_pitch = 0, head_roll = 1, head_yaw = 2;
constexpr int eye_tilt = 3, eye_version = 4, eye_vergence = 5;
constexpr int left_arm = 6, left_hand = 13, right_arm = 22, right_hand = 29;
// Offsets within an arm.
constexpr int sh_pitch = 0, sh_roll = 1, sh_yaw = 2, elbow = 3, prosup = 4, wr_pitch = 5,
              wr_yaw = 6;
}  // namespace j

JointTargets arm(int base, double pitch, double roll, double yaw, double elbow) {
  return {{base + j::sh_pitch, pitch}, {base + j::sh_roll, roll}, {base + j::sh_yaw, yaw},
          {base + j::elbow, elbow}};
}

JointTargets& add(JointTargets& t, JointTargets more) {
  t.insert(t.end(), more.begin(), more.end());
  return t;
}

JointTargets hand(int base, double closure) {
  JointTargets t;
  for (int k = 0; k < 9; ++k) t.emplace_back(base + k, closure);
  return t;
}

JointTargets whole_pose(const JointPose& p) {
  JointTargets t;
  for (int k = 0; k < kJointCount; ++k) t.emplace_back(k, p[k]);
  return t;
}

JointPose make_home() {
  JointPose p{};
  p[j::eye_vergence] = 0.2;
  for (int base : {j::left_arm, j::right_arm}) {
    p[base + j::sh_pitch] = -0.3;
    p[base + j::sh_roll] = 0.3;
    p[base + j::elbow] = 0.8;
  }
  for (int base : {j::left_hand, j::right_hand})
    for (int k = 0; k < 9; ++k) p[base + k] = 0.2;
  return p;
}

JointTargets arm_up(int base) { return arm(base, -1.7, 0.8, 0.1, 0.3); }

std::vector<JointTargets> wave(int base) {
  auto up = arm_up(base);
  JointTargets out = up, in = up;
  out.emplace_back(base + j::wr_yaw, 0.35);
  in.emplace_back(base + j::wr_yaw, -0.35);
  return {up, out, in, out};
}

std::array<ActionSpec, kActionCount> build_specs() {
  std::array<ActionSpec, kActionCount> s;
  auto set = [&](ActionId id, std::vector<JointTargets> frames, int duration) -> ActionSpec& {
    auto& spec = s[index_of(id)];
    spec.id = id;
    spec.keyframes = std::move(frames);
    spec.duration = duration;
    return spec;
  };

  set(ActionId::right_arm_down,
      {arm(j::right_arm, 0.0, 0.2, 0.0, 0.4), arm(j::right_arm, 0.3, 0.1, 0.0, 0.2)}, 10);
  set(ActionId::left_arm_down,
      {arm(j::left_arm, 0.0, 0.2, 0.0, 0.4), arm(j::left_arm, 0.3, 0.1, 0.0, 0.2)}, 10);
  set(ActionId::home, {whole_pose(make_home())}, 10);

  JointTargets raise = arm(j::left_arm, -1.0, 0.5, 0.6, 1.2);
  add(raise, arm(j::right_arm, -1.0, 0.5, 0.6, 1.2));
  JointTargets cover = arm(j::left_arm, -1.5, 0.4, 0.9, 1.7);
  add(cover, arm(j::right_arm, -1.5, 0.4, 0.9, 1.7));
  add(cover, {{j::left_arm + j::wr_pitch, -0.5}, {j::right_arm + j::wr_pitch, -0.5},
              {j::head_pitch, 0.3}, {j::eye_tilt, -0.3}});
  add(cover, hand(j::left_hand, 0.1));
  add(cover, hand(j::right_hand, 0.1));
  set(ActionId::hide_face, {raise, cover, cover}, 15).characteristic_for = Behavior::peekaboo;

  set(ActionId::right_arm_up, {arm(j::right_arm, -0.9, 0.5, 0.1, 0.6), arm_up(j::right_arm)},
      12);
  set(ActionId::left_arm_up, {arm(j::left_arm, -0.9, 0.5, 0.1, 0.6), arm_up(j::left_arm)}, 12);
  set(ActionId::right_arm_wave, wave(j::right_arm), 15);
  set(ActionId::left_arm_wave, wave(j::left_arm), 15);

  JointTargets reach = arm(j::right_arm, -0.4, 0.2, 0.3, 1.0);
  add(reach, {{j::head_pitch, 0.4}, {j::eye_tilt, 0.4}, {j::head_yaw, -0.2}});
  JointTargets grip = arm(j::right_arm, -0.6, 0.2, 0.4, 1.2);
  add(grip, {{j::right_arm + j::wr_pitch, -0.8}, {j::right_arm + j::prosup, 0.5}});
  add(grip, hand(j::right_hand, 1.2));
  set(ActionId::start_drum, {reach, grip}, 10);

  JointTargets strike = {{j::right_arm + j::wr_pitch, 0.2}, {j::right_arm + j::elbow, 1.0}};
  JointTargets lift = {{j::right_arm + j::wr_pitch, -0.8}, {j::right_arm + j::elbow, 1.2}};
  auto& hit = set(ActionId::drum_hit, {strike, lift}, 5);
  hit.characteristic_for = Behavior::drumming;
  hit.beat_tick = 3;

  set(ActionId::no_op, {}, 2);
  return s;
}

// Longest run of temporal links followed when looking for successor actions.
constexpr int kMaxSuccessorWalk = 120;

const std::array<ActionSpec, kActionCount>& specs() {
  static const auto table = build_specs();
  return table;
}

}  // namespace

std::string_view action_name(ActionId a) noexcept { return kNames[index_of(a)]; }

std::optional<ActionId> parse_action(std::string_view name) noexcept {
  for (auto a : kAllActions)
    if (kNames[index_of(a)] == name) return a;
  return std::nullopt;
}

std::string_view behavior_name(Behavior b) noexcept {
  return b == Behavior::peekaboo ? "peekaboo" : "drumming";
}

const ActionSpec& action_spec(ActionId a) { return specs()[index_of(a)]; }

const JointPose& home_pose() {
  static const JointPose pose = make_home();
  return pose;
}

std::vector<JointPose> trajectory_from(const JointPose& start, const ActionSpec& spec) {
  std::vector<JointPose> frames{start};
  for (const auto& targets : spec.keyframes) {
    JointPose next = frames.back();
    for (auto [joint, value] : targets) next[joint] = value;
    frames.push_back(next);
  }
  return frames;
}

ActionExecutor::ActionExecutor(JointPose start) : pose_(start) {}

void ActionExecutor::load(ActionId a) {
  if (current_) throw std::logic_error("ActionExecutor: action still running");
  const auto& spec = action_spec(a);
  current_ = a;
  keyframes_ = trajectory_from(pose_, spec);
  duration_ = spec.duration;
  offset_ = 0;
}

ActionExecutor::Step ActionExecutor::step() {
  if (!current_) throw std::logic_error("ActionExecutor: no action loaded");
  ++offset_;
  const int segments = static_cast<int>(keyframes_.size()) - 1;
  if (segments > 0) {
    // Keyframe k is reached at tick k * duration / segments.
    const double pos = static_cast<double>(offset_) * segments / duration_;
    const int k = std::min(static_cast<int>(pos), segments - 1);
    const double f = pos - k;
    for (int i = 0; i < kJointCount; ++i)
      pose_[i] = keyframes_[k][i] + f * (keyframes_[k + 1][i] - keyframes_[k][i]);
  }
  const ActionId a = *current_;
  const bool finished = offset_ >= duration_;
  const bool beat = action_spec(a).beat_tick == offset_;
  if (finished) {
    if (segments > 0) pose_ = keyframes_.back();
    current_.reset();
  }
  return {pose_, a, finished, beat};
}

std::array<double, kActionCount> softmax_distribution(
    const std::array<double, kActionCount>& rewards, double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("softmax: temperature must be positive");
  double top = -std::numeric_limits<double>::infinity();
  for (double r : rewards) top = std::max(top, r);
  std::array<double, kActionCount> p{};
  if (std::isinf(top) && top < 0) throw std::invalid_argument("softmax: no finite reward");
  double z = 0.0;
  for (int i = 0; i < kActionCount; ++i) {
    p[i] = std::isinf(rewards[i]) ? 0.0 : std::exp((rewards[i] - top) / temperature);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

int sample_index(std::span<const double> probabilities, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  int last = -1;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] <= 0.0) continue;
    acc += probabilities[i];
    last = static_cast<int>(i);
    if (u < acc) return last;
  }
  if (last < 0) throw std::invalid_argument("sample_index: empty distribution");
  return last;
}

double sequence_value(const ExperienceSpace& space, ExperienceId start, int depth,
                      double discount) {
  const Experience* e = &space.at(start);
  double best = e->reward;
  if (discount <= 0.0) return best;
  double weight = 1.0;
  ActionId prev = e->action;
  auto cursor = e->next_id;
  int segments = 1;
  for (int steps = 0; cursor && steps < kMaxSuccessorWalk; ++steps) {
    e = &space.at(*cursor);
    if (e->action != prev) {
      if (++segments > depth) break;
      weight *= discount;
      best = std::max(best, weight * e->reward);
    }
    prev = e->action;
    cursor = e->next_id;
  }
  return best;
}

std::array<std::optional<double>, kActionCount> successor_candidates(
    const ExperienceSpace& space, ExperienceId from, int depth, double discount,
    std::optional<ActionId> finished) {
  // Walk the remembered continuation of `from`. Every action that begins on
  // the way is a candidate, and so is every other action remembered to have
  // followed the recalled moment; each is valued by the sequence it began.
  // With `finished` given, the recalled experience itself counts when its
  // action differs: a window recalled one tick late already shows what
  // followed.
  std::array<std::optional<double>, kActionCount> best{};
  auto offer = [&](ActionId a, ExperienceId start, int remaining) {
    const double v = sequence_value(space, start, remaining, discount);
    auto& slot = best[index_of(a)];
    if (!slot || v > *slot) slot = v;
  };
  std::optional<ExperienceId> cursor = from;
  ActionId prev = finished.value_or(space.at(from).action);
  if (!finished) cursor = space.at(from).next_id;
  int segments = 0;
  for (int steps = 0; cursor && steps < kMaxSuccessorWalk; ++steps) {
    const auto& e = space.at(*cursor);
    if (e.action != prev) {
      if (++segments > depth) break;
      offer(e.action, e.id, depth - segments + 1);
    }
    if (segments == 0)
      for (auto a : kAllActions)
        if (auto f = e.followers[index_of(a)]) offer(a, *f, depth);
    prev = e.action;
    cursor = e.next_id;
  }
  return best;
}

std::array<double, kActionCount> selection_rewards(
    const std::array<std::optional<double>, kActionCount>& candidates, double floor) {
  std::array<double, kActionCount> r{};
  for (int i = 0; i < kActionCount; ++i) r[i] = candidates[i].value_or(floor);
  return r;
}

Selection select_action(const ExperienceSpace& space, const Experience* probe,
                        const EihaConfig& cfg, Rng& rng, std::optional<ActionId> finished) {
  auto uniform = [&] { return kAllActions[rng.below(kActionCount)]; };
  if (rng.chance(cfg.exploration_epsilon))
    return {uniform(), Selection::Reason::explore, std::nullopt};
  std::optional<Recall> recall;
  if (probe) recall = space.nearest_with_successor(*probe);
  if (!recall || recall->distance >= cfg.merge_threshold * cfg.novelty_factor)
    return {uniform(), Selection::Reason::novel, recall};
  const auto candidates = successor_candidates(space, recall->id, cfg.successor_depth,
                                               cfg.successor_discount, finished);
  const auto rewards = selection_rewards(candidates, cfg.reward_floor);
  const auto p = softmax_distribution(rewards, cfg.softmax_temperature);
  return {kAllActions[sample_index(p, rng)], Selection::Reason::recalled, recall};
}

}  // namespace eiha
