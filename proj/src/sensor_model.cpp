#include "eiha/sensor_model.hpp"

#include <algorithm>
#include <cmath>

#include "eiha/config.hpp"

namespace eiha {
namespace {

struct JointRange {
  const char* name;
  double lo, hi;
};

constexpr JointRange kHead[] = {{"pitch", -0.7, 0.7}, {"roll", -0.7, 0.7}, {"yaw", -0.9, 0.9}};
constexpr JointRange kEyes[] = {{"tilt", -0.6, 0.6}, {"version", -0.6, 0.6}, {"vergence", 0.0, 0.8}};
constexpr JointRange kArm[] = {{"shoulder_pitch", -1.8, 0.4}, {"shoulder_roll", 0.0, 1.6},
                               {"shoulder_yaw", -0.6, 1.4},   {"elbow", 0.2, 1.8},
                               {"wrist_prosup", -1.0, 1.0},   {"wrist_pitch", -1.0, 0.4},
                               {"wrist_yaw", -0.4, 0.4}};
constexpr JointRange kHand[] = {{"thumb_oppose", 0.0, 1.6}, {"thumb_proximal", 0.0, 1.6},
                                {"thumb_distal", 0.0, 1.6}, {"index_proximal", 0.0, 1.6},
                                {"index_distal", 0.0, 1.6}, {"middle_proximal", 0.0, 1.6},
                                {"middle_distal", 0.0, 1.6}, {"pinky", 0.0, 1.6},
                                {"abduction", 0.0, 1.6}};

template <std::size_t N>
void add_group(std::vector<ChannelSpec>& out, const char* prefix, const JointRange (&group)[N]) {
  for (const auto& j : group)
    out.push_back({std::string(prefix) + "." + j.name, ChannelKind::continuous, j.lo, j.hi});
}

std::vector<ChannelSpec> build_specs() {
  std::vector<ChannelSpec> specs;
  specs.reserve(kChannelCount);
  for (int r = 0; r < kImageSide; ++r)
    for (int c = 0; c < kImageSide; ++c)
      specs.push_back({"image." + std::to_string(r) + "." + std::to_string(c),
                       ChannelKind::continuous, 0.0, 1.0});
  add_group(specs, "head", kHead);
  add_group(specs, "eyes", kEyes);
  add_group(specs, "left_arm", kArm);
  add_group(specs, "left_hand", kHand);
  add_group(specs, "right_arm", kArm);
  add_group(specs, "right_hand", kHand);
  specs.push_back({"face_detected", ChannelKind::binary, 0.0, 1.0});
  specs.push_back({"beat_detected", ChannelKind::binary, 0.0, 1.0});
  specs.push_back({"visual_attention", ChannelKind::binary, 0.0, 1.0});
  // Drum engagement spans [-0.5, 0.5]; hide engagement never exceeds 1 because
  // human-only and robot hiding are disjoint per tick.
  specs.push_back({"drum_engagement", ChannelKind::continuous, -0.5, 0.5});
  specs.push_back({"hide_engagement", ChannelKind::continuous, 0.0, 1.0});
  return specs;
}

// Coarse 8-level intensities, each at the centre of one of 8 equal bins.
double level(int k) { return (k + 0.5) / 8.0; }

bool in_face_block(int r, int c) { return r >= 2 && r <= 4 && c >= 2 && c <= 5; }

}  // namespace

const std::vector<ChannelSpec>& channel_specs() {
  static const std::vector<ChannelSpec> specs = build_specs();
  return specs;
}

std::span<const ChannelSpec> joint_specs() {
  return std::span<const ChannelSpec>(channel_specs()).subspan(channel::joints, kJointCount);
}

ChannelRangeError::ChannelRangeError(std::string channel, double value)
    : std::out_of_range("value " + std::to_string(value) + " outside range of channel " +
                        channel),
      channel_(std::move(channel)) {}

int discretize_value(double v, const ChannelSpec& spec, int bins) {
  if (spec.kind == ChannelKind::binary) {
    if (v == 0.0) return 0;
    if (v == 1.0) return 1;
    throw ChannelRangeError(spec.name, v);
  }
  if (!(v >= spec.lo && v <= spec.hi)) throw ChannelRangeError(spec.name, v);
  const int b = static_cast<int>(std::floor((v - spec.lo) / (spec.hi - spec.lo) * bins));
  return std::min(b, bins - 1);
}

DiscreteFrame discretize(const SensorFrame& frame, std::span<const ChannelSpec> specs, int bins) {
  if (specs.size() != kChannelCount)
    throw std::invalid_argument("discretize: channel table must have 107 entries");
  DiscreteFrame out;
  for (int c = 0; c < kChannelCount; ++c)
    out.bins[c] = static_cast<std::uint8_t>(discretize_value(frame.values[c], specs[c], bins));
  return out;
}

PixelPoint simulated_gaze_point(const PartnerState& partner) {
  if (partner.gaze_on_robot)
    return {(kRobotFaceBox.x_min + kRobotFaceBox.x_max) / 2,
            (kRobotFaceBox.y_min + kRobotFaceBox.y_max) / 2};
  return {100, 420};
}

SensorFrame synthesize_frame(const JointPose& pose, ActionId robot_action, bool hands_over_eyes,
                             const PartnerState& partner, const EngagementScores& scores,
                             const EihaConfig& cfg, Rng& rng) {
  SensorFrame frame;
  const bool occluded = robot_action == ActionId::hide_face && hands_over_eyes;
  const bool face_visible = partner.present && !partner.hiding && !occluded;

  for (int r = 0; r < kImageSide; ++r) {
    for (int c = 0; c < kImageSide; ++c) {
      int k = 1 + (3 * r + c) % 3;  // background texture
      if (occluded) {
        k = 0;  // the robot's hands cover its eye camera
      } else if (r == kImageSide - 1) {
        k = partner.drummed_this_tick ? 7 : 2;
      } else if (in_face_block(r, c) && partner.present) {
        k = partner.hiding ? 4 : 6;
      }
      double v = level(k) + rng.uniform(-cfg.image_noise, cfg.image_noise);
      frame.values[channel::image + r * kImageSide + c] = std::clamp(v, 0.0, 1.0);
    }
  }

  const auto specs = joint_specs();
  for (int j = 0; j < kJointCount; ++j)
    frame.values[channel::joints + j] = std::clamp(pose[j], specs[j].lo, specs[j].hi);

  frame.values[channel::face_detected] = face_visible ? 1.0 : 0.0;
  frame.values[channel::beat_detected] = partner.drummed_this_tick ? 1.0 : 0.0;
  frame.values[channel::visual_attention] = visual_attention(
      simulated_gaze_point(partner), kRobotFaceBox, partner.present && !partner.hiding);
  if (cfg.stm_enabled()) {
    frame.values[channel::drum_engagement] = std::clamp(scores.drum_score, -0.5, 0.5);
    frame.values[channel::hide_engagement] = std::clamp(scores.hide_score, 0.0, 1.0);
  }
  return frame;
}

}  // namespace eiha
