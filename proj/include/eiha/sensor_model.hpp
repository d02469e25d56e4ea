#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eiha/action_id.hpp"
#include "eiha/partner.hpp"
#include "eiha/rng.hpp"
#include "eiha/stm.hpp"

namespace eiha {

struct EihaConfig;

inline constexpr int kChannelCount = 107;
inline constexpr int kImageSide = 8;
inline constexpr int kJointCount = 38;  // head 3, eyes 3, arms 7+7, hands 9+9

/// Channel layout of a frame, in order.
namespace channel {
inline constexpr int image = 0;
inline constexpr int head = 64;
inline constexpr int eyes = 67;
inline constexpr int left_arm = 70;
inline constexpr int left_hand = 77;
inline constexpr int right_arm = 86;
inline constexpr int right_hand = 93;
inline constexpr int face_detected = 102;
inline constexpr int beat_detected = 103;
inline constexpr int visual_attention = 104;
inline constexpr int drum_engagement = 105;
inline constexpr int hide_engagement = 106;
inline constexpr int joints = head;  // first joint channel
}  // namespace channel

/// Joint positions in radians, ordered head, eyes, left arm, left hand,
/// right arm, right hand.
using JointPose = std::array<double, kJointCount>;

enum class ChannelKind : std::uint8_t { continuous, binary };

struct ChannelSpec {
  std::string name;
  ChannelKind kind = ChannelKind::continuous;
  double lo = 0.0;
  double hi = 1.0;
};

/// The fixed 107-channel table.
const std::vector<ChannelSpec>& channel_specs();

/// Ranges of the 38 joint channels (a view into channel_specs()).
std::span<const ChannelSpec> joint_specs();

class ChannelRangeError : public std::out_of_range {
 public:
  ChannelRangeError(std::string channel, double value);
  const std::string& channel() const noexcept { return channel_; }

 private:
  std::string channel_;
};

struct SensorFrame {
  std::array<double, kChannelCount> values{};

  std::span<const double> image() const { return {values.data() + channel::image, 64}; }
  double& operator[](int c) { return values[c]; }
  double operator[](int c) const { return values[c]; }
  bool face_detected() const { return values[channel::face_detected] != 0.0; }
  bool beat_detected() const { return values[channel::beat_detected] != 0.0; }
  int visual_attention() const { return values[channel::visual_attention] != 0.0 ? 1 : 0; }

  bool operator==(const SensorFrame&) const = default;
};

struct DiscreteFrame {
  std::array<std::uint8_t, kChannelCount> bins{};
  bool operator==(const DiscreteFrame&) const = default;
};

/// Bin of one value: floor((v - lo) / (hi - lo) * bins), with v == hi in the
/// top bin. Binary channels pass 0/1 through. Throws ChannelRangeError.
int discretize_value(double v, const ChannelSpec& spec, int bins);

DiscreteFrame discretize(const SensorFrame& frame, std::span<const ChannelSpec> specs, int bins);

/// Partner's gaze in scene-camera pixels and the robot face's bounding box
/// found there. Simulated gaze lands in the box centre when on the robot.
inline constexpr PixelRect kRobotFaceBox{300, 360, 220, 280};
PixelPoint simulated_gaze_point(const PartnerState& partner);

/// Builds one frame from the robot body, the partner and the engagement
/// scores. Face detection fails while the partner is away or hiding, and
/// while a hide-face action covers the eye camera (`hands_over_eyes`, drawn
/// once per hide-face with probability `occlusion_probability`). The image
/// is a coarse block rendering of the scene plus uniform noise. Engagement
/// channels read 0 when STM is disabled.
SensorFrame synthesize_frame(const JointPose& pose, ActionId robot_action, bool hands_over_eyes,
                             const PartnerState& partner, const EngagementScores& scores,
                             const EihaConfig& cfg, Rng& rng);

}  // namespace eiha
