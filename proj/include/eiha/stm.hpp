#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace eiha {

struct EihaConfig;

/// Interaction flags computed once per tick.
struct TickFlags {
  bool human_hide = false;  // no face found in the robot's eye camera
  bool robot_hide = false;  // robot action is hide-face
  bool human_only_hide = false;
  bool robot_drum = false;  // robot action is drum-hit
  bool human_drum = false;  // beat detected from the partner's drum
  bool both_drum = false;

  /// Fills the two derived flags from the four observed ones.
  static TickFlags from(bool human_hide, bool robot_hide, bool robot_drum, bool human_drum) {
    return TickFlags{human_hide,  robot_hide, human_hide && !robot_hide,
                     robot_drum,  human_drum, human_drum && robot_drum};
  }

  bool operator==(const TickFlags&) const = default;
};

/// Running sums of each flag over the window.
struct FlagSums {
  int human_hide = 0;
  int robot_hide = 0;
  int human_only_hide = 0;
  int robot_drum = 0;
  int human_drum = 0;
  int both_drum = 0;

  bool operator==(const FlagSums&) const = default;
};

/// Ring buffer of the last `capacity` ticks of flags with incrementally
/// maintained sums.
class StmWindow {
 public:
  explicit StmWindow(int capacity);

  void push(const TickFlags& flags);
  void clear();

  int capacity() const noexcept { return capacity_; }
  int size() const noexcept { return size_; }
  const FlagSums& sums() const noexcept { return sums_; }

  /// Stored entries, oldest first.
  std::vector<TickFlags> entries() const;

 private:
  int capacity_;
  int size_ = 0;
  int head_ = 0;  // next write position
  std::vector<TickFlags> ring_;
  FlagSums sums_;
};

struct EngagementScores {
  int visual_attention = 0;  // 0 or 1
  double hide_score = 0.0;
  double drum_score = 0.0;

  double total() const noexcept { return visual_attention + hide_score + drum_score; }
  bool operator==(const EngagementScores&) const = default;
};

/// Peek-a-boo engagement: positive only while the human-only hiding time in
/// the window lies strictly between min_time and max_time. Requires STM.
double hide_score(const FlagSums& sums, const EihaConfig& cfg);

/// Drumming engagement: -0.5 when the robot hides while the human drums,
/// otherwise a normalized count of both players' drumming penalised by
/// simultaneous beats, gated on the human having drummed in the window.
double drum_score(const FlagSums& sums, const TickFlags& current, const EihaConfig& cfg);

struct PixelPoint {
  int x = 0;
  int y = 0;
};

struct PixelRect {
  int x_min = 0, x_max = 0;
  int y_min = 0, y_max = 0;

  bool contains(PixelPoint p) const noexcept {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
};

/// 1 when the robot's face was found in the partner's scene camera and the
/// gaze point lies inside its bounding box (inclusive), else 0.
int visual_attention(PixelPoint gaze, const PixelRect& robot_face_box, bool face_found);

/// Sum of the three engagement scores.
double total_reward(const EngagementScores& scores);

/// Scores for the current tick. With STM disabled both memory-based scores
/// are zero and only attention counts.
EngagementScores score_tick(const StmWindow& window, const TickFlags& current,
                            int visual_attention, const EihaConfig& cfg);

}  // namespace eiha
