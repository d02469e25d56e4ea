#include "eiha/stm.hpp"

#include <algorithm>
#include <stdexcept>

#include "eiha/config.hpp"

namespace eiha {
namespace {

void accumulate(FlagSums& s, const TickFlags& f, int sign) {
  s.human_hide += sign * f.human_hide;
  s.robot_hide += sign * f.robot_hide;
  s.human_only_hide += sign * f.human_only_hide;
  s.robot_drum += sign * f.robot_drum;
  s.human_drum += sign * f.human_drum;
  s.both_drum += sign * f.both_drum;
}

}  // namespace

StmWindow::StmWindow(int capacity) : capacity_(capacity), ring_(capacity > 0 ? capacity : 0) {
  if (capacity <= 0) throw std::invalid_argument("StmWindow: capacity must be positive");
}

void StmWindow::push(const TickFlags& flags) {
  if (size_ == capacity_) {
    accumulate(sums_, ring_[head_], -1);
  } else {
    ++size_;
  }
  ring_[head_] = flags;
  accumulate(sums_, flags, +1);
  head_ = (head_ + 1) % capacity_;
}

void StmWindow::clear() {
  size_ = 0;
  head_ = 0;
  sums_ = {};
  std::fill(ring_.begin(), ring_.end(), TickFlags{});
}

std::vector<TickFlags> StmWindow::entries() const {
  std::vector<TickFlags> out;
  out.reserve(size_);
  int start = (head_ - size_ + capacity_) % capacity_;
  for (int i = 0; i < size_; ++i) out.push_back(ring_[(start + i) % capacity_]);
  return out;
}

double hide_score(const FlagSums& sums, const EihaConfig& cfg) {
  const double lower = cfg.resolution * cfg.min_time;
  const double upper = cfg.resolution * cfg.max_time;
  const int hidden = sums.human_only_hide;
  if (hidden < upper && hidden > lower)
    return (sums.human_only_hide + sums.robot_hide) / (cfg.resolution * cfg.mem_length);
  return 0.0;
}

double drum_score(const FlagSums& sums, const TickFlags& current, const EihaConfig& cfg) {
  if (current.robot_hide) return current.human_drum ? -0.5 : 0.0;
  if (sums.human_drum > 0)
    return (0.5 * (sums.robot_drum + sums.human_drum) - sums.both_drum) /
           (cfg.resolution * cfg.mem_length);
  return 0.0;
}

int visual_attention(PixelPoint gaze, const PixelRect& robot_face_box, bool face_found) {
  return face_found && robot_face_box.contains(gaze) ? 1 : 0;
}

double total_reward(const EngagementScores& scores) { return scores.total(); }

EngagementScores score_tick(const StmWindow& window, const TickFlags& current,
                            int attention, const EihaConfig& cfg) {
  EngagementScores s;
  s.visual_attention = attention;
  if (cfg.stm_enabled()) {
    s.hide_score = hide_score(window.sums(), cfg);
    s.drum_score = drum_score(window.sums(), current, cfg);
  }
  return s;
}

}  // namespace eiha
