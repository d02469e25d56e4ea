#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "eiha/action_id.hpp"
#include "json.hpp"

namespace eiha {

using ExperienceId = std::uint32_t;

/// A temporally extended window of discretized sensorimotor samples plus the
/// action being executed when it was collected and the reward it earned.
struct Experience {
  ExperienceId id = 0;
  int channels = 0;
  int window = 0;
  std::vector<std::uint8_t> samples;  // channel-major: samples[c * window + t]
  ActionId action = ActionId::no_op;
  double reward = 0.0;
  std::uint32_t visit_count = 1;
  std::optional<ExperienceId> prev_id;
  std::optional<ExperienceId> next_id;
  std::int64_t created_tick = 0;
  // For each different action that has followed this experience, the
  // experience at which it most recently began.
  std::array<std::optional<ExperienceId>, kActionCount> followers{};

  Experience() = default;
  Experience(int channel_count, int window_length)
      : channels(channel_count),
        window(window_length),
        samples(static_cast<std::size_t>(channel_count) * window_length, 0) {}

  std::span<const std::uint8_t> channel(int c) const {
    return {samples.data() + static_cast<std::size_t>(c) * window,
            static_cast<std::size_t>(window)};
  }
  std::span<std::uint8_t> channel(int c) {
    return {samples.data() + static_cast<std::size_t>(c) * window,
            static_cast<std::size_t>(window)};
  }

  bool operator==(const Experience&) const = default;
};

/// Sum over channels of the per-channel information distance. This is the
/// reference computation; ExperienceSpace::nearest must agree with it bit for
/// bit. Throws std::invalid_argument when the shapes differ.
double experience_distance(const Experience& a, const Experience& b);

struct Recall {
  ExperienceId id;
  double distance;
};

struct InsertOutcome {
  enum class Kind { inserted, merged } kind;
  ExperienceId id;
};

/// The growing metric space of experiences.
///
/// Recall is an exhaustive scan. Each channel window is interned by its
/// canonical partition so that repeated channel pairs are evaluated once;
/// the scan abandons a candidate as soon as its running sum exceeds the best
/// distance so far, which leaves the winner and its distance unchanged.
class ExperienceSpace {
 public:
  ExperienceSpace(int channels, int window, double merge_threshold, double reward_update_rate);

  int channels() const noexcept { return channels_; }
  int window() const noexcept { return window_; }
  double merge_threshold() const noexcept { return merge_threshold_; }
  double reward_update_rate() const noexcept { return update_rate_; }

  std::size_t size() const noexcept { return experiences_.size(); }
  bool empty() const noexcept { return experiences_.empty(); }
  const Experience& at(ExperienceId id) const;
  const std::vector<Experience>& experiences() const noexcept { return experiences_; }

  /// Minimal-distance experience; ties go to the most recently created.
  std::optional<Recall> nearest(const Experience& probe) const;

  /// Like nearest() but only among experiences that already have a temporal
  /// successor, i.e. whose outcome is known.
  std::optional<Recall> nearest_with_successor(const Experience& probe) const;

  /// Merges into the nearest experience when it is closer than the merge
  /// threshold and carries the same action (reward revised by exponential
  /// moving average, visit count incremented). Otherwise appends the
  /// candidate. Either way the experience touched last is linked to the
  /// result, so next links follow the most recent continuation.
  InsertOutcome insert_or_merge(Experience candidate);

  /// Sets an experience's reward to the mean of the instantaneous rewards
  /// observed over its horizon. An empty sequence leaves it unchanged.
  double apply_future_reward(ExperienceId id, std::span<const double> future_rewards);

  /// Blends `reward` into the stored value with the space's update rate.
  double revise_reward(ExperienceId id, double reward);

  nlohmann::json snapshot() const;
  static ExperienceSpace from_snapshot(const nlohmann::json& doc);

 private:
  void check_shape(const Experience& e) const;
  std::vector<std::uint32_t> signature_of(const Experience& e) const;
  double pair_distance(std::uint32_t a, std::uint32_t b) const;
  std::optional<Recall> scan(const std::vector<std::uint32_t>& probe_signature,
                             bool require_successor) const;

  int channels_;
  int window_;
  double merge_threshold_;
  double update_rate_;
  std::vector<Experience> experiences_;
  std::vector<std::uint32_t> signatures_;  // channels_ partition ids per experience
  std::optional<ExperienceId> last_inserted_;  // last experience inserted or merged into
  void link_from_last(ExperienceId to, ActionId action);

  // Partition interning and the pairwise distance memo, shared by recalls.
  // Private helpers below expect the memo mutex to be held.
  // The mutex keeps concurrent read-only recalls safe.
  struct Memo {
    std::mutex mutex;
    std::unordered_map<std::string, std::uint32_t> partition_ids;
    std::vector<std::vector<std::uint8_t>> partitions;
    std::unordered_map<std::uint64_t, double> pairs;
  };
  std::unique_ptr<Memo> memo_;
};

}  // namespace eiha
