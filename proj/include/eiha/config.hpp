#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace eiha {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Every run-time parameter of the learning system, the simulated sensors and
/// the scripted partner. Immutable once validated.
///
/// Times are in seconds unless noted. `mem_length == 0` turns the short-term
/// memory off: the two engagement channels stay in every frame but read 0 and
/// the reward collapses to visual attention.
struct EihaConfig {
  int resolution = 10;             // ticks per second
  double experience_length = 2.0;  // window of one experience
  double mem_length = 4.0;         // short-term memory window
  double min_time = 0.5;           // shortest face loss counted as hiding
  double max_time = 2.5;           // longest face loss counted as hiding
  int bins = 8;

  double softmax_temperature = 0.1;
  double exploration_epsilon = 0.1;
  double merge_threshold = 8.0;  // bits
  double reward_update_rate = 0.2;
  double reward_horizon = 1.0;
  double reward_floor = 0.0;  // reward assumed for actions with no recalled successor
  int successor_depth = 3;
  double successor_discount = 0.0;  // weight per later action when valuing a remembered sequence
  double novelty_factor = 2.0;  // recall farther than this many merge thresholds is "novel"

  double max_trial_seconds = 600.0;
  std::uint64_t rng_seed = 0;

  // Simulated perception.
  double occlusion_probability = 0.8;
  double image_noise = 0.05;

  // Scripted partner.
  double partner_latency = 0.3;
  double partner_hide_min = 0.8;
  double partner_hide_max = 2.0;
  int partner_beats_min = 2;
  int partner_beats_max = 5;
  double partner_beat_interval = 0.4;
  double partner_seed_period = 15.0;  // <= 0 disables seeding
  double partner_phase_timeout = 120.0;

  bool stm_enabled() const noexcept { return mem_length > 0.0; }
  int ticks(double seconds) const noexcept;
  int window_ticks() const noexcept { return ticks(experience_length); }
  int stm_capacity() const noexcept { return ticks(mem_length); }
  int horizon_ticks() const noexcept { return ticks(reward_horizon); }
  std::int64_t max_ticks() const noexcept;

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  bool operator==(const EihaConfig&) const = default;
};

/// Parses a flat JSON object (empty text means all defaults), applies
/// `overrides` (same keys, textual values) on top and validates.
EihaConfig load_config(std::string_view document,
                       const std::map<std::string, std::string>& overrides = {});

EihaConfig config_from_json(const nlohmann::json& object);
nlohmann::json config_to_json(const EihaConfig& cfg);

/// Sets one field from its textual form. Throws ConfigError for unknown keys
/// or unparsable values.
void set_config_field(EihaConfig& cfg, const std::string& key, const std::string& value);

/// Names of every recognised key, in serialization order.
const std::vector<std::string>& config_keys();

}  // namespace eiha
