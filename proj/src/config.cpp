#include "eiha/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>

namespace eiha {
namespace {

using Json = nlohmann::json;

struct Field {
  std::string key;
  std::function<Json(const EihaConfig&)> get;
  std::function<void(EihaConfig&, const Json&)> set;
};

double parse_real(const std::string& key, const std::string& text) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
}

template <typename Int>
Int parse_integer(const std::string& key, const std::string& text) {
  Int v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ConfigError(key, "expected an integer, got '" + text + "'");
  return v;
}

Field real_field(std::string key, double EihaConfig::*member) {
  return Field{
      key,
      [member](const EihaConfig& c) -> Json {
        double v = c.*member;
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        return v;
      },
      [member, key](EihaConfig& c, const Json& j) {
        if (j.is_number()) {
          c.*member = j.get<double>();
        } else if (j.is_string()) {
          c.*member = parse_real(key, j.get<std::string>());
        } else {
          throw ConfigError(key, "expected a number");
        }
      }};
}

Field int_field(std::string key, int EihaConfig::*member) {
  return Field{key, [member](const EihaConfig& c) -> Json { return c.*member; },
               [member, key](EihaConfig& c, const Json& j) {
                 if (j.is_number_integer()) {
                   c.*member = j.get<int>();
                 } else if (j.is_string()) {
                   c.*member = parse_integer<int>(key, j.get<std::string>());
                 } else {
                   throw ConfigError(key, "expected an integer");
                 }
               }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(int_field("resolution", &EihaConfig::resolution));
    f.push_back(real_field("experience_length", &EihaConfig::experience_length));
    f.push_back(real_field("mem_length", &EihaConfig::mem_length));
    f.push_back(real_field("min_time", &EihaConfig::min_time));
    f.push_back(real_field("max_time", &EihaConfig::max_time));
    f.push_back(int_field("bins", &EihaConfig::bins));
    f.push_back(real_field("softmax_temperature", &EihaConfig::softmax_temperature));
    f.push_back(real_field("exploration_epsilon", &EihaConfig::exploration_epsilon));
    f.push_back(real_field("merge_threshold", &EihaConfig::merge_threshold));
    f.push_back(real_field("reward_update_rate", &EihaConfig::reward_update_rate));
    f.push_back(real_field("reward_horizon", &EihaConfig::reward_horizon));
    f.push_back(real_field("reward_floor", &EihaConfig::reward_floor));
    f.push_back(int_field("successor_depth", &EihaConfig::successor_depth));
    f.push_back(real_field("successor_discount", &EihaConfig::successor_discount));
    f.push_back(real_field("novelty_factor", &EihaConfig::novelty_factor));
    f.push_back(real_field("max_trial_seconds", &EihaConfig::max_trial_seconds));
    f.push_back(Field{
        "rng_seed", [](const EihaConfig& c) -> Json { return c.rng_seed; },
        [](EihaConfig& c, const Json& j) {
          if (j.is_number_unsigned()) {
            c.rng_seed = j.get<std::uint64_t>();
          } else if (j.is_string()) {
            c.rng_seed = parse_integer<std::uint64_t>("rng_seed", j.get<std::string>());
          } else {
            throw ConfigError("rng_seed", "expected a non-negative integer");
          }
        }});
    f.push_back(real_field("occlusion_probability", &EihaConfig::occlusion_probability));
    f.push_back(real_field("image_noise", &EihaConfig::image_noise));
    f.push_back(real_field("partner_latency", &EihaConfig::partner_latency));
    f.push_back(real_field("partner_hide_min", &EihaConfig::partner_hide_min));
    f.push_back(real_field("partner_hide_max", &EihaConfig::partner_hide_max));
    f.push_back(int_field("partner_beats_min", &EihaConfig::partner_beats_min));
    f.push_back(int_field("partner_beats_max", &EihaConfig::partner_beats_max));
    f.push_back(real_field("partner_beat_interval", &EihaConfig::partner_beat_interval));
    f.push_back(real_field("partner_seed_period", &EihaConfig::partner_seed_period));
    f.push_back(real_field("partner_phase_timeout", &EihaConfig::partner_phase_timeout));
    return f;
  }();
  return table;
}

const Field& find_field(const std::string& key) {
  for (const auto& f : fields())
    if (f.key == key) return f;
  throw ConfigError(key, "unknown configuration key");
}

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

int EihaConfig::ticks(double seconds) const noexcept {
  return static_cast<int>(std::lround(seconds * resolution));
}

std::int64_t EihaConfig::max_ticks() const noexcept {
  return static_cast<std::int64_t>(std::llround(max_trial_seconds * resolution));
}

void EihaConfig::validate() const {
  require(resolution > 0, "resolution", "must be a positive integer");
  require(finite(experience_length) && experience_length > 0, "experience_length",
          "must be positive");
  require(window_ticks() >= 2, "experience_length",
          "experience_length x resolution must give at least two samples");
  require(finite(mem_length) && mem_length >= 0, "mem_length", "must be non-negative");
  require(finite(min_time) && min_time >= 0, "min_time", "must be non-negative");
  require(finite(max_time), "max_time", "must be finite");
  require(min_time < max_time, "min_time", "min_time must be smaller than max_time");
  require(bins >= 2, "bins", "must be at least 2");
  require(finite(softmax_temperature) && softmax_temperature > 0, "softmax_temperature",
          "must be positive");
  require(exploration_epsilon >= 0 && exploration_epsilon <= 1, "exploration_epsilon",
          "must lie in [0,1]");
  require(finite(merge_threshold) && merge_threshold >= 0, "merge_threshold",
          "must be non-negative");
  require(reward_update_rate > 0 && reward_update_rate <= 1, "reward_update_rate",
          "must lie in (0,1]");
  require(finite(reward_horizon) && reward_horizon >= 0, "reward_horizon",
          "must be non-negative");
  require(finite(reward_floor), "reward_floor", "must be finite");
  require(successor_depth >= 1, "successor_depth", "must be at least 1");
  require(finite(successor_discount) && successor_discount >= 0 && successor_discount <= 1,
          "successor_discount", "must lie in [0, 1]");
  require(finite(novelty_factor) && novelty_factor > 0, "novelty_factor", "must be positive");
  require(finite(max_trial_seconds) && max_trial_seconds >= 0, "max_trial_seconds",
          "must be non-negative");
  require(occlusion_probability >= 0 && occlusion_probability <= 1, "occlusion_probability",
          "must lie in [0,1]");
  require(finite(image_noise) && image_noise >= 0 && image_noise < 0.5, "image_noise",
          "must lie in [0,0.5)");
  require(finite(partner_latency) && partner_latency >= 0, "partner_latency",
          "must be non-negative");
  require(partner_hide_min > min_time, "partner_hide_min",
          "partner hides must last longer than min_time");
  require(partner_hide_max < max_time, "partner_hide_max",
          "partner hides must end before max_time");
  require(partner_hide_min <= partner_hide_max, "partner_hide_min",
          "must not exceed partner_hide_max");
  require(partner_beats_min >= 1, "partner_beats_min", "must be at least 1");
  require(partner_beats_min <= partner_beats_max, "partner_beats_min",
          "must not exceed partner_beats_max");
  require(finite(partner_beat_interval) && ticks(partner_beat_interval) >= 1,
          "partner_beat_interval", "must span at least one tick");
  require(!std::isnan(partner_seed_period), "partner_seed_period", "must be a number");
  require(finite(partner_phase_timeout) && partner_phase_timeout > 0, "partner_phase_timeout",
          "must be positive");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

void set_config_field(EihaConfig& cfg, const std::string& key, const std::string& value) {
  find_field(key).set(cfg, Json(value));
}

EihaConfig config_from_json(const Json& object) {
  if (!object.is_object()) throw ConfigError("<document>", "expected a flat object");
  EihaConfig cfg;
  for (const auto& [key, value] : object.items()) {
    if (value.is_structured()) throw ConfigError(key, "nested values are not allowed");
    find_field(key).set(cfg, value);
  }
  return cfg;
}

Json config_to_json(const EihaConfig& cfg) {
  Json out = Json::object();
  for (const auto& f : fields()) out[f.key] = f.get(cfg);
  return out;
}

EihaConfig load_config(std::string_view document,
                       const std::map<std::string, std::string>& overrides) {
  EihaConfig cfg;
  bool blank = document.find_first_not_of(" \t\r\n") == std::string_view::npos;
  if (!blank) {
    Json parsed;
    try {
      parsed = Json::parse(document);
    } catch (const Json::parse_error& e) {
      throw ConfigError("<document>", std::string("parse failure: ") + e.what());
    }
    cfg = config_from_json(parsed);
  }
  for (const auto& [key, value] : overrides) set_config_field(cfg, key, value);
  cfg.validate();
  return cfg;
}

}  // namespace eiha
