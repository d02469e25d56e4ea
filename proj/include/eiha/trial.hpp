#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eiha/config.hpp"
#include "eiha/core.hpp"
#include "eiha/partner.hpp"
#include "json.hpp"

namespace eiha {

/// The three memory conditions compared in the ablation experiment.
enum class Condition : std::uint8_t { stm4, stm1, none };

inline constexpr std::array<Condition, 3> kConditions = {Condition::stm4, Condition::stm1,
                                                         Condition::none};

std::string_view condition_name(Condition c) noexcept;
/// Throws std::invalid_argument.
Condition parse_condition(std::string_view name);
double mem_length_for(Condition c) noexcept;

struct TrialConfig {
  Condition condition = Condition::stm4;
  PartnerVariant partner = PartnerVariant::dual_teacher;
  EihaConfig base;  // mem_length and rng_seed are overridden per trial
  int trial_index = 0;
  std::uint64_t seed = 0;

  /// `base` with the condition's memory length and the trial's seed.
  EihaConfig resolved() const;
};

struct BehaviorOutcome {
  bool learned = false;
  std::optional<double> time_to_learn;  // seconds from first characteristic action
  std::optional<std::int64_t> first_characteristic_tick;
  std::optional<std::int64_t> learned_tick;

  bool operator==(const BehaviorOutcome&) const = default;
};

/// Outcome of the switching probe: after the teacher quits peek-a-boo, did
/// the robot complete a drumming turn begun after the quit within the limit?
struct SwitchOutcome {
  std::optional<std::int64_t> quit_tick;
  std::optional<std::int64_t> drum_turn_tick;  // completion of that turn
  bool success = false;

  bool operator==(const SwitchOutcome&) const = default;
};

/// Per-tick score traces, kept as parallel columns.
struct Trace {
  std::vector<std::uint8_t> action;
  std::vector<std::uint8_t> attention;
  std::vector<double> hide;
  std::vector<double> drum;
  std::vector<double> total;

  bool operator==(const Trace&) const = default;
};

struct TrialResult {
  TrialConfig config;
  std::array<BehaviorOutcome, 2> behaviors{};  // indexed by Behavior
  std::int64_t ticks = 0;
  std::uint64_t log_hash = kHashSeed;
  std::size_t experience_count = 0;
  std::vector<LedgerEvent> events;
  SwitchOutcome switching;
  Trace trace;

  const BehaviorOutcome& outcome(Behavior b) const { return behaviors[static_cast<int>(b)]; }
};

/// Window after the teacher quits peek-a-boo in which a drumming turn counts
/// as a switch.
inline constexpr double kSwitchWindowSeconds = 120.0;

/// Runs one trial to completion: until both behaviors are learned or the
/// time limit is reached. A switching teacher's trial instead continues
/// until the switch succeeds or its window closes (at most twice the limit).
TrialResult run_trial(const TrialConfig& cfg);

struct BatchSpec {
  std::vector<Condition> conditions;
  int trials_per_condition = 5;
  std::uint64_t seed = 0;
  PartnerVariant partner = PartnerVariant::dual_teacher;
  EihaConfig base;
};

/// Seed of trial `index` under `condition`; independent streams per trial.
std::uint64_t trial_seed(std::uint64_t batch_seed, Condition condition, int index);

std::vector<TrialResult> run_batch(const BatchSpec& spec);

// Results documents, schema "eiha-results/1".
inline constexpr std::string_view kResultsFormat = "eiha-results/1";

nlohmann::json trial_to_json(const TrialResult& r, bool with_trace = true);
TrialResult trial_from_json(const nlohmann::json& j);

nlohmann::json results_document(const BatchSpec& spec, const std::vector<TrialResult>& results,
                                bool with_trace = true);
/// Throws std::runtime_error for documents of another format.
std::vector<TrialResult> results_from_document(const nlohmann::json& doc);

}  // namespace eiha
