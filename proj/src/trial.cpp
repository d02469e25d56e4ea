#include "eiha/trial.hpp"

#include <cstdio>
#include <stdexcept>

namespace eiha {
namespace {

constexpr std::array<std::string_view, 3> kConditionNames = {"stm4", "stm1", "none"};
constexpr std::array<std::string_view, 4> kEventKinds = {"robot_turn", "human_turn", "reset",
                                                         "learned"};

template <class T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> optional_from(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

Behavior parse_behavior(std::string_view s) {
  if (s == "peekaboo") return Behavior::peekaboo;
  if (s == "drumming") return Behavior::drumming;
  throw std::invalid_argument("unknown behavior '" + std::string(s) + "'");
}

LedgerEvent::Kind parse_kind(std::string_view s) {
  for (std::size_t i = 0; i < kEventKinds.size(); ++i)
    if (kEventKinds[i] == s) return static_cast<LedgerEvent::Kind>(i);
  throw std::invalid_argument("unknown ledger event '" + std::string(s) + "'");
}

void append(Trace& trace, const TickRecord& r) {
  trace.action.push_back(static_cast<std::uint8_t>(index_of(r.action)));
  trace.attention.push_back(static_cast<std::uint8_t>(r.scores.visual_attention));
  trace.hide.push_back(r.scores.hide_score);
  trace.drum.push_back(r.scores.drum_score);
  trace.total.push_back(r.reward);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string_view condition_name(Condition c) noexcept { return kConditionNames[static_cast<int>(c)]; }

Condition parse_condition(std::string_view name) {
  for (std::size_t i = 0; i < kConditionNames.size(); ++i)
    if (kConditionNames[i] == name) return static_cast<Condition>(i);
  throw std::invalid_argument("unknown condition '" + std::string(name) + "'");
}

double mem_length_for(Condition c) noexcept {
  switch (c) {
    case Condition::stm4:
      return 4.0;
    case Condition::stm1:
      return 1.0;
    case Condition::none:
      return 0.0;
  }
  return 0.0;
}

EihaConfig TrialConfig::resolved() const {
  EihaConfig c = base;
  c.mem_length = mem_length_for(condition);
  c.rng_seed = seed;
  c.validate();
  return c;
}

TrialResult run_trial(const TrialConfig& tc) {
  const EihaConfig cfg = tc.resolved();
  TrialResult result;
  result.config = tc;

  const std::int64_t limit = cfg.max_ticks();
  const bool switching = tc.partner == PartnerVariant::switching_teacher;
  const std::int64_t hard_limit = switching ? 2 * limit : limit;
  const std::int64_t switch_window = cfg.ticks(kSwitchWindowSeconds);

  InteractionCore core(cfg, tc.seed);
  ScriptedPartner partner(make_script(tc.partner, cfg, Rng::mix(tc.seed, 3)));
  std::size_t drum_turns_seen = 0;

  while (core.now() < hard_limit) {
    const PartnerState state = partner.step(core.last_observation(), core.now());
    append(result.trace, core.tick(state));

    if (!switching) {
      if (core.ledger().all_learned()) break;
      continue;
    }
    const auto quit = partner.quit_peekaboo_tick();
    if (!quit) {
      if (core.now() >= limit && !core.ledger().all_learned()) break;
      continue;
    }
    result.switching.quit_tick = quit;
    const auto& turns = core.drum_turns();
    for (; drum_turns_seen < turns.size(); ++drum_turns_seen) {
      const auto [start, done] = turns[drum_turns_seen];
      if (start >= *quit && done - *quit <= switch_window) {
        result.switching.drum_turn_tick = done;
        result.switching.success = true;
      }
    }
    if (result.switching.success || core.now() - *quit > switch_window) break;
  }

  result.ticks = core.now();
  result.log_hash = core.log_hash();
  result.experience_count = core.space().size();
  result.events = core.ledger().events();
  for (Behavior b : kBehaviors) {
    const auto& p = core.ledger().progress(b);
    auto& o = result.behaviors[static_cast<int>(b)];
    o.learned = p.learned;
    o.first_characteristic_tick = p.first_characteristic_tick;
    o.learned_tick = p.learned_tick;
    if (p.learned && p.learned_tick && p.first_characteristic_tick)
      o.time_to_learn =
          static_cast<double>(*p.learned_tick - *p.first_characteristic_tick) / cfg.resolution;
  }
  return result;
}

std::uint64_t trial_seed(std::uint64_t batch_seed, Condition condition, int index) {
  return Rng::mix(Rng::mix(batch_seed, static_cast<std::uint64_t>(condition)),
                  static_cast<std::uint64_t>(index));
}

std::vector<TrialResult> run_batch(const BatchSpec& spec) {
  std::vector<TrialResult> out;
  out.reserve(spec.conditions.size() * static_cast<std::size_t>(spec.trials_per_condition));
  for (Condition c : spec.conditions) {
    for (int i = 0; i < spec.trials_per_condition; ++i) {
      TrialConfig tc;
      tc.condition = c;
      tc.partner = spec.partner;
      tc.base = spec.base;
      tc.trial_index = i;
      tc.seed = trial_seed(spec.seed, c, i);
      out.push_back(run_trial(tc));
    }
  }
  return out;
}

nlohmann::json trial_to_json(const TrialResult& r, bool with_trace) {
  using nlohmann::json;
  json j;
  j["condition"] = condition_name(r.config.condition);
  j["partner"] = variant_name(r.config.partner);
  j["trial"] = r.config.trial_index;
  j["seed"] = r.config.seed;
  j["config"] = config_to_json(r.config.base);
  j["ticks"] = r.ticks;
  j["log_hash"] = hex64(r.log_hash);
  j["experience_count"] = r.experience_count;
  for (Behavior b : kBehaviors) {
    const auto& o = r.outcome(b);
    const std::string name(behavior_name(b));
    j["learned"][name] = o.learned;
    j["time_to_learn"][name] = optional_json(o.time_to_learn);
    j["first_characteristic_tick"][name] = optional_json(o.first_characteristic_tick);
    j["learned_tick"][name] = optional_json(o.learned_tick);
  }
  json events = json::array();
  for (const auto& e : r.events)
    events.push_back({e.tick, behavior_name(e.behavior), kEventKinds[static_cast<int>(e.kind)],
                      e.count});
  j["events"] = std::move(events);
  if (r.config.partner == PartnerVariant::switching_teacher)
    j["switching"] = {{"quit_tick", optional_json(r.switching.quit_tick)},
                      {"drum_turn_tick", optional_json(r.switching.drum_turn_tick)},
                      {"success", r.switching.success}};
  if (with_trace)
    j["trace"] = {{"action", r.trace.action}, {"attention", r.trace.attention},
                  {"hide", r.trace.hide},     {"drum", r.trace.drum},
                  {"total", r.trace.total}};
  return j;
}

TrialResult trial_from_json(const nlohmann::json& j) {
  TrialResult r;
  r.config.condition = parse_condition(j.at("condition").get<std::string>());
  r.config.partner = parse_variant(j.at("partner").get<std::string>());
  r.config.trial_index = j.at("trial").get<int>();
  r.config.seed = j.at("seed").get<std::uint64_t>();
  r.config.base = config_from_json(j.at("config"));
  r.ticks = j.at("ticks").get<std::int64_t>();
  r.log_hash = std::stoull(j.at("log_hash").get<std::string>(), nullptr, 16);
  r.experience_count = j.value("experience_count", std::size_t{0});
  for (Behavior b : kBehaviors) {
    const std::string name(behavior_name(b));
    auto& o = r.behaviors[static_cast<int>(b)];
    o.learned = j.at("learned").at(name).get<bool>();
    o.time_to_learn = optional_from<double>(j.at("time_to_learn").at(name));
    o.first_characteristic_tick =
        optional_from<std::int64_t>(j.at("first_characteristic_tick").at(name));
    o.learned_tick = optional_from<std::int64_t>(j.at("learned_tick").at(name));
  }
  for (const auto& e : j.at("events"))
    r.events.push_back({e.at(0).get<std::int64_t>(), parse_behavior(e.at(1).get<std::string>()),
                        parse_kind(e.at(2).get<std::string>()), e.at(3).get<int>()});
  if (j.contains("switching")) {
    const auto& s = j["switching"];
    r.switching.quit_tick = optional_from<std::int64_t>(s.at("quit_tick"));
    r.switching.drum_turn_tick = optional_from<std::int64_t>(s.at("drum_turn_tick"));
    r.switching.success = s.at("success").get<bool>();
  }
  if (j.contains("trace")) {
    const auto& t = j["trace"];
    r.trace.action = t.at("action").get<std::vector<std::uint8_t>>();
    r.trace.attention = t.at("attention").get<std::vector<std::uint8_t>>();
    r.trace.hide = t.at("hide").get<std::vector<double>>();
    r.trace.drum = t.at("drum").get<std::vector<double>>();
    r.trace.total = t.at("total").get<std::vector<double>>();
  }
  return r;
}

nlohmann::json results_document(const BatchSpec& spec, const std::vector<TrialResult>& results,
                                bool with_trace) {
  using nlohmann::json;
  json doc;
  doc["format"] = kResultsFormat;
  doc["config"] = config_to_json(spec.base);
  doc["partner"] = variant_name(spec.partner);
  doc["seed"] = spec.seed;
  doc["trials_per_condition"] = spec.trials_per_condition;
  json conditions = json::array();
  for (Condition c : spec.conditions) conditions.push_back(condition_name(c));
  doc["conditions"] = std::move(conditions);
  json trials = json::array();
  for (const auto& r : results) trials.push_back(trial_to_json(r, with_trace));
  doc["trials"] = std::move(trials);
  // Plot-ready aggregates: success proportions and times to learn.
  json summary = json::object();
  for (Condition c : spec.conditions) {
    json per = json::object();
    for (Behavior b : kBehaviors) {
      int n = 0, learned = 0;
      std::vector<double> times;
      for (const auto& r : results) {
        if (r.config.condition != c) continue;
        ++n;
        const auto& o = r.outcome(b);
        learned += o.learned;
        if (o.time_to_learn) times.push_back(*o.time_to_learn);
      }
      per[std::string(behavior_name(b))] = {
          {"trials", n},
          {"learned", learned},
          {"proportion", n ? static_cast<double>(learned) / n : 0.0},
          {"time_to_learn", times}};
    }
    summary[std::string(condition_name(c))] = std::move(per);
  }
  doc["summary"] = std::move(summary);
  return doc;
}

std::vector<TrialResult> results_from_document(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("format", std::string{}) != kResultsFormat)
    throw std::runtime_error("not an " + std::string(kResultsFormat) + " document");
  std::vector<TrialResult> out;
  for (const auto& t : doc.at("trials")) out.push_back(trial_from_json(t));
  return out;
}

}  // namespace eiha
