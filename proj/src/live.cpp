#include "eiha/live.hpp"

#include <cstdio>

namespace eiha {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 3> kControlNames = {"start", "pause", "reset"};

ControlKind parse_control(std::string_view s) {
  for (std::size_t i = 0; i < kControlNames.size(); ++i)
    if (kControlNames[i] == s) return static_cast<ControlKind>(i);
  throw ProtocolError("unknown control '" + std::string(s) + "'");
}

const std::string& string_field(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw ProtocolError(std::string(key) + " must be a string");
  return v.get_ref<const std::string&>();
}

std::string line(const json& j) { return j.dump() + "\n"; }

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json behavior_pair(bool a, bool b) { return {{"peekaboo", a}, {"drumming", b}}; }

}  // namespace

ClientMessage parse_client_message(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed document: ") + e.what());
  }
  if (!j.is_object()) throw ProtocolError("message must be an object");
  for (const auto& [key, _] : j.items())
    if (key != "version" && key != "partner_event" && key != "control" && key != "condition")
      throw ProtocolError("unknown field '" + key + "'");
  if (!j.contains("version") || string_field(j, "version") != kProtocolVersion)
    throw ProtocolError("version must be " + std::string(kProtocolVersion));

  const bool event = j.contains("partner_event");
  const bool control = j.contains("control");
  if (event == control) throw ProtocolError("need exactly one of partner_event or control");
  if (event) {
    if (j.contains("condition")) throw ProtocolError("condition is only allowed with control");
    try {
      return parse_event(string_field(j, "partner_event"));
    } catch (const std::invalid_argument& e) {
      throw ProtocolError(e.what());
    }
  }
  ControlMessage m;
  m.kind = parse_control(string_field(j, "control"));
  if (j.contains("condition")) {
    try {
      m.condition = parse_condition(string_field(j, "condition"));
    } catch (const std::invalid_argument& e) {
      throw ProtocolError(e.what());
    }
  }
  return m;
}

std::string encode_client_message(const ClientMessage& m) {
  json j{{"version", kProtocolVersion}};
  if (const auto* e = std::get_if<PartnerEvent>(&m)) {
    j["partner_event"] = event_name(*e);
  } else {
    const auto& c = std::get<ControlMessage>(m);
    j["control"] = kControlNames[static_cast<int>(c.kind)];
    if (c.condition) j["condition"] = condition_name(*c.condition);
  }
  return line(j);
}

json LiveStateMessage::to_json() const {
  return {{"version", kProtocolVersion},
          {"type", "state"},
          {"tick", tick},
          {"robot_action", action_name(robot_action)},
          {"action_started", action_started},
          {"action_finished", action_finished},
          {"scores",
           {{"attention", scores.visual_attention},
            {"hide", scores.hide_score},
            {"drum", scores.drum_score},
            {"total", total}}},
          {"experience_count", experience_count},
          {"learned", behavior_pair(learned[0], learned[1])},
          {"turn_counts", {{"peekaboo", turn_counts[0]}, {"drumming", turn_counts[1]}}},
          {"condition", condition_name(condition)}};
}

LiveStateMessage LiveStateMessage::from_json(const json& j) {
  if (j.at("version") != kProtocolVersion || j.at("type") != "state")
    throw ProtocolError("not an eiha/1 state message");
  LiveStateMessage m;
  m.tick = j.at("tick").get<std::int64_t>();
  const auto action = parse_action(j.at("robot_action").get<std::string>());
  if (!action) throw ProtocolError("unknown robot_action");
  m.robot_action = *action;
  m.action_started = j.at("action_started").get<bool>();
  m.action_finished = j.at("action_finished").get<bool>();
  const auto& s = j.at("scores");
  m.scores.visual_attention = s.at("attention").get<int>();
  m.scores.hide_score = s.at("hide").get<double>();
  m.scores.drum_score = s.at("drum").get<double>();
  m.total = s.at("total").get<double>();
  m.experience_count = j.at("experience_count").get<std::uint32_t>();
  for (Behavior b : kBehaviors) {
    const std::string name(behavior_name(b));
    m.learned[static_cast<int>(b)] = j.at("learned").at(name).get<bool>();
    m.turn_counts[static_cast<int>(b)] = j.at("turn_counts").at(name).get<int>();
  }
  m.condition = parse_condition(j.at("condition").get<std::string>());
  return m;
}

std::string encode_error(std::string_view message) {
  return line({{"version", kProtocolVersion}, {"type", "error"}, {"message", message}});
}

json LiveLog::to_json() const {
  json ev = json::array();
  for (const auto& e : events) ev.push_back({e.tick, event_name(e.event)});
  return {{"format", kLiveLogFormat},
          {"condition", condition_name(condition)},
          {"seed", seed},
          {"config", config_to_json(config)},
          {"ticks", ticks},
          {"log_hash", hex64(log_hash)},
          {"events", std::move(ev)}};
}

LiveLog LiveLog::from_json(const json& j) {
  if (!j.is_object() || j.value("format", std::string{}) != kLiveLogFormat)
    throw std::runtime_error("not an " + std::string(kLiveLogFormat) + " document");
  LiveLog log;
  log.condition = parse_condition(j.at("condition").get<std::string>());
  log.seed = j.at("seed").get<std::uint64_t>();
  log.config = config_from_json(j.at("config"));
  log.ticks = j.at("ticks").get<std::int64_t>();
  log.log_hash = std::stoull(j.at("log_hash").get<std::string>(), nullptr, 16);
  std::int64_t last = 0;
  for (const auto& e : j.at("events")) {
    LoggedEvent le{e.at(0).get<std::int64_t>(), parse_event(e.at(1).get<std::string>())};
    if (le.tick < last || le.tick >= log.ticks)
      throw std::runtime_error("live log events out of order or past the last tick");
    last = le.tick;
    log.events.push_back(le);
  }
  return log;
}

PartnerState EventPartner::step(std::int64_t tick) {
  state_ = begin_tick(state_);
  for (; next_ < events_.size() && events_[next_].tick <= tick; ++next_)
    state_ = apply_external_event(state_, events_[next_].event);
  return state_;
}

std::uint64_t replay_live_log(const LiveLog& log) {
  InteractionCore core(log.config, log.seed);
  EventPartner partner(log.events);
  while (core.now() < log.ticks) core.tick(partner.step(core.now()));
  return core.log_hash();
}

LiveSession::LiveSession(EihaConfig base, Condition condition, std::uint64_t seed)
    : base_(std::move(base)), condition_(condition), seed_(seed) {
  reset_locked(condition);
}

void LiveSession::reset_locked(Condition c) {
  if (core_ && episode_hook_) episode_hook_(log_locked());
  condition_ = c;
  EihaConfig cfg = base_;
  cfg.mem_length = mem_length_for(c);
  cfg.rng_seed = seed_;
  cfg.validate();
  core_ = std::make_unique<InteractionCore>(cfg, seed_);
  partner_ = PartnerState{};
  queue_.clear();
  events_.clear();
}

std::string LiveSession::status_locked() const {
  return line({{"version", kProtocolVersion},
               {"type", "status"},
               {"running", running_},
               {"tick", core_->now()},
               {"condition", condition_name(condition_)}});
}

std::vector<std::string> LiveSession::handle(std::string_view text) {
  ClientMessage m;
  try {
    m = parse_client_message(text);
  } catch (const std::exception& e) {
    return {encode_error(e.what())};
  }
  if (const auto* e = std::get_if<PartnerEvent>(&m)) {
    enqueue(*e);
    return {};
  }
  control(std::get<ControlMessage>(m));
  std::lock_guard lock(mu_);
  return {status_locked()};
}

void LiveSession::enqueue(PartnerEvent e) {
  std::lock_guard lock(mu_);
  queue_.push_back(e);
}

void LiveSession::control(const ControlMessage& m) {
  std::lock_guard lock(mu_);
  switch (m.kind) {
    case ControlKind::start:
      if (m.condition && *m.condition != condition_) reset_locked(*m.condition);
      running_ = true;
      break;
    case ControlKind::pause:
      running_ = false;
      break;
    case ControlKind::reset:
      reset_locked(m.condition.value_or(condition_));
      running_ = false;
      break;
  }
}

bool LiveSession::running() const {
  std::lock_guard lock(mu_);
  return running_;
}

void LiveSession::pause() {
  std::lock_guard lock(mu_);
  running_ = false;
}

std::optional<LiveStateMessage> LiveSession::step() {
  std::lock_guard lock(mu_);
  if (!running_) return std::nullopt;
  const std::int64_t t = core_->now();
  partner_ = begin_tick(partner_);
  for (PartnerEvent e : queue_) {
    partner_ = apply_external_event(partner_, e);
    events_.push_back({t, e});
  }
  queue_.clear();
  const TickRecord& r = core_->tick(partner_);

  LiveStateMessage m;
  m.tick = r.tick;
  m.robot_action = r.action;
  m.action_started = r.action_started;
  m.action_finished = r.action_finished;
  m.scores = r.scores;
  m.total = r.reward;
  m.experience_count = r.experience_count;
  for (Behavior b : kBehaviors) {
    const auto& p = core_->ledger().progress(b);
    m.learned[static_cast<int>(b)] = p.learned;
    m.turn_counts[static_cast<int>(b)] = p.count;
  }
  m.condition = condition_;
  return m;
}

LiveLog LiveSession::log() const {
  std::lock_guard lock(mu_);
  return log_locked();
}

void LiveSession::on_episode_end(std::function<void(const LiveLog&)> hook) {
  std::lock_guard lock(mu_);
  episode_hook_ = std::move(hook);
}

LiveLog LiveSession::log_locked() const {
  LiveLog log;
  log.config = core_->config();
  log.condition = condition_;
  log.seed = seed_;
  log.ticks = core_->now();
  log.log_hash = core_->log_hash();
  log.events = events_;
  return log;
}

Condition LiveSession::condition() const {
  std::lock_guard lock(mu_);
  return condition_;
}

std::int64_t LiveSession::now() const {
  std::lock_guard lock(mu_);
  return core_->now();
}

}  // namespace eiha
