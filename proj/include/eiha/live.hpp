#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eiha/core.hpp"
#include "eiha/trial.hpp"
#include "json.hpp"

namespace eiha {

inline constexpr std::string_view kProtocolVersion = "eiha/1";
inline constexpr std::string_view kLiveLogFormat = "eiha-live-log/1";

class ProtocolError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ControlKind : std::uint8_t { start, pause, reset };

struct ControlMessage {
  ControlKind kind = ControlKind::start;
  std::optional<Condition> condition;

  bool operator==(const ControlMessage&) const = default;
};

using ClientMessage = std::variant<PartnerEvent, ControlMessage>;

/// Parses one client document. Exactly one of "partner_event" or "control"
/// must be present, "version" must be "eiha/1" and "condition" is only
/// allowed with a control. Throws ProtocolError otherwise.
ClientMessage parse_client_message(std::string_view text);

/// One serialized document, newline terminated.
std::string encode_client_message(const ClientMessage& m);

/// What the live server broadcasts after every tick.
struct LiveStateMessage {
  std::int64_t tick = 0;
  ActionId robot_action = ActionId::no_op;
  bool action_started = false;
  bool action_finished = false;
  EngagementScores scores;
  double total = 0.0;
  std::uint32_t experience_count = 0;
  std::array<bool, 2> learned{};
  std::array<int, 2> turn_counts{};  // current consecutive alternations
  Condition condition = Condition::stm4;

  nlohmann::json to_json() const;
  static LiveStateMessage from_json(const nlohmann::json& j);
  bool operator==(const LiveStateMessage&) const = default;
};

std::string encode_error(std::string_view message);

/// Partner events applied at the start of a core tick.
struct LoggedEvent {
  std::int64_t tick = 0;
  PartnerEvent event = PartnerEvent::present;

  bool operator==(const LoggedEvent&) const = default;
};

/// Everything needed to re-run a live episode without the human.
struct LiveLog {
  EihaConfig config;  // resolved: condition's mem_length and the seed applied
  Condition condition = Condition::stm4;
  std::uint64_t seed = 0;
  std::int64_t ticks = 0;
  std::uint64_t log_hash = kHashSeed;
  std::vector<LoggedEvent> events;

  nlohmann::json to_json() const;
  static LiveLog from_json(const nlohmann::json& j);
};

/// A partner whose state comes only from recorded events, stepped exactly as
/// the live session steps its human.
class EventPartner {
 public:
  explicit EventPartner(std::vector<LoggedEvent> events) : events_(std::move(events)) {}

  PartnerState step(std::int64_t tick);

 private:
  std::vector<LoggedEvent> events_;
  std::size_t next_ = 0;
  PartnerState state_;
};

/// Re-runs a recorded episode and returns the core's log hash.
std::uint64_t replay_live_log(const LiveLog& log);

/// One live episode: owns the core, queues partner events as they arrive and
/// applies them at the start of the next tick. `enqueue` and `handle` may be
/// called from any thread; `step` belongs to the tick loop.
class LiveSession {
 public:
  LiveSession(EihaConfig base, Condition condition, std::uint64_t seed);

  /// Handles one client document and returns the replies to send (possibly
  /// none). Never throws on bad input; an error reply is returned instead.
  std::vector<std::string> handle(std::string_view line);

  void enqueue(PartnerEvent e);
  void control(const ControlMessage& m);

  bool running() const;
  void pause();

  /// Runs one tick if the session is running.
  std::optional<LiveStateMessage> step();

  /// The current episode; resets start a new one.
  LiveLog log() const;

  /// Called with the finished episode whenever a reset or a change of
  /// condition discards it. Runs under the session's lock.
  void on_episode_end(std::function<void(const LiveLog&)> hook);
  Condition condition() const;
  std::int64_t now() const;

 private:
  void reset_locked(Condition c);
  LiveLog log_locked() const;
  std::string status_locked() const;

  mutable std::mutex mu_;
  EihaConfig base_;
  Condition condition_;
  std::uint64_t seed_;
  std::unique_ptr<InteractionCore> core_;
  PartnerState partner_;
  std::deque<PartnerEvent> queue_;
  std::vector<LoggedEvent> events_;
  bool running_ = false;
  std::function<void(const LiveLog&)> episode_hook_;
};

}  // namespace eiha
