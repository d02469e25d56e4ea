#include "eiha/ledger.hpp"

namespace eiha {

void TurnRecognizer::on_action_start(ActionId a) noexcept {
  switch (a) {
    case ActionId::start_drum:
      drum_active_ = true;
      break;
    case ActionId::drum_hit:
      // A hit outside a turn is not drumming a turn.
      drum_active_ = state_ == State::drum_started || state_ == State::hitting;
      break;
    case ActionId::no_op:
      break;
    case ActionId::right_arm_down:
    case ActionId::home:
      drum_active_ = drum_active_ && state_ == State::hitting;
      break;
    default:
      drum_active_ = false;
  }
}

std::optional<Behavior> TurnRecognizer::on_action_complete(ActionId a) noexcept {
  switch (a) {
    case ActionId::no_op:
      return std::nullopt;
    case ActionId::hide_face:
      state_ = State::hid;
      drum_active_ = false;
      return std::nullopt;
    case ActionId::start_drum:
      state_ = State::drum_started;
      return std::nullopt;
    case ActionId::drum_hit:
      state_ = (state_ == State::drum_started || state_ == State::hitting) ? State::hitting
                                                                           : State::none;
      return std::nullopt;
    case ActionId::home: {
      const State was = state_;
      state_ = State::none;
      drum_active_ = false;
      if (was == State::hid) return Behavior::peekaboo;
      if (was == State::hitting) return Behavior::drumming;
      return std::nullopt;
    }
    case ActionId::right_arm_down: {
      const State was = state_;
      state_ = State::none;
      drum_active_ = false;
      if (was == State::hitting) return Behavior::drumming;
      return std::nullopt;
    }
    default:
      state_ = State::none;
      drum_active_ = false;
      return std::nullopt;
  }
}

std::optional<Behavior> behavior_turn_of(std::span<const ActionId> actions) {
  std::vector<ActionId> moves;
  for (auto a : actions)
    if (a != ActionId::no_op) moves.push_back(a);
  if (moves.size() == 2 && moves[0] == ActionId::hide_face && moves[1] == ActionId::home)
    return Behavior::peekaboo;
  if (moves.size() >= 3 && moves.front() == ActionId::start_drum &&
      (moves.back() == ActionId::right_arm_down || moves.back() == ActionId::home)) {
    for (std::size_t i = 1; i + 1 < moves.size(); ++i)
      if (moves[i] != ActionId::drum_hit) return std::nullopt;
    return Behavior::drumming;
  }
  return std::nullopt;
}

TurnLedger::TurnLedger(int hide_min_exclusive, int hide_max_exclusive, int drum_gap)
    : hide_min_(hide_min_exclusive), hide_max_(hide_max_exclusive), drum_gap_(drum_gap) {}

void TurnLedger::reset(Behavior b, std::int64_t tick) {
  auto& p = progress_[static_cast<int>(b)];
  if (p.count > 0) events_.push_back({tick, b, LedgerEvent::Kind::reset, 0});
  p.count = 0;
  pending_[static_cast<int>(b)] = {};
}

void TurnLedger::credit_reply(Behavior b, std::int64_t tick) {
  auto& p = progress_[static_cast<int>(b)];
  ++p.count;
  events_.push_back({tick, b, LedgerEvent::Kind::human_turn, p.count});
  if (p.count >= 3 && !p.learned) {
    p.learned = true;
    p.learned_tick = tick;
    events_.push_back({tick, b, LedgerEvent::Kind::learned, p.count});
  }
}

void TurnLedger::close_drum_burst(std::int64_t tick) {
  burst_active_ = false;
  auto& pending = pending_[static_cast<int>(Behavior::drumming)];
  if (pending.reply_open) {
    pending.reply_open = false;
    credit_reply(Behavior::drumming, tick);
  }
}

void TurnLedger::on_robot_action_start(ActionId a, std::int64_t tick) {
  if ((a == ActionId::start_drum || a == ActionId::drum_hit) && burst_active_)
    close_drum_burst(tick);
  for (Behavior b : kBehaviors) {
    auto& p = progress_[static_cast<int>(b)];
    if (a == characteristic_action(b) && !p.first_characteristic_tick)
      p.first_characteristic_tick = tick;
    if (!belongs_to(a, b)) reset(b, tick);
  }
}

void TurnLedger::on_robot_turn(Behavior b, std::int64_t tick) {
  auto& pending = pending_[static_cast<int>(b)];
  events_.push_back({tick, b, LedgerEvent::Kind::robot_turn, progress(b).count});
  if (b == Behavior::peekaboo && pending.reply_open) {
    pending.queued_turn = true;
    return;
  }
  if (pending.robot_turn) reset(b, tick);
  pending_[static_cast<int>(b)].robot_turn = true;
}

void TurnLedger::on_human_hide_start(std::int64_t) {
  auto& pending = pending_[static_cast<int>(Behavior::peekaboo)];
  if (pending.robot_turn) {
    pending.robot_turn = false;
    pending.reply_open = true;
  }
}

void TurnLedger::on_human_hide_end(int duration_ticks, std::int64_t tick) {
  auto& pending = pending_[static_cast<int>(Behavior::peekaboo)];
  const bool queued = pending.queued_turn;
  const bool in_range = duration_ticks > hide_min_ && duration_ticks < hide_max_;
  if (!in_range) {
    reset(Behavior::peekaboo, tick);
  } else if (pending.reply_open) {
    credit_reply(Behavior::peekaboo, tick);
  }
  pending.reply_open = false;
  pending.queued_turn = false;
  if (queued) pending.robot_turn = true;
}

void TurnLedger::on_human_beat(bool robot_mid_drum_turn, std::int64_t tick) {
  if (robot_mid_drum_turn) {
    reset(Behavior::drumming, tick);
    return;
  }
  if (!burst_active_) {
    burst_active_ = true;
    auto& pending = pending_[static_cast<int>(Behavior::drumming)];
    if (pending.robot_turn) {
      pending.robot_turn = false;
      pending.reply_open = true;
    }
  }
  last_beat_ = tick;
}

void TurnLedger::on_tick_end(std::int64_t tick) {
  if (burst_active_ && tick - last_beat_ >= drum_gap_) close_drum_burst(tick);
}

}  // namespace eiha
