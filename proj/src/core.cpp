#include "eiha/core.hpp"

#include <algorithm>
#include <bit>

namespace eiha {
namespace {

std::uint64_t fnv(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t bits(double d) { return std::bit_cast<std::uint64_t>(d); }

}  // namespace

std::uint64_t hash_record(std::uint64_t h, const TickRecord& r) {
  const auto& p = r.partner;
  h = fnv(h, static_cast<std::uint64_t>(r.tick));
  h = fnv(h, index_of(r.action) | r.action_started << 8 | r.action_finished << 9 |
                 r.robot_beat << 10 | r.face_detected << 11);
  h = fnv(h, p.present | p.hiding << 1 | p.drummed_this_tick << 2 | p.gaze_on_robot << 3 |
                 static_cast<std::uint64_t>(p.hide_elapsed) << 8);
  h = fnv(h, static_cast<std::uint64_t>(r.scores.visual_attention));
  h = fnv(h, bits(r.scores.hide_score));
  h = fnv(h, bits(r.scores.drum_score));
  h = fnv(h, bits(r.reward));
  return fnv(h, r.experience_count);
}

InteractionCore::InteractionCore(const EihaConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      select_rng_(Rng::mix(seed, 1)),
      sense_rng_(Rng::mix(seed, 2)),
      space_(kChannelCount, cfg.window_ticks(), cfg.merge_threshold, cfg.reward_update_rate),
      stm_(std::max(cfg.stm_capacity(), 1)),
      ledger_(cfg.ticks(cfg.min_time), cfg.ticks(cfg.max_time), cfg.resolution),
      window_(cfg.window_ticks()),
      horizon_(std::max(cfg.horizon_ticks(), 1)),
      frames_(static_cast<std::size_t>(window_) * kChannelCount, 0) {
  cfg_.validate();
  choose_next();
}

void InteractionCore::record_window(const DiscreteFrame& frame) {
  std::copy(frame.bins.begin(), frame.bins.end(),
            frames_.begin() + static_cast<std::ptrdiff_t>(frames_seen_ % window_) * kChannelCount);
  ++frames_seen_;
}

Experience InteractionCore::trailing_experience() const {
  Experience e(kChannelCount, window_);
  for (int t = 0; t < window_; ++t) {
    const int slot = (frames_seen_ - window_ + t) % window_;
    const std::uint8_t* f = frames_.data() + static_cast<std::size_t>(slot) * kChannelCount;
    for (int c = 0; c < kChannelCount; ++c) e.samples[static_cast<std::size_t>(c) * window_ + t] = f[c];
  }
  return e;
}

void InteractionCore::choose_next() {
  std::optional<ActionId> finished;
  if (tick_ > 0 || frames_seen_ > 0) finished = observation_.action;
  std::optional<Experience> probe;
  if (frames_seen_ >= window_) probe = trailing_experience();
  const auto sel = select_action(space_, probe ? &*probe : nullptr, cfg_, select_rng_, finished);
  executor_.load(sel.action);
}

const TickRecord& InteractionCore::tick(const PartnerState& partner) {
  const std::int64_t t = tick_;
  const auto step = executor_.step();
  const ActionId a = step.action;
  const bool started = executor_.offset() == 1;

  if (started && a == ActionId::hide_face)
    hands_over_eyes_ = sense_rng_.chance(cfg_.occlusion_probability);
  const bool drumming = a == ActionId::drum_hit;
  const SensorFrame frame =
      synthesize_frame(step.pose, a, hands_over_eyes_, partner, last_scores_, cfg_, sense_rng_);
  const TickFlags flags = TickFlags::from(!frame.face_detected(), a == ActionId::hide_face,
                                          drumming, partner.drummed_this_tick);
  if (cfg_.stm_enabled()) stm_.push(flags);
  const EngagementScores scores = score_tick(stm_, flags, frame.visual_attention(), cfg_);
  const double reward = total_reward(scores);

  record_window(discretize(frame, channel_specs(), cfg_.bins));
  for (auto& p : pending_) {
    p.reward_sum += reward;
    ++p.seen;
  }
  if (frames_seen_ >= window_) {
    Pending p{trailing_experience(), reward, 1};
    p.experience.action = a;
    p.experience.created_tick = t;
    pending_.push_back(std::move(p));
  }
  while (!pending_.empty() && pending_.front().seen >= horizon_) {
    auto& p = pending_.front();
    p.experience.reward = p.reward_sum / p.seen;
    space_.insert_or_merge(std::move(p.experience));
    pending_.pop_front();
  }

  if (started) {
    robot_turns_.on_action_start(a);
    ledger_.on_robot_action_start(a, t);
    if (a == ActionId::start_drum) drum_turn_start_ = t;
  }
  if (!last_partner_.hiding && partner.hiding) ledger_.on_human_hide_start(t);
  if (last_partner_.hiding && !partner.hiding)
    ledger_.on_human_hide_end(last_partner_.hide_elapsed, t);
  if (partner.drummed_this_tick) ledger_.on_human_beat(robot_turns_.mid_drum_turn(), t);
  if (step.finished) {
    if (auto turn = robot_turns_.on_action_complete(a)) {
      ledger_.on_robot_turn(*turn, t);
      if (*turn == Behavior::drumming && drum_turn_start_)
        drum_turns_.emplace_back(*drum_turn_start_, t);
    }
  }
  ledger_.on_tick_end(t);

  const bool beat = step.beat && drumming;
  record_ = TickRecord{t,          a,      started, step.finished, beat, partner,
                       frame.face_detected(), scores, reward,
                       static_cast<std::uint32_t>(space_.size())};
  hash_ = hash_record(hash_, record_);
  observation_ = RobotObservation{a, started, step.finished, beat};
  last_scores_ = scores;
  last_partner_ = partner;
  if (step.finished) choose_next();
  ++tick_;
  return record_;
}

}  // namespace eiha
