#include "eiha/experience_space.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "eiha/information.hpp"

namespace eiha {
namespace {

constexpr const char* kSnapshotFormat = "eiha-space/1";

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

std::vector<std::uint8_t> from_hex(const std::string& text) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw std::invalid_argument("snapshot: bad hex digit");
  };
  if (text.size() % 2 != 0) throw std::invalid_argument("snapshot: odd hex length");
  std::vector<std::uint8_t> out(text.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>(nibble(text[2 * i]) << 4 | nibble(text[2 * i + 1]));
  return out;
}

}  // namespace

double experience_distance(const Experience& a, const Experience& b) {
  if (a.channels != b.channels || a.window != b.window)
    throw std::invalid_argument("experience_distance: experiences from different spaces");
  double total = 0.0;
  for (int c = 0; c < a.channels; ++c)
    total += channel_information_distance(a.channel(c), b.channel(c));
  return total;
}

ExperienceSpace::ExperienceSpace(int channels, int window, double merge_threshold,
                                 double reward_update_rate)
    : channels_(channels),
      window_(window),
      merge_threshold_(merge_threshold),
      update_rate_(reward_update_rate),
      memo_(std::make_unique<Memo>()) {
  if (channels <= 0) throw std::invalid_argument("ExperienceSpace: channels must be positive");
  if (window <= 0) throw std::invalid_argument("ExperienceSpace: window must be positive");
  if (!(reward_update_rate > 0.0 && reward_update_rate <= 1.0))
    throw std::invalid_argument("ExperienceSpace: update rate must lie in (0,1]");
}

const Experience& ExperienceSpace::at(ExperienceId id) const {
  if (id >= experiences_.size()) throw std::out_of_range("unknown experience id");
  return experiences_[id];
}

void ExperienceSpace::check_shape(const Experience& e) const {
  if (e.channels != channels_ || e.window != window_ ||
      e.samples.size() != static_cast<std::size_t>(channels_) * window_)
    throw std::invalid_argument("experience does not match the space's channels and window");
}

std::vector<std::uint32_t> ExperienceSpace::signature_of(const Experience& e) const {
  std::vector<std::uint32_t> sig(channels_);
  std::string key;
  for (int c = 0; c < channels_; ++c) {
    auto canon = canonical_labels(e.channel(c));
    key.assign(canon.begin(), canon.end());
    auto [it, fresh] = memo_->partition_ids.try_emplace(
        key, static_cast<std::uint32_t>(memo_->partitions.size()));
    if (fresh) memo_->partitions.push_back(std::move(canon));
    sig[c] = it->second;
  }
  return sig;
}

double ExperienceSpace::pair_distance(std::uint32_t a, std::uint32_t b) const {
  const std::uint64_t key = a < b ? (std::uint64_t{a} << 32 | b) : (std::uint64_t{b} << 32 | a);
  auto it = memo_->pairs.find(key);
  if (it != memo_->pairs.end()) return it->second;
  const double d =
      channel_information_distance(memo_->partitions[a], memo_->partitions[b]);
  memo_->pairs.emplace(key, d);
  return d;
}

std::optional<Recall> ExperienceSpace::scan(const std::vector<std::uint32_t>& probe,
                                            bool require_successor) const {
  double best = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> best_index;
  const std::size_t n = experiences_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (require_successor && !experiences_[i].next_id) continue;
    const std::uint32_t* sig = signatures_.data() + i * channels_;
    double total = 0.0;
    bool abandoned = false;
    for (int c = 0; c < channels_; ++c) {
      if (sig[c] == probe[c]) continue;
      total += pair_distance(probe[c], sig[c]);
      if (total > best) {
        abandoned = true;
        break;
      }
    }
    if (abandoned) continue;
    if (!best_index || total < best ||
        (total == best && experiences_[i].created_tick >= experiences_[*best_index].created_tick)) {
      best = total;
      best_index = i;
    }
  }
  if (!best_index) return std::nullopt;
  return Recall{static_cast<ExperienceId>(*best_index), best};
}

std::optional<Recall> ExperienceSpace::nearest(const Experience& probe) const {
  check_shape(probe);
  std::lock_guard lock(memo_->mutex);
  return scan(signature_of(probe), false);
}

std::optional<Recall> ExperienceSpace::nearest_with_successor(const Experience& probe) const {
  check_shape(probe);
  std::lock_guard lock(memo_->mutex);
  return scan(signature_of(probe), true);
}

void ExperienceSpace::link_from_last(ExperienceId to, ActionId action) {
  if (!last_inserted_ || *last_inserted_ == to) return;
  Experience& from = experiences_[*last_inserted_];
  from.next_id = to;
  if (from.action != action) from.followers[index_of(action)] = to;
}

InsertOutcome ExperienceSpace::insert_or_merge(Experience candidate) {
  check_shape(candidate);
  if (!std::isfinite(candidate.reward))
    throw std::invalid_argument("insert_or_merge: reward must be finite");
  std::lock_guard lock(memo_->mutex);
  auto sig = signature_of(candidate);
  if (auto recall = scan(sig, false)) {
    Experience& target = experiences_[recall->id];
    if (recall->distance < merge_threshold_ && target.action == candidate.action) {
      target.reward += update_rate_ * (candidate.reward - target.reward);
      ++target.visit_count;
      // The revisited experience continues the chain from here, so its next
      // link always names what followed it most recently.
      const auto id = target.id;
      link_from_last(id, candidate.action);
      last_inserted_ = id;
      return {InsertOutcome::Kind::merged, id};
    }
  }
  const auto id = static_cast<ExperienceId>(experiences_.size());
  candidate.id = id;
  candidate.visit_count = 1;
  candidate.next_id.reset();
  candidate.followers = {};
  candidate.prev_id = last_inserted_;
  link_from_last(id, candidate.action);
  last_inserted_ = id;
  experiences_.push_back(std::move(candidate));
  signatures_.insert(signatures_.end(), sig.begin(), sig.end());
  return {InsertOutcome::Kind::inserted, id};
}

double ExperienceSpace::apply_future_reward(ExperienceId id,
                                            std::span<const double> future_rewards) {
  if (id >= experiences_.size()) throw std::out_of_range("unknown experience id");
  Experience& e = experiences_[id];
  if (future_rewards.empty()) return e.reward;
  double sum = 0.0;
  for (double r : future_rewards) sum += r;
  e.reward = sum / static_cast<double>(future_rewards.size());
  return e.reward;
}

double ExperienceSpace::revise_reward(ExperienceId id, double reward) {
  if (id >= experiences_.size()) throw std::out_of_range("unknown experience id");
  Experience& e = experiences_[id];
  e.reward += update_rate_ * (reward - e.reward);
  return e.reward;
}

nlohmann::json ExperienceSpace::snapshot() const {
  nlohmann::json doc;
  doc["format"] = kSnapshotFormat;
  doc["channels"] = channels_;
  doc["window"] = window_;
  doc["merge_threshold"] = merge_threshold_;
  doc["reward_update_rate"] = update_rate_;
  doc["last_inserted"] = last_inserted_ ? nlohmann::json(*last_inserted_) : nlohmann::json();
  auto& list = doc["experiences"] = nlohmann::json::array();
  for (const auto& e : experiences_) {
    nlohmann::json j;
    j["id"] = e.id;
    j["action"] = action_name(e.action);
    j["reward"] = e.reward;
    j["visit_count"] = e.visit_count;
    j["prev"] = e.prev_id ? nlohmann::json(*e.prev_id) : nlohmann::json();
    j["next"] = e.next_id ? nlohmann::json(*e.next_id) : nlohmann::json();
    j["created_tick"] = e.created_tick;
    auto& followers = j["followers"] = nlohmann::json::object();
    for (auto a : kAllActions)
      if (auto f = e.followers[index_of(a)]) followers[std::string(action_name(a))] = *f;
    j["samples"] = to_hex(e.samples);
    list.push_back(std::move(j));
  }
  return doc;
}

ExperienceSpace ExperienceSpace::from_snapshot(const nlohmann::json& doc) {
  if (doc.value("format", "") != kSnapshotFormat)
    throw std::invalid_argument("snapshot: unsupported format");
  ExperienceSpace space(doc.at("channels").get<int>(), doc.at("window").get<int>(),
                        doc.at("merge_threshold").get<double>(),
                        doc.at("reward_update_rate").get<double>());
  std::lock_guard lock(space.memo_->mutex);
  for (const auto& j : doc.at("experiences")) {
    Experience e(space.channels_, space.window_);
    e.id = j.at("id").get<ExperienceId>();
    if (e.id != space.experiences_.size())
      throw std::invalid_argument("snapshot: experience ids must be dense and ordered");
    auto action = parse_action(j.at("action").get<std::string>());
    if (!action) throw std::invalid_argument("snapshot: unknown action");
    e.action = *action;
    e.reward = j.at("reward").get<double>();
    e.visit_count = j.at("visit_count").get<std::uint32_t>();
    if (!j.at("prev").is_null()) e.prev_id = j.at("prev").get<ExperienceId>();
    if (!j.at("next").is_null()) e.next_id = j.at("next").get<ExperienceId>();
    e.created_tick = j.at("created_tick").get<std::int64_t>();
    const auto followers = j.value("followers", nlohmann::json::object());
    for (const auto& [name, r] : followers.items()) {
      auto a = parse_action(name);
      if (!a) throw std::invalid_argument("snapshot: unknown action");
      e.followers[index_of(*a)] = r.get<ExperienceId>();
    }
    e.samples = from_hex(j.at("samples").get<std::string>());
    space.check_shape(e);
    auto sig = space.signature_of(e);
    space.signatures_.insert(space.signatures_.end(), sig.begin(), sig.end());
    space.experiences_.push_back(std::move(e));
  }
  if (!doc.at("last_inserted").is_null())
    space.last_inserted_ = doc.at("last_inserted").get<ExperienceId>();
  const auto n = space.experiences_.size();
  auto valid = [n](const std::optional<ExperienceId>& id) { return !id || *id < n; };
  for (const auto& e : space.experiences_) {
    bool ok = valid(e.prev_id) && valid(e.next_id);
    for (const auto& f : e.followers) ok = ok && valid(f);
    if (!ok) throw std::invalid_argument("snapshot: link to a missing experience");
  }
  if (!valid(space.last_inserted_)) throw std::invalid_argument("snapshot: bad last_inserted");
  return space;
}

}  // namespace eiha
