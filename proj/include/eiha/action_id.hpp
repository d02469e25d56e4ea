#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace eiha {

/// The robot's low-level action repertoire: ten motions plus a short no-op.
enum class ActionId : std::uint8_t {
  right_arm_down,
  left_arm_down,
  home,
  hide_face,
  right_arm_up,
  left_arm_up,
  right_arm_wave,
  left_arm_wave,
  start_drum,
  drum_hit,
  no_op,
};

inline constexpr int kActionCount = 11;

inline constexpr std::array<ActionId, kActionCount> kAllActions = {
    ActionId::right_arm_down, ActionId::left_arm_down,  ActionId::home,
    ActionId::hide_face,      ActionId::right_arm_up,   ActionId::left_arm_up,
    ActionId::right_arm_wave, ActionId::left_arm_wave,  ActionId::start_drum,
    ActionId::drum_hit,       ActionId::no_op,
};

constexpr int index_of(ActionId a) noexcept { return static_cast<int>(a); }

/// Names as they appear in logs, messages and the UI.
std::string_view action_name(ActionId a) noexcept;
std::optional<ActionId> parse_action(std::string_view name) noexcept;

enum class Behavior : std::uint8_t { peekaboo, drumming };

inline constexpr std::array<Behavior, 2> kBehaviors = {Behavior::peekaboo, Behavior::drumming};

std::string_view behavior_name(Behavior b) noexcept;

/// The action whose presence marks a behavior: hide-face for peek-a-boo,
/// drum-hit for drumming.
constexpr ActionId characteristic_action(Behavior b) noexcept {
  return b == Behavior::peekaboo ? ActionId::hide_face : ActionId::drum_hit;
}

/// True when `a` may appear inside a turn of `b` (no-op is part of every
/// behavior).
constexpr bool belongs_to(ActionId a, Behavior b) noexcept {
  switch (a) {
    case ActionId::no_op:
    case ActionId::home:
      return true;
    case ActionId::hide_face:
      return b == Behavior::peekaboo;
    case ActionId::start_drum:
    case ActionId::drum_hit:
    case ActionId::right_arm_down:
      return b == Behavior::drumming;
    default:
      return false;
  }
}

}  // namespace eiha
