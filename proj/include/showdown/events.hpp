#pragma once

/// @file events.hpp
/// @brief Typed, tick-stamped events shared by physics, rules, audio, the
/// replay log and the metrics fold.

#include <array>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "showdown/geometry.hpp"

namespace showdown {

using Tick = std::uint32_t;

inline constexpr int kTickRate = 60;
inline constexpr double kTickSeconds = 1.0 / kTickRate;

// Physics events. Positions and velocities are world-frame unless an event
// has been passed through in_player_frame().
struct WallHit {
  Vec2 pos;
  double speed = 0.0;
  friend bool operator==(const WallHit&, const WallHit&) = default;
};
struct RacketHit {
  PlayerId player = PlayerId::A;
  Vec2 pos;
  Vec2 out_vel;
  friend bool operator==(const RacketHit&, const RacketHit&) = default;
};
struct GoalScored {
  PlayerId scorer = PlayerId::A;
  Vec2 pos;
  friend bool operator==(const GoalScored&, const GoalScored&) = default;
};
struct BallDead {
  Vec2 pos;
  friend bool operator==(const BallDead&, const BallDead&) = default;
};
struct HoldStarted {
  PlayerId player = PlayerId::A;
  friend bool operator==(const HoldStarted&, const HoldStarted&) = default;
};
struct HoldSustained {
  PlayerId player = PlayerId::A;
  friend bool operator==(const HoldSustained&, const HoldSustained&) = default;
};
struct HoldReleased {
  PlayerId player = PlayerId::A;
  Vec2 vel;
  friend bool operator==(const HoldReleased&, const HoldReleased&) = default;
};
/// Ball crossed the center line heading into `toward`'s half.
struct CenterCrossed {
  PlayerId toward = PlayerId::A;
  friend bool operator==(const CenterCrossed&, const CenterCrossed&) = default;
};

// Rules events.
struct ServeStarted {
  PlayerId server = PlayerId::A;
  Vec2 vel;
  friend bool operator==(const ServeStarted&, const ServeStarted&) = default;
};
struct Announcement {
  PlayerId scorer = PlayerId::A;
  std::array<int, 2> score{};
  friend bool operator==(const Announcement&, const Announcement&) = default;
};
enum class PhaseTag : std::uint8_t { Serving, Rally, GoalPause, GameOver };
std::string_view to_string(PhaseTag p) noexcept;
PhaseTag phase_from_string(std::string_view s);

struct PhaseChanged {
  PhaseTag phase = PhaseTag::Serving;
  friend bool operator==(const PhaseChanged&, const PhaseChanged&) = default;
};
struct GameEnded {
  PlayerId winner = PlayerId::A;
  std::array<int, 2> score{};
  friend bool operator==(const GameEnded&, const GameEnded&) = default;
};
struct MatchEnded {
  PlayerId winner = PlayerId::A;
  std::array<int, 2> games{};
  friend bool operator==(const MatchEnded&, const MatchEnded&) = default;
};

using EventPayload =
    std::variant<WallHit, RacketHit, GoalScored, BallDead, HoldStarted, HoldSustained,
                 HoldReleased, CenterCrossed, ServeStarted, Announcement, PhaseChanged,
                 GameEnded, MatchEnded>;

struct Event {
  Tick tick = 0;
  EventPayload payload;
  friend bool operator==(const Event&, const Event&) = default;
};

using EventLog = std::vector<Event>;

/// Stable wire name of the payload kind, e.g. "wall_hit".
std::string_view kind_name(const EventPayload& payload) noexcept;

/// Events heard identically by both players (score and phase news).
bool is_shared(const EventPayload& payload) noexcept;

/// Copy of `e` with every spatial field expressed in `player`'s own frame.
Event in_player_frame(const Event& e, PlayerId player);

}  // namespace showdown
