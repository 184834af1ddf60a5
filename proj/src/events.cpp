#include "showdown/events.hpp"

#include <stdexcept>
#include <string>

namespace showdown {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string_view to_string(PhaseTag p) noexcept {
  switch (p) {
    case PhaseTag::Serving: return "serving";
    case PhaseTag::Rally: return "rally";
    case PhaseTag::GoalPause: return "goal_pause";
    case PhaseTag::GameOver: return "game_over";
  }
  return "?";
}

PhaseTag phase_from_string(std::string_view s) {
  if (s == "serving") return PhaseTag::Serving;
  if (s == "rally") return PhaseTag::Rally;
  if (s == "goal_pause") return PhaseTag::GoalPause;
  if (s == "game_over") return PhaseTag::GameOver;
  throw std::invalid_argument("unknown phase '" + std::string(s) + "'");
}

std::string_view kind_name(const EventPayload& payload) noexcept {
  return std::visit(Overloaded{
                        [](const WallHit&) { return std::string_view("wall_hit"); },
                        [](const RacketHit&) { return std::string_view("racket_hit"); },
                        [](const GoalScored&) { return std::string_view("goal"); },
                        [](const BallDead&) { return std::string_view("ball_dead"); },
                        [](const HoldStarted&) { return std::string_view("hold_started"); },
                        [](const HoldSustained&) { return std::string_view("hold_sustained"); },
                        [](const HoldReleased&) { return std::string_view("hold_released"); },
                        [](const CenterCrossed&) { return std::string_view("center_crossed"); },
                        [](const ServeStarted&) { return std::string_view("serve"); },
                        [](const Announcement&) { return std::string_view("announcement"); },
                        [](const PhaseChanged&) { return std::string_view("phase"); },
                        [](const GameEnded&) { return std::string_view("game_over"); },
                        [](const MatchEnded&) { return std::string_view("match_over"); },
                    },
                    payload);
}

bool is_shared(const EventPayload& payload) noexcept {
  return std::holds_alternative<GoalScored>(payload) ||
         std::holds_alternative<Announcement>(payload) ||
         std::holds_alternative<PhaseChanged>(payload) ||
         std::holds_alternative<GameEnded>(payload) || std::holds_alternative<MatchEnded>(payload);
}

Event in_player_frame(const Event& e, PlayerId player) {
  if (player == PlayerId::A) return e;
  Event out = e;
  std::visit(Overloaded{
                 [](WallHit& w) { w.pos = mirror(w.pos); },
                 [](RacketHit& r) {
                   r.pos = mirror(r.pos);
                   r.out_vel = mirror(r.out_vel);
                 },
                 [](GoalScored& g) { g.pos = mirror(g.pos); },
                 [](BallDead& d) { d.pos = mirror(d.pos); },
                 [](HoldReleased& h) { h.vel = mirror(h.vel); },
                 [](ServeStarted& s) { s.vel = mirror(s.vel); },
                 [](auto&) {},
             },
             out.payload);
  return out;
}

}  // namespace showdown
