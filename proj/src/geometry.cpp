#include "showdown/geometry.hpp"

#include <string>

namespace showdown {

std::string_view to_string(PlayerId p) noexcept { return p == PlayerId::A ? "A" : "B"; }

PlayerId player_from_string(std::string_view s) {
  if (s == "A") return PlayerId::A;
  if (s == "B") return PlayerId::B;
  throw std::invalid_argument("unknown player id '" + std::string(s) + "'");
}

void TableGeometry::validate() const {
  if (!(length_m > 0.0) || !(width_m > 0.0)) {
    throw std::invalid_argument("table dimensions must be positive");
  }
  if (!(goal_width_m > 0.0) || !(goal_width_m < width_m)) {
    throw std::invalid_argument("goal width must lie in (0, width)");
  }
  if (!(wall_restitution > 0.0) || !(wall_restitution <= 1.0)) {
    throw std::invalid_argument("wall restitution must lie in (0, 1]");
  }
  if (!(ball_radius_m > 0.0) || !(2.0 * ball_radius_m < width_m)) {
    throw std::invalid_argument("ball radius must be positive and fit the table");
  }
}

std::string_view to_string(Zone z) noexcept {
  switch (z) {
    case Zone::NearLeft: return "near_left";
    case Zone::NearMiddle: return "near_middle";
    case Zone::NearRight: return "near_right";
    case Zone::FarLeft: return "far_left";
    case Zone::FarRight: return "far_right";
  }
  return "?";
}

void HeadPose::validate() const {
  constexpr double kTol = 1e-6;
  if (std::abs(forward.length() - 1.0) > kTol || std::abs(up.length() - 1.0) > kTol) {
    throw std::invalid_argument("head forward/up must be unit vectors");
  }
  if (std::abs(forward.dot(up)) > kTol) {
    throw std::invalid_argument("head forward and up must be orthogonal");
  }
}

HeadPose default_head(const TableGeometry& table) {
  return HeadPose{{0.0, -table.half_length() - 0.25, 0.45}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
}

bool on_table(const Vec2& pos, const TableGeometry& table) noexcept {
  return pos.finite() && std::abs(pos.x) <= table.half_width() &&
         std::abs(pos.y) <= table.half_length();
}

int lateral_third(double own_x, const TableGeometry& table) noexcept {
  const double edge = table.width_m / 6.0;
  if (own_x <= -edge) return 0;
  if (own_x <= edge) return 1;
  return 2;
}

Zone zone_of(const Vec2& pos, PlayerId player, const TableGeometry& table) {
  if (!on_table(pos, table)) throw std::out_of_range("position is off the table");
  const Vec2 own = to_player_frame(pos, player);
  if (own.y <= 0.0) {
    return static_cast<Zone>(static_cast<int>(Zone::NearLeft) + lateral_third(own.x, table));
  }
  return own.x <= 0.0 ? Zone::FarLeft : Zone::FarRight;
}

}  // namespace showdown
