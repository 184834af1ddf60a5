#pragma once

/// @file geometry.hpp
/// @brief Table coordinate system, zones and unit conversions.
///
/// World frame: origin at the table center, x lateral (+ toward player A's
/// right), y longitudinal (+ toward player B). Player A stands at the -y end,
/// player B at the +y end. Each player's "own frame" is the world rotated so
/// that the player stands at -y; for B that is the 180 degree rotation
/// implemented by mirror().

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace showdown {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(const Vec2& o) const noexcept { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const noexcept { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const noexcept { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const noexcept { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const noexcept { return {x / s, y / s}; }
  constexpr Vec2& operator+=(const Vec2& o) noexcept {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) noexcept {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) noexcept {
    x *= s;
    y *= s;
    return *this;
  }

  [[nodiscard]] constexpr double dot(const Vec2& o) const noexcept { return x * o.x + y * o.y; }
  /// z component of the 3D cross product.
  [[nodiscard]] constexpr double cross(const Vec2& o) const noexcept { return x * o.y - y * o.x; }
  [[nodiscard]] constexpr double length_squared() const noexcept { return dot(*this); }
  [[nodiscard]] double length() const noexcept { return std::hypot(x, y); }
  /// Counter-clockwise perpendicular.
  [[nodiscard]] constexpr Vec2 perp() const noexcept { return {-y, x}; }
  [[nodiscard]] bool finite() const noexcept { return std::isfinite(x) && std::isfinite(y); }

  /// Unit vector in the same direction; zero vector stays zero.
  [[nodiscard]] Vec2 normalized() const noexcept {
    const double len = length();
    if (len == 0.0) return {};
    return {x / len, y / len};
  }

  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr Vec2 operator*(double s, const Vec2& v) noexcept { return v * s; }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3 operator+(const Vec3& o) const noexcept { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const noexcept { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const noexcept { return {x * s, y * s, z * s}; }
  [[nodiscard]] constexpr double dot(const Vec3& o) const noexcept {
    return x * o.x + y * o.y + z * o.z;
  }
  [[nodiscard]] constexpr Vec3 cross(const Vec3& o) const noexcept {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  [[nodiscard]] double length() const noexcept { return std::sqrt(dot(*this)); }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

enum class PlayerId : std::uint8_t { A = 0, B = 1 };

constexpr PlayerId opponent(PlayerId p) noexcept {
  return p == PlayerId::A ? PlayerId::B : PlayerId::A;
}
constexpr std::size_t index_of(PlayerId p) noexcept { return static_cast<std::size_t>(p); }
std::string_view to_string(PlayerId p) noexcept;
/// Parses "A" or "B"; throws std::invalid_argument otherwise.
PlayerId player_from_string(std::string_view s);

/// Physical table description. Defaults follow the regulation Showdown table.
struct TableGeometry {
  double length_m = 3.66;
  double width_m = 1.22;
  double wall_restitution = 0.9;
  double goal_width_m = 0.30;
  double ball_radius_m = 0.03;

  [[nodiscard]] double half_length() const noexcept { return 0.5 * length_m; }
  [[nodiscard]] double half_width() const noexcept { return 0.5 * width_m; }
  [[nodiscard]] double goal_half_width() const noexcept { return 0.5 * goal_width_m; }

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  friend bool operator==(const TableGeometry&, const TableGeometry&) = default;
};

enum class Zone : std::uint8_t { NearLeft = 0, NearMiddle, NearRight, FarLeft, FarRight };

std::string_view to_string(Zone z) noexcept;
constexpr bool is_near(Zone z) noexcept { return z <= Zone::NearRight; }

/// Listener head in the table frame. forward and up are unit and orthogonal.
struct HeadPose {
  Vec3 position;
  Vec3 forward{0.0, 1.0, 0.0};
  Vec3 up{0.0, 0.0, 1.0};

  void validate() const;
  [[nodiscard]] Vec3 right() const noexcept { return forward.cross(up); }
};

/// Default listening position for a player, expressed in that player's own
/// frame: standing behind the -y end, eyes above the playing surface.
HeadPose default_head(const TableGeometry& table);

constexpr double kmh_to_mps(double v) noexcept { return v / 3.6; }
constexpr double mps_to_kmh(double v) noexcept { return v * 3.6; }

/// 180 degree rotation about the table center. Converts between A's frame
/// (the world frame) and B's own frame.
constexpr Vec2 mirror(const Vec2& v) noexcept { return {-v.x, -v.y}; }

/// World-frame vector expressed in `player`'s own frame (and back: the map is
/// an involution).
constexpr Vec2 to_player_frame(const Vec2& v, PlayerId player) noexcept {
  return player == PlayerId::A ? v : mirror(v);
}

/// True when pos lies on the closed table rectangle.
bool on_table(const Vec2& pos, const TableGeometry& table) noexcept;

/// Zone of `pos` (world frame) as seen by `player`. Ties on a boundary go to
/// the lower-index zone, so the center line counts as near and lateral
/// boundaries resolve leftward. Throws std::out_of_range off the table.
Zone zone_of(const Vec2& pos, PlayerId player, const TableGeometry& table);

/// Lateral third (0 left, 1 middle, 2 right) of an own-frame x coordinate.
int lateral_third(double own_x, const TableGeometry& table) noexcept;

}  // namespace showdown
