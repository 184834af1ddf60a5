#pragma once

/// @file route.hpp
/// @brief Straight-line route trials and a cue-only route classifier.
///
/// A route runs between the centers of a near zone and a far zone of the
/// listener's own half-tables. The classifier sees only the frames a listener
/// would hear and decodes start zone, end zone and direction.

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "showdown/audio.hpp"
#include "showdown/geometry.hpp"

namespace showdown::audio {

enum class RouteDirection : std::uint8_t { Departure, Arrival };

std::string_view to_string(RouteDirection d) noexcept;

struct RouteLabel {
  Zone start_zone = Zone::NearLeft;
  Zone end_zone = Zone::FarLeft;
  RouteDirection direction = RouteDirection::Departure;

  /// Departures run near to far, arrivals far to near.
  [[nodiscard]] bool valid() const noexcept;
  friend bool operator==(const RouteLabel&, const RouteLabel&) = default;
};

/// The six departures (near zone major, far zone minor) followed by the six
/// arrivals that reverse them.
std::array<RouteLabel, 12> all_routes();

/// Representative point of a zone in the listener's own frame.
Vec2 zone_center(Zone zone, const TableGeometry& table);

/// World-frame ball track for the listener `player` rolling from the start
/// center to the end center at `speed_mps`, sampled every tick from `first`.
/// Throws std::invalid_argument for an invalid label or non-positive speed.
BallTrack route_track(const RouteLabel& route, PlayerId player, const TableGeometry& table,
                      double speed_mps, Tick first = 0);

struct CueNoise {
  double sigma_itd_s = 50e-6;
  double sigma_ild_db = 1.0;
  friend bool operator==(const CueNoise&, const CueNoise&) = default;
};

/// Adds independent zero-mean Gaussian noise to every frame's ITD and ILD.
void perturb(std::span<BinauralFrame> frames, const CueNoise& noise, std::mt19937_64& rng);

struct RouteClassifier {
  TableGeometry table;
  HeadPose head;
  CueConfig cues;
  /// Noise the decoder assumes when fusing ITD and ILD estimates.
  CueNoise assumed_noise;

  /// Throws std::invalid_argument for fewer than 4 frames or a stream with no
  /// distance trend.
  [[nodiscard]] RouteLabel classify(std::span<const BinauralFrame> frames) const;

  /// Own-frame position implied by one frame's cues.
  [[nodiscard]] Vec2 locate(const BinauralFrame& frame) const;
};

RouteLabel classify_route(std::span<const BinauralFrame> frames, const RouteClassifier& decoder);

}  // namespace showdown::audio
