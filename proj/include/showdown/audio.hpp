#pragma once

/// @file audio.hpp
/// @brief Per-listener binaural cue synthesis.
///
/// The engine emits cue parameters rather than samples: a Woodworth
/// spherical-head ITD, a sinusoidal ILD and inverse-distance attenuation with
/// a near-field clamp. Clients turn a BinauralFrame into per-ear delay and gain.

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "showdown/events.hpp"
#include "showdown/geometry.hpp"

namespace showdown::audio {

enum class SourceKind : std::uint8_t { Rolling, WallHit, RacketHit, Goal, Announcement };

std::string_view to_string(SourceKind k) noexcept;
SourceKind source_kind_from_string(std::string_view s);

struct BinauralFrame {
  /// Radians in the head frame, positive to the right.
  double azimuth = 0.0;
  double elevation = 0.0;
  /// Meters, never below the near-field clamp.
  double distance = 0.0;
  /// Seconds, positive when the right ear leads.
  double itd = 0.0;
  /// Decibels, positive when the right ear is louder.
  double ild_db = 0.0;
  double left_gain = 0.0;
  double right_gain = 0.0;
  SourceKind source_kind = SourceKind::Rolling;

  friend bool operator==(const BinauralFrame&, const BinauralFrame&) = default;
};

/// How the rolling sound fades below the speed knee.
enum class GainModel : std::uint8_t {
  /// gain = speed_kmh / knee below the knee.
  LinearRamp,
  /// gain = 0.9^(knee - speed_kmh) below the knee, 0 at rest.
  Multiplicative,
};

struct CueConfig {
  double head_radius_m = 0.0875;
  double sound_speed_mps = 343.0;
  double ild_slope_db = 10.0;
  double near_clamp_m = 0.2;
  double rolling_knee_kmh = 10.0;
  GainModel gain_model = GainModel::LinearRamp;

  [[nodiscard]] double max_itd() const noexcept;
  void validate() const;

  friend bool operator==(const CueConfig&, const CueConfig&) = default;
};

/// Woodworth ITD for a horizontal azimuth. Sources behind the interaural axis
/// fold onto the front hemisphere, so |itd| peaks at +-pi/2.
double woodworth_itd(double azimuth, const CueConfig& config);

/// Inverse of woodworth_itd on [-pi/2, pi/2]; `itd` is clamped to the
/// physical range first.
double azimuth_from_itd(double itd, const CueConfig& config);

/// Cues for a point source. Elevation is reported but does not weight ITD or
/// ILD. A source at the head center reports azimuth 0 at the clamp distance.
BinauralFrame binaural_cues(const Vec3& source, const HeadPose& head, SourceKind kind,
                            const CueConfig& config);

/// Source on the playing surface (z = 0).
BinauralFrame binaural_cues(const Vec2& source, const HeadPose& head, SourceKind kind,
                            const CueConfig& config);

/// Non-spatial frame for sounds both players hear identically.
BinauralFrame shared_frame(SourceKind kind, const CueConfig& config);

/// Loudness of the rolling sound for a ball speed in m/s: 0 at rest, 1 at and
/// above the knee, continuous and non-decreasing.
double rolling_gain(double speed_mps, const CueConfig& config);

/// Multiplies both ear gains by `gain` in [0, 1].
BinauralFrame scaled(BinauralFrame frame, double gain);

struct TimedFrame {
  Tick tick = 0;
  BinauralFrame frame;
  friend bool operator==(const TimedFrame&, const TimedFrame&) = default;
};

struct BallSample {
  Vec2 pos;
  Vec2 vel;
  friend bool operator==(const BallSample&, const BallSample&) = default;
};

/// World-frame ball state per tick.
using BallTrack = std::map<Tick, BallSample>;

struct Listener {
  PlayerId player = PlayerId::A;
  /// Head pose in the listener's own frame.
  std::optional<HeadPose> head;
};

/// Frame stream heard by one listener: a Rolling frame on every tick the ball
/// is audible, then one frame per sound-producing event on that tick. Spatial
/// sources are moved into the listener's own frame first; shared events
/// produce identical frames for both players. Throws std::invalid_argument
/// when the listener has no head pose or an event tick is missing from the
/// track.
std::vector<TimedFrame> render_listener_stream(const EventLog& events, const BallTrack& track,
                                               const Listener& listener,
                                               const CueConfig& config);

}  // namespace showdown::audio
