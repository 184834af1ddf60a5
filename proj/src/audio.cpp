#include "showdown/audio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace showdown::audio {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Vec3 on_surface(const Vec2& p) { return {p.x, p.y, 0.0}; }

}  // namespace

std::string_view to_string(SourceKind k) noexcept {
  switch (k) {
    case SourceKind::Rolling: return "rolling";
    case SourceKind::WallHit: return "wall_hit";
    case SourceKind::RacketHit: return "racket_hit";
    case SourceKind::Goal: return "goal";
    case SourceKind::Announcement: return "announcement";
  }
  return "?";
}

SourceKind source_kind_from_string(std::string_view s) {
  if (s == "rolling") return SourceKind::Rolling;
  if (s == "wall_hit") return SourceKind::WallHit;
  if (s == "racket_hit") return SourceKind::RacketHit;
  if (s == "goal") return SourceKind::Goal;
  if (s == "announcement") return SourceKind::Announcement;
  throw std::invalid_argument("unknown source kind '" + std::string(s) + "'");
}

double CueConfig::max_itd() const noexcept {
  return head_radius_m / sound_speed_mps * (std::numbers::pi / 2.0 + 1.0);
}

void CueConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(name) + " must be positive");
    }
  };
  positive(head_radius_m, "head_radius_m");
  positive(sound_speed_mps, "sound_speed_mps");
  positive(near_clamp_m, "near_clamp_m");
  positive(rolling_knee_kmh, "rolling_knee_kmh");
  if (!(ild_slope_db >= 0.0) || !std::isfinite(ild_slope_db)) {
    throw std::invalid_argument("ild_slope_db must be non-negative");
  }
}

double woodworth_itd(double azimuth, const CueConfig& config) {
  const double s = std::sin(azimuth);
  const double lateral = std::asin(std::clamp(s, -1.0, 1.0));
  return config.head_radius_m / config.sound_speed_mps * (lateral + std::sin(lateral));
}

double azimuth_from_itd(double itd, const CueConfig& config) {
  const double limit = config.max_itd();
  const double target = std::clamp(itd, -limit, limit) * config.sound_speed_mps /
                        config.head_radius_m;
  // theta + sin(theta) is strictly increasing on [-pi/2, pi/2].
  double lo = -std::numbers::pi / 2.0;
  double hi = std::numbers::pi / 2.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid + std::sin(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

BinauralFrame binaural_cues(const Vec3& source, const HeadPose& head, SourceKind kind,
                            const CueConfig& config) {
  head.validate();
  const Vec3 d = source - head.position;
  const Vec3 right = head.right();
  const double along = d.dot(head.forward);
  const double across = d.dot(right);
  const double vertical = d.dot(head.up);

  BinauralFrame f;
  f.source_kind = kind;
  f.azimuth = (along == 0.0 && across == 0.0) ? 0.0 : std::atan2(across, along);
  f.elevation = (along == 0.0 && across == 0.0 && vertical == 0.0)
                    ? 0.0
                    : std::atan2(vertical, std::hypot(along, across));
  f.distance = std::max(d.length(), config.near_clamp_m);
  f.itd = woodworth_itd(f.azimuth, config);
  f.ild_db = config.ild_slope_db * std::sin(f.azimuth);

  const double g = config.near_clamp_m / f.distance;
  const double quiet = g * std::pow(10.0, -std::abs(f.ild_db) / 20.0);
  f.left_gain = f.ild_db > 0.0 ? quiet : g;
  f.right_gain = f.ild_db < 0.0 ? quiet : g;
  return f;
}

BinauralFrame binaural_cues(const Vec2& source, const HeadPose& head, SourceKind kind,
                            const CueConfig& config) {
  return binaural_cues(on_surface(source), head, kind, config);
}

BinauralFrame shared_frame(SourceKind kind, const CueConfig& config) {
  BinauralFrame f;
  f.source_kind = kind;
  f.distance = config.near_clamp_m;
  f.left_gain = 1.0;
  f.right_gain = 1.0;
  return f;
}

double rolling_gain(double speed_mps, const CueConfig& config) {
  if (!(speed_mps >= 0.0)) throw std::invalid_argument("speed must be non-negative");
  const double kmh = mps_to_kmh(speed_mps);
  if (kmh >= config.rolling_knee_kmh) return 1.0;
  if (kmh == 0.0) return 0.0;
  switch (config.gain_model) {
    case GainModel::LinearRamp: return kmh / config.rolling_knee_kmh;
    case GainModel::Multiplicative: return std::pow(0.9, config.rolling_knee_kmh - kmh);
  }
  return 0.0;
}

BinauralFrame scaled(BinauralFrame frame, double gain) {
  frame.left_gain *= gain;
  frame.right_gain *= gain;
  return frame;
}

std::vector<TimedFrame> render_listener_stream(const EventLog& events, const BallTrack& track,
                                               const Listener& listener,
                                               const CueConfig& config) {
  if (!listener.head) throw std::invalid_argument("listener has no head pose");
  const HeadPose& head = *listener.head;
  head.validate();
  const PlayerId who = listener.player;

  auto spatial = [&](const Vec2& world_pos, SourceKind kind) {
    return binaural_cues(to_player_frame(world_pos, who), head, kind, config);
  };

  // Frame for one event, or nothing if the event makes no sound.
  auto event_frame = [&](const EventPayload& payload) -> std::optional<BinauralFrame> {
    return std::visit(
        Overloaded{
            [&](const WallHit& e) -> std::optional<BinauralFrame> {
              return spatial(e.pos, SourceKind::WallHit);
            },
            [&](const RacketHit& e) -> std::optional<BinauralFrame> {
              return spatial(e.pos, SourceKind::RacketHit);
            },
            [&](const GoalScored&) -> std::optional<BinauralFrame> {
              return shared_frame(SourceKind::Goal, config);
            },
            [&](const Announcement&) -> std::optional<BinauralFrame> {
              return shared_frame(SourceKind::Announcement, config);
            },
            [](const auto&) -> std::optional<BinauralFrame> { return std::nullopt; },
        },
        payload);
  };

  for (const Event& e : events) {
    if (!is_shared(e.payload) && !track.contains(e.tick)) {
      throw std::invalid_argument("ball track does not cover tick " + std::to_string(e.tick));
    }
  }

  std::vector<TimedFrame> out;
  auto ev = events.begin();
  auto flush_events_until = [&](Tick tick) {
    for (; ev != events.end() && ev->tick <= tick; ++ev) {
      if (auto f = event_frame(ev->payload)) out.push_back({ev->tick, *f});
    }
  };

  for (const auto& [tick, sample] : track) {
    if (tick > 0) flush_events_until(tick - 1);
    const double gain = rolling_gain(sample.vel.length(), config);
    if (gain > 0.0) {
      out.push_back({tick, scaled(spatial(sample.pos, SourceKind::Rolling), gain)});
    }
    flush_events_until(tick);
  }
  flush_events_until(std::numeric_limits<Tick>::max());
  return out;
}

}  // namespace showdown::audio
