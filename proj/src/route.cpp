#include "showdown/route.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace showdown::audio {
namespace {

Vec2 horizontal(const Vec3& v) { return {v.x, v.y}; }

struct Quartiles {
  Vec2 first_pos;
  Vec2 last_pos;
  double first_dist = 0.0;
  double last_dist = 0.0;
  double first_center = 0.0;
  double last_center = 0.0;
};

}  // namespace

std::string_view to_string(RouteDirection d) noexcept {
  return d == RouteDirection::Departure ? "departure" : "arrival";
}

bool RouteLabel::valid() const noexcept {
  if (direction == RouteDirection::Departure) return is_near(start_zone) && !is_near(end_zone);
  return !is_near(start_zone) && is_near(end_zone);
}

std::array<RouteLabel, 12> all_routes() {
  std::array<RouteLabel, 12> out;
  std::size_t i = 0;
  for (Zone near : {Zone::NearLeft, Zone::NearMiddle, Zone::NearRight}) {
    for (Zone far : {Zone::FarLeft, Zone::FarRight}) {
      out[i] = {near, far, RouteDirection::Departure};
      out[i + 6] = {far, near, RouteDirection::Arrival};
      ++i;
    }
  }
  return out;
}

Vec2 zone_center(Zone zone, const TableGeometry& table) {
  const double w = table.width_m;
  const double near_y = -table.length_m / 4.0;
  const double far_y = table.length_m / 4.0;
  switch (zone) {
    case Zone::NearLeft: return {-w / 3.0, near_y};
    case Zone::NearMiddle: return {0.0, near_y};
    case Zone::NearRight: return {w / 3.0, near_y};
    case Zone::FarLeft: return {-w / 4.0, far_y};
    case Zone::FarRight: return {w / 4.0, far_y};
  }
  return {};
}

BallTrack route_track(const RouteLabel& route, PlayerId player, const TableGeometry& table,
                      double speed_mps, Tick first) {
  if (!route.valid()) throw std::invalid_argument("route does not cross the table");
  if (!(speed_mps > 0.0) || !std::isfinite(speed_mps)) {
    throw std::invalid_argument("route speed must be positive");
  }
  const Vec2 a = zone_center(route.start_zone, table);
  const Vec2 b = zone_center(route.end_zone, table);
  const Vec2 span = b - a;
  const double duration = span.length() / speed_mps;
  const auto steps = static_cast<Tick>(std::ceil(duration * kTickRate));
  const Vec2 vel = span / duration;

  BallTrack track;
  for (Tick i = 0; i <= steps; ++i) {
    const double s = std::min(1.0, static_cast<double>(i) / kTickRate / duration);
    const Vec2 own = a + span * s;
    track.emplace(first + i, BallSample{to_player_frame(own, player),
                                        to_player_frame(vel, player)});
  }
  return track;
}

void perturb(std::span<BinauralFrame> frames, const CueNoise& noise, std::mt19937_64& rng) {
  std::normal_distribution<double> itd(0.0, noise.sigma_itd_s);
  std::normal_distribution<double> ild(0.0, noise.sigma_ild_db);
  for (BinauralFrame& f : frames) {
    if (noise.sigma_itd_s > 0.0) f.itd += itd(rng);
    if (noise.sigma_ild_db > 0.0) f.ild_db += ild(rng);
  }
}

Vec2 RouteClassifier::locate(const BinauralFrame& frame) const {
  const double from_itd = azimuth_from_itd(frame.itd, cues);
  const double from_ild =
      cues.ild_slope_db > 0.0 ? std::asin(std::clamp(frame.ild_db / cues.ild_slope_db, -1.0, 1.0))
                              : from_itd;

  // Inverse-variance fusion; both slopes are evaluated at the ITD estimate.
  const double c = std::max(std::cos(from_itd), 0.05);
  const double itd_slope = cues.head_radius_m / cues.sound_speed_mps * (1.0 + c);
  const double ild_slope = cues.ild_slope_db * c;
  double w_itd = 1.0;
  double w_ild = cues.ild_slope_db > 0.0 ? 1.0 : 0.0;
  if (assumed_noise.sigma_itd_s > 0.0 && assumed_noise.sigma_ild_db > 0.0) {
    w_itd = std::pow(itd_slope / assumed_noise.sigma_itd_s, 2);
    w_ild = std::pow(ild_slope / assumed_noise.sigma_ild_db, 2);
  }
  const double azimuth = (w_itd * from_itd + w_ild * from_ild) / (w_itd + w_ild);

  const double reach = frame.distance * std::cos(frame.elevation);
  const Vec2 forward = horizontal(head.forward).normalized();
  const Vec2 right = horizontal(head.right()).normalized();
  return horizontal(head.position) + (right * std::sin(azimuth) + forward * std::cos(azimuth)) *
                                         reach;
}

RouteLabel RouteClassifier::classify(std::span<const BinauralFrame> frames) const {
  const std::size_t n = frames.size();
  if (n < 4) throw std::invalid_argument("route stream needs at least 4 frames");
  const std::size_t q = n / 4;

  Quartiles m;
  for (std::size_t i = 0; i < q; ++i) {
    m.first_pos += locate(frames[i]);
    m.last_pos += locate(frames[n - q + i]);
    m.first_dist += frames[i].distance;
    m.last_dist += frames[n - q + i].distance;
  }
  const double k = static_cast<double>(q);
  m.first_pos = m.first_pos / k;
  m.last_pos = m.last_pos / k;
  m.first_dist /= k;
  m.last_dist /= k;
  m.first_center = (k - 1.0) / 2.0;
  m.last_center = static_cast<double>(n - 1) - (k - 1.0) / 2.0;

  const double trend = m.last_dist - m.first_dist;
  if (std::abs(trend) <= 1e-9 * std::max(m.first_dist, m.last_dist)) {
    throw std::invalid_argument("route stream has no distance trend");
  }
  const RouteDirection direction = trend > 0.0 ? RouteDirection::Departure
                                               : RouteDirection::Arrival;

  // Quartile means sit at their mid-times; extrapolate to the stream ends.
  const Vec2 slope = (m.last_pos - m.first_pos) / (m.last_center - m.first_center);
  const Vec2 start = m.first_pos - slope * m.first_center;
  const Vec2 end = m.last_pos + slope * (static_cast<double>(n - 1) - m.last_center);

  auto near_zone = [&](const Vec2& p) {
    return static_cast<Zone>(static_cast<int>(Zone::NearLeft) + lateral_third(p.x, table));
  };
  auto far_zone = [](const Vec2& p) { return p.x <= 0.0 ? Zone::FarLeft : Zone::FarRight; };

  if (direction == RouteDirection::Departure) return {near_zone(start), far_zone(end), direction};
  return {far_zone(start), near_zone(end), direction};
}

RouteLabel classify_route(std::span<const BinauralFrame> frames, const RouteClassifier& decoder) {
  return decoder.classify(frames);
}

}  // namespace showdown::audio
