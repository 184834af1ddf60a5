#pragma once

/// @file metrics.hpp
/// @brief Per-player match measurements folded from an event log, plus the
/// maximum heart rate percentage.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "showdown/events.hpp"
#include "showdown/geometry.hpp"

namespace showdown::metrics {

struct MetricsConfig {
  TableGeometry table;
  /// A hit counts as a shot on target when it reaches the opponent's end
  /// within this multiple of the goal half-width.
  double shot_width_factor = 1.5;

  void validate() const;
};

enum class Third : std::uint8_t { Left = 0, Middle, Right };

struct PlayerStats {
  int match_win = 0;
  int matches = 0;
  int game_win = 0;
  int games = 0;
  int shots_on_target = 0;
  int hits = 0;
  int misses = 0;
  std::array<int, 3> zone_hits{};
  std::array<int, 3> zone_misses{};
  int rallies = 0;
  int balls_sent = 0;
  int balls_approaching = 0;
  int goals = 0;

  [[nodiscard]] int left_hits() const noexcept { return zone_hits[0]; }
  [[nodiscard]] int middle_hits() const noexcept { return zone_hits[1]; }
  [[nodiscard]] int right_hits() const noexcept { return zone_hits[2]; }

  // Rates are empty when their denominator is zero.
  [[nodiscard]] std::optional<double> match_win_rate() const noexcept;
  [[nodiscard]] std::optional<double> game_win_rate() const noexcept;
  [[nodiscard]] std::optional<double> shots_on_target_rate() const noexcept;
  [[nodiscard]] std::optional<double> hit_rate() const noexcept;
  [[nodiscard]] std::optional<double> zone_hit_rate(Third t) const noexcept;

  friend bool operator==(const PlayerStats&, const PlayerStats&) = default;
};

/// Fold state: the counters plus what the fold needs to attribute later
/// events (who touched the ball last, whose approach is still open).
struct MatchStats {
  std::array<PlayerStats, 2> players;
  std::optional<Tick> last_tick;
  std::optional<PlayerId> last_hitter;
  bool shot_counted = false;
  std::array<bool, 2> approaching{};
  /// Score reported by the most recent announcement or game end.
  std::array<int, 2> score{};

  [[nodiscard]] const PlayerStats& of(PlayerId p) const noexcept { return players[index_of(p)]; }

  friend bool operator==(const MatchStats&, const MatchStats&) = default;
};

/// Folds one event into `stats`. Throws std::invalid_argument when the event's
/// tick is earlier than the previous event's.
MatchStats accumulate(MatchStats stats, const Event& event, const MetricsConfig& cfg);

MatchStats accumulate_all(const EventLog& log, const MetricsConfig& cfg);

/// 100 * max_hr / (220 - age). Throws std::domain_error for age >= 220 and
/// std::invalid_argument for a non-positive age or heart rate.
double max_hr_percent(double measured_max_hr, double age);

struct Row {
  std::string name;
  std::array<std::string, 2> values;
};

/// Measurement rows in the canonical order; rates as percentages with two
/// decimals, "-" when undefined.
std::vector<Row> table_rows(const MatchStats& stats);

/// Aligned plain-text table with one column per player.
std::string format_table(const MatchStats& stats);

}  // namespace showdown::metrics
