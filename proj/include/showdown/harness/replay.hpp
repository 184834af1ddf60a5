#pragma once

/// @file replay.hpp
/// @brief Replay log (JSONL) writing, parsing and validation.
///
/// A log is a header line with the full run configuration, then per tick the
/// racket states of input-driven players whenever they change and the events
/// of that tick, then an end line:
///
///   {"type":"header","format":1,"config":{"run.mode":"pva",...}}
///   {"type":"racket","tick":12,"player":"A","tip":[x,y],"normal":[x,y],"tip_vel":[x,y],"trigger":false}
///   {"type":"event","event":{"tick":12,"kind":"wall_hit",...}}
///   {"type":"end","tick":9000,"status":"finished"}
///
/// Everything is world frame. A racket line for tick t holds from tick t on.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "showdown/harness/config.hpp"

namespace showdown::harness {

inline constexpr int kReplayFormat = 1;

class ReplayError : public std::runtime_error {
 public:
  ReplayError(std::size_t line, const std::string& what);
  /// 1-based line number.
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct RacketLine {
  Tick tick = 0;
  PlayerId player = PlayerId::A;
  physics::RacketState racket;
  friend bool operator==(const RacketLine&, const RacketLine&) = default;
};

enum class EndStatus : std::uint8_t { Finished, Timeout };

struct ReplayEnd {
  Tick tick = 0;
  EndStatus status = EndStatus::Finished;
  friend bool operator==(const ReplayEnd&, const ReplayEnd&) = default;
};

struct ReplayLog {
  std::optional<RunConfig> config;
  std::vector<RacketLine> rackets;
  EventLog events;
  std::optional<ReplayEnd> end;
};

std::string header_line(const RunConfig& cfg);
std::string racket_line(Tick tick, PlayerId player, const physics::RacketState& racket);
std::string event_line(const Event& e);
std::string end_line(const ReplayEnd& end);

/// Throws ReplayError naming the first bad line.
ReplayLog parse_replay(std::string_view text);

struct Check {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct RulesExpectations {
  rules::RulesConfig rules;
  Tick game_over_pause_ticks = 300;
  /// Require a MatchEnded event.
  bool require_finished = true;
};

/// Rule invariants over one match's event stream: tick order, score parity
/// and steps, winners on exactly the target, the goal pause, serve turns in
/// pairs and a consistent match result.
std::vector<Check> check_rules(const EventLog& events, const RulesExpectations& expect);

struct ReplayReport {
  std::size_t lines = 0;
  std::size_t events = 0;
  std::vector<Check> checks;
  [[nodiscard]] bool passed() const noexcept;
};

/// Rule invariants plus a full re-simulation from the header configuration
/// and the logged rackets, which must reproduce every logged event.
ReplayReport validate_replay(std::string_view text);

/// Re-runs the match recorded in `log` and returns the events it produces
/// up to the end tick.
EventLog resimulate(const ReplayLog& log);

}  // namespace showdown::harness
