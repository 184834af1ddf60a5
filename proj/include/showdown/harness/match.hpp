#pragma once

/// @file match.hpp
/// @brief Headless matches between scripted bots and the agent.

#include <optional>
#include <stdexcept>
#include <string>

#include "showdown/harness/config.hpp"
#include "showdown/harness/replay.hpp"
#include "showdown/metrics.hpp"

namespace showdown::harness {

struct MatchOptions {
  /// Build the JSONL replay log.
  bool write_log = true;
  /// Keep the full event list in the result.
  bool keep_events = true;
};

struct MatchResult {
  std::string log;
  EventLog events;
  metrics::MatchStats stats;
  Tick ticks = 0;
  PlayerId winner = PlayerId::A;
  std::array<int, 2> games{};
  net::InputCounters counters;
  /// Messages handed to and delivered by the simulated links, both directions.
  std::size_t link_sent = 0;
  std::size_t link_delivered = 0;
};

/// The match did not finish within the tick limit.
class MatchTimeout : public std::runtime_error {
 public:
  MatchTimeout(Tick limit, std::string partial_log);
  /// Log up to the limit, closed with a timeout end line.
  [[nodiscard]] const std::string& partial_log() const noexcept { return log_; }

 private:
  std::string log_;
};

/// Plays one best-of-three match. In pva mode a bot plays A against the
/// agent; in bots mode two bots play. With a link configured, bots see only
/// decoded snapshots and reach the server only through encoded inputs.
/// Throws MatchTimeout when cfg.tick_limit passes first.
MatchResult run_bot_match(const RunConfig& cfg, const MatchOptions& options = {});

/// Writes the stats as a JSON object.
std::string stats_json(const metrics::MatchStats& stats);

}  // namespace showdown::harness
