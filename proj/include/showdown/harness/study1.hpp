#pragma once

/// @file study1.hpp
/// @brief Route localization trials: a listener hears a ball roll along one
/// of twelve routes and reports its start zone, end zone and direction.

#include <string>
#include <vector>

#include "showdown/harness/config.hpp"
#include "showdown/route.hpp"

namespace showdown::harness {

/// Williams design for n conditions: every condition appears once per row
/// and column, and for even n every ordered pair is adjacent exactly once.
std::vector<std::vector<int>> williams_square(int n);

/// Trial order for one session: three passes over the six departures, then
/// three over the six arrivals, each pass ordered by a row of the Williams
/// square chosen by `session`.
std::vector<audio::RouteLabel> session_order(int session);

struct Category {
  std::string name;
  int correct = 0;
  int total = 0;
  [[nodiscard]] double accuracy() const noexcept;
};

struct StudyRun {
  std::string label;
  int trials = 0;
  int correct = 0;
  /// Whole-route accuracy by direction: departure, arrival.
  std::vector<Category> by_direction;
  /// Reported points by side: own side, opponent's side.
  std::vector<Category> by_side;
  /// Reported points by role: start, end.
  std::vector<Category> by_point;
  [[nodiscard]] double accuracy() const noexcept;
  /// Point-level accuracy over both reported points of every trial.
  [[nodiscard]] double point_accuracy() const noexcept;
};

struct Study1Report {
  StudyRun noiseless;
  StudyRun noisy;
  double seconds = 0.0;
};

/// One noiseless session of 36 trials, then cfg.study.noisy_trials trials
/// with Gaussian cue noise, cycling sessions of 36.
Study1Report run_study1(const RunConfig& cfg);

/// Weighted mean of category accuracies by their totals.
double weighted_mean(const std::vector<Category>& categories);

std::string study1_json(const Study1Report& report);
std::string study1_table(const Study1Report& report);

}  // namespace showdown::harness
