#include "showdown/harness/study1.hpp"

#include <chrono>
#include <cstdio>
#include <random>

#include "showdown/net/json.hpp"
#include "showdown/seed.hpp"

namespace showdown::harness {
namespace {

std::vector<Category> categories(std::initializer_list<const char*> names) {
  std::vector<Category> out;
  for (const char* n : names) out.push_back({n, 0, 0});
  return out;
}

void tally(Category& c, bool ok) {
  ++c.total;
  c.correct += ok ? 1 : 0;
}

StudyRun fresh(std::string label) {
  StudyRun r;
  r.label = std::move(label);
  r.by_direction = categories({"departure", "arrival"});
  r.by_side = categories({"own side", "opponent side"});
  r.by_point = categories({"start", "end"});
  return r;
}

void score_trial(StudyRun& run, const audio::RouteLabel& truth, const audio::RouteLabel& got) {
  const bool start_ok = got.start_zone == truth.start_zone;
  const bool end_ok = got.end_zone == truth.end_zone;
  const bool dir_ok = got.direction == truth.direction;
  const bool all_ok = start_ok && end_ok && dir_ok;
  ++run.trials;
  run.correct += all_ok ? 1 : 0;
  tally(run.by_direction[truth.direction == audio::RouteDirection::Departure ? 0 : 1], all_ok);
  tally(run.by_point[0], start_ok);
  tally(run.by_point[1], end_ok);
  const bool start_near = is_near(truth.start_zone);
  tally(run.by_side[start_near ? 0 : 1], start_ok);
  tally(run.by_side[start_near ? 1 : 0], end_ok);
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%6.2f%%", 100.0 * v);
  return buf;
}

}  // namespace

std::vector<std::vector<int>> williams_square(int n) {
  if (n < 1) throw std::invalid_argument("square size must be positive");
  // First row 0, 1, n-1, 2, n-2, ...; later rows shift it.
  std::vector<int> base{0};
  for (int k = 1, lo = 1, hi = n - 1; k < n; ++k) base.push_back(k % 2 == 1 ? lo++ : hi--);
  std::vector<std::vector<int>> rows;
  for (int r = 0; r < n; ++r) {
    std::vector<int> row;
    for (int c : base) row.push_back((c + r) % n);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<audio::RouteLabel> session_order(int session) {
  static const auto square = williams_square(6);
  const auto routes = audio::all_routes();
  std::vector<audio::RouteLabel> out;
  for (int block = 0; block < 2; ++block) {
    for (int pass = 0; pass < 3; ++pass) {
      const auto& row = square[static_cast<std::size_t>((session + pass) % 6)];
      for (int c : row) out.push_back(routes[static_cast<std::size_t>(block * 6 + c)]);
    }
  }
  return out;
}

double Category::accuracy() const noexcept {
  return total == 0 ? 0.0 : static_cast<double>(correct) / total;
}

double StudyRun::accuracy() const noexcept {
  return trials == 0 ? 0.0 : static_cast<double>(correct) / trials;
}

double StudyRun::point_accuracy() const noexcept {
  const int total = by_point[0].total + by_point[1].total;
  return total == 0 ? 0.0 : static_cast<double>(by_point[0].correct + by_point[1].correct) / total;
}

double weighted_mean(const std::vector<Category>& cats) {
  double sum = 0.0;
  int total = 0;
  for (const Category& c : cats) {
    sum += c.accuracy() * c.total;
    total += c.total;
  }
  return total == 0 ? 0.0 : sum / total;
}

Study1Report run_study1(const RunConfig& cfg) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  const PlayerId listener = PlayerId::A;
  const audio::RouteClassifier decoder{cfg.table, default_head(cfg.table), cfg.cues,
                                       cfg.study.noise};
  const audio::Listener who{listener, default_head(cfg.table)};
  std::mt19937_64 rng(derive_seed(cfg.seed, SeedStream::Study));

  auto trial = [&](StudyRun& run, const audio::RouteLabel& route, bool noisy) {
    const auto track = audio::route_track(route, listener, cfg.table, cfg.study.speed_mps);
    const auto timed = audio::render_listener_stream({}, track, who, cfg.cues);
    std::vector<audio::BinauralFrame> frames;
    frames.reserve(timed.size());
    for (const auto& f : timed) frames.push_back(f.frame);
    if (noisy) audio::perturb(frames, cfg.study.noise, rng);
    score_trial(run, route, decoder.classify(frames));
  };

  Study1Report report;
  report.noiseless = fresh("noiseless");
  for (const auto& route : session_order(0)) trial(report.noiseless, route, false);

  report.noisy = fresh("noisy");
  for (int i = 0, session = 0; i < cfg.study.noisy_trials; ++session) {
    for (const auto& route : session_order(session)) {
      if (i++ >= cfg.study.noisy_trials) break;
      trial(report.noisy, route, true);
    }
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

std::string study1_json(const Study1Report& report) {
  net::JsonWriter w;
  auto cats = [&](std::string_view key, const std::vector<Category>& list) {
    w.key(key).begin_object();
    for (const Category& c : list) {
      w.key(c.name).begin_object();
      w.key("correct").value(c.correct);
      w.key("total").value(c.total);
      w.key("accuracy").value(c.accuracy());
      w.end_object();
    }
    w.end_object();
  };
  auto run = [&](const StudyRun& r) {
    w.key(r.label).begin_object();
    w.key("trials").value(r.trials);
    w.key("correct").value(r.correct);
    w.key("accuracy").value(r.accuracy());
    w.key("point_accuracy").value(r.point_accuracy());
    cats("direction", r.by_direction);
    cats("side", r.by_side);
    cats("point", r.by_point);
    w.end_object();
  };
  w.begin_object();
  run(report.noiseless);
  run(report.noisy);
  w.key("seconds").value(report.seconds);
  w.end_object();
  return w.take() + "\n";
}

std::string study1_table(const Study1Report& report) {
  std::string out;
  auto line = [&](const std::string& name, const std::string& a, const std::string& b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-22s %16s %16s\n", name.c_str(), a.c_str(), b.c_str());
    out += buf;
  };
  auto frac = [](int c, int t, double acc) {
    return std::to_string(c) + "/" + std::to_string(t) + " " + percent(acc);
  };
  const StudyRun& a = report.noiseless;
  const StudyRun& b = report.noisy;
  line("", "noiseless", "noisy");
  line("Overall", frac(a.correct, a.trials, a.accuracy()), frac(b.correct, b.trials, b.accuracy()));
  auto rows = [&](const std::vector<Category>& x, const std::vector<Category>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      line("  " + x[i].name, frac(x[i].correct, x[i].total, x[i].accuracy()),
           frac(y[i].correct, y[i].total, y[i].accuracy()));
    }
  };
  rows(a.by_direction, b.by_direction);
  line("Points", percent(a.point_accuracy()), percent(b.point_accuracy()));
  rows(a.by_side, b.by_side);
  rows(a.by_point, b.by_point);
  return out;
}

}  // namespace showdown::harness
