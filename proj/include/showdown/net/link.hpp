#pragma once

/// @file link.hpp
/// @brief Seeded network link simulator: delay, jitter and loss.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "showdown/events.hpp"

namespace showdown::net {

struct LinkModel {
  double one_way_delay_ms = 0.0;
  double jitter_ms = 0.0;
  double loss_rate = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(one_way_delay_ms >= 0.0) || !(jitter_ms >= 0.0)) {
      throw std::invalid_argument("link delay and jitter must be non-negative");
    }
    if (!(loss_rate >= 0.0 && loss_rate < 1.0)) {
      throw std::invalid_argument("loss rate must lie in [0, 1)");
    }
  }

  friend bool operator==(const LinkModel&, const LinkModel&) = default;
};

template <class T>
struct Timed {
  Tick tick = 0;
  T msg;
  friend bool operator==(const Timed&, const Timed&) = default;
};

/// One direction of a link. Messages leave in send order; each is lost with
/// the configured probability or delivered after the delay plus a uniform
/// jitter draw, never before an earlier message.
template <class T>
class Link {
 public:
  explicit Link(const LinkModel& model) : model_(model), rng_(model.seed) { model.validate(); }

  void send(Tick now, T msg) {
    std::bernoulli_distribution lost(model_.loss_rate);
    std::uniform_real_distribution<double> jitter(0.0, model_.jitter_ms);
    const bool drop = lost(rng_);
    const double ms = model_.one_way_delay_ms + (model_.jitter_ms > 0.0 ? jitter(rng_) : 0.0);
    ++sent_;
    if (drop) return;
    const auto delay = static_cast<Tick>(std::lround(ms * kTickRate / 1000.0));
    last_ = std::max<Tick>(last_, now + delay);
    queue_.push_back({last_, std::move(msg)});
  }

  /// Messages due at or before `now`, in send order.
  std::vector<Timed<T>> poll(Tick now) {
    std::vector<Timed<T>> out;
    while (!queue_.empty() && queue_.front().tick <= now) {
      out.push_back(std::move(queue_.front()));
      queue_.pop_front();
    }
    delivered_ += out.size();
    return out;
  }

  [[nodiscard]] std::size_t in_flight() const noexcept { return queue_.size(); }
  [[nodiscard]] std::size_t sent() const noexcept { return sent_; }
  [[nodiscard]] std::size_t delivered() const noexcept { return delivered_; }

 private:
  LinkModel model_;
  std::mt19937_64 rng_;
  std::deque<Timed<T>> queue_;
  Tick last_ = 0;
  std::size_t sent_ = 0;
  std::size_t delivered_ = 0;
};

/// Delivery schedule for a batch of sends given in tick order.
template <class T>
std::vector<Timed<T>> link_deliver(const LinkModel& model, const std::vector<Timed<T>>& sent) {
  for (std::size_t i = 1; i < sent.size(); ++i) {
    if (sent[i].tick < sent[i - 1].tick) throw std::invalid_argument("sends must be in tick order");
  }
  Link<T> link(model);
  for (const auto& s : sent) link.send(s.tick, s.msg);
  return link.poll(std::numeric_limits<Tick>::max());
}

}  // namespace showdown::net
