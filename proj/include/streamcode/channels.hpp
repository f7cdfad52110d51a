#ifndef STREAMCODE_CHANNELS_HPP
#define STREAMCODE_CHANNELS_HPP

// Erasure processes. Each step first reports the erasure decision for the
// current slot from the current state, then transitions.
//
// Markov channels draw exactly two uniforms per slot (erasure, transition)
// whatever the state, so runs that differ only in eps see the same state path
// and nested erasure sets, and Fritchman with M = 1 replays GE exactly.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "streamcode/random.hpp"

namespace streamcode {

enum class ChannelType { GilbertElliott, Fritchman, Periodic, Trace };

struct GEConfig {
  double alpha = 0;  // good -> bad
  double beta = 1;   // bad -> good
  double eps = 0;    // erasure probability in the good state
};

struct FritchmanConfig {
  double alpha = 0;
  double beta = 1;
  double eps = 0;
  int M = 1;  // number of bad states
};

struct ChannelConfig {
  ChannelType type = ChannelType::GilbertElliott;
  double alpha = 0, beta = 1, eps = 0;
  int M = 1;
  int period = 1, burst = 0;
  std::vector<std::int64_t> trace;  // erased slots for Trace

  static ChannelConfig ge(double alpha, double beta, double eps) {
    ChannelConfig c;
    c.type = ChannelType::GilbertElliott;
    c.alpha = alpha;
    c.beta = beta;
    c.eps = eps;
    return c;
  }
  static ChannelConfig fritchman(double alpha, double beta, double eps, int M) {
    ChannelConfig c = ge(alpha, beta, eps);
    c.type = ChannelType::Fritchman;
    c.M = M;
    return c;
  }
  static ChannelConfig periodic(int period, int burst) {
    ChannelConfig c;
    c.type = ChannelType::Periodic;
    c.period = period;
    c.burst = burst;
    return c;
  }
  static ChannelConfig from_trace(std::vector<std::int64_t> slots) {
    ChannelConfig c;
    c.type = ChannelType::Trace;
    c.trace = std::move(slots);
    return c;
  }

  void validate() const {
    auto prob = [](double p, const char* name) {
      if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
    };
    prob(alpha, "alpha");
    prob(beta, "beta");
    prob(eps, "eps");
    if (M < 1) throw std::invalid_argument("M must be >= 1");
    if (type == ChannelType::Periodic && (period < 1 || burst < 0 || burst > period))
      throw std::invalid_argument("periodic channel needs period >= 1 and 0 <= burst <= period");
  }
};

/// Good state 0 and bad states 1..M. In the good state a slot is erased with
/// probability eps; bad-state slots are always erased.
class MarkovErasureChannel {
 public:
  MarkovErasureChannel(double alpha, double beta, double eps, int M, std::uint64_t seed)
      : alpha_(alpha), beta_(beta), eps_(eps), m_(M), rng_(seed) {
    if (M < 1) throw std::invalid_argument("M must be >= 1");
  }

  int state() const { return state_; }
  bool in_bad_state() const { return state_ != 0; }

  bool step() {
    const double u_erase = rng_.uniform();
    const double u_move = rng_.uniform();
    const bool erased = state_ != 0 || u_erase < eps_;
    if (state_ == 0) {
      if (u_move < alpha_) state_ = 1;
    } else if (u_move < beta_) {
      state_ = state_ == m_ ? 0 : state_ + 1;
    }
    return erased;
  }

 private:
  double alpha_, beta_, eps_;
  int m_;
  Rng rng_;
  int state_ = 0;
};

inline MarkovErasureChannel make_ge_channel(const GEConfig& c, std::uint64_t seed) {
  return {c.alpha, c.beta, c.eps, 1, seed};
}

inline MarkovErasureChannel make_fritchman_channel(const FritchmanConfig& c, std::uint64_t seed) {
  return {c.alpha, c.beta, c.eps, c.M, seed};
}

/// Erases slots with t mod period < burst.
class PeriodicChannel {
 public:
  PeriodicChannel(int period, int burst) : period_(period), burst_(burst) {
    if (period < 1 || burst < 0) throw std::invalid_argument("bad periodic channel parameters");
  }
  bool step() { return (t_++ % period_) < burst_; }

 private:
  std::int64_t period_, burst_, t_ = 0;
};

/// Replays a fixed list of erased slots.
class TraceChannel {
 public:
  explicit TraceChannel(std::vector<std::int64_t> erased) : erased_(std::move(erased)) {
    std::sort(erased_.begin(), erased_.end());
  }
  bool step() {
    while (pos_ < erased_.size() && erased_[pos_] < t_) ++pos_;
    const bool e = pos_ < erased_.size() && erased_[pos_] == t_;
    ++t_;
    return e;
  }

 private:
  std::vector<std::int64_t> erased_;
  std::size_t pos_ = 0;
  std::int64_t t_ = 0;
};

/// Any configured channel behind one step function.
class Channel {
 public:
  Channel(const ChannelConfig& cfg, std::uint64_t seed)
      : type_(cfg.type),
        markov_(cfg.alpha, cfg.beta, cfg.eps, cfg.type == ChannelType::Fritchman ? cfg.M : 1, seed),
        periodic_(std::max(cfg.period, 1), std::max(cfg.burst, 0)),
        trace_(cfg.trace) {
    cfg.validate();
  }

  bool step() {
    switch (type_) {
      case ChannelType::GilbertElliott:
      case ChannelType::Fritchman: return markov_.step();
      case ChannelType::Periodic: return periodic_.step();
      case ChannelType::Trace: return trace_.step();
    }
    return false;
  }

 private:
  ChannelType type_;
  MarkovErasureChannel markov_;
  PeriodicChannel periodic_;
  TraceChannel trace_;
};

}  // namespace streamcode

#endif  // STREAMCODE_CHANNELS_HPP
