#ifndef STREAMCODE_SIMULATION_HPP
#define STREAMCODE_SIMULATION_HPP

// Monte Carlo packet-loss measurement: random messages -> encoder -> channel
// -> decoder, counting message packets not recovered by their deadline.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "streamcode/channels.hpp"
#include "streamcode/code_spec.hpp"
#include "streamcode/code_spec_json.hpp"
#include "streamcode/constructions.hpp"
#include "streamcode/random.hpp"
#include "streamcode/stream_codec.hpp"

namespace streamcode {

struct PointOptions {
  std::int64_t trials = 1'000'000;
  /// Leading slots excluded from loss accounting; negative means n of the code.
  std::int64_t warmup = -1;
  std::uint64_t channel_seed = 1;
  std::uint64_t message_seed = 2;
  DecodePolicy policy = DecodePolicy::AtDeadline;
  /// When set, receives the times of lost packets inside the counted range.
  std::vector<std::int64_t>* lost_times = nullptr;
};

struct SimResult {
  std::string code;
  std::string construction;
  double eps = 0;
  std::int64_t trials = 0;
  std::int64_t lost = 0;
  std::int64_t total = 0;
  double loss_probability = 0;
  std::uint64_t seed = 0;
  double wall_time = 0;  // seconds; not written to CSV
};

/// Streams warmup + trials + tau packets through one code and channel and
/// counts losses among packets [warmup, warmup + trials). Every delivered
/// packet is checked against what was sent.
inline SimResult run_point(const CodeSpec& spec, const ChannelConfig& channel, const PointOptions& opt) {
  if (opt.trials < 1) throw std::invalid_argument("trials must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  const int n = spec.n(), k = spec.k(), tau = spec.tau();
  const std::int64_t warmup = opt.warmup < 0 ? n : opt.warmup;
  const std::int64_t end = warmup + opt.trials;
  StreamEncoder enc(spec);
  StreamDecoder dec(spec, opt.policy);
  Channel ch(channel, opt.channel_seed);
  Rng msg_rng(opt.message_seed);
  const auto mask = static_cast<Symbol>(spec.field->order() - 1);
  std::vector<Symbol> sent(static_cast<std::size_t>((tau + 1) * k), 0);
  std::vector<Symbol> s(static_cast<std::size_t>(k));
  std::int64_t lost = 0;
  auto check = [&](const DecodeOutput& out) {
    for (const auto& d : out.delivered) {
      const auto base = static_cast<std::size_t>((d.time % (tau + 1)) * k);
      for (int j = 0; j < k; ++j)
        if (d.symbols[static_cast<std::size_t>(j)] != sent[base + static_cast<std::size_t>(j)])
          throw std::logic_error("decoder delivered a wrong symbol");
    }
    for (std::int64_t t : out.lost)
      if (t >= warmup && t < end) {
        ++lost;
        if (opt.lost_times) opt.lost_times->push_back(t);
      }
  };
  // The channel keeps running tau slots past the counted range so the last
  // counted packets see real arrivals up to their deadlines.
  for (std::int64_t t = 0; t < end + tau; ++t) {
    for (auto& v : s) v = static_cast<Symbol>(msg_rng.next()) & mask;
    std::copy(s.begin(), s.end(), sent.begin() + (t % (tau + 1)) * k);
    const auto x = enc.encode_step(s);
    const bool erased = ch.step();
    check(dec.decode_step(erased ? std::nullopt : std::optional<std::span<const Symbol>>(x)));
  }
  check(dec.finish());
  SimResult r;
  r.code = spec.name();
  r.construction = to_string(spec.tag);
  r.eps = channel.eps;
  r.trials = opt.trials;
  r.lost = lost;
  r.total = opt.trials;
  r.loss_probability = static_cast<double>(lost) / static_cast<double>(opt.trials);
  r.seed = opt.channel_seed;
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

struct Interval {
  double lo = 0, hi = 0;
};

/// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::int64_t successes, std::int64_t total, double z = 1.959963984540054) {
  if (total <= 0) return {0, 1};
  const double nn = static_cast<double>(total), p = static_cast<double>(successes) / nn, z2 = z * z;
  const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

struct CodeEntry {
  std::string name;
  CodeSpec spec;
};

struct SweepConfig {
  std::vector<CodeEntry> codes;
  ChannelConfig channel;
  std::vector<double> eps_values;
  std::int64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  /// Negative: the largest n among the codes, so every code counts the same slots.
  std::int64_t warmup = -1;
  int threads = 0;  // 0 = hardware concurrency
};

/// One result per (code, eps), code-major. All points share one channel seed,
/// so every code and every eps sees the same channel randomness.
inline std::vector<SimResult> run_sweep(const SweepConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (cfg.codes.empty()) throw std::invalid_argument("sweep needs at least one code");
  std::vector<double> eps = cfg.eps_values;
  if (eps.empty()) eps.push_back(cfg.channel.eps);
  for (double e : eps)
    if (!(e >= 0 && e <= 1)) throw std::invalid_argument("eps values must lie in [0, 1]");
  std::int64_t warmup = cfg.warmup;
  if (warmup < 0)
    for (const auto& c : cfg.codes) warmup = std::max<std::int64_t>(warmup, c.spec.n());
  const std::uint64_t channel_seed = derive_seed(cfg.seed, 0);
  const std::size_t points = cfg.codes.size() * eps.size();
  std::vector<SimResult> results(points);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points; i = next++) {
      const auto& code = cfg.codes[i / eps.size()];
      ChannelConfig ch = cfg.channel;
      ch.eps = eps[i % eps.size()];
      PointOptions opt;
      opt.trials = cfg.trials;
      opt.warmup = warmup;
      opt.channel_seed = channel_seed;
      opt.message_seed = derive_seed(cfg.seed, 1 + i);
      results[i] = run_point(code.spec, ch, opt);
      results[i].code = code.name;
    }
  };
  unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, points));
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mu;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      try {
        worker();
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = points;
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

inline std::string format_double(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

inline std::string results_to_csv(const std::vector<SimResult>& rows) {
  std::string out = "code,construction,eps,trials,lost,total,loss_prob,seed\n";
  for (const auto& r : rows) {
    out += r.code + "," + r.construction + "," + format_double(r.eps, "%.6g") + "," + std::to_string(r.trials) + "," +
           std::to_string(r.lost) + "," + std::to_string(r.total) + "," + format_double(r.loss_probability, "%.9e") +
           "," + std::to_string(r.seed) + "\n";
  }
  return out;
}

/// CSV of every {a <= b <= tau <= tau_max} with the constructions that apply.
inline std::string regime_map_csv(int tau_max) {
  if (tau_max < 1) throw std::invalid_argument("tau_max must be >= 1");
  std::string out = "a,b,tau,A,B,C,D\n";
  for (int tau = 1; tau <= tau_max; ++tau)
    for (int b = 1; b <= tau; ++b)
      for (int a = 1; a <= b; ++a) {
        const ParamSet p(a, b, tau);
        out += std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(tau) + ",1," +
               (in_regime_b(p) ? "1" : "0") + "," + (in_regime_c(p) ? "1" : "0") + "," + (in_regime_d(p) ? "1" : "0") +
               "\n";
      }
  return out;
}

namespace detail {

inline std::string resolve_path(const std::string& path, const std::string& base_dir) {
  if (path.empty() || path.front() == '/' || base_dir.empty()) return path;
  return base_dir + "/" + path;
}

inline std::vector<std::int64_t> read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read trace file " + path);
  std::vector<std::int64_t> slots;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::int64_t v;
    while (ls >> v) slots.push_back(v);
  }
  return slots;
}

}  // namespace detail

/// Parses an erasure trace: whitespace-separated erased slot indices, '#' comments.
inline std::vector<std::int64_t> load_trace(const std::string& path) { return detail::read_trace_file(path); }

inline CodeEntry code_entry_from_json(const nlohmann::json& j, const std::string& base_dir) {
  CodeEntry e;
  if (j.contains("spec")) {
    e.spec = load_spec(detail::resolve_path(j.at("spec").get<std::string>(), base_dir));
  } else {
    const ConstructionTag tag = tag_from_string(j.at("construction").get<std::string>());
    if (tag == ConstructionTag::MdsBaseline) {
      e.spec = construct_mds_code(j.at("n").get<int>(), j.at("k").get<int>());
    } else if (tag == ConstructionTag::RepetitionBaseline) {
      e.spec = construct_repetition_code(j.at("tau").get<int>());
    } else {
      const ParamSet p(j.at("a").get<int>(), j.at("b").get<int>(), j.at("tau").get<int>());
      e.spec = construct(tag, p, j.value("seed", std::uint64_t{1}), j.value("max_retries", 1000));
    }
  }
  e.name = j.value("name", to_string(e.spec.tag));
  return e;
}

inline ChannelConfig channel_from_json(const nlohmann::json& j, const std::string& base_dir) {
  const std::string type = j.at("type").get<std::string>();
  ChannelConfig c;
  if (type == "ge") {
    c = ChannelConfig::ge(j.at("alpha").get<double>(), j.at("beta").get<double>(), j.value("eps", 0.0));
  } else if (type == "fritchman") {
    c = ChannelConfig::fritchman(j.at("alpha").get<double>(), j.at("beta").get<double>(), j.value("eps", 0.0),
                                 j.at("M").get<int>());
  } else if (type == "periodic") {
    c = ChannelConfig::periodic(j.at("period").get<int>(), j.at("burst").get<int>());
  } else if (type == "trace") {
    if (j.contains("slots"))
      c = ChannelConfig::from_trace(j.at("slots").get<std::vector<std::int64_t>>());
    else
      c = ChannelConfig::from_trace(detail::read_trace_file(detail::resolve_path(j.at("file").get<std::string>(), base_dir)));
  } else {
    throw std::invalid_argument("unknown channel type: " + type);
  }
  c.validate();
  return c;
}

/// Relative paths inside the config resolve against base_dir.
inline SweepConfig sweep_from_json(const nlohmann::json& j, const std::string& base_dir = "") {
  SweepConfig cfg;
  for (const auto& c : j.at("codes")) cfg.codes.push_back(code_entry_from_json(c, base_dir));
  cfg.channel = channel_from_json(j.at("channel"), base_dir);
  if (j.contains("eps_values")) cfg.eps_values = j.at("eps_values").get<std::vector<double>>();
  cfg.trials = j.value("trials", std::int64_t{1'000'000});
  cfg.seed = j.value("seed", std::uint64_t{1});
  cfg.warmup = j.value("warmup", std::int64_t{-1});
  cfg.threads = j.value("threads", 0);
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  for (double e : cfg.eps_values)
    if (!(e >= 0 && e <= 1)) throw std::invalid_argument("eps values must lie in [0, 1]");
  return cfg;
}

}  // namespace streamcode

#endif  // STREAMCODE_SIMULATION_HPP
