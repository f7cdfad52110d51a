#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "test_support.hpp"

using namespace streamcode;
using namespace streamcode::testing;

namespace {

SweepConfig small_sweep(int threads) {
  SweepConfig cfg;
  cfg.codes = {{"A", construct_a(ParamSet(2, 4, 6), 1)},
               {"B", construct_b(ParamSet(2, 4, 6))},
               {"MDS", construct_mds_code(8, 5)},
               {"REP", construct_repetition_code(6)}};
  cfg.channel = ChannelConfig::ge(0.01, 0.5, 0);
  cfg.eps_values = {0.0, 0.01, 0.05, 0.1};
  cfg.trials = 20000;
  cfg.seed = 11;
  cfg.threads = threads;
  return cfg;
}

}  // namespace

TEST(RunPoint, CleanChannelLosesNothing) {
  for (const auto& spec : {construct_a(ParamSet(4, 8, 11), 1), construct_c(ParamSet(4, 8, 11)), construct_mds_code(12, 6),
                           construct_repetition_code(11)}) {
    PointOptions opt;
    opt.trials = 5000;
    const SimResult r = run_point(spec, ChannelConfig::ge(0, 0.5, 0), opt);
    EXPECT_EQ(r.lost, 0) << spec.name();
    EXPECT_EQ(r.total, 5000);
  }
}

TEST(RunPoint, AdmissibleTraceLosesNothing) {
  // Bursts of b separated by guards of tau + 1 - a slots stay admissible.
  const CodeSpec spec = construct_b(ParamSet(3, 8, 14));
  std::vector<std::int64_t> slots;
  for (std::int64_t start = 20; start < 2000; start += spec.params.b + spec.params.tau + 1 - spec.params.a)
    for (int j = 0; j < spec.params.b; ++j) slots.push_back(start + j);
  PointOptions opt;
  opt.trials = 2000;
  EXPECT_EQ(run_point(spec, ChannelConfig::from_trace(slots), opt).lost, 0);
}

TEST(RunPoint, LongBurstLosesPackets) {
  const CodeSpec spec = construct_a(ParamSet(2, 4, 6), 1);
  std::vector<std::int64_t> slots;
  for (int t = 100; t < 110; ++t) slots.push_back(t);
  PointOptions opt;
  opt.trials = 500;
  std::vector<std::int64_t> lost;
  opt.lost_times = &lost;
  const SimResult r = run_point(spec, ChannelConfig::from_trace(slots), opt);
  EXPECT_GT(r.lost, 0);
  for (auto t : lost) {
    EXPECT_GE(t, 100);
    EXPECT_LT(t, 110);
  }
}

TEST(ClosedForm, TwoOneCodeIsEpsSquared) {
  // [2,1]: x(t) is lost iff it and its single parity partner x(t+1) are erased.
  for (double eps : {0.1, 0.3, 0.7}) EXPECT_NEAR(mds_memoryless_loss(2, 1, eps), eps * eps, 1e-15);
}

TEST(ClosedForm, MemorylessMdsLossWithinThreeSigma) {
  for (auto [n, k, eps] : {std::tuple{12, 6, 0.3}, std::tuple{8, 5, 0.15}, std::tuple{4, 2, 0.2}}) {
    SCOPED_TRACE(::testing::Message() << n << "," << k << " eps=" << eps);
    const CodeSpec spec = construct_mds_code(n, k);
    PointOptions opt;
    opt.trials = 100000;
    opt.channel_seed = 5;
    std::vector<std::int64_t> lost;
    opt.lost_times = &lost;
    const SimResult r = run_point(spec, ChannelConfig::ge(0, 0.5, eps), opt);
    // Losses are dependent across nearby slots, so sigma comes from batch means.
    const int batches = 100;
    const std::int64_t per = opt.trials / batches, warmup = n;
    std::vector<double> rate(batches, 0);
    for (auto t : lost) rate[static_cast<std::size_t>((t - warmup) / per)] += 1.0 / static_cast<double>(per);
    double mean = 0, var = 0;
    for (double v : rate) mean += v / batches;
    for (double v : rate) var += (v - mean) * (v - mean) / (batches - 1);
    const double expected = mds_memoryless_loss(n, k, eps);
    EXPECT_NEAR(mean, r.loss_probability, 1e-12);
    EXPECT_LT(z_score(r.loss_probability, expected, var / batches), 3.0) << "expected " << expected;
  }
}

TEST(Sweep, ReproducibleAcrossRunsAndThreadCounts) {
  const std::string one = results_to_csv(run_sweep(small_sweep(1)));
  EXPECT_EQ(one, results_to_csv(run_sweep(small_sweep(1))));
  EXPECT_EQ(one, results_to_csv(run_sweep(small_sweep(4))));
  EXPECT_EQ(one.substr(0, one.find('\n')), "code,construction,eps,trials,lost,total,loss_prob,seed");
}

TEST(Sweep, LossIsMonotoneInEps) {
  const auto rows = run_sweep(small_sweep(0));
  const std::size_t per_code = 4;
  ASSERT_EQ(rows.size(), 4 * per_code);
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t i = 1; i < per_code; ++i)
      EXPECT_LE(rows[c * per_code + i - 1].lost, rows[c * per_code + i].lost) << rows[c * per_code].code;
  }
}

TEST(Sweep, PropagatesWorkerErrors) {
  SweepConfig cfg = small_sweep(2);
  cfg.eps_values = {0.1, 2.0};
  EXPECT_THROW(run_sweep(cfg), std::invalid_argument);
  cfg.eps_values = {0.1};
  cfg.trials = 0;
  EXPECT_THROW(run_sweep(cfg), std::invalid_argument);
}

TEST(Wilson, KnownProperties) {
  const Interval z = wilson_interval(0, 1000);
  EXPECT_NEAR(z.lo, 0.0, 1e-15);
  EXPECT_GT(z.hi, 0.0);
  const Interval h = wilson_interval(500, 1000);
  EXPECT_NEAR(h.lo + h.hi, 1.0, 1e-12);
  // Half-width approaches z * sqrt(p(1-p)/n) for large n.
  const Interval big = wilson_interval(100000, 1000000);
  EXPECT_NEAR((big.hi - big.lo) / 2, 1.959963984540054 * std::sqrt(0.1 * 0.9 / 1e6), 1e-7);
  EXPECT_LT(wilson_interval(10, 100).hi, wilson_interval(20, 100).hi);
}

TEST(RegimeMap, MembershipMatchesWorkedExamples) {
  const std::string csv = regime_map_csv(20);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "a,b,tau,A,B,C,D");
  int rows = 0;
  std::map<std::string, std::string> tags;
  while (std::getline(in, line)) {
    ++rows;
    const auto p3 = line.find(',', line.find(',', line.find(',') + 1) + 1);
    tags[line.substr(0, p3)] = line.substr(p3 + 1);
    EXPECT_EQ(line[p3 + 1], '1');
  }
  EXPECT_EQ(rows, 1540);  // sum over tau of tau(tau+1)/2
  EXPECT_EQ(tags.at("2,6,13").substr(4, 1), "1");
  EXPECT_EQ(tags.at("3,5,11").substr(6, 1), "1");
  EXPECT_EQ(tags.at("3,8,14").substr(2, 1), "1");
  EXPECT_THROW(regime_map_csv(0), std::invalid_argument);
}

TEST(SweepJson, ParsesCodesAndChannels) {
  const auto dir = std::filesystem::temp_directory_path() / "streamcode_sweep_json";
  std::filesystem::create_directories(dir);
  save_spec(construct_b(ParamSet(1, 2, 3)), (dir / "b.json").string());
  {
    std::ofstream(dir / "trace.txt") << "# erased slots\n3 4\n9\n";
  }
  const auto j = nlohmann::json::parse(R"({
    "codes": [{"spec": "b.json", "name": "fromfile"},
              {"construction": "A", "a": 2, "b": 4, "tau": 6, "seed": 3},
              {"construction": "MDS", "n": 12, "k": 6},
              {"construction": "REP", "tau": 11}],
    "channel": {"type": "trace", "file": "trace.txt"},
    "trials": 1000, "seed": 9
  })");
  const SweepConfig cfg = sweep_from_json(j, dir.string());
  ASSERT_EQ(cfg.codes.size(), 4u);
  EXPECT_EQ(cfg.codes[0].name, "fromfile");
  EXPECT_EQ(cfg.codes[0].spec.tag, ConstructionTag::B);
  EXPECT_EQ(cfg.codes[1].spec.seed, 3u);
  EXPECT_EQ(cfg.codes[2].spec.n(), 12);
  EXPECT_TRUE(cfg.codes[3].spec.is_repetition());
  EXPECT_EQ(cfg.channel.trace, (std::vector<std::int64_t>{3, 4, 9}));
  EXPECT_EQ(cfg.trials, 1000);
  EXPECT_EQ(cfg.seed, 9u);

  const auto fr = channel_from_json(nlohmann::json::parse(R"({"type":"fritchman","alpha":1e-4,"beta":0.75,"M":4})"), "");
  EXPECT_EQ(fr.type, ChannelType::Fritchman);
  EXPECT_EQ(fr.M, 4);
  EXPECT_THROW(channel_from_json(nlohmann::json::parse(R"({"type":"rayleigh"})"), ""), std::invalid_argument);
  EXPECT_THROW(channel_from_json(nlohmann::json::parse(R"({"type":"ge","alpha":2,"beta":0.5})"), ""), std::invalid_argument);
  EXPECT_ANY_THROW(sweep_from_json(nlohmann::json::parse(R"({"codes":[]})")));
  std::filesystem::remove_all(dir);
}
