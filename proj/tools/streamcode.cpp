// Command-line front end for constructing, auditing, running and simulating
// streaming codes. Exit codes: 0 success, 1 validation failure, 2 bad input.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "streamcode/streamcode.hpp"

using namespace streamcode;

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailed = 1;
constexpr int kBadInput = 2;

struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<unsigned char> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BadInput("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw BadInput("cannot write " + path);
  out << text;
}

void write_bytes(const std::string& path, const std::vector<unsigned char>& bytes) {
  if (path.empty() || path == "-") {
    std::cout.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw BadInput("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

int symbol_bytes(const CodeSpec& spec) { return (spec.field->bits() + 7) / 8; }

// Symbols are little-endian words of symbol_bytes() bytes.
std::vector<Symbol> unpack(const std::vector<unsigned char>& bytes, const CodeSpec& spec, int per_packet) {
  const int w = symbol_bytes(spec);
  const std::size_t frame = static_cast<std::size_t>(w * per_packet);
  if (bytes.size() % frame != 0)
    throw BadInput("input length is not a multiple of " + std::to_string(frame) + " bytes");
  std::vector<Symbol> out(bytes.size() / static_cast<std::size_t>(w));
  for (std::size_t i = 0; i < out.size(); ++i) {
    Symbol v = 0;
    for (int b = 0; b < w; ++b) v |= static_cast<Symbol>(bytes[i * static_cast<std::size_t>(w) + static_cast<std::size_t>(b)]) << (8 * b);
    if (!spec.field->contains(v)) throw BadInput("symbol value outside the code field");
    out[i] = v;
  }
  return out;
}

void pack(std::vector<unsigned char>& out, std::span<const Symbol> symbols, int w) {
  for (Symbol v : symbols)
    for (int b = 0; b < w; ++b) out.push_back(static_cast<unsigned char>((v >> (8 * b)) & 0xFF));
}

CodeSpec load_spec_or_throw(const std::string& path) {
  try {
    return load_spec(path);
  } catch (const std::exception& e) {
    throw BadInput(path + ": " + e.what());
  }
}

int cmd_construct(int a, int b, int tau, const std::string& construction, std::uint64_t seed, int n, int k,
                  int max_retries, const std::string& out) {
  const ConstructionTag tag = tag_from_string(construction);
  CodeSpec spec;
  if (tag == ConstructionTag::MdsBaseline) {
    if (n <= 0 || k <= 0) throw BadInput("MDS baseline needs --n and --k");
    spec = construct_mds_code(n, k);
  } else if (tag == ConstructionTag::RepetitionBaseline) {
    spec = construct_repetition_code(tau);
  } else {
    spec = construct(tag, ParamSet(a, b, tau), seed, max_retries);
  }
  write_text(out, spec_to_string(spec));
  return kOk;
}

ojson condition_json(const ConditionResult& r) {
  ojson j;
  j["ok"] = r.ok;
  if (!r.ok) {
    j["ell"] = r.ell;
    j["columns"] = r.columns;
  }
  return j;
}

int cmd_validate(const std::string& path, bool oracle, const std::string& out) {
  const CodeSpec spec = load_spec_or_throw(path);
  ojson report;
  report["code"] = spec.name();
  if (spec.is_repetition()) {
    // No p-c matrix: check the burst guarantee on the stream directly.
    const int tau = spec.tau();
    StreamEncoder enc(spec);
    StreamDecoder dec(spec);
    bool ok = true;
    for (int t = 0; t < 4 * (tau + 1); ++t) {
      const std::vector<Symbol> s{1};
      const auto x = enc.encode_step(s);
      const bool erased = (t % (2 * tau)) < tau;
      ok &= dec.decode_step(erased ? std::nullopt : std::optional<std::span<const Symbol>>(x)).lost.empty();
    }
    ok &= dec.finish().lost.size() <= static_cast<std::size_t>(tau);
    report["burst_check"] = ok;
    report["ok"] = ok;
    write_text(out, report.dump(2) + "\n");
    return ok ? kOk : kValidationFailed;
  }
  const AuditReport r = check_all(spec, oracle);
  report["B1"] = condition_json(r.b1);
  report["B2"] = condition_json(r.b2);
  report["R1"] = condition_json(r.r1);
  report["R2"] = condition_json(r.r2);
  if (r.oracle) {
    ojson o;
    o["ok"] = r.oracle->ok;
    o["patterns_checked"] = r.oracle->patterns_checked;
    if (!r.oracle->ok) {
      o["pattern"] = r.oracle->pattern;
      o["coordinate"] = r.oracle->coordinate;
    }
    report["oracle"] = o;
  }
  report["ok"] = r.ok();
  write_text(out, report.dump(2) + "\n");
  return r.ok() ? kOk : kValidationFailed;
}

int cmd_encode(const std::string& spec_path, const std::string& in, const std::string& out) {
  const CodeSpec spec = load_spec_or_throw(spec_path);
  const auto msg = unpack(read_bytes(in), spec, spec.k());
  StreamEncoder enc(spec);
  std::vector<unsigned char> bytes;
  const int w = symbol_bytes(spec);
  for (std::size_t off = 0; off < msg.size(); off += static_cast<std::size_t>(spec.k())) {
    const auto x = enc.encode_step(std::span<const Symbol>(msg.data() + off, static_cast<std::size_t>(spec.k())));
    pack(bytes, x, w);
  }
  write_bytes(out, bytes);
  return kOk;
}

int cmd_decode(const std::string& spec_path, const std::string& in, const std::string& erasures,
               const std::string& out, const std::string& report_path) {
  const CodeSpec spec = load_spec_or_throw(spec_path);
  const auto coded = unpack(read_bytes(in), spec, spec.n());
  const std::int64_t packets = static_cast<std::int64_t>(coded.size()) / spec.n();
  std::vector<std::int64_t> erased;
  if (!erasures.empty()) {
    try {
      erased = load_trace(erasures);
    } catch (const std::exception& e) {
      throw BadInput(e.what());
    }
  }
  TraceChannel channel(erased);
  StreamDecoder dec(spec);
  const int k = spec.k(), w = symbol_bytes(spec);
  std::vector<Symbol> message(static_cast<std::size_t>(packets * k), 0);
  std::vector<std::int64_t> lost;
  std::int64_t erased_count = 0;
  auto collect = [&](const DecodeOutput& o) {
    for (const auto& d : o.delivered)
      if (d.time < packets) std::copy(d.symbols.begin(), d.symbols.end(), message.begin() + d.time * k);
    for (std::int64_t t : o.lost)
      if (t < packets) lost.push_back(t);
  };
  for (std::int64_t t = 0; t < packets; ++t) {
    const bool e = channel.step();
    erased_count += e;
    const std::span<const Symbol> y(coded.data() + t * spec.n(), static_cast<std::size_t>(spec.n()));
    collect(dec.decode_step(e ? std::nullopt : std::optional<std::span<const Symbol>>(y)));
  }
  collect(dec.finish());
  std::sort(lost.begin(), lost.end());
  std::vector<unsigned char> bytes;
  pack(bytes, message, w);
  write_bytes(out, bytes);
  ojson report;
  report["packets"] = packets;
  report["erased"] = erased_count;
  report["lost"] = lost;
  if (!report_path.empty()) write_text(report_path, report.dump(2) + "\n");
  else if (!out.empty() && out != "-") std::cout << report.dump() << "\n";
  return kOk;
}

int cmd_simulate(const std::string& config_path, const std::string& out, std::int64_t trials, int threads) {
  SweepConfig cfg;
  try {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot read " + config_path);
    const auto j = nlohmann::json::parse(in);
    const auto slash = config_path.find_last_of('/');
    cfg = sweep_from_json(j, slash == std::string::npos ? "" : config_path.substr(0, slash));
  } catch (const std::exception& e) {
    throw BadInput(config_path + ": " + e.what());
  }
  if (trials > 0) cfg.trials = trials;
  if (threads > 0) cfg.threads = threads;
  write_text(out, results_to_csv(run_sweep(cfg)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-latency streaming codes for burst and random erasures"};
  app.require_subcommand(1);

  int a = 0, b = 0, tau = 0, n = 0, k = 0, max_retries = 1000;
  std::string construction, out;
  std::uint64_t seed = 1;
  auto* construct_cmd = app.add_subcommand("construct", "Build a code and write its JSON spec");
  construct_cmd->add_option("--a", a, "Random erasures per window");
  construct_cmd->add_option("--b", b, "Longest burst per window");
  construct_cmd->add_option("--tau", tau, "Decoding delay");
  construct_cmd->add_option("--construction", construction, "A, B, C, D, MDS or REP")->required();
  construct_cmd->add_option("--seed", seed, "Seed for randomized steps");
  construct_cmd->add_option("--n", n, "MDS baseline length");
  construct_cmd->add_option("--k", k, "MDS baseline dimension");
  construct_cmd->add_option("--max-retries", max_retries, "Redraw budget for Construction A");
  construct_cmd->add_option("--out", out, "Output path (default stdout)");

  std::string spec_path;
  bool no_oracle = false;
  auto* validate_cmd = app.add_subcommand("validate", "Check B1/B2/R1/R2 and the recovery oracle");
  validate_cmd->add_option("spec", spec_path, "Code spec JSON")->required();
  validate_cmd->add_flag("--no-oracle", no_oracle, "Skip exhaustive pattern enumeration");
  validate_cmd->add_option("--out", out, "Report path (default stdout)");

  std::string in, erasures, report_path;
  auto* encode_cmd = app.add_subcommand("encode", "Encode a message stream");
  encode_cmd->add_option("--spec", spec_path, "Code spec JSON")->required();
  encode_cmd->add_option("--in", in, "Message symbols, k per packet")->required();
  encode_cmd->add_option("--out", out, "Coded symbols, n per packet")->required();

  auto* decode_cmd = app.add_subcommand("decode", "Decode a coded stream under an erasure trace");
  decode_cmd->add_option("--spec", spec_path, "Code spec JSON")->required();
  decode_cmd->add_option("--in", in, "Coded symbols, n per packet")->required();
  decode_cmd->add_option("--erasures", erasures, "Erased slot indices, whitespace separated");
  decode_cmd->add_option("--out", out, "Recovered message symbols")->required();
  decode_cmd->add_option("--report", report_path, "Write the loss report here instead of stdout");

  std::string config_path;
  std::int64_t trials = 0;
  int threads = 0;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run a Monte Carlo sweep");
  simulate_cmd->add_option("--config", config_path, "Sweep JSON")->required();
  simulate_cmd->add_option("--out", out, "Results CSV (default stdout)");
  simulate_cmd->add_option("--trials", trials, "Override trials per point");
  simulate_cmd->add_option("--threads", threads, "Worker threads");

  int tau_max = 20;
  auto* regime_cmd = app.add_subcommand("regime-map", "List which constructions apply per parameter set");
  regime_cmd->add_option("--tau-max", tau_max, "Largest tau");
  regime_cmd->add_option("--out", out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*construct_cmd) return cmd_construct(a, b, tau, construction, seed, n, k, max_retries, out);
    if (*validate_cmd) return cmd_validate(spec_path, !no_oracle, out);
    if (*encode_cmd) return cmd_encode(spec_path, in, out);
    if (*decode_cmd) return cmd_decode(spec_path, in, erasures, out, report_path);
    if (*simulate_cmd) return cmd_simulate(config_path, out, trials, threads);
    if (*regime_cmd) {
      write_text(out, regime_map_csv(tau_max));
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}
