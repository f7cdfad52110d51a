#ifndef STREAMCODE_AUDITOR_HPP
#define STREAMCODE_AUDITOR_HPP

// Checks a parity-check matrix against the burst (B1, B2) and random (R1, R2)
// independence conditions, and separately brute-forces every admissible
// block-level erasure pattern through the per-coordinate recovery criterion.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "streamcode/code_spec.hpp"
#include "streamcode/matrix.hpp"

namespace streamcode {

/// Calls f(subset) for every r-subset of pool in lexicographic order; stops
/// early and returns false as soon as f returns false.
template <class F>
bool for_each_combination(const std::vector<int>& pool, int r, F&& f) {
  const int n = static_cast<int>(pool.size());
  if (r < 0 || r > n) return true;
  std::vector<int> idx(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) idx[static_cast<std::size_t>(i)] = i;
  std::vector<int> subset(static_cast<std::size_t>(r));
  while (true) {
    for (int i = 0; i < r; ++i) subset[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    if (!f(subset)) return false;
    int i = r - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - r + i) --i;
    if (i < 0) return true;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < r; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

inline std::uint64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  std::uint64_t c = 1;
  for (int i = 1; i <= r; ++i) c = c * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
  return c;
}

struct ConditionResult {
  bool ok = true;
  /// First failing shift and the columns involved (empty when ok).
  int ell = -1;
  std::vector<int> columns;
};

struct OracleResult {
  bool ok = true;
  std::vector<int> pattern;
  int coordinate = -1;
  std::uint64_t patterns_checked = 0;
};

struct AuditReport {
  ConditionResult b1, b2, r1, r2;
  std::optional<OracleResult> oracle;

  bool conditions_ok() const { return b1.ok && b2.ok && r1.ok && r2.ok; }
  bool ok() const { return conditions_ok() && (!oracle || oracle->ok); }
};

enum class PatternKind { Burst, Random, Inadmissible };

struct ErasurePattern {
  CoordinateSet erased;
  PatternKind kind = PatternKind::Random;
  int burst_start = -1;
  int burst_length = 0;
  int count = 0;
};

/// Classifies a block-level erasure set: a consecutive run of length <= b is a
/// burst; otherwise at most a erasures is random; anything else is inadmissible.
inline ErasurePattern classify_pattern(const CoordinateSet& e, int a, int b) {
  ErasurePattern p;
  p.erased = e;
  p.count = static_cast<int>(e.size());
  const auto& v = e.indices();
  const bool consecutive = !v.empty() && v.back() - v.front() + 1 == static_cast<int>(v.size());
  if (consecutive && p.count <= b) {
    p.kind = PatternKind::Burst;
    p.burst_start = v.front();
    p.burst_length = p.count;
  } else if (p.count <= a) {
    p.kind = PatternKind::Random;
  } else {
    p.kind = PatternKind::Inadmissible;
  }
  return p;
}

/// Sliding-window admissibility of erased time slots: every window of
/// tau + 1 consecutive slots holds either one burst of length <= b or at
/// most a erasures.
inline bool stream_pattern_admissible(const std::vector<std::int64_t>& erased_slots, int a, int b, int tau) {
  std::vector<std::int64_t> v = erased_slots;
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  for (std::size_t i = 0; i < v.size(); ++i) {
    // windows starting at each erasure suffice: any window's erasures are those of
    // the window starting at its first erasure, restricted further.
    std::size_t j = i;
    while (j < v.size() && v[j] <= v[i] + tau) ++j;
    const auto cnt = static_cast<std::int64_t>(j - i);
    const bool burst = v[j - 1] - v[i] + 1 == cnt && cnt <= b;
    if (!burst && cnt > a) return false;
  }
  return true;
}

namespace detail {

inline const Matrix& require_h(const CodeSpec& spec) {
  if (spec.is_repetition()) throw std::invalid_argument("repetition baseline has no parity-check matrix");
  return spec.H;
}

inline Column column_of(const Matrix& m, int j) { return m.column(static_cast<std::size_t>(j)); }

inline std::vector<Column> columns_of(const Matrix& m, const std::vector<int>& idx) {
  std::vector<Column> out;
  out.reserve(idx.size());
  for (int j : idx) out.push_back(m.column(static_cast<std::size_t>(j)));
  return out;
}

}  // namespace detail

/// Burst condition on the shortened matrices: column ell of H^(ell) is outside
/// the span of its next b - 1 columns, for ell in [0 : n - 2 - tau].
inline ConditionResult check_b1(const CodeSpec& spec) {
  const Matrix& h = detail::require_h(spec);
  const int n = static_cast<int>(h.cols()), b = spec.params.b, tau = spec.params.tau;
  ConditionResult res;
  for (int ell = 0; ell <= n - 2 - tau; ++ell) {
    const Matrix hl = shortened_pc(h, ell + tau);
    std::vector<int> others;
    for (int j = ell + 1; j <= ell + b - 1; ++j) others.push_back(j);
    if (in_span(h.field(), detail::column_of(hl, ell), detail::columns_of(hl, others))) {
      res.ok = false;
      res.ell = ell;
      res.columns = others;
      return res;
    }
  }
  return res;
}

/// Burst condition on H: every b consecutive columns starting in
/// [n - 1 - tau : n - b] are independent.
inline ConditionResult check_b2(const CodeSpec& spec) {
  const Matrix& h = detail::require_h(spec);
  const int n = static_cast<int>(h.cols()), b = spec.params.b, tau = spec.params.tau;
  ConditionResult res;
  for (int ell = n - 1 - tau; ell <= n - b; ++ell) {
    std::vector<int> cols;
    for (int j = ell; j < ell + b; ++j) cols.push_back(j);
    if (rank(h.select_columns(cols)) != static_cast<std::size_t>(b)) {
      res.ok = false;
      res.ell = ell;
      res.columns = cols;
      return res;
    }
  }
  return res;
}

/// Random condition on the shortened matrices: column ell of H^(ell) is outside
/// the span of every (a - 1)-subset of columns [ell + 1 : ell + tau].
inline ConditionResult check_r1(const CodeSpec& spec) {
  const Matrix& h = detail::require_h(spec);
  const int n = static_cast<int>(h.cols()), a = spec.params.a, tau = spec.params.tau;
  ConditionResult res;
  for (int ell = 0; ell <= n - 2 - tau; ++ell) {
    const Matrix hl = shortened_pc(h, ell + tau);
    const Column target = detail::column_of(hl, ell);
    std::vector<int> pool;
    for (int j = ell + 1; j <= ell + tau; ++j) pool.push_back(j);
    const bool all = for_each_combination(pool, a - 1, [&](const std::vector<int>& s) {
      if (in_span(h.field(), target, detail::columns_of(hl, s))) {
        res.ok = false;
        res.ell = ell;
        res.columns = s;
        return false;
      }
      return true;
    });
    if (!all) return res;
  }
  return res;
}

/// Random condition on H: any a of the last tau + 1 columns are independent.
inline ConditionResult check_r2(const CodeSpec& spec) {
  const Matrix& h = detail::require_h(spec);
  const int n = static_cast<int>(h.cols()), a = spec.params.a, tau = spec.params.tau;
  ConditionResult res;
  std::vector<int> pool;
  for (int j = n - 1 - tau; j <= n - 1; ++j) pool.push_back(j);
  for_each_combination(pool, a, [&](const std::vector<int>& s) {
    if (rank(h.select_columns(s)) != static_cast<std::size_t>(a)) {
      res.ok = false;
      res.ell = s.front();
      res.columns = s;
      return false;
    }
    return true;
  });
  return res;
}

/// Per-coordinate recovery test with a cache keyed by (coordinate, erased
/// coordinates inside its delay window). Coordinate t is recoverable iff h_t
/// is outside the span of the other unknown columns: the erased ones in
/// (t, t + tau] and every column beyond t + tau.
class RecoveryOracle {
 public:
  explicit RecoveryOracle(const CodeSpec& spec) : h_(detail::require_h(spec)), tau_(spec.params.tau) {
    if (h_.cols() > 60 || tau_ > 56) throw std::length_error("instance too large for the block oracle");
  }

  bool recoverable(int t, const CoordinateSet& erased) {
    const int n = static_cast<int>(h_.cols());
    std::uint64_t mask = 0;
    for (int e : erased)
      if (e > t && e <= t + tau_) mask |= std::uint64_t{1} << (e - t - 1);
    const std::uint64_t key = (mask << 6) | static_cast<std::uint64_t>(t);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::vector<int> unknown;
    for (int e : erased)
      if (e > t && e <= t + tau_) unknown.push_back(e);
    for (int j = t + tau_ + 1; j < n; ++j) unknown.push_back(j);
    const bool ok = !in_span(h_.field(), detail::column_of(h_, t), detail::columns_of(h_, unknown));
    cache_.emplace(key, ok);
    return ok;
  }

  /// First erased coordinate (in increasing order) that cannot be recovered,
  /// treating all earlier coordinates as known; -1 when the pattern decodes.
  int first_failure(const CoordinateSet& erased) {
    for (int t : erased)
      if (!recoverable(t, erased)) return t;
    return -1;
  }

 private:
  const Matrix& h_;
  int tau_;
  std::unordered_map<std::uint64_t, bool> cache_;
};

/// First unrecoverable coordinate of one block pattern, or -1.
inline int pattern_first_failure(const CodeSpec& spec, const CoordinateSet& erased) {
  RecoveryOracle oracle(spec);
  return oracle.first_failure(erased);
}

inline bool pattern_decodable(const CodeSpec& spec, const CoordinateSet& erased) {
  return pattern_first_failure(spec, erased) < 0;
}

/// Enumerates every burst of length <= b and every a-subset of [0 : n - 1]
/// (smaller random sets are subsets of these and cannot fail when they pass).
inline OracleResult oracle_decodable(const CodeSpec& spec, std::uint64_t max_patterns = 200'000'000) {
  const Matrix& h = detail::require_h(spec);
  const int n = static_cast<int>(h.cols()), a = spec.params.a, b = spec.params.b;
  if (n > 40 || binomial(n, a) > max_patterns) throw std::length_error("instance too large for exhaustive oracle");
  RecoveryOracle oracle(spec);
  OracleResult res;
  auto check = [&](const std::vector<int>& e) {
    ++res.patterns_checked;
    const CoordinateSet set(e, n);
    const int bad = oracle.first_failure(set);
    if (bad >= 0) {
      res.ok = false;
      res.pattern = e;
      res.coordinate = bad;
      return false;
    }
    return true;
  };
  for (int len = 1; len <= b; ++len)
    for (int s = 0; s + len <= n; ++s) {
      std::vector<int> e;
      for (int j = s; j < s + len; ++j) e.push_back(j);
      if (!check(e)) return res;
    }
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) pool[static_cast<std::size_t>(j)] = j;
  for_each_combination(pool, std::min(a, n), check);
  return res;
}

inline AuditReport check_all(const CodeSpec& spec, bool run_oracle = true) {
  AuditReport r;
  r.b1 = check_b1(spec);
  r.b2 = check_b2(spec);
  r.r1 = check_r1(spec);
  r.r2 = check_r2(spec);
  if (run_oracle) r.oracle = oracle_decodable(spec);
  return r;
}

inline bool conditions_hold(const CodeSpec& spec) {
  return check_b2(spec).ok && check_r2(spec).ok && check_b1(spec).ok && check_r1(spec).ok;
}

}  // namespace streamcode

#endif  // STREAMCODE_AUDITOR_HPP
