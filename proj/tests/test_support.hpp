#ifndef STREAMCODE_TESTS_TEST_SUPPORT_HPP
#define STREAMCODE_TESTS_TEST_SUPPORT_HPP

// Reference computations and structural predicates shared by the unit tests
// and the acceptance binary. Nothing here calls the library routine it checks.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "streamcode/streamcode.hpp"

namespace streamcode::testing {

/// Schoolbook carry-less product reduced by `poly`, bit by bit.
inline Symbol reference_mul(Symbol a, Symbol b, int m, std::uint32_t poly) {
  std::uint64_t acc = 0;
  for (int i = 0; i < m; ++i)
    if (b >> i & 1u) acc ^= std::uint64_t{a} << i;
  for (int i = 2 * m - 2; i >= m; --i)
    if (acc >> i & 1u) acc ^= std::uint64_t{poly} << (i - m);
  return static_cast<Symbol>(acc);
}

/// Determinant by cofactor expansion over the first row.
inline Symbol reference_det(const FieldSpec& f, const std::vector<std::vector<Symbol>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Symbol total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c] == 0) continue;
    std::vector<std::vector<Symbol>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Symbol> row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(m[r][j]);
      minor.push_back(row);
    }
    total ^= f.mul(m[0][c], reference_det(f, minor));  // characteristic 2: signs vanish
  }
  return total;
}

inline Symbol reference_det(const Matrix& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<std::vector<Symbol>> m;
  for (int r : rows) {
    std::vector<Symbol> row;
    for (int c : cols) row.push_back(a(static_cast<std::size_t>(r), static_cast<std::size_t>(c)));
    m.push_back(row);
  }
  return reference_det(*a.field(), m);
}

inline std::vector<int> iota_vec(int first, int last) {
  std::vector<int> v;
  for (int i = first; i <= last; ++i) v.push_back(i);
  return v;
}

/// Every square submatrix nonsingular, by cofactor determinants.
inline bool all_minors_nonsingular(const Matrix& m) {
  const int r = static_cast<int>(m.rows()), c = static_cast<int>(m.cols());
  const auto rows = iota_vec(0, r - 1), cols = iota_vec(0, c - 1);
  for (int s = 1; s <= std::min(r, c); ++s) {
    bool ok = true;
    for_each_combination(rows, s, [&](const std::vector<int>& rs) {
      for_each_combination(cols, s, [&](const std::vector<int>& cs) {
        ok = reference_det(m, rs, cs) != 0;
        return ok;
      });
      return ok;
    });
    if (!ok) return false;
  }
  return true;
}

/// Any `r` columns (of those listed) have a nonzero r x r minor in some row choice.
inline bool any_columns_independent(const Matrix& m, const std::vector<int>& pool, int r) {
  const auto rows = iota_vec(0, static_cast<int>(m.rows()) - 1);
  return for_each_combination(pool, r, [&](const std::vector<int>& cs) {
    bool independent = false;
    for_each_combination(rows, r, [&](const std::vector<int>& rs) {
      independent = reference_det(m, rs, cs) != 0;
      return !independent;
    });
    return independent;
  });
}

inline std::vector<int> nonzero_columns(const Matrix& m) {
  std::vector<int> out;
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0) {
        out.push_back(static_cast<int>(j));
        break;
      }
  return out;
}

// Structural predicates for the worked examples. Each returns an empty string
// on success or a description of the first violated property.

inline std::string describe_at(const char* what, std::size_t i, std::size_t j) {
  return std::string(what) + " at (" + std::to_string(i) + "," + std::to_string(j) + ")";
}

inline std::string construction_a_shape(const CodeSpec& s) {
  const int a = s.params.a, b = s.params.b, tau = s.params.tau, d = s.params.delta(), n = s.params.n();
  const Matrix& h = s.H;
  const FieldSpec& f = *s.field;
  if (h.rows() != static_cast<std::size_t>(b) || h.cols() != static_cast<std::size_t>(n)) return "wrong H shape";
  const Symbol alpha = h(0, 0);
  if (d >= 2 && f.in_base(alpha)) return "alpha lies in the subfield";
  if (alpha == 0) return "alpha is zero";
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < n; ++j) {
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      const bool free = j >= b + i && j <= tau + i;
      if (j == i) {
        if (h(ui, uj) != alpha) return describe_at("alpha*I block broken", ui, uj);
      } else if (free) {
        if (!f.in_base(h(ui, uj))) return describe_at("free entry outside the subfield", ui, uj);
      } else if (h(ui, uj) != 0) {
        return describe_at("unexpected nonzero in top rows", ui, uj);
      }
    }
  const int base_bits = f.is_tower() ? f.base()->bits() : f.bits();
  Matrix c(f.is_tower() ? f.base() : s.field, static_cast<std::size_t>(a), static_cast<std::size_t>(tau + 1 - a));
  for (int i = 0; i < a; ++i)
    for (int j = 0; j <= tau; ++j) {
      const auto ui = static_cast<std::size_t>(d + i), uj = static_cast<std::size_t>(j);
      if (j < a) {
        if (h(ui, uj) != (i == j ? 1u : 0u)) return describe_at("identity block broken", ui, uj);
      } else {
        if (h(ui, uj) >> base_bits) return describe_at("Cauchy entry outside the subfield", ui, uj);
        c(static_cast<std::size_t>(i), static_cast<std::size_t>(j - a)) = h(ui, uj);
      }
    }
  if (!all_minors_nonsingular(c)) return "C block is not Cauchy-like";
  for (int i = d; i < b; ++i)
    for (int j = tau + 1; j < n; ++j) {
      const Symbol want = (i == d && j == tau + d) ? 1 : 0;
      if (h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) != want) return describe_at("tail entry", static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  return "";
}

inline std::string construction_b_shape(const CodeSpec& s) {
  const int a = s.params.a, b = s.params.b, tau = s.params.tau, d = s.params.delta(), n = s.params.n();
  const Matrix& h = s.H;
  if (h.rows() != static_cast<std::size_t>(b) || h.cols() != static_cast<std::size_t>(n)) return "wrong H shape";
  // Zero-band rows of the [tau+1, b] generator, outside the Cauchy corner.
  for (int i = 0; i < b; ++i)
    for (int j = 0; j <= tau; ++j) {
      if (i >= d && j < b) continue;
      const int off = ((j - i) % (tau + 1) + (tau + 1)) % (tau + 1);
      const bool band = off >= 1 && off <= b - 1;
      const Symbol v = h(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      if (band != (v == 0)) return describe_at(band ? "zero band violated" : "zero outside band", static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  if (!all_minors_nonsingular(h.block(d, b - 1, 0, b - 1))) return "corner is not Cauchy-like";
  for (int i = 0; i < b; ++i)
    for (int j = tau + 1; j < n; ++j) {
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      const int jj = j - tau;
      if (i == d && jj >= a && jj <= d) {
        // the copied row-delta entries predate the Cauchy corner; the band geometry makes them nonzero
        if (h(ui, uj) == 0) return describe_at("replica of row delta is zero", ui, uj);
        continue;
      }
      Symbol want = 0;
      if (i >= a && i < d && jj >= a && jj <= d) want = h(ui, static_cast<std::size_t>(jj));
      if (jj >= 1 && jj <= a - 1 && i == b - jj) want = 1;
      if (h(ui, uj) != want) return describe_at("replica / inserted-one region", ui, uj);
    }
  return "";
}

inline std::string construction_c_shape(const CodeSpec& s) {
  const int a = s.params.a, b = s.params.b, n = s.params.n();
  const int alpha = b / a, beta = n / b;
  const Matrix& h = s.H;
  if (!s.c_ratios || s.c_ratios->first != alpha || s.c_ratios->second != beta) return "ratios not recorded";
  // Read G from the first row block and require every other block to be its shifted copy.
  Matrix g(s.field, static_cast<std::size_t>(a), static_cast<std::size_t>(a * beta));
  for (int r = 0; r < a; ++r)
    for (int j = 0; j < beta; ++j)
      for (int c = 0; c < a; ++c) g(static_cast<std::size_t>(r), static_cast<std::size_t>(j * a + c)) = h(static_cast<std::size_t>(r), static_cast<std::size_t>(j * b + c));
  for (int r = 0; r < a; ++r)
    for (int c = 0; c < a; ++c)
      if (g(static_cast<std::size_t>(r), static_cast<std::size_t>((beta - 1) * a + c)) != (r == c ? 1u : 0u)) return "last generator block is not the identity";
  if (!any_columns_independent(g, iota_vec(0, a * beta - 1), a)) return "interleaved generator is not MDS";
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < n; ++j) {
      const int blk = i / a, r = i % a;
      const int rel = j - blk * a;
      Symbol want = 0;
      if (rel >= 0 && rel % b < a) want = g(static_cast<std::size_t>(r), static_cast<std::size_t>((rel / b) * a + rel % b));
      if (h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) != want) return describe_at("tiling", static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  return "";
}

inline std::string construction_d_shape(const CodeSpec& s) {
  const int b = s.params.b, tau = s.params.tau, d = s.params.delta(), n = s.params.n();
  const Matrix& h = s.H;
  if (!s.d_gamma) return "gamma not recorded";
  const int gamma = *s.d_gamma;
  if (tau + 1 != b + d + gamma * b) return "gamma inconsistent with tau + 1 = b + delta + gamma b";
  auto at = [&](int i, int j) { return h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };
  // Top rows: prescribed zero runs inside the first b + delta columns.
  for (int l = 0; l < d; ++l)
    for (int j = 0; j < b + d; ++j) {
      const bool zero = j >= l + 1 && j <= l + b - 1;
      if (zero != (at(l, j) == 0)) return describe_at("zero run of top row", static_cast<std::size_t>(l), static_cast<std::size_t>(j));
    }
  for (int j = 0; j < d; ++j)
    if (at(d, j) != 0) return describe_at("pinned row prefix", static_cast<std::size_t>(d), static_cast<std::size_t>(j));
  for (int j = d; j <= tau; ++j)
    if (at(d, j) == 0) return describe_at("pinned row has a zero", static_cast<std::size_t>(d), static_cast<std::size_t>(j));
  // Replicas of columns delta..b+delta-1 in rows 0..delta.
  for (int i = 1; i <= gamma; ++i)
    for (int l = 0; l <= d; ++l)
      for (int c = 0; c < b; ++c)
        if (at(l, b + d + (i - 1) * b + c) != at(l, d + c)) return "replica mismatch";
  for (int l = 0; l <= d; ++l)
    for (int j = tau + 1; j < n; ++j)
      if (at(l, j) != 0) return describe_at("top-row tail", static_cast<std::size_t>(l), static_cast<std::size_t>(j));
  // Bottom a rows: Cauchy-like on columns delta..tau, zero before, unit tail diagonal.
  if (!all_minors_nonsingular(h.block(d, b - 1, d, tau))) return "bottom block is not Cauchy-like";
  for (int i = d + 1; i < b; ++i) {
    for (int j = 0; j < d; ++j)
      if (at(i, j) != 0) return describe_at("bottom-row prefix", static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    for (int j = tau + 1; j < n; ++j)
      if (at(i, j) != (j - tau == i - d ? 1u : 0u)) return describe_at("bottom-row tail", static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  // Before the pinned row was filled it held zeros on [0 : b-2]; restoring them
  // gives codewords sharing enough zeros that any delta + 1 nonzero columns are independent.
  Matrix top = h.block(0, d, 0, b + d - 1);
  for (int j = 0; j <= b - 2; ++j) top(static_cast<std::size_t>(d), static_cast<std::size_t>(j)) = 0;
  if (!any_columns_independent(top, nonzero_columns(top), d + 1)) return "top rows lose independence";
  return "";
}

/// Streams random messages, erases slots t0 + e for e in `pattern`, and
/// returns, for every diagonal touched, the smallest coordinate the decoder
/// failed to recover by its deadline (-1 if none). Index i is diagonal
/// t0 - (n - 1) + i.
inline std::vector<int> stream_diagonal_failures(const CodeSpec& spec, const std::vector<int>& pattern, std::int64_t t0,
                                                 DecodePolicy policy, std::uint64_t seed) {
  const int n = spec.n(), k = spec.k(), tau = spec.tau();
  const int last = pattern.empty() ? 0 : pattern.back();
  const std::int64_t first_diag = t0 - (n - 1), last_diag = t0 + last;
  std::vector<int> out(static_cast<std::size_t>(last_diag - first_diag + 1), -1);
  StreamEncoder enc(spec);
  StreamDecoder dec(spec, policy);
  Rng rng(seed);
  const std::int64_t end = t0 + last + n + tau + 1;
  auto record = [&](const DecodeOutput& o) {
    for (const auto& f : o.failed) {
      const std::int64_t d = f.time - f.component;
      if (d < first_diag || d > last_diag) continue;
      int& slot = out[static_cast<std::size_t>(d - first_diag)];
      if (slot < 0 || f.component < slot) slot = f.component;
    }
  };
  std::vector<Symbol> s(static_cast<std::size_t>(k));
  for (std::int64_t t = 0; t < end; ++t) {
    for (auto& v : s) v = static_cast<Symbol>(rng.below(spec.field->order()));
    const auto x = enc.encode_step(s);
    bool erased = false;
    for (int e : pattern) erased |= t == t0 + e;
    record(dec.decode_step(erased ? std::nullopt : std::optional<std::span<const Symbol>>(x)));
  }
  record(dec.finish());
  return out;
}

/// The block-level counterpart: oracle first failure of each diagonal's view
/// of the same erasures.
inline std::vector<int> oracle_diagonal_failures(const CodeSpec& spec, const std::vector<int>& pattern) {
  const int n = spec.n();
  const int last = pattern.empty() ? 0 : pattern.back();
  RecoveryOracle oracle(spec);
  std::vector<int> out;
  for (int shift = -(n - 1); shift <= last; ++shift) {  // diagonal t0 + shift
    std::vector<int> coords;
    for (int e : pattern)
      if (e - shift >= 0 && e - shift < n) coords.push_back(e - shift);
    out.push_back(oracle.first_failure(CoordinateSet(coords, n)));
  }
  return out;
}

/// Smallest power of two that is >= v.
inline std::uint64_t next_pow2(std::uint64_t v) {
  std::uint64_t q = 1;
  while (q < v) q <<= 1;
  return q;
}

/// Exact per-packet loss of the diagonally embedded [n, k] MDS code on a
/// memoryless erasure channel: x(t) is lost iff it is erased and one of the k
/// diagonals holding its message symbols has >= n - k other erasures.
inline double mds_memoryless_loss(int n, int k, double eps) {
  const int span = n + k - 1;  // slots t-k+1 .. t+n-1
  const int others = span - 1;
  double total = 0;
  for (std::uint32_t mask = 0; mask < (1u << others); ++mask) {
    auto erased = [&](int rel) {  // rel in [-(k-1), n-1], rel != 0
      int idx = rel + k - 1;
      if (rel > 0) --idx;
      return (mask >> idx & 1u) != 0;
    };
    bool lost = false;
    for (int j = 0; j < k && !lost; ++j) {
      int cnt = 0;
      for (int c = 0; c < n; ++c) {
        const int rel = c - j;
        if (rel != 0 && erased(rel)) ++cnt;
      }
      lost = cnt >= n - k;
    }
    if (lost) {
      const int e = __builtin_popcount(mask);
      total += std::pow(eps, e) * std::pow(1 - eps, others - e);
    }
  }
  return eps * total;
}

/// Empirical state statistics of a Markov erasure channel, observed from the
/// state each slot starts in.
struct MarkovStats {
  std::int64_t steps = 0, bad_slots = 0, erased = 0;
  std::vector<std::int64_t> bad_runs, good_runs;  // completed sojourns only
};

inline MarkovStats observe_markov(MarkovErasureChannel ch, std::int64_t steps, std::int64_t min_bad_runs = 0) {
  MarkovStats st;
  int prev = ch.state();
  std::int64_t run = 0;
  while (st.steps < steps || static_cast<std::int64_t>(st.bad_runs.size()) < min_bad_runs) {
    const int before = ch.state();
    if ((before != 0) != (prev != 0)) {
      (prev != 0 ? st.bad_runs : st.good_runs).push_back(run);
      run = 0;
    }
    prev = before;
    ++run;
    st.bad_slots += before != 0;
    st.erased += ch.step();
    ++st.steps;
  }
  return st;
}

/// Closed-form moments of the alternating renewal process: good sojourns are
/// geometric with exit probability alpha, bad sojourns are sums of M geometric
/// stays with exit probability beta.
struct MarkovMoments {
  double good_mean, good_var, bad_mean, bad_var;
  double bad_fraction;
  /// Asymptotic variance of the bad-slot fraction over `steps` slots.
  double fraction_var(double steps) const {
    const double cycle = good_mean + bad_mean;
    return ((1 - bad_fraction) * (1 - bad_fraction) * bad_var + bad_fraction * bad_fraction * good_var) / (cycle * steps);
  }
};

inline MarkovMoments markov_moments(double alpha, double beta, int M) {
  MarkovMoments m{};
  m.good_mean = 1 / alpha;
  m.good_var = (1 - alpha) / (alpha * alpha);
  m.bad_mean = M / beta;
  m.bad_var = M * (1 - beta) / (beta * beta);
  m.bad_fraction = m.bad_mean / (m.good_mean + m.bad_mean);
  return m;
}

/// |observed - expected| in units of sigma.
inline double z_score(double observed, double expected, double variance) {
  return std::abs(observed - expected) / std::sqrt(variance);
}

inline double mean_of(const std::vector<std::int64_t>& v) {
  double s = 0;
  for (auto x : v) s += static_cast<double>(x);
  return v.empty() ? 0 : s / static_cast<double>(v.size());
}

}  // namespace streamcode::testing

#endif  // STREAMCODE_TESTS_TEST_SUPPORT_HPP
