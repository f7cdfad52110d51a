#ifndef STREAMCODE_COLUMN_METRICS_HPP
#define STREAMCODE_COLUMN_METRICS_HPP

// Column distance d_tau and column span c_tau of the streaming code, over
// inputs with s(0) != 0 and outputs truncated to x(0..tau).

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "streamcode/code_spec.hpp"
#include "streamcode/matrix.hpp"
#include "streamcode/stream_codec.hpp"

namespace streamcode {

struct ColumnMetrics {
  int d_tau = 0;
  int c_tau = 0;
  bool operator==(const ColumnMetrics& o) const { return d_tau == o.d_tau && c_tau == o.c_tau; }
};

/// Truncated generator: row t*k + j is the output x(0..tau), flattened slot by
/// slot, for the unit input s_j(t) = 1.
inline Matrix truncated_generator(const CodeSpec& spec) {
  const int n = spec.n(), k = spec.k(), tau = spec.tau();
  Matrix g(spec.field, static_cast<std::size_t>(k * (tau + 1)), static_cast<std::size_t>(n * (tau + 1)));
  for (int t0 = 0; t0 <= tau; ++t0)
    for (int j0 = 0; j0 < k; ++j0) {
      StreamEncoder enc(spec);
      for (int t = 0; t <= tau; ++t) {
        std::vector<Symbol> s(static_cast<std::size_t>(k), 0);
        if (t == t0) s[static_cast<std::size_t>(j0)] = 1;
        const auto x = enc.encode_step(s);
        for (int c = 0; c < n; ++c) g(static_cast<std::size_t>(t0 * k + j0), static_cast<std::size_t>(t * n + c)) = x[static_cast<std::size_t>(c)];
      }
    }
  return g;
}

/// Exhaustive minimization over every input sequence with s(0) != 0. Refuses
/// when q^(k(tau+1)) exceeds exhaustive_bound.
inline ColumnMetrics column_metrics(const CodeSpec& spec, std::uint64_t exhaustive_bound = 1u << 24) {
  const int n = spec.n(), k = spec.k(), tau = spec.tau();
  const std::uint64_t q = spec.field->order();
  const int digits = k * (tau + 1);
  std::uint64_t space = 1;
  for (int i = 0; i < digits; ++i) {
    if (space > exhaustive_bound / q) throw std::length_error("column metric search space too large");
    space *= q;
  }
  const Matrix g = truncated_generator(spec);
  const FieldSpec& f = *spec.field;
  const std::size_t width = g.cols();
  std::vector<Symbol> coeff(static_cast<std::size_t>(digits), 0);
  std::vector<Symbol> x(width, 0);
  ColumnMetrics best{tau + 2, tau + 2};
  auto apply = [&](int r, Symbol delta) {
    for (std::size_t c = 0; c < width; ++c) x[c] ^= f.mul(delta, g(static_cast<std::size_t>(r), c));
  };
  while (true) {
    // odometer increment, least significant digit last
    int r = digits - 1;
    while (r >= 0) {
      const Symbol old = coeff[static_cast<std::size_t>(r)];
      const Symbol nv = static_cast<Symbol>((old + 1) % q);
      coeff[static_cast<std::size_t>(r)] = nv;
      apply(r, old ^ nv);
      if (nv != 0) break;
      --r;
    }
    if (r < 0) break;
    bool s0_nonzero = false;
    for (int j = 0; j < k; ++j) s0_nonzero |= coeff[static_cast<std::size_t>(j)] != 0;
    if (!s0_nonzero) continue;
    int wt = 0, first = -1, last = -1;
    for (int t = 0; t <= tau; ++t) {
      bool nz = false;
      for (int c = 0; c < n && !nz; ++c) nz = x[static_cast<std::size_t>(t * n + c)] != 0;
      if (nz) {
        ++wt;
        if (first < 0) first = t;
        last = t;
      }
    }
    best.d_tau = std::min(best.d_tau, wt);
    best.c_tau = std::min(best.c_tau, last - first + 1);
  }
  return best;
}

/// True iff s(0) is determined by the truncated outputs in `slots`.
inline bool first_input_recoverable(const Matrix& g, int n, int k, const std::vector<int>& slots) {
  std::vector<int> cols;
  for (int t : slots)
    for (int c = 0; c < n; ++c) cols.push_back(t * n + c);
  const Matrix kernel = left_nullspace(g.select_columns(cols));
  for (std::size_t i = 0; i < kernel.rows(); ++i)
    for (int j = 0; j < k; ++j)
      if (kernel(i, static_cast<std::size_t>(j)) != 0) return false;
  return true;
}

/// Same metrics through erasure duality: d_tau is the fewest erased slots
/// (including slot 0) that hide s(0); c_tau is the shortest burst from slot 0 that does.
inline ColumnMetrics column_metrics_by_rank(const CodeSpec& spec) {
  const int n = spec.n(), k = spec.k(), tau = spec.tau();
  if (tau > 20) throw std::length_error("column metric subset search too large");
  const Matrix g = truncated_generator(spec);
  ColumnMetrics m{tau + 1, tau + 1};
  for (int L = 1; L <= tau; ++L) {
    std::vector<int> slots;
    for (int t = L; t <= tau; ++t) slots.push_back(t);
    if (!first_input_recoverable(g, n, k, slots)) {
      m.c_tau = L;
      break;
    }
  }
  const std::uint32_t subsets = std::uint32_t{1} << tau;  // erasure choices among slots 1..tau
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    const int size = 1 + __builtin_popcount(mask);
    if (size >= m.d_tau) continue;
    std::vector<int> slots;
    for (int t = 1; t <= tau; ++t)
      if (!(mask & (1u << (t - 1)))) slots.push_back(t);
    if (!first_input_recoverable(g, n, k, slots)) m.d_tau = size;
  }
  return m;
}

}  // namespace streamcode

#endif  // STREAMCODE_COLUMN_METRICS_HPP
