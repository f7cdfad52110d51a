#ifndef STREAMCODE_CONSTRUCTIONS_HPP
#define STREAMCODE_CONSTRUCTIONS_HPP

// Parity-check matrices for Constructions A-D and the two baselines. Every
// code here has n = tau + delta + 1 and k = tau - a + 1, so H is b x n.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "streamcode/auditor.hpp"
#include "streamcode/code_spec.hpp"
#include "streamcode/field.hpp"
#include "streamcode/matrix.hpp"
#include "streamcode/random.hpp"

namespace streamcode {

inline bool in_regime_b(const ParamSet& p) { return p.delta() >= p.a && p.tau + 1 >= p.b + p.delta(); }

inline bool in_regime_c(const ParamSet& p) { return p.b % p.a == 0 && (p.tau - p.a + 1) % p.b == 0; }

/// b = 2a - 1 and tau + 1 = b + delta + gamma * b for some gamma >= 0.
inline bool in_regime_d(const ParamSet& p) {
  if (p.b != 2 * p.a - 1) return false;
  const int rest = p.tau + 1 - p.b - p.delta();
  return rest >= 0 && rest % p.b == 0;
}

/// Diagonally-embedded [n, k] MDS baseline: H = [Cauchy | I_{n-k}] over the
/// smallest binary field of order >= n. Parameters read as a = b = n - k, tau = n - 1.
inline CodeSpec construct_mds_code(int n, int k) {
  if (k < 1 || n <= k) throw std::invalid_argument("MDS baseline needs n > k >= 1");
  const int r = n - k;
  CodeSpec spec;
  spec.params = ParamSet(r, r, n - 1);
  spec.field = make_field(degree_for_order(static_cast<std::uint64_t>(n)));
  spec.tag = ConstructionTag::MdsBaseline;
  spec.H = Matrix(spec.field, static_cast<std::size_t>(r), static_cast<std::size_t>(n));
  spec.H.set_block(0, 0, cauchy_like(static_cast<std::size_t>(r), static_cast<std::size_t>(k), spec.field));
  spec.H.set_block(0, k, Matrix::identity(spec.field, static_cast<std::size_t>(r)));
  return spec;
}

/// Rate-1/2 delayed repetition: x(t) = [s(t); s(t - tau)], burst length tau.
inline CodeSpec construct_repetition_code(int tau) {
  if (tau < 1) throw std::invalid_argument("repetition baseline needs tau >= 1");
  CodeSpec spec;
  spec.params = ParamSet(1, tau, tau);
  spec.field = make_field(1);
  spec.tag = ConstructionTag::RepetitionBaseline;
  return spec;
}

/// Field used by Construction A: GF(q^2) over GF(q) with q the least power of
/// two >= tau + 1, or GF(q) itself when delta <= 1.
inline FieldPtr construction_a_field(const ParamSet& p) {
  const FieldPtr base = make_field(degree_for_order(static_cast<std::uint64_t>(p.tau) + 1));
  return p.delta() >= 2 ? make_quadratic_extension(base) : base;
}

/// Construction A with the free entries v_{i,j} (i in [0 : delta-1],
/// j in [b+i : tau+i]) supplied by `assign`, which must return base-field values.
inline CodeSpec construct_a_with_assignment(const ParamSet& p, const std::function<Symbol(int, int)>& assign) {
  p.validate();
  const int a = p.a, b = p.b, tau = p.tau, delta = p.delta(), n = p.n();
  if (delta == 0) throw std::invalid_argument("Construction A with delta = 0 is the MDS code");
  CodeSpec spec;
  spec.params = p;
  spec.tag = ConstructionTag::A;
  spec.field = construction_a_field(p);
  const FieldPtr base = spec.field->is_tower() ? spec.field->base() : spec.field;
  Matrix& h = spec.H = Matrix(spec.field, static_cast<std::size_t>(b), static_cast<std::size_t>(n));

  // [I_a C] in rows delta..b-1, columns 0..tau (entries of the subfield).
  const Matrix c = cauchy_like(static_cast<std::size_t>(a), static_cast<std::size_t>(tau + 1 - a), base);
  for (int i = 0; i < a; ++i) {
    h(delta + i, i) = 1;
    for (int j = 0; j < tau + 1 - a; ++j) h(delta + i, a + j) = c(i, j);
  }
  const Symbol alpha = spec.field->is_tower() ? spec.field->extension_generator() : 1;
  for (int i = 0; i < delta; ++i) h(i, i) = alpha;
  for (int i = 0; i < delta; ++i)
    for (int j = b + i; j <= tau + i; ++j) {
      const Symbol v = assign(i, j);
      if (!base->contains(v)) throw std::invalid_argument("free entry outside the subfield");
      h(i, j) = v;
    }
  h(delta, tau + delta) = 1;
  return spec;
}

/// Construction A: uniform subfield values for the free entries, redrawn until
/// the matrix meets all four conditions. delta = 0 yields the [tau+1, tau-a+1] MDS code.
inline CodeSpec construct_a(const ParamSet& p, std::uint64_t seed, int max_retries = 1000) {
  p.validate();
  if (p.delta() == 0) {
    CodeSpec spec = construct_mds_code(p.tau + 1, p.tau - p.a + 1);
    spec.tag = ConstructionTag::A;
    spec.seed = seed;
    spec.attempts = 1;
    return spec;
  }
  const FieldPtr field = construction_a_field(p);
  const std::uint64_t q = field->is_tower() ? field->base()->order() : field->order();
  Rng rng(seed);
  for (int attempt = 1; attempt <= max_retries; ++attempt) {
    CodeSpec spec = construct_a_with_assignment(p, [&](int, int) { return static_cast<Symbol>(rng.below(q)); });
    if (conditions_hold(spec)) {
      spec.seed = seed;
      spec.attempts = attempt;
      return spec;
    }
  }
  throw std::runtime_error("Construction A: no valid assignment for " + p.describe() + " after " +
                           std::to_string(max_retries) + " attempts");
}

/// Construction B (delta >= a, tau + 1 >= b + delta) over GF(q), q >= tau + 1.
inline CodeSpec construct_b(const ParamSet& p) {
  p.validate();
  if (!in_regime_b(p)) throw std::invalid_argument("Construction B needs delta >= a and tau + 1 >= b + delta");
  const int a = p.a, b = p.b, tau = p.tau, delta = p.delta(), n = p.n();
  CodeSpec spec;
  spec.params = p;
  spec.tag = ConstructionTag::B;
  spec.field = make_field(degree_for_order(static_cast<std::uint64_t>(tau) + 1));
  Matrix& h = spec.H = Matrix(spec.field, static_cast<std::size_t>(b), static_cast<std::size_t>(n));
  h.set_block(0, 0, zb_generator(static_cast<std::size_t>(tau + 1), static_cast<std::size_t>(b), spec.field));
  for (int i = a; i <= delta; ++i)
    for (int j = a; j <= delta; ++j) h(i, tau + j) = h(i, j);
  for (int j = 1; j <= a - 1; ++j) h(b - j, tau + j) = 1;
  h.set_block(delta, 0, cauchy_like(static_cast<std::size_t>(a), static_cast<std::size_t>(b), spec.field));
  return spec;
}

/// Construction C (a | b | tau - a + 1): interleaved copies of an [a*beta, a]
/// MDS code with generator [G^(0) ... G^(beta-1)], G^(beta-1) = I_a. Row block i
/// places G^(j) at columns j*b + i*a.
inline CodeSpec construct_c(const ParamSet& p) {
  p.validate();
  if (!in_regime_c(p)) throw std::invalid_argument("Construction C needs a | b | (tau - a + 1)");
  const int a = p.a, b = p.b, n = p.n();
  const int alpha = b / a, beta = n / b;
  CodeSpec spec;
  spec.params = p;
  spec.tag = ConstructionTag::C;
  spec.c_ratios = std::make_pair(alpha, beta);
  spec.field = make_field(degree_for_order(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(beta)));
  Matrix g(spec.field, static_cast<std::size_t>(a), static_cast<std::size_t>(a * beta));
  g.set_block(0, 0, cauchy_like(static_cast<std::size_t>(a), static_cast<std::size_t>(a * (beta - 1)), spec.field));
  g.set_block(0, a * (beta - 1), Matrix::identity(spec.field, static_cast<std::size_t>(a)));
  Matrix& h = spec.H = Matrix(spec.field, static_cast<std::size_t>(b), static_cast<std::size_t>(n));
  for (int i = 0; i < alpha; ++i)
    for (int j = 0; j < beta; ++j)
      for (int r = 0; r < a; ++r)
        for (int c = 0; c < a; ++c) h(i * a + r, j * b + i * a + c) = g(r, j * a + c);
  return spec;
}

/// Construction D (b = 2a - 1, tau + 1 = b + delta + gamma * b) over GF(q), q >= tau + 2.
inline CodeSpec construct_d(const ParamSet& p) {
  p.validate();
  if (!in_regime_d(p)) throw std::invalid_argument("Construction D needs b = 2a - 1 and b | (tau + 1 - b - delta)");
  const int a = p.a, b = p.b, tau = p.tau, delta = p.delta(), n = p.n();
  const int gamma = (tau + 1 - b - delta) / b;
  CodeSpec spec;
  spec.params = p;
  spec.tag = ConstructionTag::D;
  spec.d_gamma = gamma;
  spec.field = make_field(degree_for_order(static_cast<std::uint64_t>(tau) + 2));
  Matrix& h = spec.H = Matrix(spec.field, static_cast<std::size_t>(b), static_cast<std::size_t>(n));

  // Rows 0..delta: codewords of a [b + delta, b] MDS code with prescribed zero runs.
  const Matrix g = mds_generator(static_cast<std::size_t>(b + delta), static_cast<std::size_t>(b), spec.field);
  for (int l = 0; l <= delta; ++l) {
    std::vector<int> zeros;
    if (l < delta)
      for (int j = l + 1; j <= l + b - 1; ++j) zeros.push_back(j);
    else
      for (int j = 0; j <= b - 2; ++j) zeros.push_back(j);
    const auto word = codeword_with_zeros(g, zeros);
    for (int j = 0; j < b + delta; ++j) h(l, j) = word[static_cast<std::size_t>(j)];
  }
  for (int rep = 1; rep <= gamma; ++rep)
    for (int l = 0; l <= delta; ++l)
      for (int c = 0; c < b; ++c) h(l, b + delta + (rep - 1) * b + c) = h(l, delta + c);
  for (int j = delta; j <= tau; ++j)
    if (h(delta, j) == 0) h(delta, j) = 1;

  // Bottom a rows: Cauchy-like block whose first row reproduces H(delta, delta:tau).
  const auto width = static_cast<std::size_t>(tau + 1 - delta);
  const Matrix canonical = cauchy_like(static_cast<std::size_t>(a), width, spec.field);
  std::vector<Symbol> scales(width);
  for (std::size_t j = 0; j < width; ++j)
    scales[j] = spec.field->div(h(static_cast<std::size_t>(delta), static_cast<std::size_t>(delta) + j), canonical(0, j));
  h.set_block(delta, delta, cauchy_like(static_cast<std::size_t>(a), width, spec.field, scales));
  for (int i = 1; i <= delta; ++i) h(delta + i, tau + i) = 1;
  return spec;
}

/// Builds the code named by `tag`; for MDS the pair (n, k) comes from mds_n/mds_k
/// and for REP only tau is used.
inline CodeSpec construct(ConstructionTag tag, const ParamSet& p, std::uint64_t seed = 1, int max_retries = 1000,
                          int mds_n = 0, int mds_k = 0) {
  switch (tag) {
    case ConstructionTag::A: return construct_a(p, seed, max_retries);
    case ConstructionTag::B: return construct_b(p);
    case ConstructionTag::C: return construct_c(p);
    case ConstructionTag::D: return construct_d(p);
    case ConstructionTag::MdsBaseline:
      if (mds_n > 0) return construct_mds_code(mds_n, mds_k);
      return construct_mds_code(p.n(), p.k());
    case ConstructionTag::RepetitionBaseline: return construct_repetition_code(p.tau);
  }
  throw std::invalid_argument("unknown construction");
}

}  // namespace streamcode

#endif  // STREAMCODE_CONSTRUCTIONS_HPP
