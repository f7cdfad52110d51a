#ifndef STREAMCODE_STREAM_CODEC_HPP
#define STREAMCODE_STREAM_CODEC_HPP

// Diagonal-embedding streaming encoder and the matching delay-constrained
// decoder. Coordinate j of diagonal d is sent in packet x(d + j) and is due at
// time d + j + tau. Message symbols before time 0 are zero.
//
// The repetition baseline, x(t) = [s(t); s(t - tau)], shares the interface.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "streamcode/code_spec.hpp"
#include "streamcode/matrix.hpp"

namespace streamcode {

/// b x k matrix X with parity = X * message for the code with parity-check H,
/// taking the last b coordinates as parity.
inline Matrix systematic_parity_map(const Matrix& h) {
  const std::size_t b = h.rows(), n = h.cols(), k = n - b;
  Matrix aug(h.field(), b, n);
  aug.set_block(0, 0, h.block(0, static_cast<int>(b) - 1, static_cast<int>(k), static_cast<int>(n) - 1));
  aug.set_block(0, static_cast<int>(b), h.block(0, static_cast<int>(b) - 1, 0, static_cast<int>(k) - 1));
  if (row_reduce(aug, b).size() != b) throw std::invalid_argument("last b columns of H are dependent; no systematic form");
  // Characteristic 2: H_p c_p = H_s c_s, so c_p = H_p^{-1} H_s c_s.
  return aug.block(0, static_cast<int>(b) - 1, static_cast<int>(b), static_cast<int>(n) - 1);
}

class StreamEncoder {
 public:
  explicit StreamEncoder(const CodeSpec& spec)
      : field_(spec.field), n_(spec.n()), k_(spec.k()), tau_(spec.tau()), repetition_(spec.is_repetition()) {
    if (!repetition_) parity_ = systematic_parity_map(spec.H);
    depth_ = repetition_ ? tau_ + 1 : n_;
    history_.assign(static_cast<std::size_t>(depth_ * k_), 0);
  }

  int n() const { return n_; }
  int k() const { return k_; }
  std::int64_t time() const { return t_; }

  /// Consumes s(t) (k symbols) and returns x(t) (n symbols).
  std::vector<Symbol> encode_step(std::span<const Symbol> s) {
    if (static_cast<int>(s.size()) != k_) throw std::invalid_argument("message packet must have k symbols");
    for (Symbol v : s)
      if (!field_->contains(v)) throw std::invalid_argument("message symbol outside field");
    std::copy(s.begin(), s.end(), history_.begin() + slot(t_) * k_);
    std::vector<Symbol> x(static_cast<std::size_t>(n_), 0);
    std::copy(s.begin(), s.end(), x.begin());
    if (repetition_) {
      x[1] = message(t_ - tau_, 0);
    } else {
      const int b = n_ - k_;
      for (int i = 0; i < b; ++i) {
        // parity coordinate k + i of diagonal t - k - i
        const std::int64_t d = t_ - k_ - i;
        Symbol acc = 0;
        for (int j = 0; j < k_; ++j)
          acc ^= field_->mul(parity_(static_cast<std::size_t>(i), static_cast<std::size_t>(j)), message(d + j, j));
        x[static_cast<std::size_t>(k_ + i)] = acc;
      }
    }
    ++t_;
    return x;
  }

 private:
  std::int64_t slot(std::int64_t t) const { return ((t % depth_) + depth_) % depth_; }
  Symbol message(std::int64_t t, int j) const {
    if (t < 0) return 0;
    return history_[static_cast<std::size_t>(slot(t) * k_ + j)];
  }

  FieldPtr field_;
  int n_, k_, tau_;
  bool repetition_;
  Matrix parity_;
  int depth_ = 1;
  std::vector<Symbol> history_;
  std::int64_t t_ = 0;
};

/// Eager re-solves a diagonal whenever one of its symbols arrives; AtDeadline
/// solves only when an erased symbol of the diagonal falls due. Both declare
/// the same symbols lost: determinability only grows with arrivals.
enum class DecodePolicy { Eager, AtDeadline };

struct SymbolEvent {
  std::int64_t time;  // packet the symbol belongs to
  int component;      // coordinate within x(time)
  std::int64_t at;    // decoder time of recovery (or of the missed deadline)
};

struct PacketDelivery {
  std::int64_t time;
  std::int64_t at;
  std::vector<Symbol> symbols;
};

struct DecodeOutput {
  std::vector<PacketDelivery> delivered;
  /// Message packets whose deadline passed with a symbol still unknown.
  std::vector<std::int64_t> lost;
  /// Erased symbols (message or parity) solved this step.
  std::vector<SymbolEvent> recovered;
  /// Erased symbols (message or parity) still unknown at their deadline.
  std::vector<SymbolEvent> failed;

  void clear() {
    delivered.clear();
    lost.clear();
    recovered.clear();
    failed.clear();
  }
};

namespace detail {

class DecoderImpl {
 public:
  virtual ~DecoderImpl() = default;
  virtual void step(const Symbol* y, bool real_packet, DecodeOutput& out) = 0;
};

struct PacketSlot {
  std::int64_t time = -1;
  std::vector<Symbol> symbols;
  std::uint64_t known = 0;
  bool done = false;
  bool real = false;
};

class DiagonalDecoder final : public DecoderImpl {
 public:
  DiagonalDecoder(const CodeSpec& spec, DecodePolicy policy)
      : h_(spec.H), f_(*spec.field), n_(spec.n()), k_(spec.k()), b_(n_ - k_), tau_(spec.tau()), policy_(policy) {
    if (n_ > 64) throw std::invalid_argument("decoder supports n <= 64");
    full_ = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
    ring_ = n_ + tau_ + 1;
    diags_.resize(static_cast<std::size_t>(ring_));
    packets_.resize(static_cast<std::size_t>(tau_ + 1));
    for (auto& p : packets_) p.symbols.assign(static_cast<std::size_t>(k_), 0);
    for (auto& d : diags_) d.values.assign(static_cast<std::size_t>(n_), 0);
    for (std::int64_t d = -(n_ - 1); d < 0; ++d) {
      Diag& g = diag_at(d);
      reset(g, d);
      for (int j = 0; j < -d; ++j) g.known |= bit(j);  // slots before time 0 carry zeros
    }
    h_cols_.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) h_cols_[static_cast<std::size_t>(j)] = h_.column(static_cast<std::size_t>(j));
  }

  void step(const Symbol* y, bool real_packet, DecodeOutput& out) override {
    const std::int64_t t = t_;
    reset(diag_at(t), t);
    PacketSlot& pk = packet_at(t);
    pk.time = t;
    pk.known = 0;
    pk.done = !real_packet;
    pk.real = real_packet;

    touched_.clear();
    for (int j = 0; j < n_; ++j) {
      Diag& g = diag_at(t - j);
      if (y) {
        g.values[static_cast<std::size_t>(j)] = y[j];
        g.known |= bit(j);
        if (g.erased && policy_ == DecodePolicy::Eager) touched_.push_back(t - j);
      } else {
        g.erased |= bit(j);
        // The erased coordinate may already be fixed by what has arrived.
        if (policy_ == DecodePolicy::Eager) touched_.push_back(t - j);
      }
    }
    if (y && real_packet) {
      std::copy(y, y + k_, pk.symbols.begin());
      pk.known = (std::uint64_t{1} << k_) - 1;
      pk.done = true;
      out.delivered.push_back({t, t, pk.symbols});
    }

    if (policy_ == DecodePolicy::AtDeadline) {
      for (int j = 0; j < n_; ++j) {
        const std::int64_t d = t - tau_ - j;
        if (d < t - ring_ + 1) continue;
        if (diag_at(d).d == d && (diag_at(d).erased & bit(j))) touched_.push_back(d);
      }
    }
    for (std::int64_t d : touched_) solve(diag_at(d), t, out);

    // Deadlines falling at t: coordinate j of diagonal t - tau - j.
    for (int j = 0; j < n_; ++j) {
      const std::int64_t d = t - tau_ - j;
      if (d + j < 0) continue;
      Diag& g = diag_at(d);
      if (g.d != d) continue;
      if (g.erased & bit(j)) out.failed.push_back({d + j, j, t});
    }
    if (t - tau_ >= 0) {
      PacketSlot& due = packet_at(t - tau_);
      if (due.time == t - tau_ && due.real && !due.done) {
        due.done = true;
        out.lost.push_back(due.time);
      }
    }
    ++t_;
  }

 private:
  struct Diag {
    std::int64_t d = INT64_MIN;
    std::vector<Symbol> values;
    std::uint64_t known = 0;
    std::uint64_t erased = 0;  // arrived as erasures and not yet recovered
  };

  static std::uint64_t bit(int j) { return std::uint64_t{1} << j; }
  Diag& diag_at(std::int64_t d) { return diags_[static_cast<std::size_t>(((d % ring_) + ring_) % ring_)]; }
  PacketSlot& packet_at(std::int64_t t) {
    const std::int64_t m = tau_ + 1;
    return packets_[static_cast<std::size_t>(((t % m) + m) % m)];
  }
  void reset(Diag& g, std::int64_t d) {
    g.d = d;
    g.known = 0;
    g.erased = 0;
    std::fill(g.values.begin(), g.values.end(), 0);
  }

  void solve(Diag& g, std::int64_t now, DecodeOutput& out) {
    if (!g.erased) return;
    const std::uint64_t unknown = full_ & ~g.known;
    unk_.clear();
    for (int j = 0; j < n_; ++j)
      if (unknown & bit(j)) unk_.push_back(j);
    const std::size_t u = unk_.size();
    // Augmented system [H_unknown | syndrome of known coordinates].
    Matrix& m = work_;
    if (m.rows() != static_cast<std::size_t>(b_) || m.cols() != u + 1) m = Matrix(h_.field(), static_cast<std::size_t>(b_), u + 1);
    for (int i = 0; i < b_; ++i) {
      Symbol syn = 0;
      for (int j = 0; j < n_; ++j)
        if (g.known & bit(j)) syn ^= f_.mul(h_cols_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)], g.values[static_cast<std::size_t>(j)]);
      for (std::size_t c = 0; c < u; ++c) m(static_cast<std::size_t>(i), c) = h_cols_[static_cast<std::size_t>(unk_[c])][static_cast<std::size_t>(i)];
      m(static_cast<std::size_t>(i), u) = syn;
    }
    const auto pivots = row_reduce(m, u);
    std::vector<bool> is_pivot(u, false);
    for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      const auto c = static_cast<std::size_t>(pivots[r]);
      const int j = unk_[c];
      if (!(g.erased & bit(j))) continue;
      bool free_dep = false;
      for (std::size_t cc = 0; cc < u && !free_dep; ++cc)
        if (!is_pivot[cc] && m(r, cc) != 0) free_dep = true;
      if (free_dep) continue;
      g.values[static_cast<std::size_t>(j)] = m(r, u);
      g.known |= bit(j);
      g.erased &= ~bit(j);
      out.recovered.push_back({g.d + j, j, now});
      if (j < k_) {
        PacketSlot& pk = packet_at(g.d + j);
        if (pk.time == g.d + j && pk.real && !pk.done) {
          pk.symbols[static_cast<std::size_t>(j)] = m(r, u);
          pk.known |= bit(j);
          if (pk.known == (std::uint64_t{1} << k_) - 1) {
            pk.done = true;
            out.delivered.push_back({pk.time, now, pk.symbols});
          }
        }
      }
    }
  }

  const Matrix& h_;
  const FieldSpec& f_;
  int n_, k_, b_, tau_;
  DecodePolicy policy_;
  std::uint64_t full_ = 0;
  std::int64_t ring_ = 1;
  std::vector<Diag> diags_;
  std::vector<PacketSlot> packets_;
  std::vector<Column> h_cols_;
  std::vector<std::int64_t> touched_;
  std::vector<int> unk_;
  Matrix work_;
  std::int64_t t_ = 0;
};

class RepetitionDecoder final : public DecoderImpl {
 public:
  explicit RepetitionDecoder(const CodeSpec& spec) : tau_(spec.tau()) {
    packets_.resize(static_cast<std::size_t>(tau_ + 1));
    for (auto& p : packets_) p.symbols.assign(1, 0);
  }

  void step(const Symbol* y, bool real_packet, DecodeOutput& out) override {
    const std::int64_t t = t_;
    PacketSlot& pk = slot(t);
    const std::int64_t old = t - tau_;
    // The slot for t - tau is reused by t, so settle t - tau first.
    if (old >= 0) {
      PacketSlot& due = slot(old);
      if (due.time == old && due.real && !due.done) {
        if (y) {
          due.symbols[0] = y[1];
          due.done = true;
          out.recovered.push_back({old, 0, t});
          out.delivered.push_back({old, t, due.symbols});
        } else {
          due.done = true;
          out.failed.push_back({old, 0, t});
          out.lost.push_back(old);
        }
      }
    }
    pk.time = t;
    pk.real = real_packet;
    pk.done = !real_packet;
    if (y && real_packet) {
      pk.symbols[0] = y[0];
      pk.done = true;
      out.delivered.push_back({t, t, pk.symbols});
    }
    ++t_;
  }

 private:
  PacketSlot& slot(std::int64_t t) {
    const std::int64_t m = tau_;
    return packets_[static_cast<std::size_t>(((t % m) + m) % m)];
  }
  int tau_;
  std::vector<PacketSlot> packets_;
  std::int64_t t_ = 0;
};

}  // namespace detail

class StreamDecoder {
 public:
  explicit StreamDecoder(const CodeSpec& spec, DecodePolicy policy = DecodePolicy::Eager)
      : spec_(std::make_shared<CodeSpec>(spec)), n_(spec.n()) {
    if (spec_->is_repetition())
      impl_ = std::make_unique<detail::RepetitionDecoder>(*spec_);
    else
      impl_ = std::make_unique<detail::DiagonalDecoder>(*spec_, policy);
  }

  std::int64_t time() const { return t_; }
  int n() const { return n_; }

  /// Feeds y(t): the n received symbols, or std::nullopt for an erasure.
  const DecodeOutput& decode_step(std::optional<std::span<const Symbol>> y) {
    if (y && static_cast<int>(y->size()) != n_) throw std::invalid_argument("coded packet must have n symbols");
    out_.clear();
    impl_->step(y ? y->data() : nullptr, true, out_);
    ++t_;
    return out_;
  }

  /// Ends the stream: advances tau slots with nothing received so every
  /// outstanding deadline is settled. No packets exist past the end.
  const DecodeOutput& finish() {
    DecodeOutput all;
    for (int i = 0; i < spec_->tau(); ++i) {
      out_.clear();
      impl_->step(nullptr, false, out_);
      ++t_;
      all.delivered.insert(all.delivered.end(), out_.delivered.begin(), out_.delivered.end());
      all.lost.insert(all.lost.end(), out_.lost.begin(), out_.lost.end());
      all.recovered.insert(all.recovered.end(), out_.recovered.begin(), out_.recovered.end());
      all.failed.insert(all.failed.end(), out_.failed.begin(), out_.failed.end());
    }
    out_ = std::move(all);
    return out_;
  }

 private:
  std::shared_ptr<CodeSpec> spec_;
  int n_;
  std::unique_ptr<detail::DecoderImpl> impl_;
  DecodeOutput out_;
  std::int64_t t_ = 0;
};

}  // namespace streamcode

#endif  // STREAMCODE_STREAM_CODEC_HPP
