#pragma once

// Streaming statistics over bit streams: the run-length function L_n, the
// typicality ratio L_n / log2 n, overlapping block frequencies N(x, w, n),
// normality discrepancy, index-set densities, and admissible-block counts.

#include "typnorm/bitstream.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace typnorm {

/// Streaming accumulator for L_n, the longest run of ones among x_1..x_n.
struct RunState {
  std::uint64_t position = 0;
  std::uint64_t current_run = 0;
  std::uint64_t max_run = 0;

  void feed(Bit b) noexcept {
    ++position;
    if (b == Bit::one) {
      ++current_run;
      if (current_run > max_run) {
        max_run = current_run;
      }
    } else {
      current_run = 0;
    }
  }
};

RunState run_feed(RunState st, Bit b);

/// Overlapping occurrence counts of every block of length 1..m.
class FreqTable {
public:
  static constexpr unsigned kMaxBlockLength = 24;

  explicit FreqTable(unsigned m);

  void feed(Bit b) noexcept {
    ++position_;
    window_ = ((window_ << 1) | to_int(b)) & full_mask_;
    const unsigned upto = position_ < m_ ? static_cast<unsigned>(position_) : m_;
    for (unsigned len = 1; len <= upto; ++len) {
      ++counts_[len][window_ & ((1u << len) - 1)];
    }
  }

  unsigned max_length() const noexcept { return m_; }
  std::uint64_t position() const noexcept { return position_; }
  /// N(x, w, n); the block's first digit is the most significant.
  std::uint64_t count(const Block& w) const;
  std::uint64_t count(unsigned length, std::uint32_t code) const { return counts_.at(length).at(code); }
  std::uint64_t total(unsigned length) const;

private:
  unsigned m_;
  std::uint64_t position_ = 0;
  std::uint32_t window_ = 0;
  std::uint32_t full_mask_;
  std::vector<std::vector<std::uint64_t>> counts_;  // indexed by length, then code
};

FreqTable freq_feed(FreqTable ft, Bit b);

/// L / log2 n, n >= 2.
HighPrec typicality_ratio(const BigInt& L, const BigInt& n);

struct TypicalityRow {
  BigInt position;
  BigInt L;
  HighPrec log2n;
  HighPrec ratio;
};

/// Rows at ascending positions. Positions within the cap are streamed; larger
/// ones must coincide with a checkpoint of the stream.
std::vector<TypicalityRow> typicality_series(const BitStream& s, const std::vector<BigInt>& positions,
                                             std::uint64_t cap = kDefaultCap);

/// Same as typicality_series but over an already materialized prefix.
std::vector<TypicalityRow> typicality_series(const Prefix& p, const std::vector<BigInt>& positions);

/// max over blocks w with |w| <= m of |N(x,w,n)/n - 2^-|w||.
HighPrec normality_discrepancy(const FreqTable& ft);

/// A subset of the positive integers given by a membership predicate.
class IndexSet {
public:
  using Predicate = std::function<bool(const BigInt&)>;
  using FastPredicate = std::function<bool(std::uint64_t)>;

  IndexSet(std::string description, Predicate contains, FastPredicate fast = {});

  bool contains(const BigInt& m) const { return contains_(m); }
  bool contains(std::uint64_t m) const { return fast_ ? fast_(m) : contains_(BigInt(m)); }
  const std::string& description() const noexcept { return description_; }

private:
  std::string description_;
  Predicate contains_;
  FastPredicate fast_;
};

struct DensityRow {
  std::uint64_t n = 0;
  std::uint64_t count = 0;
  HighPrec density;
};

std::vector<DensityRow> density_series(const IndexSet& a, const std::vector<std::uint64_t>& positions,
                                       std::uint64_t cap = kDefaultCap);

/// Whether L / log2 n lies in the open interval (1 - 1/m, 1 + 1/m); decided exactly.
bool admissible_run(std::uint64_t L, std::uint64_t n, std::uint64_t m);

/// Number of words in {0,1}^n whose longest run is admissible. 2 <= n <= 30.
std::uint64_t admissible_blocks_count(unsigned n, unsigned m);

/// Number of words in {0,1}^n whose longest run of ones is at most h.
std::uint64_t count_words_max_run_at_most(unsigned n, long h);

/// min/max of the samples after a burn-in fraction; estimates of liminf/limsup.
struct TailEstimate {
  double min = 0;
  double max = 0;
};
TailEstimate tail_estimate(std::span<const double> samples, double burn_in = 0.5);

std::string typicality_csv(const std::vector<TypicalityRow>& rows);
std::string density_csv(const std::vector<DensityRow>& rows);

}  // namespace typnorm
