#pragma once

// Lazy generators for the constructed expansions: Champernowne's C_2, the
// polynomial (Nakai) family, the biased y, the exceptional z, Madritsch's
// omega and its modification omega'.

#include "typnorm/bitstream.hpp"
#include "typnorm/run_summary.hpp"

#include <deque>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace typnorm {

/// w(x) = a_n x^n + ... + a_0 with exact rational coefficients.
struct Polynomial {
  std::vector<Rational> coefficients;  // a_0 first

  std::size_t degree() const;
  Rational operator()(const Rational& x) const;

  /// Throws ContractViolation naming the failed condition. Positivity on x > 0
  /// is checked on x = 1..1000 together with a positive leading coefficient.
  void validate() const;

  /// Comma-separated, highest degree first: "2,0" is 2x, "1/4,3/4" is x/4 + 3/4.
  static Polynomial parse(std::string_view text);
};

/// Digits of 0.[w(1)]_r [w(2)]_r ... in base r, located positionally.
class NakaiDigits {
public:
  NakaiDigits(Polynomial w, unsigned radix);

  unsigned radix() const noexcept { return radix_; }
  /// 1-based; returns a base-r digit.
  unsigned digit_at(const BigInt& index) const;
  /// floor(w(k)) for k >= 1.
  BigInt integer_part(const BigInt& k) const;
  /// Number of base-r digits of floor(w(k)) (1 for zero).
  std::size_t notation_length(const BigInt& k) const;

private:
  BigInt first_k_at_least(const BigInt& threshold) const;
  const BigInt& length_threshold(std::size_t digits) const;

  Polynomial w_;
  std::vector<BigInt> numerators_;  // integer coefficients over common_den_, a_0 first
  BigInt common_den_;
  unsigned radix_;
  BigInt monotone_from_;               // w increasing on [monotone_from_, inf)
  std::vector<std::size_t> head_lengths_;  // notation lengths for k < monotone_from_
  BigInt head_total_;

  mutable std::mutex mutex_;
  // thresholds_[b] = least k >= monotone_from_ with notation length >= b
  mutable std::vector<BigInt> thresholds_;
};

struct MadritschLevel {
  unsigned i = 0;
  std::uint64_t inner_exponent = 0;  // e_i, clamped to >= 1
  BigInt outer_exponent;             // l_i = i^(2^i)
  BigInt block_length;               // |w_i| = 2^i * i * e_i
  BigInt level_length;               // l_i * |w_i|
  BigInt boundary;                   // B_i = sum_{j<=i} l_j |w_j|
  BigInt zeroed_length;              // l_i * i * e_i, the all-ones sections

  /// Actual longest run in w_i: the final block 1^i repeated e_i times.
  BigInt actual_max_run() const { return BigInt(i) * inner_exponent; }
  /// The run length as literally written, ceil(i 2^i log i), without the factor i.
  BigInt stated_max_run() const { return inner_exponent; }
};

/// Exact bookkeeping for w_1^{l_1} w_2^{l_2} ... ; levels are computed on demand.
class MadritschStructure {
public:
  const MadritschLevel& level(unsigned i) const;
  /// Level containing the 1-based index.
  const MadritschLevel& level_of(const BigInt& index) const;

  /// A(n) = sum_{i<=n} l_i i e_i.
  BigInt zeroed_total(unsigned n) const;
  /// B(n).
  const BigInt& boundary(unsigned n) const { return level(n).boundary; }

  /// Bits of one copy of w_i (optionally with the all-ones section zeroed).
  std::vector<Bit> materialize_block(unsigned i, bool zero_last_section) const;
  /// Exact run summary of one copy of w_i, from its block decomposition.
  RunSummary block_summary(unsigned i, bool zero_last_section) const;
  /// Exact run summary of the prefix ending at B_n.
  RunSummary prefix_summary(unsigned n, bool zero_last_section) const;

private:
  mutable std::mutex mutex_;
  mutable std::deque<MadritschLevel> levels_;
};

const MadritschStructure& madritsch_structure();

/// ceil(i 2^i ln i), clamped to >= 1.
std::uint64_t madritsch_inner_exponent(unsigned i);

BitStream champernowne();
BitStream nakai_poly(const Polynomial& w, unsigned radix = 2);
BitStream strictly_typical_y();
BitStream strictly_normal_z(unsigned a);
BitStream madritsch_omega();
BitStream omega_prime();

/// g(n) from the y construction: 1^{|f_2(n)|} if n = 2^k - 1, else 0^{|f_2(n)|}.
Block y_block(const BigInt& n);

/// Exact checkpoints n_from..n_to, no streaming involved.
std::vector<Checkpoint> checkpoints(const BitStream& s, unsigned n_from, unsigned n_to);

/// Named generator selection: champernowne | y | z | omega | omega-prime | nakai.
struct GeneratorSpec {
  std::string name;
  unsigned a = 2;
  std::string poly;  // for nakai
  unsigned radix = 2;
};

BitStream make_generator(const GeneratorSpec& spec);
std::vector<std::string> generator_names();

}  // namespace typnorm
