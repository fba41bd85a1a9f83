#pragma once

// Sequence transducers from N^N into {0,1}^N: the Taylor-based map f, the
// zero-density zeroing action g', the run-planting action f', and their
// composition phi over omega'. Inputs are finite descriptions of sequences
// whose membership in P3, C and D is decidable from the tail rule.

#include "typnorm/analysis.hpp"
#include "typnorm/bitstream.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace typnorm {

class NatSeqDescriptor;

namespace tail {
struct Constant {
  BigInt value;
};
struct Identity {};
/// floor(alpha n + beta), alpha > 0.
struct Affine {
  Rational alpha;
  Rational beta;
};
/// a_{2k-1} = odd.term(k), a_{2k} = even.term(k).
struct Interleave {
  std::shared_ptr<const NatSeqDescriptor> odd;
  std::shared_ptr<const NatSeqDescriptor> even;
};
}  // namespace tail

using TailRule = std::variant<tail::Constant, tail::Identity, tail::Affine, tail::Interleave>;

/// Explicit prefix followed by a tail rule evaluated at the global index.
class NatSeqDescriptor {
public:
  NatSeqDescriptor(std::vector<BigInt> prefix, TailRule tail);

  const std::vector<BigInt>& prefix() const noexcept { return prefix_; }
  const TailRule& tail() const noexcept { return tail_; }

  /// a_n for n >= 1.
  BigInt term(const BigInt& n) const;

  static NatSeqDescriptor constant(BigInt c, std::vector<BigInt> prefix = {});
  static NatSeqDescriptor identity(std::vector<BigInt> prefix = {});
  static NatSeqDescriptor affine(Rational alpha, Rational beta, std::vector<BigInt> prefix = {});
  static NatSeqDescriptor interleave(NatSeqDescriptor odd, NatSeqDescriptor even, std::vector<BigInt> prefix = {});

private:
  std::vector<BigInt> prefix_;
  TailRule tail_;
};

BigInt seq_term(const NatSeqDescriptor& d, const BigInt& n);

/// (a_1, a_3, a_5, ...) and (a_2, a_4, ...), as descriptors again.
NatSeqDescriptor odd_terms(const NatSeqDescriptor& d);
NatSeqDescriptor even_terms(const NatSeqDescriptor& d);

/// Whether a_n -> infinity.
bool diverges(const NatSeqDescriptor& d);

struct Classification {
  bool in_P3 = false;  // a_n -> inf
  bool in_C = false;   // a_{2n} -> inf
  bool in_D = false;   // a_{2n-1} -> inf
  bool operator==(const Classification&) const = default;
};

Classification classify(const NatSeqDescriptor& d);

/// `prefix=3,1,4;tail=const:2`, `tail=identity`, `tail=affine:1/2,3`,
/// `tail=interleave(<d1>|<d2>)`. ParseError carries the failing offset.
NatSeqDescriptor parse_descriptor(std::string_view text);
std::string to_string(const NatSeqDescriptor& d);

// --- Taylor engine for log2 -------------------------------------------------

struct TaylorApprox {
  HighPrec center;  // a > 0
  BigInt order;     // M >= 1
  BigInt point;     // B, with |B - a| < a
};

/// k-th derivative of log2 at a: log2 a for k = 0, (-1)^(k-1) (k-1)! / (a^k ln 2) otherwise.
HighPrec log2_derivative(unsigned k, const HighPrec& a);

/// sum_{k=0}^{M} log2^(k)(a)/k! (B - a)^k. Terms below working precision are
/// not accumulated.
HighPrec log2_taylor(const TaylorApprox& t);

/// The center 2B/3, which puts B at half the convergence radius.
HighPrec default_taylor_center(const BigInt& point);

/// 2^(1/M(n)) * log2_taylor(2B/3, M(n), B), with M(n) = seq_term(d, n).
HighPrec big_T(const NatSeqDescriptor& d, const BigInt& n, const BigInt& point);

// --- Maps --------------------------------------------------------------------

/// Number of ones opening block n of f(d): min(n, floor T(n)) clamped at 0,
/// with T evaluated at the triangular B_n = n(n+1)/2.
std::uint64_t reduction_f_ones(const NatSeqDescriptor& d, std::uint64_t n);

BitStream reduction_f(const NatSeqDescriptor& d);

/// m in I_n = [2^(n-1), 2^n) belongs iff (m - 2^(n-1)) is divisible by a_n.
IndexSet zero_density_g(const NatSeqDescriptor& d);

/// Zeroes w on zero_density_g(d).
BitStream action_g_prime(const NatSeqDescriptor& d, const BitStream& w);

/// l_n = min(floor T(n), 2n) with B_n = 2^n, clamped at 0.
std::uint64_t f_prime_run(const NatSeqDescriptor& d, std::uint64_t n);

/// For each n >= 5, overwrites the tail of (2^(n-1), 2^n] with 0 1^{l_n} 0.
BitStream action_f_prime(const NatSeqDescriptor& d, const BitStream& w);

/// f'(odd terms) applied to g'(even terms) applied to omega'.
BitStream phi(const NatSeqDescriptor& d);
/// phi with an explicit base stream in place of omega'.
BitStream phi(const NatSeqDescriptor& d, const BitStream& base);

/// Descriptors agreeing on terms 1..k give phi images agreeing on this many digits.
BigInt phi_agreement_prefix(unsigned k);

}  // namespace typnorm
