#pragma once

// Exact and high-precision number types shared across the library.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace typnorm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
// ~166 bits of mantissa; well above the 64-bit working precision floor.
using HighPrec = boost::multiprecision::cpp_bin_float_50;

// A precondition stated by the caller's contract does not hold.
class ContractViolation : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A request would exceed a configured materialization cap.
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// The operation is not available for this object (e.g. no checkpoint metadata).
class UnsupportedOperation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// Parse failure with the 0-based character offset where it occurred.
class ParseError : public std::invalid_argument {
public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

/// log2 of a positive integer of any size, at HighPrec precision.
HighPrec log2_big(const BigInt& x);

HighPrec ln2();

std::string to_decimal(const BigInt& x);

/// 12 significant digits, the precision used in every emitted series.
std::string format_sig12(const HighPrec& x);

/// Parses "p/q" or "p" (optional sign) into an exact rational.
Rational parse_rational(std::string_view text);

/// Parses a non-negative decimal integer, also accepting "1e7"-style mantissa/exponent.
BigInt parse_count(std::string_view text);

std::uint64_t to_u64(const BigInt& x);

inline std::size_t bit_length(std::uint64_t v) {
  std::size_t len = 0;
  while (v != 0) {
    ++len;
    v >>= 1;
  }
  return len;
}

}  // namespace typnorm
