#include "typnorm/numeric.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <limits>

namespace typnorm {

HighPrec ln2() {
  static const HighPrec value = boost::multiprecision::log(HighPrec(2));
  return value;
}

HighPrec log2_big(const BigInt& x) {
  if (x <= 0) {
    throw ContractViolation("log2_big: argument must be positive");
  }
  const std::size_t top = boost::multiprecision::msb(x);
  // Keep 200 leading bits; the shifted-out tail is below HighPrec resolution.
  constexpr std::size_t keep = 200;
  if (top <= keep) {
    return boost::multiprecision::log2(HighPrec(x));
  }
  const std::size_t shift = top - keep;
  const BigInt head = x >> shift;
  return HighPrec(shift) + boost::multiprecision::log2(HighPrec(head));
}

std::string to_decimal(const BigInt& x) { return x.str(); }

std::string format_sig12(const HighPrec& x) {
  return x.str(12, std::ios_base::fmtflags(0));
}

Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view part, std::size_t offset) -> BigInt {
    if (part.empty()) {
      throw ParseError("expected an integer", offset);
    }
    std::size_t i = 0;
    bool negative = false;
    if (part[0] == '-' || part[0] == '+') {
      negative = part[0] == '-';
      i = 1;
    }
    if (i == part.size()) {
      throw ParseError("expected digits after sign", offset + i);
    }
    BigInt value = 0;
    for (; i < part.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(part[i]))) {
        throw ParseError(std::string("unexpected character '") + part[i] + "' in number", offset + i);
      }
      value = value * 10 + (part[i] - '0');
    }
    return negative ? BigInt(-value) : value;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_int(text, 0));
  }
  const BigInt num = parse_int(text.substr(0, slash), 0);
  const BigInt den = parse_int(text.substr(slash + 1), slash + 1);
  if (den == 0) {
    throw ParseError("zero denominator", slash + 1);
  }
  return Rational(num, den);
}

BigInt parse_count(std::string_view text) {
  const auto e = text.find_first_of("eE");
  const std::string_view mantissa = text.substr(0, e);
  if (mantissa.empty()) {
    throw ParseError("expected a count", 0);
  }
  BigInt value = 0;
  for (std::size_t i = 0; i < mantissa.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(mantissa[i]))) {
      throw ParseError(std::string("unexpected character '") + mantissa[i] + "' in count", i);
    }
    value = value * 10 + (mantissa[i] - '0');
  }
  if (e != std::string_view::npos) {
    const std::string_view exponent = text.substr(e + 1);
    if (exponent.empty() || exponent.size() > 4) {
      throw ParseError("bad exponent", e + 1);
    }
    unsigned power = 0;
    for (std::size_t i = 0; i < exponent.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(exponent[i]))) {
        throw ParseError("bad exponent", e + 1 + i);
      }
      power = power * 10 + static_cast<unsigned>(exponent[i] - '0');
    }
    value *= boost::multiprecision::pow(BigInt(10), power);
  }
  return value;
}

std::uint64_t to_u64(const BigInt& x) {
  if (x < 0 || x > std::numeric_limits<std::uint64_t>::max()) {
    throw ResourceError("integer " + x.str() + " does not fit in 64 bits");
  }
  return static_cast<std::uint64_t>(x);
}

}  // namespace typnorm
