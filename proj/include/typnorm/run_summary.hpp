#pragma once

// Summary of the runs of ones in a finite word, closed under concatenation.
// Lets maximal-run lengths of astronomically long constructed prefixes be
// computed exactly from their block structure.

#include "typnorm/bitstream.hpp"

#include <span>

namespace typnorm {

struct RunSummary {
  BigInt length = 0;
  BigInt leading_ones = 0;
  BigInt trailing_ones = 0;
  BigInt max_run = 0;

  bool all_ones() const { return leading_ones == length; }
  bool operator==(const RunSummary&) const = default;

  static RunSummary of(std::span<const Bit> word);
};

RunSummary concat(const RunSummary& a, const RunSummary& b);

/// Summary of `s` concatenated with itself `times` times.
RunSummary power(const RunSummary& s, const BigInt& times);

}  // namespace typnorm
