#include "typnorm/run_summary.hpp"

#include <algorithm>

namespace typnorm {

RunSummary RunSummary::of(std::span<const Bit> word) {
  RunSummary s;
  s.length = word.size();
  std::size_t run = 0;
  std::size_t best = 0;
  std::size_t lead = 0;
  bool in_lead = true;
  for (Bit b : word) {
    if (b == Bit::one) {
      ++run;
      best = std::max(best, run);
      if (in_lead) {
        ++lead;
      }
    } else {
      run = 0;
      in_lead = false;
    }
  }
  s.leading_ones = lead;
  s.trailing_ones = run;
  s.max_run = best;
  return s;
}

RunSummary concat(const RunSummary& a, const RunSummary& b) {
  if (a.length == 0) {
    return b;
  }
  if (b.length == 0) {
    return a;
  }
  RunSummary out;
  out.length = a.length + b.length;
  out.leading_ones = a.all_ones() ? BigInt(a.length + b.leading_ones) : a.leading_ones;
  out.trailing_ones = b.all_ones() ? BigInt(b.length + a.trailing_ones) : b.trailing_ones;
  out.max_run = std::max({a.max_run, b.max_run, BigInt(a.trailing_ones + b.leading_ones)});
  return out;
}

RunSummary power(const RunSummary& s, const BigInt& times) {
  if (times < 0) {
    throw ContractViolation("power: negative repetition count");
  }
  if (times == 0 || s.length == 0) {
    return RunSummary{};
  }
  RunSummary out;
  out.length = s.length * times;
  if (s.all_ones()) {
    out.leading_ones = out.trailing_ones = out.max_run = out.length;
    return out;
  }
  out.leading_ones = s.leading_ones;
  out.trailing_ones = s.trailing_ones;
  out.max_run = times >= 2 ? std::max(s.max_run, BigInt(s.trailing_ones + s.leading_ones)) : s.max_run;
  return out;
}

}  // namespace typnorm
