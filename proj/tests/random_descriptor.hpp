#pragma once

#include "typnorm/reductions.hpp"

#include <random>

namespace testing_support {

// Random descriptor text covering every tail rule.
inline std::string random_tail(std::mt19937_64& rng, int depth = 0) {
  switch (rng() % (depth == 0 ? 4 : 3)) {
    case 0: return "tail=const:" + std::to_string(1 + rng() % 6);
    case 1: return "tail=identity";
    case 2: return "tail=affine:" + std::to_string(1 + rng() % 3) + "/" + std::to_string(1 + rng() % 4) + "," +
                   std::to_string(1 + rng() % 3);
    default: return "tail=interleave(" + random_tail(rng, 1) + "|" + random_tail(rng, 1) + ")";
  }
}

inline std::string random_prefix(std::mt19937_64& rng, std::size_t len) {
  std::string out;
  for (std::size_t i = 0; i < len; ++i) out += (i ? "," : "") + std::to_string(1 + rng() % 9);
  return out;
}

inline typnorm::NatSeqDescriptor random_descriptor(std::mt19937_64& rng, const std::string& prefix = "") {
  const std::string text = prefix.empty() ? random_tail(rng) : "prefix=" + prefix + ";" + random_tail(rng);
  return typnorm::parse_descriptor(text);
}

}  // namespace testing_support
