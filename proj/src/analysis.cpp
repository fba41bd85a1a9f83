#include "typnorm/analysis.hpp"

#include <algorithm>
#include <sstream>

namespace typnorm {

namespace mp = boost::multiprecision;

RunState run_feed(RunState st, Bit b) {
  st.feed(b);
  return st;
}

FreqTable::FreqTable(unsigned m) : m_(m) {
  if (m < 1 || m > kMaxBlockLength) {
    throw ContractViolation("FreqTable: block length must be in [1, 24]");
  }
  full_mask_ = (1u << m) - 1;
  counts_.resize(m + 1);
  for (unsigned len = 1; len <= m; ++len) {
    counts_[len].assign(std::size_t{1} << len, 0);
  }
}

std::uint64_t FreqTable::count(const Block& w) const {
  if (w.size() < 1 || w.size() > m_) {
    throw ContractViolation("FreqTable::count: block length outside [1, m]");
  }
  std::uint32_t code = 0;
  for (Bit b : w.digits) {
    code = (code << 1) | to_int(b);
  }
  return counts_[w.size()][code];
}

std::uint64_t FreqTable::total(unsigned length) const {
  std::uint64_t sum = 0;
  for (std::uint64_t c : counts_.at(length)) {
    sum += c;
  }
  return sum;
}

FreqTable freq_feed(FreqTable ft, Bit b) {
  ft.feed(b);
  return ft;
}

HighPrec typicality_ratio(const BigInt& L, const BigInt& n) {
  if (n < 2) {
    throw ContractViolation("typicality_ratio: n must be >= 2");
  }
  return HighPrec(L) / log2_big(n);
}

namespace {

void check_ascending(const std::vector<BigInt>& positions) {
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] < 2) {
      throw ContractViolation("typicality_series: positions must be >= 2");
    }
    if (i > 0 && positions[i] <= positions[i - 1]) {
      throw ContractViolation("typicality_series: positions must be strictly ascending");
    }
  }
}

TypicalityRow make_row(const BigInt& position, const BigInt& L) {
  TypicalityRow row{position, L, log2_big(position), 0};
  row.ratio = HighPrec(L) / row.log2n;
  return row;
}

}  // namespace

std::vector<TypicalityRow> typicality_series(const BitStream& s, const std::vector<BigInt>& positions,
                                             std::uint64_t cap) {
  check_ascending(positions);
  std::vector<TypicalityRow> rows;
  StreamReader reader(s);
  RunState st;
  unsigned next_checkpoint = s.has_checkpoints() ? s.first_checkpoint() : 0;
  for (const BigInt& pos : positions) {
    if (pos <= cap) {
      const auto target = static_cast<std::uint64_t>(pos);
      while (st.position < target) {
        st.feed(reader.next());
      }
      rows.push_back(make_row(pos, BigInt(st.max_run)));
      continue;
    }
    if (!s.has_checkpoints()) {
      throw ResourceError("position " + pos.str() + " exceeds materialization cap " + std::to_string(cap) +
                          " and stream '" + s.kind() + "' has no checkpoint metadata");
    }
    for (;; ++next_checkpoint) {
      const Checkpoint cp = s.checkpoint(next_checkpoint);
      if (cp.position == pos) {
        rows.push_back(make_row(pos, cp.exact_L));
        break;
      }
      if (cp.position > pos) {
        throw ResourceError("position " + pos.str() + " exceeds materialization cap " + std::to_string(cap) +
                            " and is not a checkpoint of '" + s.kind() + "'");
      }
    }
  }
  return rows;
}

std::vector<TypicalityRow> typicality_series(const Prefix& p, const std::vector<BigInt>& positions) {
  check_ascending(positions);
  std::vector<TypicalityRow> rows;
  RunState st;
  for (const BigInt& pos : positions) {
    if (pos > p.size()) {
      throw ResourceError("position " + pos.str() + " beyond the supplied prefix of length " +
                          std::to_string(p.size()));
    }
    const auto target = static_cast<std::uint64_t>(pos);
    while (st.position < target) {
      st.feed(p.digits[st.position]);
    }
    rows.push_back(make_row(pos, BigInt(st.max_run)));
  }
  return rows;
}

HighPrec normality_discrepancy(const FreqTable& ft) {
  if (ft.position() < ft.max_length()) {
    throw ContractViolation("normality_discrepancy: fewer digits than the block length");
  }
  const HighPrec n(ft.position());
  HighPrec worst = 0;
  for (unsigned len = 1; len <= ft.max_length(); ++len) {
    const HighPrec expected = HighPrec(1) / HighPrec(BigInt(1) << len);
    for (std::uint32_t code = 0; code < (1u << len); ++code) {
      const HighPrec dev = mp::abs(HighPrec(ft.count(len, code)) / n - expected);
      if (dev > worst) {
        worst = dev;
      }
    }
  }
  return worst;
}

IndexSet::IndexSet(std::string description, Predicate contains, FastPredicate fast)
    : description_(std::move(description)), contains_(std::move(contains)), fast_(std::move(fast)) {}

std::vector<DensityRow> density_series(const IndexSet& a, const std::vector<std::uint64_t>& positions,
                                       std::uint64_t cap) {
  std::vector<DensityRow> rows;
  std::uint64_t count = 0;
  std::uint64_t upto = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const std::uint64_t n = positions[i];
    if (n < 1 || (i > 0 && n <= positions[i - 1])) {
      throw ContractViolation("density_series: positions must be positive and ascending");
    }
    if (n > cap) {
      throw ResourceError("density_series: position " + std::to_string(n) + " exceeds cap " +
                          std::to_string(cap));
    }
    for (; upto < n; ++upto) {
      count += a.contains(upto + 1) ? 1 : 0;
    }
    rows.push_back({n, count, HighPrec(count) / HighPrec(n)});
  }
  return rows;
}

bool admissible_run(std::uint64_t L, std::uint64_t n, std::uint64_t m) {
  // (m-1)/m < L / log2 n < (m+1)/m  <=>  n^(m-1) < 2^(mL) < n^(m+1)
  const BigInt lhs = BigInt(1) << (m * L);
  const BigInt base(n);
  return mp::pow(base, static_cast<unsigned>(m - 1)) < lhs && lhs < mp::pow(base, static_cast<unsigned>(m + 1));
}

std::uint64_t count_words_max_run_at_most(unsigned n, long h) {
  if (h < 0) {
    return 0;
  }
  const auto cap = static_cast<std::size_t>(std::min<long>(h, n));
  // ways[r] = words so far ending in exactly r trailing ones
  std::vector<std::uint64_t> ways(cap + 1, 0);
  ways[0] = 1;
  for (unsigned step = 0; step < n; ++step) {
    std::vector<std::uint64_t> next(cap + 1, 0);
    for (std::size_t r = 0; r <= cap; ++r) {
      next[0] += ways[r];
      if (r + 1 <= cap) {
        next[r + 1] += ways[r];
      }
    }
    ways.swap(next);
  }
  std::uint64_t sum = 0;
  for (std::uint64_t w : ways) {
    sum += w;
  }
  return sum;
}

std::uint64_t admissible_blocks_count(unsigned n, unsigned m) {
  if (n < 2 || n > 30) {
    throw ContractViolation("admissible_blocks_count: n must be in [2, 30]");
  }
  if (m < 1) {
    throw ContractViolation("admissible_blocks_count: m must be >= 1");
  }
  long lo = -1;
  long hi = -1;
  for (std::uint64_t L = 0; L <= n; ++L) {
    if (admissible_run(L, n, m)) {
      if (lo < 0) {
        lo = static_cast<long>(L);
      }
      hi = static_cast<long>(L);
    }
  }
  if (lo < 0) {
    return 0;
  }
  return count_words_max_run_at_most(n, hi) - count_words_max_run_at_most(n, lo - 1);
}

TailEstimate tail_estimate(std::span<const double> samples, double burn_in) {
  if (samples.empty()) {
    throw ContractViolation("tail_estimate: no samples");
  }
  auto start = static_cast<std::size_t>(static_cast<double>(samples.size()) * burn_in);
  start = std::min(start, samples.size() - 1);
  const auto [mn, mx] = std::minmax_element(samples.begin() + static_cast<std::ptrdiff_t>(start), samples.end());
  return {*mn, *mx};
}

std::string typicality_csv(const std::vector<TypicalityRow>& rows) {
  std::ostringstream out;
  out << "n,L,log2n,ratio\n";
  for (const auto& r : rows) {
    out << r.position.str() << ',' << r.L.str() << ',' << format_sig12(r.log2n) << ',' << format_sig12(r.ratio)
        << '\n';
  }
  return out.str();
}

std::string density_csv(const std::vector<DensityRow>& rows) {
  std::ostringstream out;
  out << "n,count,density\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.count << ',' << format_sig12(r.density) << '\n';
  }
  return out.str();
}

}  // namespace typnorm
