// Acceptance suite: one PASS/FAIL line per criterion.

#include "oracles.hpp"
#include "random_descriptor.hpp"
#include "typnorm/analysis.hpp"
#include "typnorm/constructions.hpp"
#include "typnorm/harness.hpp"
#include "typnorm/reductions.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

using namespace typnorm;
namespace mp = boost::multiprecision;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs > limit_seconds) {
    o.pass = false;
    o.detail += " (over time limit " + std::to_string(static_cast<int>(limit_seconds)) + "s)";
  }
  failures += !o.pass;
  std::printf("[%s] %2d %-34s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", id, title, secs, o.detail.c_str());
  std::fflush(stdout);
}

// L at each ascending position by streaming from index 1.
std::vector<std::uint64_t> scan(const BitStream& s, const std::vector<std::uint64_t>& positions) {
  std::vector<std::uint64_t> out;
  StreamReader r(s);
  RunState st;
  for (std::uint64_t p : positions) {
    while (st.position < p) st.feed(r.next());
    out.push_back(st.max_run);
  }
  return out;
}

double log2_of(const BigInt& x) { return static_cast<double>(mp::log(HighPrec(x)) / mp::log(HighPrec(2))); }

std::string digits(const BitStream& s, std::size_t n) {
  std::string out = to_ascii(take(s, n));
  out.pop_back();
  return out;
}

}  // namespace

int main() {
  criterion(1, "Champernowne checkpoints", 60, [] {
    Outcome o;
    std::vector<std::uint64_t> ps;
    for (unsigned n = 1; n <= 22; ++n) ps.push_back((std::uint64_t{n} - 1) * (std::uint64_t{1} << n) + 1);
    const auto L = scan(champernowne(), ps);
    for (unsigned n = 1; n <= 22; ++n) {
      o.pass = o.pass && L[n - 1] == n;
      const Checkpoint cp = champernowne().checkpoint(n);
      o.pass = o.pass && cp.position == ps[n - 1] && cp.exact_L == n;
    }
    const double expected = 20 / std::log2(19.0 * 1048576 + 1);
    const double got = static_cast<double>(verify_champernowne({}).rows[18].ratio);
    o.pass = o.pass && std::abs(got - expected) / expected < 1e-6;
    char buf[160];
    std::snprintf(buf, sizeof buf, "L(p_n)=n for n<=22 by scan; ratio(20)=%.6f vs %.6f", got, expected);
    o.detail = buf;
    return o;
  });

  criterion(2, "z exceptionality (a=2,3)", 60, [] {
    Outcome o;
    double tightest = 1e9;
    for (unsigned a : {2u, 3u}) {
      const BitStream z = strictly_normal_z(a);
      std::vector<std::uint64_t> ps;
      for (unsigned n = 1; n <= 14; ++n) ps.push_back((std::uint64_t{1} << a) * ((n - 1) * (std::uint64_t{1} << n) + 1));
      const auto L = scan(z, ps);
      for (unsigned n = 1; n <= 14; ++n) o.pass = o.pass && L[n - 1] == n * (1u << a);
      for (unsigned n = 10; n <= 30; ++n) {
        const BigInt p = (BigInt(1) << a) * ((BigInt(n - 1) << n) + 1);
        const Checkpoint cp = z.checkpoint(n);
        o.pass = o.pass && cp.position == p && cp.exact_L == n * (1u << a);
        const double ratio = n * double(1u << a) / log2_of(p);
        const double floor = 0.9 * (double(1u << a) / a) * n / (n + std::log2(double(n)));
        o.pass = o.pass && ratio > floor;
        tightest = std::min(tightest, ratio / floor);
      }
    }
    o.detail = "scan n<=14 exact; min ratio/bound over 10<=n<=30 = " + std::to_string(tightest);
    return o;
  });

  criterion(3, "omega divergence, omega' decay", 10, [] {
    Outcome o;
    const auto w = checkpoints(madritsch_omega(), 1, 12);
    const auto wp = checkpoints(omega_prime(), 1, 12);
    // independent level bookkeeping
    BigInt B = 0, A = 0;
    std::vector<BigInt> Bs{0}, As{0};
    for (unsigned i = 1; i <= 12; ++i) {
      const BigInt e = oracle::madritsch_e(i);
      const BigInt l = mp::pow(BigInt(i), 1u << i);
      B += l * (BigInt(1) << i) * i * e;
      A += l * i * e;
      Bs.push_back(B);
      As.push_back(A);
    }
    double prev_w = 0, prev_wp = 1e9;
    for (unsigned n = 1; n <= 12; ++n) {
      const auto& cw = w[n - 1];
      const auto& cwp = wp[n - 1];
      o.pass = o.pass && cw.position == Bs[n] && cwp.position == Bs[n];
      o.pass = o.pass && cw.exact_L == BigInt(n) * oracle::madritsch_e(n);
      o.pass = o.pass && cwp.exact_L <= 2 * n;
      const double lb = log2_of(Bs[n]);
      const double rw = static_cast<double>(cw.exact_L) / lb;
      const double rwp = static_cast<double>(cwp.exact_L) / lb;
      if (n >= 4) {
        o.pass = o.pass && rw > prev_w && rwp < prev_wp && rwp < 2.0 * n / lb;
      }
      prev_w = rw;
      prev_wp = rwp;
    }
    const HighPrec density = HighPrec(As[12]) / HighPrec(Bs[12]);
    o.pass = o.pass && madritsch_structure().zeroed_total(12) == As[12] && density < HighPrec(1e-3);
    o.detail = "ratio(12): omega " + std::to_string(prev_w) + ", omega' " + std::to_string(prev_wp) +
               "; A/B(12) = " + format_sig12(density);
    return o;
  });

  criterion(4, "oracle equivalence", 0, [] {
    Outcome o;
    std::mt19937_64 rng(4);
    std::size_t mismatches = 0;
    for (int t = 0; t < 1000; ++t) {
      const auto bits = oracle::random_bits(1 + rng() % 10000, rng);
      RunState st;
      FreqTable ft(3);
      for (int b : bits) {
        st.feed(to_bit(b));
        ft.feed(to_bit(b));
      }
      mismatches += st.max_run != oracle::longest_run(bits, bits.size());
      for (std::uint32_t code = 0; code < 8; ++code) {
        const oracle::Bits w{int(code >> 2 & 1), int(code >> 1 & 1), int(code & 1)};
        mismatches += ft.count(3, code) != oracle::count_occurrences(bits, bits.size(), w);
      }
    }
    const std::size_t N = 100000;
    const std::vector<std::pair<BitStream, std::string>> gens{
        {champernowne(), oracle::champernowne(N)},
        {strictly_typical_y(), oracle::y(N)},
        {strictly_normal_z(2), oracle::z(2, N)},
        {strictly_normal_z(3), oracle::z(3, N)},
        {madritsch_omega(), oracle::madritsch(N, false)},
        {omega_prime(), oracle::madritsch(N, true)},
        {nakai_poly(Polynomial::parse("1,0,1")), oracle::nakai(N, [](std::uint64_t k) { return k * k + 1; })}};
    for (const auto& [s, ref] : gens) {
      const std::string got = digits(s, N);
      mismatches += got != ref;
      const auto bits = oracle::from_string(got);
      std::vector<std::uint64_t> ps;
      for (std::uint64_t p = 1000; p <= N; p += 1000) ps.push_back(p);
      const auto L = scan(s, ps);
      for (std::size_t i = 0; i < ps.size(); ++i) mismatches += L[i] != oracle::longest_run(bits, ps[i]);
      FreqTable ft(3);
      for (int b : bits) ft.feed(to_bit(b));
      for (unsigned len = 1; len <= 3; ++len) {
        for (std::uint32_t code = 0; code < (1u << len); ++code) {
          oracle::Bits w(len);
          for (unsigned b = 0; b < len; ++b) w[b] = (code >> (len - 1 - b)) & 1;
          mismatches += ft.count(len, code) != oracle::count_occurrences(bits, N, w);
        }
      }
    }
    o.pass = mismatches == 0;
    o.detail = "1000 random prefixes + 7 generators at 1e5; mismatches = " + std::to_string(mismatches);
    return o;
  });

  criterion(5, "admissible-block DP", 30, [] {
    std::size_t mismatches = 0;
    for (unsigned n = 2; n <= 16; ++n) {
      for (unsigned m = 1; m <= 8; ++m) mismatches += admissible_blocks_count(n, m) != oracle::admissible_count(n, m);
    }
    return Outcome{mismatches == 0, "n=2..16, m=1..8 against enumeration; mismatches = " + std::to_string(mismatches)};
  });

  criterion(6, "reduction f behaviour", 300, [] {
    Outcome o;
    const std::uint64_t cap = 100'000'000;
    const auto ratios = [cap](const NatSeqDescriptor& d) {
      std::vector<std::pair<std::uint64_t, double>> out;
      StreamReader r(reduction_f(d));
      RunState st;
      for (std::uint64_t n = 1; n * (n + 1) / 2 <= cap; ++n) {
        for (std::uint64_t j = 0; j < n; ++j) st.feed(r.next());
        if (n >= 2) out.emplace_back(n, st.max_run / std::log2(double(st.position)));
      }
      return out;
    };
    const auto id = ratios(NatSeqDescriptor::identity());
    double lo = 9, hi = 0;
    for (const auto& [n, v] : id) {
      if (n >= 10000) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    o.pass = lo > 0.85 && hi < 1.15;
    const auto c1 = ratios(NatSeqDescriptor::constant(1));
    std::size_t above_late = 0;
    for (std::size_t i = c1.size() / 2; i < c1.size(); ++i) above_late += c1[i].second >= 1.8;
    o.pass = o.pass && above_late > 0 && c1.back().second >= 1.8;
    std::ostringstream ev;
    ev << "identity in [" << lo << ", " << hi << "] for 1e4<=n<=" << id.back().first << "; const:1 has "
       << above_late << "/" << c1.size() - c1.size() / 2 << " late samples >= 1.8";
    o.detail = ev.str();
    return o;
  });

  criterion(7, "phi quadrant table", 600, [] {
    Outcome o;
    const CheckpointReport r = verify_phi({});
    o.pass = r.passed() && r.claims.size() == 4;
    std::ostringstream ev;
    for (const auto& c : r.claims) ev << (c.pass ? "ok " : "BAD ") << c.anchor << " | ";
    o.detail = ev.str();
    return o;
  });

  criterion(8, "Taylor engine", 0, [] {
    Outcome o;
    double worst_margin = 0;
    for (long b : {1000L, 1000000L}) {
      const BigInt B(b);
      const HighPrec truth = mp::log(HighPrec(B)) / mp::log(HighPrec(2));
      for (unsigned M = 1; M <= 40; ++M) {
        const HighPrec t = log2_taylor({HighPrec(2) * HighPrec(B) / 3, BigInt(M), B});
        const HighPrec bound = mp::pow(HighPrec(0.5), M) / ((M + 1) * mp::log(HighPrec(2)));
        o.pass = o.pass && mp::abs(t - truth) <= bound;
        worst_margin = std::max(worst_margin, static_cast<double>(mp::abs(t - truth) / bound));
      }
    }
    double worst_rel = 0;
    const std::function<HighPrec(const HighPrec&)> f = [](const HighPrec& x) {
      return mp::log(x) / mp::log(HighPrec(2));
    };
    for (int a : {2, 10, 100}) {
      for (unsigned k = 1; k <= 3; ++k) {
        const HighPrec fd = oracle::central_difference<HighPrec>(f, k, HighPrec(a), HighPrec(a) * HighPrec(1e-10));
        const HighPrec exact = log2_derivative(k, HighPrec(a));
        worst_rel = std::max(worst_rel, static_cast<double>(mp::abs((fd - exact) / exact)));
      }
    }
    o.pass = o.pass && worst_rel < 1e-6;
    std::ostringstream ev;
    ev << "max err/bound " << worst_margin << "; max derivative rel. error " << worst_rel;
    o.detail = ev.str();
    return o;
  });

  criterion(9, "Monte Carlo Erdos-Renyi", 0, [] {
    const MonteCarloSummary a = monte_carlo_erdos_renyi(500, 1 << 20, 42);
    const MonteCarloSummary b = monte_carlo_erdos_renyi(500, 1 << 20, 42);
    const bool pass = a.mean > 0.9 && a.mean < 1.3 && a.runs == b.runs;
    return Outcome{pass, "mean " + std::to_string(a.mean) + ", sd " + std::to_string(a.stddev) +
                             (a.runs == b.runs ? ", reproducible" : ", NOT reproducible")};
  });

  criterion(10, "continuity witness", 0, [] {
    std::mt19937_64 rng(10);
    std::size_t bad = 0;
    for (int t = 0; t < 100; ++t) {
      const unsigned k = 1 + t % 20;
      const std::string shared = testing_support::random_prefix(rng, k);
      const auto d1 = testing_support::random_descriptor(rng, shared);
      const auto d2 = testing_support::random_descriptor(rng, shared);
      const std::size_t agree = k * (k + 1) / 2;
      bad += digits(reduction_f(d1), agree) != digits(reduction_f(d2), agree);
    }
    return Outcome{bad == 0, "100 pairs, k=1..20; disagreements = " + std::to_string(bad)};
  });

  std::printf("%s: %d of 10 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
