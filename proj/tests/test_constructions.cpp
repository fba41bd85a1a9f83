#include <doctest.h>

#include "oracles.hpp"
#include "typnorm/analysis.hpp"
#include "typnorm/constructions.hpp"

using namespace typnorm;

namespace {

std::string digits(const BitStream& s, std::size_t n) {
  std::string out = to_ascii(take(s, n));
  out.pop_back();
  return out;
}

}  // namespace

TEST_CASE("champernowne") {
  CHECK(digits(champernowne(), 9) == "110111001");
  CHECK(digits(champernowne(), 100000) == oracle::champernowne(100000));
  const Checkpoint c2 = champernowne().checkpoint(2);
  CHECK(c2.position == 5);
  CHECK(c2.exact_L == 2);
  const Checkpoint c3 = champernowne().checkpoint(3);
  CHECK(c3.position == 17);
  CHECK(c3.exact_L == 3);
}

TEST_CASE("champernowne digit at an astronomically large index") {
  // the (n-1)-digit numbers end at p_{n-1}; the last one is 2^(n-1)-1, all ones
  const unsigned n = 300;
  const BigInt before = (BigInt(n - 2) << (n - 1)) + 1;  // last digit of the (n-1)-digit numbers
  CHECK(champernowne().digit_at(before) == Bit::one);
  CHECK(champernowne().digit_at(before + 1) == Bit::one);   // leading 1 of 2^(n-1)
  CHECK(champernowne().digit_at(before + 2) == Bit::zero);
}

TEST_CASE("nakai polynomials") {
  CHECK(digits(nakai_poly(Polynomial::parse("2,0")), 8) == "10100110");
  CHECK(digits(nakai_poly(Polynomial::parse("1,0")), 100000) == digits(champernowne(), 100000));
  CHECK(digits(nakai_poly(Polynomial::parse("1,0,0")), 50000) ==
        oracle::nakai(50000, [](std::uint64_t k) { return k * k; }));
  CHECK(digits(nakai_poly(Polynomial::parse("1/3,0,5/2")), 50000) ==
        oracle::nakai(50000, [](std::uint64_t k) { return (2 * k * k + 15) / 6; }));
  // nonmonotone head: w(x) = x^2 - 5x + 7 dips before growing
  CHECK(digits(nakai_poly(Polynomial::parse("1,-5,7")), 20000) ==
        oracle::nakai(20000, [](std::uint64_t k) { return k * k - 5 * k + 7; }));
}

TEST_CASE("nakai rejects bad input") {
  CHECK_THROWS_AS(nakai_poly(Polynomial::parse("5")), ContractViolation);        // constant
  CHECK_THROWS_AS(nakai_poly(Polynomial::parse("-1,2000")), ContractViolation);  // leading < 0
  CHECK_THROWS_AS(nakai_poly(Polynomial::parse("1,-3,2")), ContractViolation);   // w(1) = 0
  CHECK_THROWS_AS(nakai_poly(Polynomial::parse("1,0"), 3), ContractViolation);
  CHECK_THROWS(Polynomial::parse("1,x"));
  const NakaiDigits ternary(Polynomial::parse("1,0"), 3);
  // 1 2 10 11 12 20 ...
  std::string t;
  for (int i = 1; i <= 10; ++i) t += static_cast<char>('0' + ternary.digit_at(BigInt(i)));
  CHECK(t == "1210111220");
}

TEST_CASE("strictly typical y") {
  CHECK(digits(strictly_typical_y(), 17) == "10011000000000111");
  CHECK(digits(strictly_typical_y(), 100000) == oracle::y(100000));
  CHECK(to_ascii(Prefix{y_block(7).digits}) == "111\n");
  CHECK(to_ascii(Prefix{y_block(4).digits}) == "000\n");
  for (unsigned n = 2; n <= 20; ++n) {
    CHECK(strictly_typical_y().checkpoint(n).position == champernowne().checkpoint(n).position);
    CHECK(strictly_typical_y().checkpoint(n).exact_L == n);
  }
}

TEST_CASE("strictly normal z") {
  CHECK(digits(strictly_normal_z(2), 12) == "111110101010");
  CHECK(digits(strictly_normal_z(2), 100000) == oracle::z(2, 100000));
  CHECK(digits(strictly_normal_z(3), 100000) == oracle::z(3, 100000));
  const Checkpoint c = strictly_normal_z(2).checkpoint(1);
  CHECK(c.position == 4);
  CHECK(c.exact_L == 4);
  const Checkpoint c3 = strictly_normal_z(3).checkpoint(2);
  CHECK(c3.position == 40);
  CHECK(c3.exact_L == 16);
  CHECK(oracle::longest_run(oracle::from_string(oracle::z(3, 40)), 40) == 16);
  CHECK_THROWS_AS(strictly_normal_z(1), ContractViolation);
}

TEST_CASE("madritsch levels") {
  const MadritschStructure& ms = madritsch_structure();
  CHECK(ms.level(1).inner_exponent == 1);
  CHECK(ms.level(2).inner_exponent == 6);
  CHECK(ms.level(2).block_length == 48);
  CHECK(ms.level(2).outer_exponent == 16);
  CHECK(ms.level(2).level_length == 768);
  CHECK(ms.level(3).inner_exponent == 27);
  CHECK(ms.level(3).block_length == 648);
  CHECK(ms.level(3).outer_exponent == 6561);
  for (unsigned i = 1; i <= 12; ++i) CHECK(ms.level(i).inner_exponent == oracle::madritsch_e(i));
  CHECK(madritsch_inner_exponent(12) == 122139);
  CHECK(ms.boundary(2) == 770);
  CHECK(ms.materialize_block(2, false).size() == 48);

  // block 2^i - 1 (0-based 2^i - 2) is 1^(i-1)0
  const std::string w3 = oracle::madritsch_w(3, false);
  CHECK(w3.substr(6 * 27 * 3, 3) == "110");
  std::string mine;
  for (Bit b : ms.materialize_block(3, false)) mine += static_cast<char>('0' + to_int(b));
  CHECK(mine == w3);
}

TEST_CASE("madritsch streams against direct construction") {
  const std::size_t n = 200000;
  CHECK(digits(madritsch_omega(), 2) == "01");
  CHECK(digits(madritsch_omega(), n) == oracle::madritsch(n, false));
  CHECK(digits(omega_prime(), n) == oracle::madritsch(n, true));
  // positional access deep into level 3 and level 4
  const BitStream w = madritsch_omega();
  const std::string ref = oracle::madritsch(4252298 + 5000, false);
  for (std::uint64_t i : {std::uint64_t{770}, std::uint64_t{771}, std::uint64_t{4252298}, std::uint64_t{4252299},
                          std::uint64_t{4257298}}) {
    CHECK(to_int(w.digit_at(BigInt(i))) == static_cast<unsigned>(ref[i - 1] - '0'));
  }
}

TEST_CASE("omega prime zeroes the all-ones section") {
  const MadritschStructure& ms = madritsch_structure();
  const auto plain = ms.materialize_block(2, false);
  const auto zeroed = ms.materialize_block(2, true);
  for (std::size_t k = 0; k < 36; ++k) CHECK(plain[k] == zeroed[k]);
  for (std::size_t k = 36; k < 48; ++k) {
    CHECK(plain[k] == Bit::one);
    CHECK(zeroed[k] == Bit::zero);
  }
  for (unsigned i = 1; i <= 4; ++i) {
    const auto a = ms.materialize_block(i, false);
    const auto b = ms.materialize_block(i, true);
    const auto ones = [](const std::vector<Bit>& v) { return std::count(v.begin(), v.end(), Bit::one); };
    // frequency of ones drops by exactly 1/2^i
    CHECK(Rational(ones(a) - ones(b), a.size()) == Rational(1, BigInt(1) << i));
    CHECK(RunSummary::of(b).max_run <= 2 * i);
  }
}

TEST_CASE("checkpoint soundness under the cap") {
  const auto check = [](const BitStream& s, unsigned from, unsigned to) {
    const auto cps = checkpoints(s, from, to);
    const std::size_t longest = static_cast<std::size_t>(cps.back().position);
    const auto bits = oracle::from_string(digits(s, longest));
    for (const auto& cp : cps) {
      CHECK_MESSAGE(cp.exact_L == oracle::longest_run(bits, static_cast<std::size_t>(cp.position)),
                    s.kind() << " n=" << cp.n);
    }
  };
  check(champernowne(), 1, 10);
  check(strictly_typical_y(), 1, 10);
  check(strictly_normal_z(2), 1, 7);
  check(strictly_normal_z(3), 1, 6);
  check(madritsch_omega(), 1, 2);
  check(omega_prime(), 1, 2);
}

TEST_CASE("checkpoint of omega at B_3 matches a streamed scan") {
  for (const BitStream& s : {madritsch_omega(), omega_prime()}) {
    const Checkpoint cp = s.checkpoint(3);
    StreamReader r(s);
    RunState st;
    while (st.position < cp.position) st.feed(r.next());
    CHECK(BigInt(st.max_run) == cp.exact_L);
  }
}

TEST_CASE("generator selection by name") {
  CHECK(make_generator({"z", 3, "", 2}).kind() == strictly_normal_z(3).kind());
  CHECK_THROWS_AS(make_generator({"nakai", 2, "", 2}), ContractViolation);
  try {
    make_generator({"pi", 2, "", 2});
    FAIL("expected error");
  } catch (const ContractViolation& e) {
    CHECK(std::string(e.what()).find("omega-prime") != std::string::npos);
  }
}
