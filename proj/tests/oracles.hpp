#pragma once

// Deliberately naive reference implementations. None of these share code
// with the library; they rebuild everything from the definitions.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using Bits = std::vector<int>;

inline Bits from_string(const std::string& s) {
  Bits out;
  for (char c : s) out.push_back(c == '1');
  return out;
}

inline std::string binary(std::uint64_t v) {
  if (v == 0) return "0";
  std::string s;
  for (; v > 0; v >>= 1) s.insert(s.begin(), static_cast<char>('0' + (v & 1)));
  return s;
}

// O(n^2): from every start, count the ones that follow.
inline std::uint64_t longest_run(const Bits& x, std::size_t n) {
  std::uint64_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t len = 0;
    while (i + len < n && x[i + len] == 1) ++len;
    best = std::max<std::uint64_t>(best, len);
  }
  return best;
}

// O(n*m): occurrences of w among the windows of x_1..x_n.
inline std::uint64_t count_occurrences(const Bits& x, std::size_t n, const Bits& w) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i + w.size() <= n; ++i) {
    bool eq = true;
    for (std::size_t j = 0; j < w.size() && eq; ++j) eq = x[i + j] == w[j];
    c += eq;
  }
  return c;
}

inline Bits random_bits(std::size_t n, std::mt19937_64& rng) {
  Bits out(n);
  std::bernoulli_distribution coin(0.5);
  for (auto& b : out) b = coin(rng);
  return out;
}

// --- constructions by plain string concatenation --------------------------

inline std::string champernowne(std::size_t n) {
  std::string s;
  for (std::uint64_t k = 1; s.size() < n; ++k) s += binary(k);
  return s.substr(0, n);
}

inline bool is_mersenne(std::uint64_t k) { return ((k + 1) & k) == 0; }

inline std::string y(std::size_t n) {
  std::string s;
  for (std::uint64_t k = 1; s.size() < n; ++k) {
    s += std::string(binary(k).size(), is_mersenne(k) ? '1' : '0');
  }
  return s.substr(0, n);
}

// floor(num(k)/den) for an integer polynomial, binary, concatenated.
inline std::string nakai(std::size_t n, const std::function<std::uint64_t(std::uint64_t)>& floor_w) {
  std::string s;
  for (std::uint64_t k = 1; s.size() < n; ++k) s += binary(floor_w(k));
  return s.substr(0, n);
}

inline std::string z(unsigned a, std::size_t n) {
  return nakai(n, [a](std::uint64_t k) { return ((k - 1) >> a) + 1; });
}

inline std::uint64_t madritsch_e(unsigned i) {
  const double v = std::ceil(i * std::ldexp(1.0, static_cast<int>(i)) * std::log(static_cast<double>(i)));
  return v < 1 ? 1 : static_cast<std::uint64_t>(v);
}

// One copy of w_i: for j = 0..2^i-1 the i-bit block j repeated e_i times.
inline std::string madritsch_w(unsigned i, bool zero_last) {
  const std::uint64_t e = madritsch_e(i);
  std::string w;
  for (std::uint64_t j = 0; j < (std::uint64_t{1} << i); ++j) {
    std::string block(i, '0');
    for (unsigned b = 0; b < i; ++b) block[i - 1 - b] = ((j >> b) & 1) ? '1' : '0';
    if (zero_last && j + 1 == (std::uint64_t{1} << i)) block.assign(i, '0');
    for (std::uint64_t r = 0; r < e; ++r) w += block;
  }
  return w;
}

inline std::string madritsch(std::size_t n, bool zero_last) {
  std::string s;
  for (unsigned i = 1; s.size() < n; ++i) {
    const std::string w = madritsch_w(i, zero_last);
    std::uint64_t reps = 1;
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << i); ++k) reps *= i;  // i^(2^i), fine for i <= 3
    for (std::uint64_t r = 0; r < reps && s.size() < n; ++r) s += w;
  }
  return s.substr(0, n);
}

// --- admissible blocks by exhaustive enumeration --------------------------

// L/log2 n in (1-1/m, 1+1/m)  <=>  n^(m-1) < 2^(mL) < n^(m+1), L >= 1.
inline bool admissible(std::uint64_t L, std::uint64_t n, std::uint64_t m) {
  using boost::multiprecision::cpp_int;
  if (L == 0) return false;
  cpp_int lo = 1, hi = 1, mid = 1;
  for (std::uint64_t k = 0; k + 1 < m; ++k) lo *= n;
  hi = lo * n * n;
  mid <<= static_cast<unsigned>(m * L);
  return lo < mid && mid < hi;
}

inline std::uint64_t admissible_count(unsigned n, unsigned m) {
  std::uint64_t count = 0;
  for (std::uint64_t word = 0; word < (std::uint64_t{1} << n); ++word) {
    std::uint64_t best = 0, run = 0;
    for (unsigned b = 0; b < n; ++b) {
      run = ((word >> b) & 1) ? run + 1 : 0;
      best = std::max(best, run);
    }
    count += admissible(best, n, m);
  }
  return count;
}

// --- calculus -------------------------------------------------------------

// Central difference of order k (k <= 3) of f at a with step h.
template <class T>
T central_difference(const std::function<T(const T&)>& f, unsigned k, const T& a, const T& h) {
  switch (k) {
    case 1: return (f(a + h) - f(a - h)) / (2 * h);
    case 2: return (f(a + h) - 2 * f(a) + f(a - h)) / (h * h);
    case 3: return (f(a + 2 * h) - 2 * f(a + h) + 2 * f(a - h) - f(a - 2 * h)) / (2 * h * h * h);
    default: return 0;
  }
}

// --- reduction f block by hand ---------------------------------------------

// Ones opening block n: min(n, floor(2^(1/M) t)) with t the order-M Taylor
// polynomial of log2 about 2B/3, B = n(n+1)/2, evaluated in long double.
inline std::uint64_t f_block_ones(std::uint64_t n, std::uint64_t M) {
  const long double B = static_cast<long double>(n) * (n + 1) / 2;
  const long double a = 2 * B / 3;
  const long double x = (B - a) / a;
  long double t = std::log2(a);
  long double xk = 1;
  for (std::uint64_t k = 1; k <= M && k <= 200; ++k) {
    xk *= x;
    t += ((k % 2) ? 1 : -1) * xk / (k * std::log(2.0L));
  }
  const long double T = std::pow(2.0L, 1.0L / M) * t;
  if (T <= 0) return 0;
  return std::min<std::uint64_t>(n, static_cast<std::uint64_t>(std::floor(T)));
}

}  // namespace oracle
