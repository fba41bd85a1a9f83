#include "typnorm/reductions.hpp"

#include "typnorm/constructions.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

namespace typnorm {

namespace mp = boost::multiprecision;

namespace {

BigInt floor_rational(const Rational& r) {
  const BigInt& num = mp::numerator(r);
  const BigInt& den = mp::denominator(r);
  BigInt q = num / den;
  if (num % den != 0 && num < 0) {
    q -= 1;
  }
  return q;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Subsequence n -> 2n - 1 (odd) or n -> 2n (even), closed over the tail rules.
NatSeqDescriptor subsequence(const NatSeqDescriptor& d, bool odd) {
  std::vector<BigInt> prefix;
  for (std::size_t idx = odd ? 0 : 1; idx < d.prefix().size(); idx += 2) {
    prefix.push_back(d.prefix()[idx]);
  }
  return std::visit(
      Overloaded{
          [&](const tail::Constant& c) { return NatSeqDescriptor::constant(c.value, prefix); },
          [&](const tail::Identity&) {
            return NatSeqDescriptor::affine(Rational(2), odd ? Rational(-1) : Rational(0), prefix);
          },
          [&](const tail::Affine& a) {
            return NatSeqDescriptor::affine(2 * a.alpha, odd ? Rational(a.beta - a.alpha) : a.beta, prefix);
          },
          [&](const tail::Interleave& il) {
            // The k-th subsequence term past the prefix is inner.term(k).
            const NatSeqDescriptor& inner = odd ? *il.odd : *il.even;
            for (std::size_t k = prefix.size(); k < inner.prefix().size(); ++k) {
              prefix.push_back(inner.prefix()[k]);
            }
            return NatSeqDescriptor(prefix, inner.tail());
          },
      },
      d.tail());
}

// --- parser -------------------------------------------------------------------

class DescriptorParser {
public:
  explicit DescriptorParser(std::string_view text) : text_(text) {}

  NatSeqDescriptor parse_all() {
    NatSeqDescriptor d = parse_descriptor();
    if (pos_ != text_.size()) {
      fail("unexpected trailing input");
    }
    return d;
  }

private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError("descriptor: " + what, pos_); }

  bool consume(std::string_view token) {
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!consume(token)) {
      fail("expected '" + std::string(token) + "'");
    }
  }

  BigInt parse_integer() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) {
      fail("expected a positive integer");
    }
    return BigInt(std::string(text_.substr(start, pos_ - start)));
  }

  Rational parse_rational_token() {
    const std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      ++pos_;
    }
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/')) {
      ++pos_;
    }
    try {
      return parse_rational(text_.substr(start, pos_ - start));
    } catch (const ParseError& e) {
      pos_ = start + e.position();
      fail("bad rational");
    }
  }

  NatSeqDescriptor parse_descriptor() {
    std::vector<BigInt> prefix;
    std::optional<TailRule> rule;
    for (;;) {
      if (consume("prefix=")) {
        prefix.push_back(parse_integer());
        while (consume(",")) {
          prefix.push_back(parse_integer());
        }
      } else if (consume("tail=")) {
        rule = parse_tail();
      } else {
        fail("expected 'prefix=' or 'tail='");
      }
      if (!consume(";")) {
        break;
      }
    }
    if (!rule) {
      fail("missing tail rule");
    }
    const std::size_t at = pos_;
    try {
      return NatSeqDescriptor(std::move(prefix), std::move(*rule));
    } catch (const ContractViolation& e) {
      pos_ = at;
      fail(e.what());
    }
  }

  TailRule parse_tail() {
    if (consume("const:")) {
      return tail::Constant{parse_integer()};
    }
    if (consume("identity")) {
      return tail::Identity{};
    }
    if (consume("affine:")) {
      Rational alpha = parse_rational_token();
      expect(",");
      Rational beta = parse_rational_token();
      return tail::Affine{alpha, beta};
    }
    if (consume("interleave(")) {
      auto odd = std::make_shared<const NatSeqDescriptor>(parse_descriptor());
      expect("|");
      auto even = std::make_shared<const NatSeqDescriptor>(parse_descriptor());
      expect(")");
      return tail::Interleave{std::move(odd), std::move(even)};
    }
    fail("unknown tail rule (const:, identity, affine:, interleave()");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string rational_text(const Rational& r) {
  if (mp::denominator(r) == 1) {
    return mp::numerator(r).str();
  }
  return mp::numerator(r).str() + "/" + mp::denominator(r).str();
}

HighPrec exp2_inverse(const BigInt& m) { return mp::pow(HighPrec(2), HighPrec(1) / HighPrec(m)); }

}  // namespace

// --- descriptors --------------------------------------------------------------

NatSeqDescriptor::NatSeqDescriptor(std::vector<BigInt> prefix, TailRule tail)
    : prefix_(std::move(prefix)), tail_(std::move(tail)) {
  for (const BigInt& v : prefix_) {
    if (v < 1) {
      throw ContractViolation("descriptor prefix terms must be >= 1");
    }
  }
  std::visit(Overloaded{
                 [](const tail::Constant& c) {
                   if (c.value < 1) throw ContractViolation("constant tail must be >= 1");
                 },
                 [](const tail::Identity&) {},
                 [&](const tail::Affine& a) {
                   if (a.alpha <= 0) throw ContractViolation("affine tail needs alpha > 0");
                   const Rational first = a.alpha * Rational(BigInt(prefix_.size() + 1)) + a.beta;
                   if (floor_rational(first) < 1) {
                     throw ContractViolation("affine tail emits a term below 1");
                   }
                 },
                 [](const tail::Interleave& il) {
                   if (!il.odd || !il.even) throw ContractViolation("interleave needs two descriptors");
                 },
             },
             tail_);
}

BigInt NatSeqDescriptor::term(const BigInt& n) const {
  if (n < 1) {
    throw ContractViolation("seq_term: n must be >= 1");
  }
  if (n <= prefix_.size()) {
    return prefix_[static_cast<std::size_t>(n) - 1];
  }
  return std::visit(Overloaded{
                        [](const tail::Constant& c) { return c.value; },
                        [&](const tail::Identity&) { return n; },
                        [&](const tail::Affine& a) { return floor_rational(a.alpha * Rational(n) + a.beta); },
                        [&](const tail::Interleave& il) {
                          return (n % 2 == 1) ? il.odd->term((n + 1) / 2) : il.even->term(n / 2);
                        },
                    },
                    tail_);
}

NatSeqDescriptor NatSeqDescriptor::constant(BigInt c, std::vector<BigInt> prefix) {
  return NatSeqDescriptor(std::move(prefix), tail::Constant{std::move(c)});
}
NatSeqDescriptor NatSeqDescriptor::identity(std::vector<BigInt> prefix) {
  return NatSeqDescriptor(std::move(prefix), tail::Identity{});
}
NatSeqDescriptor NatSeqDescriptor::affine(Rational alpha, Rational beta, std::vector<BigInt> prefix) {
  return NatSeqDescriptor(std::move(prefix), tail::Affine{std::move(alpha), std::move(beta)});
}
NatSeqDescriptor NatSeqDescriptor::interleave(NatSeqDescriptor odd, NatSeqDescriptor even, std::vector<BigInt> prefix) {
  return NatSeqDescriptor(std::move(prefix),
                          tail::Interleave{std::make_shared<const NatSeqDescriptor>(std::move(odd)),
                                           std::make_shared<const NatSeqDescriptor>(std::move(even))});
}

BigInt seq_term(const NatSeqDescriptor& d, const BigInt& n) { return d.term(n); }

NatSeqDescriptor odd_terms(const NatSeqDescriptor& d) { return subsequence(d, true); }
NatSeqDescriptor even_terms(const NatSeqDescriptor& d) { return subsequence(d, false); }

bool diverges(const NatSeqDescriptor& d) {
  return std::visit(Overloaded{
                        [](const tail::Constant&) { return false; },
                        [](const tail::Identity&) { return true; },
                        [](const tail::Affine&) { return true; },
                        [](const tail::Interleave& il) { return diverges(*il.odd) && diverges(*il.even); },
                    },
                    d.tail());
}

Classification classify(const NatSeqDescriptor& d) {
  return {diverges(d), diverges(even_terms(d)), diverges(odd_terms(d))};
}

NatSeqDescriptor parse_descriptor(std::string_view text) { return DescriptorParser(text).parse_all(); }

std::string to_string(const NatSeqDescriptor& d) {
  std::ostringstream out;
  if (!d.prefix().empty()) {
    out << "prefix=";
    for (std::size_t i = 0; i < d.prefix().size(); ++i) {
      out << (i ? "," : "") << d.prefix()[i];
    }
    out << ';';
  }
  out << "tail=";
  std::visit(Overloaded{
                 [&](const tail::Constant& c) { out << "const:" << c.value; },
                 [&](const tail::Identity&) { out << "identity"; },
                 [&](const tail::Affine& a) { out << "affine:" << rational_text(a.alpha) << ',' << rational_text(a.beta); },
                 [&](const tail::Interleave& il) {
                   out << "interleave(" << to_string(*il.odd) << '|' << to_string(*il.even) << ')';
                 },
             },
             d.tail());
  return out.str();
}

// --- Taylor -------------------------------------------------------------------

HighPrec log2_derivative(unsigned k, const HighPrec& a) {
  if (a <= 0) {
    throw ContractViolation("log2_derivative: a must be positive");
  }
  if (k == 0) {
    return mp::log2(a);
  }
  HighPrec factorial = 1;
  for (unsigned j = 2; j < k; ++j) {
    factorial *= j;
  }
  const HighPrec value = factorial / (mp::pow(a, static_cast<int>(k)) * ln2());
  return (k % 2 == 1) ? value : HighPrec(-value);
}

HighPrec default_taylor_center(const BigInt& point) { return HighPrec(point) * 2 / 3; }

HighPrec log2_taylor(const TaylorApprox& t) {
  const HighPrec& a = t.center;
  const HighPrec b(t.point);
  if (a <= 0) {
    throw ContractViolation("log2_taylor: center must be positive");
  }
  if (t.order < 1) {
    throw ContractViolation("log2_taylor: order must be >= 1");
  }
  if (!(mp::abs(b - a) < a)) {
    throw ContractViolation("log2_taylor: point outside the convergence disk |B - a| < a");
  }
  // f^(k)(a)/k! h^k = (-1)^(k-1) (h/a)^k / (k ln 2) for k >= 1
  const HighPrec x = (b - a) / a;
  const HighPrec cutoff = std::numeric_limits<HighPrec>::epsilon() * HighPrec(1e-6);
  HighPrec sum = 0;
  HighPrec power = x;
  for (BigInt k = 1; k <= t.order; ++k) {
    const HighPrec term = power / HighPrec(k);
    sum += (k % 2 == 1) ? term : HighPrec(-term);
    if (mp::abs(term) < cutoff) {
      break;
    }
    power *= x;
  }
  return mp::log2(a) + sum / ln2();
}

HighPrec big_T(const NatSeqDescriptor& d, const BigInt& n, const BigInt& point) {
  const BigInt m = seq_term(d, n);
  return exp2_inverse(m) * log2_taylor({default_taylor_center(point), m, point});
}

// --- f ------------------------------------------------------------------------

namespace {

std::uint64_t clamp_floor(const HighPrec& t, std::uint64_t upper) {
  if (t <= 0) {
    return 0;
  }
  const HighPrec f = mp::floor(t);
  if (f >= HighPrec(upper)) {
    return upper;
  }
  return static_cast<std::uint64_t>(f);
}

class ReductionFCursor final : public BitCursor {
public:
  explicit ReductionFCursor(std::shared_ptr<const NatSeqDescriptor> d) : d_(std::move(d)) {}

  void read(std::span<Bit> out) override {
    for (Bit& b : out) {
      if (offset_ == block_) {
        ++block_;
        ones_ = reduction_f_ones(*d_, block_);
        offset_ = 0;
      }
      b = to_bit(offset_ < ones_);
      ++offset_;
    }
  }

private:
  std::shared_ptr<const NatSeqDescriptor> d_;
  std::uint64_t block_ = 0;
  std::uint64_t offset_ = 0;
  std::uint64_t ones_ = 0;
};

class ReductionFSource final : public BitSource {
public:
  explicit ReductionFSource(NatSeqDescriptor d) : d_(std::make_shared<const NatSeqDescriptor>(std::move(d))) {}

  Bit digit_at(const BigInt& index) const override {
    // block n covers (B_{n-1}, B_n], B_n = n(n+1)/2
    BigInt n = (BigInt(mp::sqrt(BigInt(8 * index + 1))) - 1) / 2;
    while (n * (n + 1) / 2 < index) {
      ++n;
    }
    const BigInt offset = index - (n - 1) * n / 2;  // 1-based within block
    const BigInt point = n * (n + 1) / 2;
    const HighPrec t = big_T(*d_, n, point);
    const BigInt ones = t <= 0 ? BigInt(0) : std::min(n, BigInt(mp::floor(t)));
    return to_bit(offset <= ones);
  }

  std::unique_ptr<BitCursor> cursor() const override { return std::make_unique<ReductionFCursor>(d_); }

private:
  std::shared_ptr<const NatSeqDescriptor> d_;
};

}  // namespace

std::uint64_t reduction_f_ones(const NatSeqDescriptor& d, std::uint64_t n) {
  if (n < 1) {
    throw ContractViolation("reduction_f_ones: n >= 1");
  }
  const BigInt point = BigInt(n) * (n + 1) / 2;
  return clamp_floor(big_T(d, BigInt(n), point), n);
}

BitStream reduction_f(const NatSeqDescriptor& d) {
  return BitStream("f[" + to_string(d) + "]", std::make_shared<ReductionFSource>(d));
}

// --- g and g' -------------------------------------------------------------------

namespace {

// Terms a_1..a_64 saturated to 64 bits; covers every 64-bit index.
struct DyadicTerms {
  explicit DyadicTerms(const NatSeqDescriptor& d) {
    for (std::uint64_t n = 1; n <= 64; ++n) {
      const BigInt t = d.term(BigInt(n));
      moduli[n] = t > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                                 : static_cast<std::uint64_t>(t);
    }
  }

  // Saturation is exact here: offsets are < 2^63, so a saturated modulus only
  // divides offset 0, as the true one would.
  bool contains(std::uint64_t m) const {
    const unsigned n = static_cast<unsigned>(bit_length(m));
    const std::uint64_t offset = m - (std::uint64_t{1} << (n - 1));
    return offset % moduli[n] == 0;
  }

  std::array<std::uint64_t, 65> moduli{};
};

bool g_contains(const NatSeqDescriptor& d, const BigInt& m) {
  if (m < 1) {
    return false;
  }
  const std::size_t n = mp::msb(m) + 1;
  const BigInt offset = m - (BigInt(1) << (n - 1));
  return offset % d.term(BigInt(n)) == 0;
}

class GPrimeCursor final : public BitCursor {
public:
  GPrimeCursor(std::shared_ptr<const DyadicTerms> terms, std::unique_ptr<BitCursor> base)
      : terms_(std::move(terms)), base_(std::move(base)) {}

  void read(std::span<Bit> out) override {
    base_->read(out);
    for (Bit& b : out) {
      ++position_;
      if (position_ == block_end_) {
        ++block_;
        block_start_ = position_;
        block_end_ = position_ * 2;
        modulus_ = terms_->moduli[block_];
        next_member_ = block_start_;
      }
      if (position_ == next_member_) {
        b = Bit::zero;
        next_member_ = modulus_ > block_end_ ? block_end_ : next_member_ + modulus_;
      }
    }
  }

private:
  std::shared_ptr<const DyadicTerms> terms_;
  std::unique_ptr<BitCursor> base_;
  std::uint64_t position_ = 0;
  unsigned block_ = 0;
  std::uint64_t block_start_ = 0;
  std::uint64_t block_end_ = 1;  // block n is [2^(n-1), 2^n)
  std::uint64_t modulus_ = 1;
  std::uint64_t next_member_ = 0;
};

class GPrimeSource final : public BitSource {
public:
  GPrimeSource(NatSeqDescriptor d, BitStream base)
      : d_(std::move(d)), terms_(std::make_shared<const DyadicTerms>(d_)), base_(std::move(base)) {}

  Bit digit_at(const BigInt& index) const override {
    return g_contains(d_, index) ? Bit::zero : base_.digit_at(index);
  }
  Bit digit_at(std::uint64_t index) const override {
    return terms_->contains(index) ? Bit::zero : base_.digit_at(index);
  }
  std::unique_ptr<BitCursor> cursor() const override {
    return std::make_unique<GPrimeCursor>(terms_, base_.cursor());
  }

private:
  NatSeqDescriptor d_;
  std::shared_ptr<const DyadicTerms> terms_;
  BitStream base_;
};

}  // namespace

IndexSet zero_density_g(const NatSeqDescriptor& d) {
  auto terms = std::make_shared<const DyadicTerms>(d);
  return IndexSet(
      "g[" + to_string(d) + "]", [d](const BigInt& m) { return g_contains(d, m); },
      [terms](std::uint64_t m) { return m >= 1 && terms->contains(m); });
}

BitStream action_g_prime(const NatSeqDescriptor& d, const BitStream& w) {
  return BitStream("g'[" + to_string(d) + "](" + w.kind() + ")", std::make_shared<GPrimeSource>(d, w));
}

// --- f' -------------------------------------------------------------------------

namespace {

class FPrimeCursor final : public BitCursor {
public:
  FPrimeCursor(std::shared_ptr<const std::array<std::uint64_t, 65>> runs, std::unique_ptr<BitCursor> base)
      : runs_(std::move(runs)), base_(std::move(base)) {}

  void read(std::span<Bit> out) override {
    base_->read(out);
    for (Bit& b : out) {
      ++position_;
      if (position_ > segment_end_) {
        ++segment_;
        segment_end_ = std::uint64_t{1} << segment_;
        overwrite_from_ = segment_ >= 5 ? segment_end_ - (*runs_)[segment_] - 1 : segment_end_ + 1;
      }
      if (position_ >= overwrite_from_) {
        b = to_bit(position_ != overwrite_from_ && position_ != segment_end_);
      }
    }
  }

private:
  std::shared_ptr<const std::array<std::uint64_t, 65>> runs_;
  std::unique_ptr<BitCursor> base_;
  std::uint64_t position_ = 0;
  unsigned segment_ = 0;
  std::uint64_t segment_end_ = 1;  // segment n is (2^(n-1), 2^n]; segment 0 is {1}
  std::uint64_t overwrite_from_ = 2;
};

class FPrimeSource final : public BitSource {
public:
  FPrimeSource(NatSeqDescriptor d, BitStream base)
      : d_(std::move(d)), runs_(std::make_shared<std::array<std::uint64_t, 65>>()), base_(std::move(base)) {
    for (std::uint64_t n = 5; n < 64; ++n) {
      (*runs_)[n] = f_prime_run(d_, n);
    }
  }

  Bit digit_at(const BigInt& index) const override {
    if (index <= 1) {
      return base_.digit_at(index);
    }
    const std::size_t n = mp::msb(BigInt(index - 1)) + 1;
    if (n >= 5) {
      const BigInt end = BigInt(1) << n;
      const BigInt run = n < 64 ? BigInt((*runs_)[n]) : BigInt(f_prime_run(d_, n));
      const BigInt from = end - run - 1;
      if (index >= from) {
        return to_bit(index != from && index != end);
      }
    }
    return base_.digit_at(index);
  }

  std::unique_ptr<BitCursor> cursor() const override {
    return std::make_unique<FPrimeCursor>(runs_, base_.cursor());
  }

private:
  NatSeqDescriptor d_;
  std::shared_ptr<std::array<std::uint64_t, 65>> runs_;
  BitStream base_;
};

}  // namespace

std::uint64_t f_prime_run(const NatSeqDescriptor& d, std::uint64_t n) {
  const BigInt point = BigInt(1) << n;
  return clamp_floor(big_T(d, BigInt(n), point), 2 * n);
}

BitStream action_f_prime(const NatSeqDescriptor& d, const BitStream& w) {
  return BitStream("f'[" + to_string(d) + "](" + w.kind() + ")", std::make_shared<FPrimeSource>(d, w));
}

BitStream phi(const NatSeqDescriptor& d, const BitStream& base) {
  return action_f_prime(odd_terms(d), action_g_prime(even_terms(d), base));
}

BitStream phi(const NatSeqDescriptor& d) { return phi(d, omega_prime()); }

BigInt phi_agreement_prefix(unsigned k) { return (BigInt(1) << (k / 2)) - 1; }

}  // namespace typnorm
