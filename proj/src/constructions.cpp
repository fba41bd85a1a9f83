#include "typnorm/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace typnorm {

namespace mp = boost::multiprecision;

namespace {

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) {
    q -= 1;
  }
  return q;
}

BigInt floor_of(const Rational& r) {
  return floor_div(mp::numerator(r), mp::denominator(r));
}

bool is_all_ones_number(const BigInt& m) {
  const BigInt next = m + 1;
  return (next & m) == 0;
}

// ---------------------------------------------------------------------------
// Concatenated binary notations of 1, 2, 3, ...  (C_2 and y share the layout)

struct NumberPosition {
  BigInt number;
  std::size_t width = 0;   // bit length of number
  std::size_t offset = 0;  // 0 = most significant bit
};

NumberPosition locate_number(const BigInt& index) {
  std::size_t k = 1;
  BigInt before = 0;
  for (;;) {
    const BigInt span = BigInt(k) << (k - 1);
    if (index <= before + span) {
      break;
    }
    before += span;
    ++k;
  }
  const BigInt off = index - before - 1;
  NumberPosition pos;
  pos.number = (BigInt(1) << (k - 1)) + off / k;
  pos.width = k;
  pos.offset = static_cast<std::size_t>(off % k);
  return pos;
}

struct NumberPosition64 {
  std::uint64_t number = 0;
  unsigned width = 0;
  unsigned offset = 0;
};

NumberPosition64 locate_number(std::uint64_t index) {
  unsigned k = 1;
  unsigned __int128 before = 0;
  for (;;) {
    const unsigned __int128 span = static_cast<unsigned __int128>(k) << (k - 1);
    if (index <= before + span) {
      break;
    }
    before += span;
    ++k;
  }
  const auto off = static_cast<std::uint64_t>(index - before - 1);
  return {(std::uint64_t{1} << (k - 1)) + off / k, k, static_cast<unsigned>(off % k)};
}

template <bool Biased>
Bit number_layout_bit(const BigInt& number, std::size_t width, std::size_t offset) {
  if constexpr (Biased) {
    return to_bit(is_all_ones_number(number));
  } else {
    return to_bit(mp::bit_test(number, width - 1 - offset));
  }
}

template <bool Biased>
class NumberLayoutCursor final : public BitCursor {
public:
  void read(std::span<Bit> out) override {
    for (Bit& b : out) {
      if (offset_ == width_) {
        ++number_;
        width_ = static_cast<unsigned>(bit_length(number_));
        offset_ = 0;
      }
      if constexpr (Biased) {
        b = to_bit(((number_ + 1) & number_) == 0);
      } else {
        b = to_bit((number_ >> (width_ - 1 - offset_)) & 1u);
      }
      ++offset_;
    }
  }

private:
  std::uint64_t number_ = 0;
  unsigned width_ = 0;
  unsigned offset_ = 0;
};

template <bool Biased>
class NumberLayoutSource final : public BitSource {
public:
  Bit digit_at(const BigInt& index) const override {
    if (index < (BigInt(1) << 62)) {
      return digit_at(static_cast<std::uint64_t>(index));
    }
    const NumberPosition p = locate_number(index);
    return number_layout_bit<Biased>(p.number, p.width, p.offset);
  }
  Bit digit_at(std::uint64_t index) const override {
    const NumberPosition64 p = locate_number(index);
    if constexpr (Biased) {
      return to_bit(((p.number + 1) & p.number) == 0);
    } else {
      return to_bit((p.number >> (p.width - 1 - p.offset)) & 1u);
    }
  }
  std::unique_ptr<BitCursor> cursor() const override {
    return std::make_unique<NumberLayoutCursor<Biased>>();
  }
};

// p_n = (n-1) 2^n + 1, the end of the n-bit numbers.
BigInt champernowne_position(unsigned n) { return BigInt(n - 1) * (BigInt(1) << n) + 1; }

// ---------------------------------------------------------------------------

class NakaiBitSource final : public BitSource {
public:
  explicit NakaiBitSource(std::shared_ptr<const NakaiDigits> digits) : digits_(std::move(digits)) {}

  Bit digit_at(const BigInt& index) const override { return to_bit(digits_->digit_at(index) == 1); }

  std::unique_ptr<BitCursor> cursor() const override;

private:
  std::shared_ptr<const NakaiDigits> digits_;
};

class NakaiCursor final : public BitCursor {
public:
  explicit NakaiCursor(std::shared_ptr<const NakaiDigits> digits) : digits_(std::move(digits)) {}

  void read(std::span<Bit> out) override {
    for (Bit& b : out) {
      if (offset_ == current_.size()) {
        advance();
      }
      b = current_[offset_++];
    }
  }

private:
  void advance() {
    ++k_;
    const BigInt v = digits_->integer_part(k_);
    current_.clear();
    if (v == 0) {
      current_.push_back(Bit::zero);
    } else {
      for (std::size_t bit = mp::msb(v) + 1; bit-- > 0;) {
        current_.push_back(to_bit(mp::bit_test(v, bit)));
      }
    }
    offset_ = 0;
  }

  std::shared_ptr<const NakaiDigits> digits_;
  BigInt k_ = 0;
  std::vector<Bit> current_;
  std::size_t offset_ = 0;
};

std::unique_ptr<BitCursor> NakaiBitSource::cursor() const {
  return std::make_unique<NakaiCursor>(digits_);
}

// ---------------------------------------------------------------------------

Bit madritsch_bit(const MadritschLevel& lv, const BigInt& offset_in_level, bool zero_last) {
  const BigInt r = offset_in_level % lv.block_length;
  const BigInt section = BigInt(lv.i) * lv.inner_exponent;
  const BigInt j = r / section;
  const auto bitpos = static_cast<unsigned>((r % section) % lv.i);
  if (zero_last && j == (BigInt(1) << lv.i) - 1) {
    return Bit::zero;
  }
  return to_bit(mp::bit_test(j, lv.i - 1 - bitpos));
}

class MadritschCursor final : public BitCursor {
public:
  explicit MadritschCursor(bool zero_last) : zero_last_(zero_last) { enter_level(1); }

  void read(std::span<Bit> out) override {
    std::size_t filled = 0;
    while (filled < out.size()) {
      if (pos_ == copy_.size()) {
        pos_ = 0;
        if (--copies_left_ == 0) {
          enter_level(level_ + 1);
        }
      }
      const std::size_t n = std::min(out.size() - filled, copy_.size() - pos_);
      std::copy_n(copy_.begin() + static_cast<std::ptrdiff_t>(pos_), n, out.begin() + static_cast<std::ptrdiff_t>(filled));
      pos_ += n;
      filled += n;
    }
  }

private:
  void enter_level(unsigned i) {
    level_ = i;
    const MadritschLevel& lv = madritsch_structure().level(i);
    if (lv.block_length > (BigInt(1) << 31)) {
      throw ResourceError("omega cursor: level " + std::to_string(i) + " block too long to stream");
    }
    copy_ = madritsch_structure().materialize_block(i, zero_last_);
    copies_left_ = lv.outer_exponent;
    pos_ = 0;
  }

  bool zero_last_;
  unsigned level_ = 0;
  std::vector<Bit> copy_;
  BigInt copies_left_;
  std::size_t pos_ = 0;
};

class MadritschSource final : public BitSource {
public:
  explicit MadritschSource(bool zero_last) : zero_last_(zero_last) {}

  Bit digit_at(const BigInt& index) const override {
    const MadritschLevel& lv = madritsch_structure().level_of(index);
    const BigInt before = lv.boundary - lv.level_length;
    return madritsch_bit(lv, index - before - 1, zero_last_);
  }

  Bit digit_at(std::uint64_t index) const override {
    const MadritschStructure& ms = madritsch_structure();
    const MadritschLevel& lv = ms.level_of(BigInt(index));
    if (lv.block_length > (BigInt(1) << 40)) {
      return digit_at(BigInt(index));
    }
    const std::uint64_t before = lv.i == 1 ? 0 : static_cast<std::uint64_t>(ms.level(lv.i - 1).boundary);
    const std::uint64_t offset = index - before - 1;
    const auto block = static_cast<std::uint64_t>(lv.block_length);
    const std::uint64_t section = std::uint64_t{lv.i} * lv.inner_exponent;
    const std::uint64_t r = offset % block;
    const std::uint64_t j = r / section;
    const auto bitpos = static_cast<unsigned>((r % section) % lv.i);
    if (zero_last_ && j == (std::uint64_t{1} << lv.i) - 1) {
      return Bit::zero;
    }
    return to_bit((j >> (lv.i - 1 - bitpos)) & 1u);
  }

  std::unique_ptr<BitCursor> cursor() const override {
    return std::make_unique<MadritschCursor>(zero_last_);
  }

private:
  bool zero_last_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Polynomial

std::size_t Polynomial::degree() const {
  std::size_t d = coefficients.empty() ? 0 : coefficients.size() - 1;
  while (d > 0 && coefficients[d] == 0) {
    --d;
  }
  return d;
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (std::size_t j = coefficients.size(); j-- > 0;) {
    acc = acc * x + coefficients[j];
  }
  return acc;
}

void Polynomial::validate() const {
  const std::size_t d = degree();
  bool has_nonconstant = false;
  for (std::size_t j = 1; j < coefficients.size(); ++j) {
    has_nonconstant = has_nonconstant || coefficients[j] != 0;
  }
  if (!has_nonconstant) {
    throw ContractViolation("polynomial: some coefficient a_i with i >= 1 must be nonzero");
  }
  if (coefficients[d] <= 0) {
    throw ContractViolation("polynomial: leading coefficient must be positive");
  }
  for (int x = 1; x <= 1000; ++x) {
    if ((*this)(Rational(x)) <= 0) {
      throw ContractViolation("polynomial: w(x) > 0 fails at x = " + std::to_string(x));
    }
  }
}

Polynomial Polynomial::parse(std::string_view text) {
  Polynomial p;
  std::vector<Rational> highest_first;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    const std::string_view field = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    try {
      highest_first.push_back(parse_rational(field));
    } catch (const ParseError& e) {
      throw ParseError("polynomial coefficient: " + std::string(e.what()), start + e.position());
    }
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  p.coefficients.assign(highest_first.rbegin(), highest_first.rend());
  return p;
}

// ---------------------------------------------------------------------------
// NakaiDigits

NakaiDigits::NakaiDigits(Polynomial w, unsigned radix) : w_(std::move(w)), radix_(radix) {
  if (radix_ < 2) {
    throw ContractViolation("nakai: radix must be >= 2");
  }
  w_.validate();
  w_.coefficients.resize(w_.degree() + 1);

  common_den_ = 1;
  for (const Rational& c : w_.coefficients) {
    common_den_ = mp::lcm(common_den_, BigInt(mp::denominator(c)));
  }
  for (const Rational& c : w_.coefficients) {
    numerators_.push_back(BigInt(mp::numerator(c) * (common_den_ / mp::denominator(c))));
  }

  // D(x) = w(x+1) - w(x); beyond the Cauchy root bound of D, w is increasing.
  const std::size_t n = w_.degree();
  monotone_from_ = 1;
  if (n >= 2) {
    std::vector<Rational> shifted(n + 1, Rational(0));
    for (std::size_t j = 0; j <= n; ++j) {
      BigInt binom = 1;
      for (std::size_t m = 0; m <= j; ++m) {
        shifted[m] += w_.coefficients[j] * Rational(binom);
        binom = binom * (j - m) / (m + 1);
      }
    }
    const Rational lead = shifted[n - 1] - w_.coefficients[n - 1];
    Rational bound = 0;
    for (std::size_t m = 0; m + 1 < n; ++m) {
      const Rational ratio = mp::abs((shifted[m] - w_.coefficients[m]) / lead);
      bound = std::max(bound, ratio);
    }
    monotone_from_ = floor_of(bound + 1) + 1;
  }
  if (monotone_from_ > 10'000'000) {
    throw ContractViolation("nakai: polynomial is not monotone early enough to index");
  }
  head_total_ = 0;
  for (BigInt k = 1; k < monotone_from_; ++k) {
    head_lengths_.push_back(notation_length(k));
    head_total_ += head_lengths_.back();
  }
  thresholds_.push_back(monotone_from_);  // index 0 unused
  thresholds_.push_back(monotone_from_);  // every value has >= 1 digit
}

BigInt NakaiDigits::integer_part(const BigInt& k) const {
  if (k < (BigInt(1) << 40)) {
    const auto x = static_cast<__int128>(static_cast<std::int64_t>(k));
    __int128 acc = 0;
    bool ok = true;
    for (std::size_t j = numerators_.size(); j-- > 0 && ok;) {
      const BigInt& c = numerators_[j];
      if (mp::abs(c) > (BigInt(1) << 62)) {
        ok = false;
        break;
      }
      ok = !__builtin_mul_overflow(acc, x, &acc) &&
           !__builtin_add_overflow(acc, static_cast<__int128>(static_cast<std::int64_t>(c)), &acc);
    }
    if (ok && common_den_ < (BigInt(1) << 62)) {
      const auto den = static_cast<__int128>(static_cast<std::int64_t>(common_den_));
      __int128 q = acc / den;
      if (acc % den != 0 && acc < 0) {
        --q;
      }
      if (q >= 0 && q < (static_cast<__int128>(1) << 100)) {
        const auto hi = static_cast<std::uint64_t>(q >> 64);
        const auto lo = static_cast<std::uint64_t>(q);
        return (BigInt(hi) << 64) + lo;
      }
    }
  }
  BigInt acc = 0;
  for (std::size_t j = numerators_.size(); j-- > 0;) {
    acc = acc * k + numerators_[j];
  }
  return floor_div(acc, common_den_);
}

std::size_t NakaiDigits::notation_length(const BigInt& k) const {
  BigInt v = integer_part(k);
  if (v <= 0) {
    return 1;
  }
  if (radix_ == 2) {
    return mp::msb(v) + 1;
  }
  std::size_t len = 0;
  while (v > 0) {
    v /= radix_;
    ++len;
  }
  return len;
}

BigInt NakaiDigits::first_k_at_least(const BigInt& threshold) const {
  BigInt lo = monotone_from_;
  if (integer_part(lo) >= threshold) {
    return lo;
  }
  BigInt step = 1;
  BigInt hi = lo + step;
  while (integer_part(hi) < threshold) {
    lo = hi;
    step *= 2;
    hi = lo + step;
  }
  // integer_part(lo) < threshold <= integer_part(hi)
  while (hi - lo > 1) {
    const BigInt mid = (lo + hi) / 2;
    if (integer_part(mid) >= threshold) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

const BigInt& NakaiDigits::length_threshold(std::size_t digits) const {
  // Caller holds mutex_.
  while (thresholds_.size() <= digits) {
    const std::size_t b = thresholds_.size();
    thresholds_.push_back(first_k_at_least(mp::pow(BigInt(radix_), static_cast<unsigned>(b - 1))));
  }
  return thresholds_[digits];
}

unsigned NakaiDigits::digit_at(const BigInt& index) const {
  if (index < 1) {
    throw ContractViolation("nakai: indices are 1-based");
  }
  BigInt k;
  std::size_t width = 0;
  std::size_t pos = 0;
  if (index <= head_total_) {
    BigInt rem = index;
    std::size_t j = 0;
    while (rem > head_lengths_[j]) {
      rem -= head_lengths_[j];
      ++j;
    }
    k = j + 1;
    width = head_lengths_[j];
    pos = static_cast<std::size_t>(rem - 1);
  } else {
    BigInt rem = index - head_total_;
    std::size_t b = notation_length(monotone_from_);
    std::lock_guard lock(mutex_);
    for (;; ++b) {
      const BigInt start = length_threshold(b);
      const BigInt end = length_threshold(b + 1);
      const BigInt span = (end - start) * b;
      if (rem <= span) {
        k = start + (rem - 1) / b;
        pos = static_cast<std::size_t>((rem - 1) % b);
        width = b;
        break;
      }
      rem -= span;
    }
  }
  const BigInt v = integer_part(k);
  const BigInt scale = mp::pow(BigInt(radix_), static_cast<unsigned>(width - 1 - pos));
  return static_cast<unsigned>((v / scale) % radix_);
}

// ---------------------------------------------------------------------------
// Madritsch

std::uint64_t madritsch_inner_exponent(unsigned i) {
  if (i <= 1) {
    return 1;
  }
  const HighPrec value = HighPrec(i) * HighPrec(BigInt(1) << i) * mp::log(HighPrec(i));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(mp::ceil(value)));
}

const MadritschLevel& MadritschStructure::level(unsigned i) const {
  if (i < 1) {
    throw ContractViolation("madritsch: levels start at 1");
  }
  std::lock_guard lock(mutex_);
  while (levels_.size() < i) {
    MadritschLevel lv;
    lv.i = static_cast<unsigned>(levels_.size() + 1);
    lv.inner_exponent = madritsch_inner_exponent(lv.i);
    lv.outer_exponent = mp::pow(BigInt(lv.i), static_cast<unsigned>(1u << lv.i));
    lv.block_length = (BigInt(1) << lv.i) * lv.i * lv.inner_exponent;
    lv.level_length = lv.outer_exponent * lv.block_length;
    lv.boundary = (levels_.empty() ? BigInt(0) : levels_.back().boundary) + lv.level_length;
    lv.zeroed_length = lv.outer_exponent * lv.i * lv.inner_exponent;
    levels_.push_back(std::move(lv));
  }
  return levels_[i - 1];
}

const MadritschLevel& MadritschStructure::level_of(const BigInt& index) const {
  if (index < 1) {
    throw ContractViolation("madritsch: indices are 1-based");
  }
  for (unsigned i = 1;; ++i) {
    const MadritschLevel& lv = level(i);
    if (index <= lv.boundary) {
      return lv;
    }
  }
}

BigInt MadritschStructure::zeroed_total(unsigned n) const {
  BigInt total = 0;
  for (unsigned i = 1; i <= n; ++i) {
    total += level(i).zeroed_length;
  }
  return total;
}

std::vector<Bit> MadritschStructure::materialize_block(unsigned i, bool zero_last_section) const {
  const MadritschLevel& lv = level(i);
  std::vector<Bit> out;
  out.reserve(static_cast<std::size_t>(lv.block_length));
  const std::uint64_t blocks = std::uint64_t{1} << i;
  for (std::uint64_t j = 0; j < blocks; ++j) {
    const bool zeroed = zero_last_section && j == blocks - 1;
    for (std::uint64_t rep = 0; rep < lv.inner_exponent; ++rep) {
      for (unsigned b = 0; b < i; ++b) {
        out.push_back(zeroed ? Bit::zero : to_bit((j >> (i - 1 - b)) & 1u));
      }
    }
  }
  return out;
}

RunSummary MadritschStructure::block_summary(unsigned i, bool zero_last_section) const {
  const MadritschLevel& lv = level(i);
  const std::uint64_t blocks = std::uint64_t{1} << i;
  RunSummary acc;
  std::vector<Bit> p(i);
  for (std::uint64_t j = 0; j < blocks; ++j) {
    const bool zeroed = zero_last_section && j == blocks - 1;
    for (unsigned b = 0; b < i; ++b) {
      p[b] = zeroed ? Bit::zero : to_bit((j >> (i - 1 - b)) & 1u);
    }
    acc = concat(acc, power(RunSummary::of(p), BigInt(lv.inner_exponent)));
  }
  return acc;
}

RunSummary MadritschStructure::prefix_summary(unsigned n, bool zero_last_section) const {
  RunSummary acc;
  for (unsigned i = 1; i <= n; ++i) {
    acc = concat(acc, power(block_summary(i, zero_last_section), level(i).outer_exponent));
  }
  return acc;
}

const MadritschStructure& madritsch_structure() {
  static const MadritschStructure structure;
  return structure;
}

// ---------------------------------------------------------------------------
// Generators

BitStream champernowne() {
  return BitStream(
      "champernowne", std::make_shared<NumberLayoutSource<false>>(),
      [](unsigned n) { return Checkpoint{n, champernowne_position(n), BigInt(n)}; }, 1);
}

BitStream strictly_typical_y() {
  return BitStream(
      "y", std::make_shared<NumberLayoutSource<true>>(),
      [](unsigned n) { return Checkpoint{n, champernowne_position(n), BigInt(n)}; }, 1);
}

Block y_block(const BigInt& n) {
  if (n < 1) {
    throw ContractViolation("y_block: n >= 1");
  }
  const std::size_t len = mp::msb(n) + 1;
  return Block{std::vector<Bit>(len, to_bit(is_all_ones_number(n)))};
}

BitStream nakai_poly(const Polynomial& w, unsigned radix) {
  if (radix != 2) {
    throw ContractViolation("nakai_poly: a binary stream needs radix 2; use NakaiDigits for radix " +
                            std::to_string(radix));
  }
  auto digits = std::make_shared<const NakaiDigits>(w, radix);
  return BitStream("nakai", std::make_shared<NakaiBitSource>(std::move(digits)));
}

BitStream strictly_normal_z(unsigned a) {
  if (a < 2) {
    throw ContractViolation("strictly_normal_z: a must be >= 2");
  }
  const BigInt scale = BigInt(1) << a;
  Polynomial w{{Rational(1) - Rational(BigInt(1), scale), Rational(BigInt(1), scale)}};
  auto digits = std::make_shared<const NakaiDigits>(std::move(w), 2);
  return BitStream(
      "z", std::make_shared<NakaiBitSource>(std::move(digits)),
      [scale](unsigned n) {
        return Checkpoint{n, scale * champernowne_position(n), BigInt(n) * scale};
      },
      1);
}

BitStream madritsch_omega() {
  return BitStream(
      "omega", std::make_shared<MadritschSource>(false),
      [](unsigned n) {
        const MadritschStructure& ms = madritsch_structure();
        return Checkpoint{n, ms.boundary(n), ms.prefix_summary(n, false).max_run};
      },
      1);
}

BitStream omega_prime() {
  return BitStream(
      "omega-prime", std::make_shared<MadritschSource>(true),
      [](unsigned n) {
        const MadritschStructure& ms = madritsch_structure();
        return Checkpoint{n, ms.boundary(n), ms.prefix_summary(n, true).max_run};
      },
      1);
}

std::vector<Checkpoint> checkpoints(const BitStream& s, unsigned n_from, unsigned n_to) {
  if (!s.has_checkpoints()) {
    throw UnsupportedOperation("stream '" + s.kind() + "' carries no checkpoint metadata");
  }
  std::vector<Checkpoint> out;
  for (unsigned n = n_from; n <= n_to; ++n) {
    out.push_back(s.checkpoint(n));
  }
  return out;
}

std::vector<std::string> generator_names() {
  return {"champernowne", "y", "z", "omega", "omega-prime", "nakai"};
}

BitStream make_generator(const GeneratorSpec& spec) {
  if (spec.name == "champernowne") return champernowne();
  if (spec.name == "y") return strictly_typical_y();
  if (spec.name == "z") return strictly_normal_z(spec.a);
  if (spec.name == "omega") return madritsch_omega();
  if (spec.name == "omega-prime") return omega_prime();
  if (spec.name == "nakai") {
    if (spec.poly.empty()) {
      throw ContractViolation("nakai generator needs polynomial coefficients");
    }
    return nakai_poly(Polynomial::parse(spec.poly), spec.radix);
  }
  std::ostringstream msg;
  msg << "unknown generator '" << spec.name << "'; valid:";
  for (const auto& n : generator_names()) msg << ' ' << n;
  throw ContractViolation(msg.str());
}

}  // namespace typnorm
