#include "typnorm/bitstream.hpp"

#include <utility>

namespace typnorm {

namespace {

class PositionalCursor final : public BitCursor {
public:
  explicit PositionalCursor(const BitSource& source) : source_(source) {}

  void read(std::span<Bit> out) override {
    for (Bit& b : out) {
      b = source_.digit_at(next_++);
    }
  }

private:
  const BitSource& source_;
  std::uint64_t next_ = 1;
};

class FunctionSource final : public BitSource {
public:
  explicit FunctionSource(std::function<Bit(std::uint64_t)> fn) : fn_(std::move(fn)) {}

  Bit digit_at(const BigInt& index) const override { return fn_(to_u64(index)); }
  Bit digit_at(std::uint64_t index) const override { return fn_(index); }

private:
  std::function<Bit(std::uint64_t)> fn_;
};

class PrefixSource final : public BitSource {
public:
  explicit PrefixSource(Prefix p) : prefix_(std::move(p)) {}

  Bit digit_at(const BigInt& index) const override {
    if (index > prefix_.size()) {
      return Bit::zero;
    }
    return prefix_.at(static_cast<std::size_t>(index));
  }
  Bit digit_at(std::uint64_t index) const override {
    return index > prefix_.size() ? Bit::zero : prefix_.at(static_cast<std::size_t>(index));
  }

private:
  Prefix prefix_;
};

template <class T>
T bits_from_string(std::string_view bits) {
  T out;
  out.digits.reserve(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw ParseError(std::string("expected '0' or '1', got '") + bits[i] + "'", i);
    }
    out.digits.push_back(to_bit(bits[i] == '1'));
  }
  return out;
}

}  // namespace

std::unique_ptr<BitCursor> BitSource::cursor() const {
  return std::make_unique<PositionalCursor>(*this);
}

Block block_from_string(std::string_view bits) { return bits_from_string<Block>(bits); }
Prefix prefix_from_string(std::string_view bits) { return bits_from_string<Prefix>(bits); }

BitStream::BitStream(std::string kind, std::shared_ptr<const BitSource> source,
                     CheckpointFn checkpoints, unsigned first_checkpoint)
    : kind_(std::move(kind)),
      source_(std::move(source)),
      checkpoints_(std::move(checkpoints)),
      first_checkpoint_(first_checkpoint) {}

BitStream BitStream::from_function(std::string kind, std::function<Bit(std::uint64_t)> fn) {
  return BitStream(std::move(kind), std::make_shared<FunctionSource>(std::move(fn)));
}

BitStream BitStream::from_prefix(std::string kind, Prefix prefix) {
  return BitStream(std::move(kind), std::make_shared<PrefixSource>(std::move(prefix)));
}

Bit BitStream::digit_at(const BigInt& index) const {
  if (index < 1) {
    throw ContractViolation("digit_at: indices are 1-based");
  }
  return source_->digit_at(index);
}

Bit BitStream::digit_at(std::uint64_t index) const {
  if (index < 1) {
    throw ContractViolation("digit_at: indices are 1-based");
  }
  return source_->digit_at(index);
}

Checkpoint BitStream::checkpoint(unsigned n) const {
  if (!checkpoints_) {
    throw UnsupportedOperation("stream '" + kind_ + "' carries no checkpoint metadata");
  }
  if (n < first_checkpoint_) {
    throw ContractViolation("checkpoint index " + std::to_string(n) + " below first checkpoint " +
                            std::to_string(first_checkpoint_));
  }
  return checkpoints_(n);
}

Prefix take(const BitStream& s, const BigInt& n, std::uint64_t cap) {
  if (n < 0) {
    throw ContractViolation("take: negative length");
  }
  if (n > cap) {
    throw ResourceError("take: length " + n.str() + " exceeds materialization cap " +
                        std::to_string(cap));
  }
  Prefix p;
  p.digits.resize(static_cast<std::size_t>(n));
  if (!p.digits.empty()) {
    s.cursor()->read(p.digits);
  }
  return p;
}

Rational metric_d(const Prefix& x, const Prefix& y) {
  if (x.size() != y.size() || x.size() == 0) {
    throw ContractViolation("metric_d: prefixes must have equal nonzero length");
  }
  for (std::size_t k = 1; k <= x.size(); ++k) {
    if (x.at(k) != y.at(k)) {
      return Rational(BigInt(1), BigInt(1) << (k - 1));
    }
  }
  return Rational(0);
}

Rational real_value(const Prefix& p) {
  BigInt numerator = 0;
  for (Bit b : p.digits) {
    numerator = (numerator << 1) + to_int(b);
  }
  return Rational(numerator, BigInt(1) << p.size());
}

bool cylinder_contains(const Block& b, const Prefix& p) {
  if (b.size() > p.size()) {
    throw ContractViolation("cylinder_contains: block longer than prefix");
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b.digits[i] != p.digits[i]) {
      return false;
    }
  }
  return true;
}

std::string to_ascii(const Prefix& p) {
  std::string out;
  out.reserve(p.size() + 1);
  for (Bit b : p.digits) {
    out.push_back(b == Bit::one ? '1' : '0');
  }
  out.push_back('\n');
  return out;
}

Prefix from_ascii(std::string_view text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  return prefix_from_string(text);
}

std::vector<std::uint8_t> to_packed(const Prefix& p) {
  std::vector<std::uint8_t> bytes((p.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.digits[i] == Bit::one) {
      bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
  }
  return bytes;
}

Prefix from_packed(std::span<const std::uint8_t> bytes, std::size_t n) {
  if (n > bytes.size() * 8) {
    throw ContractViolation("from_packed: length exceeds available bytes");
  }
  Prefix p;
  p.digits.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.digits[i] = to_bit((bytes[i / 8] >> (7 - i % 8)) & 1u);
  }
  return p;
}

}  // namespace typnorm
