#pragma once

// Binary sequences x_1 x_2 ... with 1-based positional access, sequential
// cursors, and the finite-prefix utilities built on them.

#include "typnorm/numeric.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace typnorm {

enum class Bit : std::uint8_t { zero = 0, one = 1 };

inline constexpr Bit to_bit(bool b) noexcept { return b ? Bit::one : Bit::zero; }
inline constexpr unsigned to_int(Bit b) noexcept { return static_cast<unsigned>(b); }

/// Finite block of digits, e.g. a cylinder base [w_1 ... w_n].
struct Block {
  std::vector<Bit> digits;

  std::size_t size() const noexcept { return digits.size(); }
  bool operator==(const Block&) const = default;
};

/// The first n digits of a sequence.
struct Prefix {
  std::vector<Bit> digits;

  std::size_t size() const noexcept { return digits.size(); }
  /// 1-based access.
  Bit at(std::size_t i) const { return digits.at(i - 1); }
  bool operator==(const Prefix&) const = default;
};

/// Builds a block/prefix from a string of '0'/'1' characters.
Block block_from_string(std::string_view bits);
Prefix prefix_from_string(std::string_view bits);

/// Exact (position, maximal run) pair known from a construction's structure.
struct Checkpoint {
  unsigned n = 0;
  BigInt position;
  BigInt exact_L;
};

/// Sequential reader starting at index 1. Fills whole spans on every call.
class BitCursor {
public:
  virtual ~BitCursor() = default;
  virtual void read(std::span<Bit> out) = 0;
};

/// Positional definition of a sequence. Implementations must be pure.
class BitSource {
public:
  virtual ~BitSource() = default;
  /// index >= 1
  virtual Bit digit_at(const BigInt& index) const = 0;
  /// Sequential access from index 1. The default walks digit_at.
  virtual std::unique_ptr<BitCursor> cursor() const;
  virtual Bit digit_at(std::uint64_t index) const { return digit_at(BigInt(index)); }
};

using CheckpointFn = std::function<Checkpoint(unsigned n)>;

/// Immutable, cheaply copyable handle to an infinite binary sequence.
class BitStream {
public:
  BitStream(std::string kind, std::shared_ptr<const BitSource> source,
            CheckpointFn checkpoints = {}, unsigned first_checkpoint = 1);

  /// Wraps a plain callable on 64-bit indices; useful for ad hoc streams.
  static BitStream from_function(std::string kind, std::function<Bit(std::uint64_t)> fn);
  /// Finite digits followed by zeros (the canonical dyadic form).
  static BitStream from_prefix(std::string kind, Prefix prefix);

  Bit digit_at(const BigInt& index) const;
  Bit digit_at(std::uint64_t index) const;
  std::unique_ptr<BitCursor> cursor() const { return source_->cursor(); }

  const std::string& kind() const noexcept { return kind_; }
  const BitSource& source() const noexcept { return *source_; }
  std::shared_ptr<const BitSource> source_ptr() const noexcept { return source_; }

  bool has_checkpoints() const noexcept { return static_cast<bool>(checkpoints_); }
  unsigned first_checkpoint() const noexcept { return first_checkpoint_; }
  /// Throws UnsupportedOperation when the stream carries no metadata.
  Checkpoint checkpoint(unsigned n) const;

private:
  std::string kind_;
  std::shared_ptr<const BitSource> source_;
  CheckpointFn checkpoints_;
  unsigned first_checkpoint_;
};

/// Buffered bit-at-a-time reader over a cursor.
class StreamReader {
public:
  explicit StreamReader(const BitStream& stream) : cursor_(stream.cursor()) {}

  Bit next() {
    if (pos_ == buffer_.size()) {
      cursor_->read(buffer_);
      pos_ = 0;
    }
    return buffer_[pos_++];
  }

private:
  std::unique_ptr<BitCursor> cursor_;
  std::array<Bit, 4096> buffer_{};
  std::size_t pos_ = buffer_.size();
};

inline constexpr std::uint64_t kDefaultCap = 100'000'000;

/// Digits 1..n. Throws ResourceError when n exceeds cap.
Prefix take(const BitStream& s, const BigInt& n, std::uint64_t cap = kDefaultCap);

/// d(x, y) = 0 if equal, else 2^{-(k-1)} with k the first differing index.
Rational metric_d(const Prefix& x, const Prefix& y);

/// sum of x_i 2^{-i}, exact.
Rational real_value(const Prefix& p);

bool cylinder_contains(const Block& b, const Prefix& p);

// Serialization: ASCII is one '0'/'1' per digit plus a trailing newline.
// Packed is big-endian within each byte, last byte zero-padded.
std::string to_ascii(const Prefix& p);
Prefix from_ascii(std::string_view text);
std::vector<std::uint8_t> to_packed(const Prefix& p);
Prefix from_packed(std::span<const std::uint8_t> bytes, std::size_t n);

}  // namespace typnorm
