#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "walk.hpp"

namespace qhfmp {

// Hash instance parameters: the digest is n blocks of m bits, one block per
// cycle node, extracted from the first l decimal digits of each node's final
// probability. Zero message bits drive one-step-memory steps with coin angle
// theta0, one bits drive two-step-memory steps with theta1; alpha sets the
// initial superposition of the coin register.
struct HashParams {
  int node_count = 37;  // n, odd
  int block_bits = 8;   // m
  int prob_digits = 8;  // l
  double theta0 = 0.0;
  double theta1 = 0.0;
  double alpha = 0.0;

  int digest_bits() const { return node_count * block_bits; }
  int digest_bytes() const { return (digest_bits() + 7) / 8; }

  // Throws Error on hard violations (even n, l too small for m, non-finite
  // angles). Returns human-readable warnings for legal but non-standard
  // settings, currently angles outside the open interval (0, pi/2).
  std::vector<std::string> validate() const;

  friend bool operator==(const HashParams&, const HashParams&) = default;
};

// Named presets: QHFM-P-296 (n = 37) and QHFM-P-264 (n = 33), both with
// m = l = 8, theta0 = alpha = pi/4, theta1 = pi/3. Accepts the full name or
// the output length ("296" / "264"), case-insensitive.
HashParams standard_instance(std::string_view name);

// Canonical evaluation of (num/den) * pi with the fraction reduced first, so
// equal angles written differently ("15*pi/60", "pi/4") are bit-identical.
double angle_from_fraction(long long num, long long den);

// Accepts decimal radians or the exact forms "pi", "pi/4", "3*pi/8".
double parse_angle(std::string_view text);

// Emits the exact fraction form when one matches bit-for-bit, else decimal
// with full precision.
std::string format_angle(double value);

// Versioned parameter descriptor {schema_version, n, m, l, theta0, theta1,
// alpha} for reproducible instance exchange.
std::string params_to_json(const HashParams& params, std::string_view name = {});
HashParams params_from_json(std::string_view json_text);

// Message bits in walk order; values are 0 or 1.
struct BitMessage {
  std::vector<uint8_t> bits;

  std::size_t size() const { return bits.size(); }

  friend bool operator==(const BitMessage&, const BitMessage&) = default;
};

// Each byte expands most-significant-bit first, in byte order.
BitMessage bits_from_bytes(std::span<const uint8_t> data);

// n blocks of m bits, B_0 || B_1 || ... || B_{n-1}.
class Digest {
 public:
  Digest() = default;
  Digest(int node_count, int block_bits, std::vector<uint32_t> blocks);

  int node_count() const { return node_count_; }
  int block_bits() const { return block_bits_; }
  int bit_length() const { return node_count_ * block_bits_; }
  int byte_length() const { return (bit_length() + 7) / 8; }
  const std::vector<uint32_t>& blocks() const { return blocks_; }

  // index 0 is the most significant bit of B_0.
  bool bit(int index) const;

  // Prefixed with (8 - n*m) mod 8 zero bits so the digest fills whole bytes.
  std::vector<uint8_t> bytes() const;

  // ceil(n*m / 4) uppercase digits; pretty inserts a space between bytes.
  std::string hex(bool pretty = false) const;

  friend bool operator==(const Digest&, const Digest&) = default;

 private:
  int node_count_ = 0;
  int block_bits_ = 0;
  std::vector<uint32_t> blocks_;
};

// cos(alpha) on register j = 4 and sin(alpha) on j = 5 of node 0.
WalkState initial_state(const HashParams& params);

// Applies one step per message bit, first bit first: 0 selects the
// one-step-memory walk with theta0, 1 the two-step-memory walk with theta1.
WalkState evolve(WalkState state, const BitMessage& msg, const HashParams& params);

std::vector<double> final_distribution(const BitMessage& msg, const HashParams& params);

// B_x = floor(p_x * 10^l) mod 2^m. floor is taken on the double product
// directly; digests near decimal-digit boundaries are sensitive to 1-ulp
// noise by construction.
Digest digest_from_distribution(std::span<const double> prob, const HashParams& params);

Digest hash_bits(const BitMessage& msg, const HashParams& params);
Digest hash_bytes(std::span<const uint8_t> data, const HashParams& params);

}  // namespace qhfmp
