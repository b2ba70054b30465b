#include "hash.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

#include "json.hpp"

namespace qhfmp {

namespace {

constexpr int kMaxProbDigits = 15;  // 10^l and floor(p * 10^l) stay exact in a double

uint64_t pow10_exact(int exponent) {
  uint64_t v = 1;
  for (int i = 0; i < exponent; ++i) v *= 10;
  return v;
}

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  return text;
}

double parse_decimal(std::string_view text, const char* what) {
  const std::string buf(text);
  char* end = nullptr;
  const double value = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || buf.empty() || !std::isfinite(value))
    raise(Errc::invalid_argument, std::string("cannot parse ") + what + ": '" + buf + "'");
  return value;
}

bool parse_positive_int(std::string_view text, long long& out) {
  if (text.empty() || text.size() > 18) return false;
  long long v = 0;
  for (char ch : text) {
    if (ch < '0' || ch > '9') return false;
    v = v * 10 + (ch - '0');
  }
  if (v <= 0) return false;
  out = v;
  return true;
}

}  // namespace

std::vector<std::string> HashParams::validate() const {
  if (node_count < 3 || node_count % 2 == 0)
    raise(Errc::invalid_argument, "n must be an odd integer >= 3");
  if (block_bits < 1 || block_bits > 32)
    raise(Errc::invalid_argument, "m must be in [1, 32]");
  if (prob_digits < 1 || prob_digits > kMaxProbDigits)
    raise(Errc::invalid_argument, "l must be in [1, 15]");
  if (!std::isfinite(theta0) || !std::isfinite(theta1) || !std::isfinite(alpha))
    raise(Errc::invalid_argument, "angles must be finite");
  // "10^l much greater than 2^m", pinned as 10^l >= 1000 * 2^m.
  if (pow10_exact(prob_digits) < (uint64_t{1} << block_bits) * 1000ull)
    raise(Errc::invalid_argument, "10^l must be at least 1000 * 2^m");

  std::vector<std::string> warnings;
  const auto warn_range = [&warnings](const char* name, double value) {
    if (!(value > 0.0 && value < std::numbers::pi / 2.0))
      warnings.push_back(std::string(name) +
                         " lies outside the standard open interval (0, pi/2)");
  };
  warn_range("theta0", theta0);
  warn_range("theta1", theta1);
  warn_range("alpha", alpha);
  return warnings;
}

HashParams standard_instance(std::string_view name) {
  const std::string key = lower(trim(name));
  int n = 0;
  if (key == "qhfm-p-296" || key == "296")
    n = 37;
  else if (key == "qhfm-p-264" || key == "264")
    n = 33;
  else
    raise(Errc::invalid_argument,
          "unknown hash instance '" + std::string(name) +
              "' (expected QHFM-P-296 or QHFM-P-264)");
  HashParams params;
  params.node_count = n;
  params.block_bits = 8;
  params.prob_digits = 8;
  params.theta0 = angle_from_fraction(1, 4);
  params.theta1 = angle_from_fraction(1, 3);
  params.alpha = angle_from_fraction(1, 4);
  return params;
}

double angle_from_fraction(long long num, long long den) {
  if (num <= 0 || den <= 0)
    raise(Errc::invalid_argument, "angle fraction must have positive terms");
  const long long g = std::gcd(num, den);
  num /= g;
  den /= g;
  if (num == 1) return std::numbers::pi / static_cast<double>(den);
  return static_cast<double>(num) * std::numbers::pi / static_cast<double>(den);
}

double parse_angle(std::string_view text) {
  const std::string_view body = trim(text);
  if (body.empty()) raise(Errc::invalid_argument, "empty angle");
  const std::size_t pi_pos = body.find("pi");
  if (pi_pos == std::string_view::npos) return parse_decimal(body, "angle");

  std::string_view before = trim(body.substr(0, pi_pos));
  std::string_view after = trim(body.substr(pi_pos + 2));
  if (!before.empty() && before.back() == '*') before = trim(before.substr(0, before.size() - 1));

  long long den = 1;
  double den_value = 1.0;
  bool den_integral = true;
  if (!after.empty()) {
    if (after.front() != '/')
      raise(Errc::invalid_argument, "malformed angle: '" + std::string(text) + "'");
    const std::string_view den_text = trim(after.substr(1));
    den_integral = parse_positive_int(den_text, den);
    den_value = den_integral ? static_cast<double>(den) : parse_decimal(den_text, "angle denominator");
    if (den_value <= 0.0) raise(Errc::invalid_argument, "angle denominator must be positive");
  }

  long long num = 1;
  double num_value = 1.0;
  bool num_integral = true;
  if (!before.empty()) {
    num_integral = parse_positive_int(before, num);
    num_value = num_integral ? static_cast<double>(num) : parse_decimal(before, "angle coefficient");
  }

  if (num_integral && den_integral) return angle_from_fraction(num, den);
  return num_value * std::numbers::pi / den_value;
}

std::string format_angle(double value) {
  for (long long den = 1; den <= 120; ++den) {
    const long long num = std::llround(value * static_cast<double>(den) / std::numbers::pi);
    if (num < 1 || num > 1000) continue;
    if (angle_from_fraction(num, den) != value) continue;
    const long long g = std::gcd(num, den);
    const long long rn = num / g;
    const long long rd = den / g;
    if (rn == 1 && rd == 1) return "pi";
    if (rn == 1) return "pi/" + std::to_string(rd);
    if (rd == 1) return std::to_string(rn) + "*pi";
    return std::to_string(rn) + "*pi/" + std::to_string(rd);
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string params_to_json(const HashParams& params, std::string_view name) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  if (!name.empty()) j["name"] = std::string(name);
  j["n"] = params.node_count;
  j["m"] = params.block_bits;
  j["l"] = params.prob_digits;
  j["theta0"] = format_angle(params.theta0);
  j["theta1"] = format_angle(params.theta1);
  j["alpha"] = format_angle(params.alpha);
  return j.dump(2) + "\n";
}

HashParams params_from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::invalid_argument, std::string("invalid parameter JSON: ") + e.what());
  }
  if (!j.is_object()) raise(Errc::invalid_argument, "parameter JSON must be an object");

  const auto read_int = [&j](const char* key) -> int {
    if (!j.contains(key) || !j[key].is_number_integer())
      raise(Errc::invalid_argument, std::string("parameter JSON needs integer field '") + key + "'");
    return j[key].get<int>();
  };
  const auto read_angle = [&j](const char* key) -> double {
    if (!j.contains(key))
      raise(Errc::invalid_argument, std::string("parameter JSON needs field '") + key + "'");
    const auto& v = j[key];
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_angle(v.get<std::string>());
    raise(Errc::invalid_argument,
          std::string("field '") + key + "' must be a number or an angle string");
  };

  HashParams params;
  params.node_count = read_int("n");
  params.block_bits = read_int("m");
  params.prob_digits = read_int("l");
  params.theta0 = read_angle("theta0");
  params.theta1 = read_angle("theta1");
  params.alpha = read_angle("alpha");
  params.validate();
  return params;
}

BitMessage bits_from_bytes(std::span<const uint8_t> data) {
  BitMessage msg;
  msg.bits.reserve(data.size() * 8);
  for (uint8_t byte : data)
    for (int bit = 7; bit >= 0; --bit)
      msg.bits.push_back(static_cast<uint8_t>((byte >> bit) & 1u));
  return msg;
}

Digest::Digest(int node_count, int block_bits, std::vector<uint32_t> blocks)
    : node_count_(node_count), block_bits_(block_bits), blocks_(std::move(blocks)) {
  if (node_count_ < 1 || block_bits_ < 1 || block_bits_ > 32)
    raise(Errc::invalid_argument, "digest layout out of range");
  if (blocks_.size() != static_cast<std::size_t>(node_count_))
    raise(Errc::invalid_argument, "digest needs one block per node");
  if (block_bits_ < 32)
    for (uint32_t b : blocks_)
      if (b >= (uint32_t{1} << block_bits_))
        raise(Errc::invalid_argument, "digest block exceeds 2^m");
}

bool Digest::bit(int index) const {
  if (index < 0 || index >= bit_length()) raise(Errc::invalid_argument, "digest bit out of range");
  const int block = index / block_bits_;
  const int offset = index % block_bits_;
  return (blocks_[block] >> (block_bits_ - 1 - offset)) & 1u;
}

std::vector<uint8_t> Digest::bytes() const {
  const int bits = bit_length();
  const int pad = (8 - bits % 8) % 8;
  std::vector<uint8_t> out((bits + pad) / 8, 0);
  for (int i = 0; i < bits; ++i)
    if (bit(i)) out[(pad + i) / 8] |= static_cast<uint8_t>(0x80u >> ((pad + i) % 8));
  return out;
}

std::string Digest::hex(bool pretty) const {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  if (pretty) {
    const std::vector<uint8_t> view = bytes();
    std::string out;
    out.reserve(view.size() * 3);
    for (std::size_t i = 0; i < view.size(); ++i) {
      if (i) out.push_back(' ');
      out.push_back(kDigits[view[i] >> 4]);
      out.push_back(kDigits[view[i] & 0xF]);
    }
    return out;
  }
  const int bits = bit_length();
  const int pad = (4 - bits % 4) % 4;
  std::vector<uint8_t> nibbles((bits + pad) / 4, 0);
  for (int i = 0; i < bits; ++i)
    if (bit(i)) nibbles[(pad + i) / 4] |= static_cast<uint8_t>(0x8u >> ((pad + i) % 4));
  std::string out;
  out.reserve(nibbles.size());
  for (uint8_t n : nibbles) out.push_back(kDigits[n]);
  return out;
}

WalkState initial_state(const HashParams& params) {
  params.validate();
  WalkState state = WalkState::zeroed(params.node_count);
  state.amps[4] = std::cos(params.alpha);
  state.amps[5] = std::sin(params.alpha);
  return state;
}

WalkState evolve(WalkState state, const BitMessage& msg, const HashParams& params) {
  state.validate();
  for (uint8_t bit : msg.bits)
    if (bit > 1) raise(Errc::invalid_argument, "message bits must be 0 or 1");
  const CoinMatrix coin0 = coin_matrix(params.theta0);
  const CoinMatrix coin1 = coin_matrix(params.theta1);
  std::vector<Amplitude> next(state.amps.size());
  for (uint8_t bit : msg.bits) {
    const CoinMatrix& k = bit ? coin1 : coin0;
    const MemoryLength memory = bit ? MemoryLength::two : MemoryLength::one;
    step_amplitudes<Amplitude, double>(memory, state.amps, next, state.node_count, k.a, k.b, k.c,
                                       k.d);
    state.amps.swap(next);
  }
  return state;
}

std::vector<double> final_distribution(const BitMessage& msg, const HashParams& params) {
  return probability_distribution(evolve(initial_state(params), msg, params));
}

Digest digest_from_distribution(std::span<const double> prob, const HashParams& params) {
  params.validate();
  if (prob.size() != static_cast<std::size_t>(params.node_count))
    raise(Errc::invalid_argument, "distribution length does not match node count");
  const double scale = static_cast<double>(pow10_exact(params.prob_digits));
  const uint64_t mask =
      params.block_bits == 32 ? 0xFFFFFFFFull : ((uint64_t{1} << params.block_bits) - 1);
  std::vector<uint32_t> blocks(params.node_count);
  double total = 0.0;
  for (int x = 0; x < params.node_count; ++x) {
    const double p = prob[x];
    if (!std::isfinite(p) || p < 0.0)
      raise(Errc::numeric, "negative or non-finite probability; upstream state is corrupt");
    total += p;
    blocks[x] = static_cast<uint32_t>(static_cast<uint64_t>(std::floor(p * scale)) & mask);
  }
  if (std::abs(total - 1.0) > kNormTolerance)
    raise(Errc::numeric, "probabilities do not sum to 1: " + std::to_string(total));
  return Digest(params.node_count, params.block_bits, std::move(blocks));
}

Digest hash_bits(const BitMessage& msg, const HashParams& params) {
  return digest_from_distribution(final_distribution(msg, params), params);
}

Digest hash_bytes(std::span<const uint8_t> data, const HashParams& params) {
  return hash_bits(bits_from_bytes(data), params);
}

}  // namespace qhfmp
