#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "modcrack/errors.hpp"

namespace modcrack {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace detail

// Single-consumer source of residues mod G. Streams are stateful: safe to
// move between threads, not to share concurrently.
class Keystream {
 public:
  virtual ~Keystream() = default;
  virtual std::uint32_t next() = 0;
  std::uint32_t modulus() const { return modulus_; }

 protected:
  explicit Keystream(std::uint32_t g) : modulus_(g) {
    if (g < 2) throw domain_error("keystream modulus must be at least 2");
  }

  std::uint32_t modulus_;
};

// Chaotic generator: x <- (r*x*(1-x) + (4-r)*sin(pi*x)/4) mod 1, quantized
// by floor(x*G) after a fixed burn-in of 1000 iterations.
class LogisticSineStream final : public Keystream {
 public:
  static constexpr int kBurnIn = 1000;

  LogisticSineStream(double x0, double r, std::uint32_t g)
      : Keystream(g), x_(x0), r_(r) {
    if (!(x0 > 0.0 && x0 < 1.0))
      throw seed_error("initial state must lie strictly inside (0,1)");
    if (!(r > 0.0 && r < 4.0))
      throw seed_error("control parameter must lie strictly inside (0,4)");
    for (int i = 0; i < kBurnIn; ++i) step();
  }

  static LogisticSineStream from_seed(std::span<const std::uint8_t> seed,
                                      std::uint32_t g) {
    if (seed.empty()) throw seed_error("empty seed");
    const std::uint64_t h = detail::fnv1a64(seed);
    const std::uint64_t h1 = detail::mix64(h);
    const std::uint64_t h2 = detail::mix64(h ^ 0xa5a5a5a5a5a5a5a5ull);
    // 53 mantissa bits, nudged away from the endpoints.
    const double x0 = (double((h1 >> 11) | 1ull)) / 9007199254740992.0;
    const double r = 0.25 + 3.5 * (double(h2 >> 11) / 9007199254740992.0);
    return LogisticSineStream(x0, r, g);
  }

  std::uint32_t next() override {
    step();
    auto v = std::uint64_t(x_ * double(modulus_));
    if (v >= modulus_) v = modulus_ - 1;
    return std::uint32_t(v);
  }

 private:
  void step() {
    constexpr double pi = 3.14159265358979323846;
    x_ = std::fmod(r_ * x_ * (1.0 - x_) + (4.0 - r_) * std::sin(pi * x_) / 4.0, 1.0);
  }

  double x_;
  double r_;
};

// Counter-mode expansion of the seed; no nonlinear dynamics involved.
class CounterStream final : public Keystream {
 public:
  CounterStream(std::span<const std::uint8_t> seed, std::uint32_t g)
      : Keystream(g) {
    if (seed.empty()) throw seed_error("empty seed");
    key_ = detail::mix64(detail::fnv1a64(seed));
  }

  CounterStream(std::initializer_list<std::uint8_t> seed, std::uint32_t g)
      : CounterStream(std::span<const std::uint8_t>(seed.begin(), seed.size()), g) {}

  std::uint32_t next() override {
    return std::uint32_t(detail::mix64(key_ ^ ++counter_) % modulus_);
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

// Replays a fixed sequence; throws once it runs dry.
class FixedStream final : public Keystream {
 public:
  FixedStream(std::vector<std::uint32_t> values, std::uint32_t g)
      : Keystream(g), values_(std::move(values)) {
    for (std::uint32_t v : values_)
      if (v >= g) throw domain_error("fixed stream value out of range");
  }

  std::uint32_t next() override {
    if (pos_ >= values_.size()) throw generation_error("fixed keystream exhausted");
    return values_[pos_++];
  }

 private:
  std::vector<std::uint32_t> values_;
  std::size_t pos_ = 0;
};

class ConstantStream final : public Keystream {
 public:
  ConstantStream(std::uint32_t value, std::uint32_t g) : Keystream(g), value_(value) {
    if (value >= g) throw domain_error("constant stream value out of range");
  }

  std::uint32_t next() override { return value_; }

 private:
  std::uint32_t value_;
};

enum class Schedule { LogisticSine, Counter };

inline std::unique_ptr<Keystream> make_stream(Schedule kind,
                                              std::span<const std::uint8_t> seed,
                                              std::uint32_t g) {
  switch (kind) {
    case Schedule::LogisticSine:
      return std::make_unique<LogisticSineStream>(LogisticSineStream::from_seed(seed, g));
    case Schedule::Counter:
      return std::make_unique<CounterStream>(seed, g);
  }
  throw lookup_error("unknown schedule");
}

// Nondeterministic stream for per-encryption frame pixels.
inline std::unique_ptr<Keystream> fresh_entropy_stream(std::uint32_t g) {
  std::random_device rd;
  std::vector<std::uint8_t> seed(16);
  for (std::size_t i = 0; i < seed.size(); i += 4) {
    std::uint32_t word = rd();
    seed[i] = std::uint8_t(word);
    seed[i + 1] = std::uint8_t(word >> 8);
    seed[i + 2] = std::uint8_t(word >> 16);
    seed[i + 3] = std::uint8_t(word >> 24);
  }
  return std::make_unique<CounterStream>(seed, g);
}

inline std::vector<std::uint8_t> parse_hex_seed(const std::string& hex) {
  if (hex.empty() || hex.size() % 2 != 0)
    throw seed_error("seed must be a non-empty even-length hex string");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = nibble(hex[2 * i]);
    const int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw seed_error("seed must be lowercase hex");
    out[i] = std::uint8_t(hi << 4 | lo);
  }
  return out;
}

inline std::string seed_digest(std::span<const std::uint8_t> seed) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = detail::mix64(detail::fnv1a64(seed));
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace modcrack
