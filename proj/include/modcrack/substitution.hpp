#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "modcrack/errors.hpp"
#include "modcrack/mod_image.hpp"

namespace modcrack {

enum class SubTag {
  ModAdd,        // c(i) = m(i) + k(i)
  ModAddChain1,  // one previous cipher pixel chained in
  ModAddChain2,  // two previous cipher pixels chained in
  ModSub,        // c(i) = k(i) - m(i)
  Filtering,     // causal kernel over already-produced cipher pixels
  XorControl,    // XOR chaining; outside the modular family, kept as control
};

// Taps into already-produced cipher pixels: (offset, coefficient) with
// strictly negative offsets. The current pixel's coefficient is fixed to 1
// so the pass stays invertible.
struct FilterKernel {
  std::vector<std::pair<std::int64_t, std::uint32_t>> taps;

  static FilterKernel default_causal() { return FilterKernel{{{-1, 1}, {-2, 1}}}; }

  void validate(std::uint32_t g) const {
    for (const auto& [offset, coeff] : taps) {
      if (offset >= 0) throw domain_error("filter kernel taps must have negative offsets");
      if (coeff >= g) throw domain_error("filter kernel coefficient out of range");
    }
  }

  bool operator==(const FilterKernel&) const = default;
};

struct SubstitutionVariant {
  SubTag tag = SubTag::ModAdd;
  FilterKernel kernel;  // Filtering only

  static SubstitutionVariant mod_add() { return {SubTag::ModAdd, {}}; }
  static SubstitutionVariant mod_add_chain1() { return {SubTag::ModAddChain1, {}}; }
  static SubstitutionVariant mod_add_chain2() { return {SubTag::ModAddChain2, {}}; }
  static SubstitutionVariant mod_sub() { return {SubTag::ModSub, {}}; }
  static SubstitutionVariant filtering(FilterKernel k = FilterKernel::default_causal()) {
    return {SubTag::Filtering, std::move(k)};
  }
  static SubstitutionVariant xor_control() { return {SubTag::XorControl, {}}; }

  bool operator==(const SubstitutionVariant&) const = default;
};

// Everything except the XOR control is built from modular addition and
// multiplication, which is what the keyless recovery relies on.
inline bool is_modular_family(SubTag tag) { return tag != SubTag::XorControl; }

namespace detail {

inline void require_power_of_two(std::uint32_t g) {
  if ((g & (g - 1)) != 0)
    throw domain_error("XOR substitution needs a power-of-two modulus");
}

}  // namespace detail

inline ModImage sub_encrypt(const SubstitutionVariant& variant, const ModImage& m,
                            const ModImage& k) {
  detail::require_same_extent(m, k, "sub_encrypt");
  const std::uint64_t g = m.modulus;
  const std::size_t n = m.size();
  ModImage c = m;
  auto add = [g](std::uint64_t a, std::uint64_t b) { return (a + b) % g; };

  switch (variant.tag) {
    case SubTag::ModAdd:
      for (std::size_t i = 0; i < n; ++i)
        c.pixels[i] = std::uint32_t(add(m.pixels[i], k.pixels[i]));
      return c;

    case SubTag::ModAddChain1: {
      if (n < 2) throw domain_error("chained substitution needs at least 2 pixels");
      c.pixels[0] = std::uint32_t(add(add(m.pixels[0], k.pixels[0]), m.pixels[n - 1]));
      for (std::size_t i = 1; i < n; ++i)
        c.pixels[i] = std::uint32_t(add(add(m.pixels[i], k.pixels[i]), c.pixels[i - 1]));
      return c;
    }

    case SubTag::ModAddChain2: {
      if (n < 2) throw domain_error("chained substitution needs at least 2 pixels");
      c.pixels[0] = std::uint32_t(
          add(add(add(m.pixels[0], k.pixels[0]), m.pixels[n - 1]), m.pixels[n - 2]));
      if (n > 1)
        c.pixels[1] = std::uint32_t(
            add(add(add(m.pixels[1], k.pixels[1]), c.pixels[0]), m.pixels[n - 1]));
      for (std::size_t i = 2; i < n; ++i)
        c.pixels[i] = std::uint32_t(
            add(add(add(m.pixels[i], k.pixels[i]), c.pixels[i - 1]), c.pixels[i - 2]));
      return c;
    }

    case SubTag::ModSub:
      for (std::size_t i = 0; i < n; ++i)
        c.pixels[i] = std::uint32_t((g + k.pixels[i] - m.pixels[i]) % g);
      return c;

    case SubTag::Filtering: {
      variant.kernel.validate(m.modulus);
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t acc = add(m.pixels[i], k.pixels[i]);
        for (const auto& [offset, coeff] : variant.kernel.taps) {
          const std::int64_t j = std::int64_t(i) + offset;
          if (j >= 0) acc = (acc + std::uint64_t(coeff) * c.pixels[j]) % g;
        }
        c.pixels[i] = std::uint32_t(acc);
      }
      return c;
    }

    case SubTag::XorControl: {
      detail::require_power_of_two(m.modulus);
      std::uint32_t prev = 0;
      for (std::size_t i = 0; i < n; ++i) {
        c.pixels[i] = m.pixels[i] ^ k.pixels[i] ^ prev;
        prev = c.pixels[i];
      }
      return c;
    }
  }
  throw domain_error("unknown substitution variant");
}

inline ModImage sub_decrypt(const SubstitutionVariant& variant, const ModImage& c,
                            const ModImage& k) {
  detail::require_same_extent(c, k, "sub_decrypt");
  const std::uint64_t g = c.modulus;
  const std::size_t n = c.size();
  ModImage m = c;
  auto sub = [g](std::uint64_t a, std::uint64_t b) { return (a + g - b % g) % g; };

  switch (variant.tag) {
    case SubTag::ModAdd:
      for (std::size_t i = 0; i < n; ++i)
        m.pixels[i] = std::uint32_t(sub(c.pixels[i], k.pixels[i]));
      return m;

    case SubTag::ModAddChain1: {
      if (n < 2) throw domain_error("chained substitution needs at least 2 pixels");
      for (std::size_t i = n - 1; i >= 1; --i)
        m.pixels[i] = std::uint32_t(sub(sub(c.pixels[i], k.pixels[i]), c.pixels[i - 1]));
      m.pixels[0] = std::uint32_t(sub(sub(c.pixels[0], k.pixels[0]), m.pixels[n - 1]));
      return m;
    }

    case SubTag::ModAddChain2: {
      // The two-pixel case is not invertible (the last pixel enters its own
      // equation), so decryption demands one pixel more than encryption.
      if (n < 3) throw domain_error("chained substitution decrypt needs at least 3 pixels");
      for (std::size_t i = n - 1; i >= 2; --i)
        m.pixels[i] = std::uint32_t(
            sub(sub(sub(c.pixels[i], k.pixels[i]), c.pixels[i - 1]), c.pixels[i - 2]));
      m.pixels[1] = std::uint32_t(
          sub(sub(sub(c.pixels[1], k.pixels[1]), c.pixels[0]), m.pixels[n - 1]));
      m.pixels[0] = std::uint32_t(
          sub(sub(sub(c.pixels[0], k.pixels[0]), m.pixels[n - 1]), m.pixels[n - 2]));
      return m;
    }

    case SubTag::ModSub:
      for (std::size_t i = 0; i < n; ++i)
        m.pixels[i] = std::uint32_t(sub(k.pixels[i], c.pixels[i]));
      return m;

    case SubTag::Filtering: {
      variant.kernel.validate(c.modulus);
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t acc = sub(c.pixels[i], k.pixels[i]);
        for (const auto& [offset, coeff] : variant.kernel.taps) {
          const std::int64_t j = std::int64_t(i) + offset;
          if (j >= 0) acc = sub(acc, std::uint64_t(coeff) * c.pixels[j]);
        }
        m.pixels[i] = std::uint32_t(acc);
      }
      return m;
    }

    case SubTag::XorControl: {
      detail::require_power_of_two(c.modulus);
      std::uint32_t prev = 0;
      for (std::size_t i = 0; i < n; ++i) {
        m.pixels[i] = c.pixels[i] ^ k.pixels[i] ^ prev;
        prev = c.pixels[i];
      }
      return m;
    }
  }
  throw domain_error("unknown substitution variant");
}

// Fibonacci numbers mod G with Fib(1) = Fib(2) = 1, computed iteratively.
inline std::uint32_t fib_mod(std::uint64_t i, std::uint32_t g) {
  if (i == 0) throw domain_error("fib_mod is 1-indexed");
  std::uint64_t a = 1, b = 1;  // Fib(1), Fib(2)
  for (std::uint64_t n = 3; n <= i; ++n) {
    const std::uint64_t next = (a + b) % g;
    a = b;
    b = next;
  }
  return std::uint32_t(i <= 2 ? 1 : b);
}

// Closed form of the two-pixel chained substitution:
//   d(i) = sum_{j=1..i} Fib(i-j+1)*(m(j)+k(j)) + Fib(i+1)*m(L) + Fib(i)*m(L-1)
// with everything reduced mod G.
inline ModImage fibonacci_closed_form(const ModImage& m, const ModImage& k) {
  detail::require_same_extent(m, k, "fibonacci_closed_form");
  const std::size_t n = m.size();
  if (n < 2) throw domain_error("closed form needs at least 2 pixels");
  const std::uint64_t g = m.modulus;

  std::vector<std::uint64_t> fib(n + 2);
  fib[1] = 1;
  fib[2] = 1;
  for (std::size_t i = 3; i <= n + 1; ++i) fib[i] = (fib[i - 1] + fib[i - 2]) % g;

  ModImage d = m;
  for (std::size_t i = 1; i <= n; ++i) {
    std::uint64_t acc = 0;
    for (std::size_t j = 1; j <= i; ++j) {
      const std::uint64_t term = (std::uint64_t(m.pixels[j - 1]) + k.pixels[j - 1]) % g;
      acc = (acc + fib[i - j + 1] * term) % g;
    }
    acc = (acc + fib[i + 1] * m.pixels[n - 1]) % g;
    acc = (acc + fib[i] * m.pixels[n - 2]) % g;
    d.pixels[i - 1] = std::uint32_t(acc);
  }
  return d;
}

}  // namespace modcrack
