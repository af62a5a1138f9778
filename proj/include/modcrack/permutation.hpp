#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "modcrack/errors.hpp"
#include "modcrack/keystream.hpp"
#include "modcrack/mod_image.hpp"

namespace modcrack {

// Bijection on flat pixel indices, stored 0-based. Semantics: output pixel i
// takes its value from input pixel w[i].
class PermutationVector {
 public:
  explicit PermutationVector(std::vector<std::uint64_t> w) : w_(std::move(w)) {
    std::vector<bool> seen(w_.size(), false);
    for (std::uint64_t v : w_) {
      if (v >= w_.size() || seen[v])
        throw validation_error("index vector is not a bijection");
      seen[v] = true;
    }
  }

  static PermutationVector identity(std::uint64_t n) {
    std::vector<std::uint64_t> w(n);
    std::iota(w.begin(), w.end(), 0);
    return PermutationVector(std::move(w));
  }

  static PermutationVector reversed(std::uint64_t n) {
    std::vector<std::uint64_t> w(n);
    for (std::uint64_t i = 0; i < n; ++i) w[i] = n - 1 - i;
    return PermutationVector(std::move(w));
  }

  static PermutationVector cyclic_shift(std::uint64_t n, std::uint64_t offset) {
    std::vector<std::uint64_t> w(n);
    for (std::uint64_t i = 0; i < n; ++i) w[i] = (i + offset) % n;
    return PermutationVector(std::move(w));
  }

  std::uint64_t size() const { return w_.size(); }
  std::uint64_t operator[](std::uint64_t i) const { return w_[i]; }
  const std::vector<std::uint64_t>& indices() const { return w_; }

  bool operator==(const PermutationVector&) const = default;

 private:
  std::vector<std::uint64_t> w_;
};

inline ModImage apply(const PermutationVector& w, const ModImage& m) {
  if (w.size() != m.size())
    throw dimension_error("apply: permutation length does not match image");
  ModImage out = m;
  for (std::uint64_t i = 0; i < w.size(); ++i) out.pixels[i] = m.pixels[w[i]];
  return out;
}

inline PermutationVector invert(const PermutationVector& w) {
  std::vector<std::uint64_t> inv(w.size());
  for (std::uint64_t i = 0; i < w.size(); ++i) inv[w[i]] = i;
  return PermutationVector(std::move(inv));
}

// apply(compose(w1, w2), m) == apply(w2, apply(w1, m)).
inline PermutationVector compose(const PermutationVector& w1,
                                 const PermutationVector& w2) {
  if (w1.size() != w2.size()) throw dimension_error("compose: length mismatch");
  std::vector<std::uint64_t> out(w1.size());
  for (std::uint64_t i = 0; i < out.size(); ++i) out[i] = w1[w2[i]];
  return PermutationVector(std::move(out));
}

// Clockwise quarter turn of an H x W image, flattened in the same row-major
// scan order (the rotated image is W x H).
inline PermutationVector rotation90(std::uint32_t h, std::uint32_t w) {
  if (h == 0 || w == 0) throw dimension_error("rotation90: dims must be positive");
  const std::uint64_t n = std::uint64_t(h) * w;
  std::vector<std::uint64_t> out(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t row = i / h;  // row of the rotated W x H image
    const std::uint64_t col = i % h;
    out[i] = (h - 1 - col) * w + row;
  }
  return PermutationVector(std::move(out));
}

// Reads an H x W image column by column (the "stretch" that feeds a
// one-dimensional substitution pass).
inline PermutationVector column_stretch(std::uint32_t h, std::uint32_t w) {
  if (h == 0 || w == 0) throw dimension_error("column_stretch: dims must be positive");
  const std::uint64_t n = std::uint64_t(h) * w;
  std::vector<std::uint64_t> out(n);
  for (std::uint64_t i = 0; i < n; ++i) out[i] = (i % h) * w + i / h;
  return PermutationVector(std::move(out));
}

// Fisher-Yates shuffle driven by the keystream; consumes exactly n draws.
inline PermutationVector permutation_from_stream(Keystream& ks, std::uint64_t n) {
  std::vector<std::uint64_t> a(n);
  std::iota(a.begin(), a.end(), 0);
  for (std::uint64_t step = 0; step < n; ++step) {
    const std::uint64_t i = n - 1 - step;
    const std::uint64_t j = ks.next() % (i + 1);
    std::swap(a[i], a[j]);
  }
  return PermutationVector(std::move(a));
}

// Key-dependent cyclic shift; folds exactly n draws into the offset so the
// stream accounting matches the shuffle generator.
inline PermutationVector cyclic_from_stream(Keystream& ks, std::uint64_t n) {
  if (n == 0) throw dimension_error("cyclic_from_stream: empty permutation");
  const std::uint64_t g = ks.modulus();
  std::uint64_t offset = 0;
  for (std::uint64_t i = 0; i < n; ++i) offset = (offset * g + ks.next()) % n;
  return PermutationVector::cyclic_shift(n, offset);
}

}  // namespace modcrack
