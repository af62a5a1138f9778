#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "modcrack/errors.hpp"

namespace modcrack {

// Flat row-major vector of residues mod G with H x W metadata. Carries
// plaintexts, ciphertexts, masks and differentials alike. The modulus is
// runtime data so 8-bit and 16-bit images share one code path.
struct ModImage {
  std::vector<std::uint32_t> pixels;
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t modulus = 2;

  ModImage() = default;

  ModImage(std::vector<std::uint32_t> px, std::uint32_t h, std::uint32_t w,
           std::uint32_t g)
      : pixels(std::move(px)), height(h), width(w), modulus(g) {
    if (g < 2) throw domain_error("modulus must be at least 2");
    if (h == 0 || w == 0) throw dimension_error("image dimensions must be positive");
    if (pixels.size() != std::size_t(h) * w)
      throw dimension_error("pixel count does not match height*width");
    for (std::uint32_t p : pixels)
      if (p >= g) throw domain_error("pixel value out of range for modulus");
  }

  static ModImage zeros(std::uint32_t h, std::uint32_t w, std::uint32_t g) {
    return ModImage(std::vector<std::uint32_t>(std::size_t(h) * w, 0), h, w, g);
  }

  // Zero image with a single `value` at flat position `index`.
  static ModImage unit_impulse(std::uint32_t h, std::uint32_t w, std::uint32_t g,
                               std::uint64_t index, std::uint32_t value = 1) {
    ModImage out = zeros(h, w, g);
    if (index >= out.size()) throw dimension_error("impulse index out of range");
    if (value >= g) throw domain_error("impulse value out of range");
    out.pixels[index] = value;
    return out;
  }

  std::size_t size() const { return pixels.size(); }

  bool operator==(const ModImage&) const = default;
};

namespace detail {

inline void require_same_extent(const ModImage& a, const ModImage& b,
                                const char* what) {
  if (a.size() != b.size() || a.modulus != b.modulus)
    throw dimension_error(std::string(what) + ": length/modulus mismatch");
}

}  // namespace detail

// Elementwise (a + b) mod G.
inline ModImage mod_add(const ModImage& a, const ModImage& b) {
  detail::require_same_extent(a, b, "mod_add");
  ModImage out = a;
  const std::uint64_t g = a.modulus;
  for (std::size_t i = 0; i < out.pixels.size(); ++i)
    out.pixels[i] = std::uint32_t((std::uint64_t(a.pixels[i]) + b.pixels[i]) % g);
  return out;
}

// Elementwise (a - b) mod G; the differential of two images.
inline ModImage mod_sub(const ModImage& a, const ModImage& b) {
  detail::require_same_extent(a, b, "mod_sub");
  ModImage out = a;
  const std::uint64_t g = a.modulus;
  for (std::size_t i = 0; i < out.pixels.size(); ++i)
    out.pixels[i] = std::uint32_t((std::uint64_t(a.pixels[i]) + g - b.pixels[i]) % g);
  return out;
}

// Elementwise (lambda * a) mod G. Products are widened to 64 bits before
// reduction so 16-bit moduli cannot overflow.
inline ModImage scalar_mul(std::uint32_t lambda, const ModImage& a) {
  if (lambda >= a.modulus) throw domain_error("scalar out of range for modulus");
  ModImage out = a;
  const std::uint64_t g = a.modulus;
  for (std::size_t i = 0; i < out.pixels.size(); ++i)
    out.pixels[i] = std::uint32_t((std::uint64_t(lambda) * a.pixels[i]) % g);
  return out;
}

// A differential stored as its nonzero entries only. Indices are 0-based
// flat positions, strictly increasing; values are nonzero residues.
struct SparseDifferential {
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t modulus = 2;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> entries;

  std::uint64_t length() const { return std::uint64_t(height) * width; }
  std::uint64_t nnz() const { return entries.size(); }

  static SparseDifferential from_dense(const ModImage& m) {
    SparseDifferential out;
    out.height = m.height;
    out.width = m.width;
    out.modulus = m.modulus;
    for (std::size_t i = 0; i < m.pixels.size(); ++i)
      if (m.pixels[i] != 0) out.entries.emplace_back(i, m.pixels[i]);
    return out;
  }

  ModImage to_dense() const {
    ModImage out = ModImage::zeros(height, width, modulus);
    for (const auto& [idx, val] : entries) {
      if (idx >= out.size()) throw dimension_error("sparse entry index out of range");
      out.pixels[idx] = val;
    }
    return out;
  }

  bool operator==(const SparseDifferential&) const = default;
};

// Sum_i weights[i] * terms[i] (mod G) over dense terms.
inline ModImage weighted_modsum(std::span<const std::uint32_t> weights,
                                std::span<const ModImage> terms) {
  if (terms.empty()) throw domain_error("weighted_modsum: empty term list");
  if (weights.size() != terms.size())
    throw dimension_error("weighted_modsum: weight/term count mismatch");
  const ModImage& head = terms[0];
  const std::uint64_t g = head.modulus;
  ModImage out = ModImage::zeros(head.height, head.width, head.modulus);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const ModImage& term = terms[t];
    if (term.height != head.height || term.width != head.width ||
        term.modulus != head.modulus)
      throw dimension_error("weighted_modsum: term shape/modulus mismatch");
    const std::uint64_t lam = weights[t];
    if (lam >= g) throw domain_error("weighted_modsum: weight out of range");
    if (lam == 0) continue;
    for (std::size_t i = 0; i < out.pixels.size(); ++i)
      out.pixels[i] = std::uint32_t((out.pixels[i] + lam * term.pixels[i]) % g);
  }
  return out;
}

// Same sum over sparse terms; touches only stored entries.
inline ModImage weighted_modsum(std::span<const std::uint32_t> weights,
                                std::span<const SparseDifferential> terms) {
  if (terms.empty()) throw domain_error("weighted_modsum: empty term list");
  if (weights.size() != terms.size())
    throw dimension_error("weighted_modsum: weight/term count mismatch");
  const SparseDifferential& head = terms[0];
  const std::uint64_t g = head.modulus;
  ModImage out = ModImage::zeros(head.height, head.width, head.modulus);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const SparseDifferential& term = terms[t];
    if (term.height != head.height || term.width != head.width ||
        term.modulus != head.modulus)
      throw dimension_error("weighted_modsum: term shape/modulus mismatch");
    const std::uint64_t lam = weights[t];
    if (lam >= g) throw domain_error("weighted_modsum: weight out of range");
    if (lam == 0) continue;
    for (const auto& [idx, val] : term.entries) {
      if (idx >= out.size()) throw dimension_error("sparse entry index out of range");
      out.pixels[idx] = std::uint32_t((out.pixels[idx] + lam * val) % g);
    }
  }
  return out;
}

}  // namespace modcrack
