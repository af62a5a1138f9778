#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "modcrack/cipher.hpp"
#include "modcrack/errors.hpp"
#include "modcrack/mod_image.hpp"

namespace modcrack {

// Empirical probe of the map from plaintext differentials to ciphertext
// differentials, under one fixed (spec, material) deployment. All round
// randomness is pinned: for border specs the probe works on the framed image
// directly, so probing is deterministic.
struct DtfProbe {
  CipherSpec spec;  // border flag stripped; rounds as probed
  RoundMaterial material;
  std::uint32_t height = 0;  // working image dims
  std::uint32_t width = 0;
  std::uint32_t delta_height = 0;  // dims of the differentials being probed
  std::uint32_t delta_width = 0;
  bool embed_deltas = false;  // deltas live in the interior, frame differential zero

  std::uint64_t delta_len() const { return std::uint64_t(delta_height) * delta_width; }

  ModImage lift(const ModImage& delta) const {
    if (delta.height != delta_height || delta.width != delta_width ||
        delta.modulus != spec.modulus)
      throw dimension_error("probe delta has unexpected dims/modulus");
    return embed_deltas ? embed_interior(delta) : delta;
  }

  // encrypt(base + delta) - encrypt(base) on the working image.
  ModImage delta_map(const ModImage& base, const ModImage& delta) const {
    const ModImage lifted = lift(delta);
    return mod_sub(encrypt_working(spec, material, mod_add(base, lifted)),
                   encrypt_working(spec, material, base));
  }

  ModImage zero_base() const { return ModImage::zeros(height, width, spec.modulus); }

  // Canonical transfer map, evaluated against the zero base.
  ModImage transfer(const ModImage& delta) const { return delta_map(zero_base(), delta); }
};

// Probe for a deployment. For border specs the default delta domain is the
// interior (a frame differential of zero); pass probe_full_working to range
// over the whole framed image instead.
inline DtfProbe make_probe(const CipherSpec& spec, const RoundMaterial& material,
                           std::uint32_t pt_h, std::uint32_t pt_w,
                           bool probe_full_working = false) {
  DtfProbe probe;
  probe.spec = spec;
  probe.spec.border_insertion = false;
  probe.material = material;
  auto [h, w] = working_dims(spec, pt_h, pt_w);
  probe.height = h;
  probe.width = w;
  if (spec.border_insertion && !probe_full_working) {
    probe.delta_height = pt_h;
    probe.delta_width = pt_w;
    probe.embed_deltas = true;
  } else {
    probe.delta_height = h;
    probe.delta_width = w;
  }
  return probe;
}

// The common ciphertext differential across all bases; refuses to answer if
// the bases disagree, because then no transfer function exists.
inline ModImage eval_dtf(const DtfProbe& probe, const ModImage& delta,
                         std::span<const ModImage> bases) {
  if (bases.size() < 2)
    throw domain_error("eval_dtf needs at least two bases to certify the map");
  ModImage first = probe.delta_map(bases[0], delta);
  for (std::size_t i = 1; i < bases.size(); ++i) {
    if (probe.delta_map(bases[i], delta) != first)
      throw not_a_dtf("differential map depends on the base image");
  }
  return first;
}

struct Verdict {
  bool pass = false;
  std::uint64_t trials = 0;
  std::uint64_t rng_seed = 0;
  std::string detail;
  std::vector<ModImage> counterexample;  // offending deltas, when failed
};

namespace detail {

inline ModImage random_image(std::mt19937_64& rng, std::uint32_t h, std::uint32_t w,
                             std::uint32_t g) {
  std::uniform_int_distribution<std::uint32_t> dist(0, g - 1);
  std::vector<std::uint32_t> px(std::size_t(h) * w);
  for (auto& p : px) p = dist(rng);
  return ModImage(std::move(px), h, w, g);
}

// G^len, or 0 on overflow past `limit`.
inline std::uint64_t domain_size(std::uint64_t g, std::uint64_t len,
                                 std::uint64_t limit) {
  std::uint64_t size = 1;
  for (std::uint64_t i = 0; i < len; ++i) {
    if (size > limit / g) return 0;
    size *= g;
  }
  return size;
}

inline ModImage nth_delta(std::uint64_t n, std::uint32_t h, std::uint32_t w,
                          std::uint32_t g) {
  std::vector<std::uint32_t> px(std::size_t(h) * w);
  for (auto& p : px) {
    p = std::uint32_t(n % g);
    n /= g;
  }
  return ModImage(std::move(px), h, w, g);
}

inline std::vector<ModImage> enumerate_deltas(const DtfProbe& probe,
                                              std::uint64_t limit) {
  const std::uint64_t size = domain_size(probe.spec.modulus, probe.delta_len(), limit);
  if (size == 0)
    throw scale_error("differential space too large for exhaustive enumeration");
  std::vector<ModImage> out;
  out.reserve(size);
  for (std::uint64_t n = 0; n < size; ++n)
    out.push_back(nth_delta(n, probe.delta_height, probe.delta_width,
                            probe.spec.modulus));
  return out;
}

}  // namespace detail

// H(d1 + d2) == H(d1) + H(d2) over sampled pairs, or over every pair of the
// full differential space when `exhaustive`.
inline Verdict check_additivity(const DtfProbe& probe, std::uint64_t trials,
                                std::uint64_t rng_seed, bool exhaustive = false) {
  Verdict v;
  v.rng_seed = rng_seed;
  auto fail = [&](const ModImage& d1, const ModImage& d2) {
    v.pass = false;
    v.detail = "additivity violated";
    v.counterexample = {d1, d2};
  };

  if (exhaustive) {
    const auto deltas = detail::enumerate_deltas(probe, 1ull << 12);
    std::vector<ModImage> table;
    table.reserve(deltas.size());
    for (const auto& d : deltas) table.push_back(probe.transfer(d));
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      for (std::size_t j = 0; j < deltas.size(); ++j) {
        ++v.trials;
        const ModImage sum = mod_add(deltas[i], deltas[j]);
        const ModImage lhs = probe.transfer(sum);
        if (lhs != mod_add(table[i], table[j])) {
          fail(deltas[i], deltas[j]);
          return v;
        }
      }
    }
    v.pass = true;
    return v;
  }

  std::mt19937_64 rng(rng_seed);
  for (std::uint64_t t = 0; t < trials; ++t) {
    ++v.trials;
    const ModImage d1 = detail::random_image(rng, probe.delta_height,
                                             probe.delta_width, probe.spec.modulus);
    const ModImage d2 = detail::random_image(rng, probe.delta_height,
                                             probe.delta_width, probe.spec.modulus);
    if (probe.transfer(mod_add(d1, d2)) !=
        mod_add(probe.transfer(d1), probe.transfer(d2))) {
      fail(d1, d2);
      return v;
    }
  }
  v.pass = true;
  return v;
}

// H(lambda * d) == lambda * H(d), over sampled (lambda, d) or exhaustively.
inline Verdict check_multiplicability(const DtfProbe& probe, std::uint64_t trials,
                                      std::uint64_t rng_seed, bool exhaustive = false) {
  Verdict v;
  v.rng_seed = rng_seed;
  const std::uint32_t g = probe.spec.modulus;
  auto violates = [&](std::uint32_t lambda, const ModImage& d) {
    return probe.transfer(scalar_mul(lambda, d)) !=
           scalar_mul(lambda, probe.transfer(d));
  };
  auto fail = [&](std::uint32_t lambda, const ModImage& d) {
    v.pass = false;
    v.detail = "multiplicability violated at lambda=" + std::to_string(lambda);
    v.counterexample = {d};
  };

  if (exhaustive) {
    const auto deltas = detail::enumerate_deltas(probe, 1ull << 12);
    if (g > 4096) throw scale_error("modulus too large for exhaustive lambda sweep");
    for (const auto& d : deltas) {
      for (std::uint32_t lambda = 0; lambda < g; ++lambda) {
        ++v.trials;
        if (violates(lambda, d)) {
          fail(lambda, d);
          return v;
        }
      }
    }
    v.pass = true;
    return v;
  }

  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<std::uint32_t> lambda_dist(0, g - 1);
  for (std::uint64_t t = 0; t < trials; ++t) {
    ++v.trials;
    const std::uint32_t lambda = lambda_dist(rng);
    const ModImage d = detail::random_image(rng, probe.delta_height,
                                            probe.delta_width, probe.spec.modulus);
    if (violates(lambda, d)) {
      fail(lambda, d);
      return v;
    }
  }
  v.pass = true;
  return v;
}

// Enumerates the whole differential space and certifies that its image is
// the same size. Exhaustive only: a sampled run cannot certify bijectivity.
inline Verdict check_bijectivity(const DtfProbe& probe,
                                 std::uint64_t max_space = 1ull << 16) {
  Verdict v;
  const auto deltas = detail::enumerate_deltas(probe, max_space);
  std::vector<std::vector<std::uint32_t>> images;
  images.reserve(deltas.size());
  for (const auto& d : deltas) images.push_back(probe.transfer(d).pixels);
  v.trials = images.size();
  std::sort(images.begin(), images.end());
  const bool zero_maps_to_zero =
      probe.transfer(deltas[0]).pixels ==
      std::vector<std::uint32_t>(probe.zero_base().size(), 0);
  const bool all_distinct =
      std::adjacent_find(images.begin(), images.end()) == images.end();
  v.pass = all_distinct && zero_maps_to_zero;
  v.detail = all_distinct ? std::to_string(images.size()) + " distinct images"
                          : "image collision found";
  return v;
}

// The whole-cipher differential map must equal the round-by-round maps
// composed in encryption order.
inline Verdict check_cdtf_composition(const DtfProbe& probe, std::uint64_t trials,
                                      std::uint64_t rng_seed, bool exhaustive = false) {
  Verdict v;
  v.rng_seed = rng_seed;
  if (probe.spec.rounds == 0) throw config_error("composition needs at least one round");

  std::vector<DtfProbe> per_round;
  for (std::uint32_t r = 0; r < probe.spec.rounds; ++r) {
    DtfProbe round = probe;
    round.spec.rounds = 1;
    round.material.rounds = {probe.material.rounds[r]};
    round.delta_height = probe.height;  // intermediate deltas span the working image
    round.delta_width = probe.width;
    round.embed_deltas = false;
    per_round.push_back(std::move(round));
  }

  auto composed = [&](const ModImage& delta) {
    ModImage acc = probe.lift(delta);
    for (const auto& round : per_round) acc = round.transfer(acc);
    return acc;
  };
  auto check_one = [&](const ModImage& delta) {
    ++v.trials;
    if (probe.transfer(delta) != composed(delta)) {
      v.pass = false;
      v.detail = "whole-cipher map disagrees with composed per-round maps";
      v.counterexample = {delta};
      return false;
    }
    return true;
  };

  if (exhaustive) {
    for (const auto& d : detail::enumerate_deltas(probe, 1ull << 12))
      if (!check_one(d)) return v;
  } else {
    std::mt19937_64 rng(rng_seed);
    for (std::uint64_t t = 0; t < trials; ++t) {
      const ModImage d = detail::random_image(rng, probe.delta_height,
                                              probe.delta_width, probe.spec.modulus);
      if (!check_one(d)) return v;
    }
  }
  v.pass = true;
  return v;
}

}  // namespace modcrack
