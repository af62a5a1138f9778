#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modcrack/errors.hpp"
#include "modcrack/keystream.hpp"
#include "modcrack/mod_image.hpp"
#include "modcrack/permutation.hpp"
#include "modcrack/substitution.hpp"

namespace modcrack {

enum class StageOrder { PermuteThenSubstitute, SubstituteThenPermute };
enum class PermStyle { Shuffle, CyclicShift };

// Declarative description of one family member.
struct CipherSpec {
  std::string name = "basic";
  SubstitutionVariant variant = SubstitutionVariant::mod_add();
  StageOrder order = StageOrder::PermuteThenSubstitute;
  std::uint32_t rounds = 1;
  bool border_insertion = false;
  bool rotate_stage = false;    // quarter turn folded in after the permutation
  bool column_stretch = false;  // column-by-column read folded in after the permutation
  std::uint32_t modulus = 256;
  PermStyle perm_style = PermStyle::Shuffle;
};

inline std::vector<std::string> preset_names() {
  return {"basic",   "lan",     "zhou",      "hua_ma", "borujeni",         "hua2018",
          "hua2015", "cosine",  "filtering", "filtering_border", "xor_control"};
}

inline CipherSpec preset(std::string_view name) {
  CipherSpec s;
  s.name = std::string(name);
  if (name == "basic") {
    s.variant = SubstitutionVariant::mod_add();
    s.rounds = 1;
  } else if (name == "lan") {
    s.variant = SubstitutionVariant::mod_sub();
    s.order = StageOrder::SubstituteThenPermute;
    s.rounds = 4;
  } else if (name == "zhou") {
    s.variant = SubstitutionVariant::mod_add_chain2();
    s.order = StageOrder::SubstituteThenPermute;
    s.rounds = 2;
    s.perm_style = PermStyle::CyclicShift;
  } else if (name == "hua_ma") {
    s.variant = SubstitutionVariant::mod_add_chain1();
    s.rounds = 2;
    s.border_insertion = true;
    s.column_stretch = true;
  } else if (name == "borujeni") {
    s.variant = SubstitutionVariant::mod_add();
    s.rounds = 1;
  } else if (name == "hua2018") {
    s.variant = SubstitutionVariant::mod_add_chain2();
    s.rounds = 4;
  } else if (name == "hua2015") {
    s.variant = SubstitutionVariant::mod_add_chain1();
    s.rounds = 2;
    s.rotate_stage = true;
  } else if (name == "cosine") {
    s.variant = SubstitutionVariant::mod_add_chain1();
    s.rounds = 4;
    s.rotate_stage = true;
  } else if (name == "filtering") {
    s.variant = SubstitutionVariant::filtering();
    s.rounds = 2;
  } else if (name == "filtering_border") {
    s.variant = SubstitutionVariant::filtering();
    s.rounds = 4;
    s.border_insertion = true;
  } else if (name == "xor_control") {
    s.variant = SubstitutionVariant::xor_control();
    s.rounds = 2;
  } else {
    throw lookup_error("unknown preset: " + std::string(name));
  }
  return s;
}

struct RoundKeys {
  PermutationVector perm;
  ModImage mask;
};

struct RoundMaterial {
  std::vector<RoundKeys> rounds;
};

// Dimensions of the image the round network actually works on.
inline std::pair<std::uint32_t, std::uint32_t> working_dims(const CipherSpec& spec,
                                                            std::uint32_t pt_h,
                                                            std::uint32_t pt_w) {
  if (spec.border_insertion) return {pt_h + 2, pt_w + 2};
  return {pt_h, pt_w};
}

// One (W, K) pair per round, all drawn from a single stream so rounds differ.
// Consumes exactly 2*L residues per round.
inline RoundMaterial derive_round_material(Keystream& ks, std::uint32_t rounds,
                                           std::uint32_t h, std::uint32_t w,
                                           PermStyle style = PermStyle::Shuffle) {
  if (rounds == 0) throw config_error("at least one round is required");
  const std::uint64_t n = std::uint64_t(h) * w;
  if (n < 2) throw config_error("round material needs at least 2 pixels");
  RoundMaterial out;
  out.rounds.reserve(rounds);
  for (std::uint32_t r = 0; r < rounds; ++r) {
    PermutationVector perm = style == PermStyle::Shuffle
                                 ? permutation_from_stream(ks, n)
                                 : cyclic_from_stream(ks, n);
    std::vector<std::uint32_t> mask(n);
    for (auto& v : mask) v = ks.next();
    out.rounds.push_back(
        {std::move(perm), ModImage(std::move(mask), h, w, ks.modulus())});
  }
  return out;
}

// Material sized for the spec's working image (frame included when the spec
// inserts one).
inline RoundMaterial material_for(const CipherSpec& spec, std::uint32_t pt_h,
                                  std::uint32_t pt_w, Keystream& ks) {
  if (ks.modulus() != spec.modulus)
    throw config_error("keystream modulus does not match cipher spec");
  auto [h, w] = working_dims(spec, pt_h, pt_w);
  return derive_round_material(ks, spec.rounds, h, w, spec.perm_style);
}

// Pastes a one-pixel random frame around m: 2H+2W+4 residues drawn from the
// stream in row-major frame order, interior untouched.
inline ModImage border_wrap(const ModImage& m, Keystream& frame) {
  if (frame.modulus() != m.modulus)
    throw config_error("frame stream modulus does not match image");
  const std::uint32_t h = m.height, w = m.width;
  ModImage out = ModImage::zeros(h + 2, w + 2, m.modulus);
  for (std::uint32_t r = 0; r < h + 2; ++r) {
    for (std::uint32_t c = 0; c < w + 2; ++c) {
      const bool on_frame = r == 0 || r == h + 1 || c == 0 || c == w + 1;
      out.pixels[std::size_t(r) * (w + 2) + c] =
          on_frame ? frame.next() : m.pixels[std::size_t(r - 1) * w + (c - 1)];
    }
  }
  return out;
}

inline ModImage border_strip(const ModImage& mi) {
  if (mi.height < 3 || mi.width < 3)
    throw dimension_error("border_strip needs at least a 3x3 image");
  const std::uint32_t h = mi.height - 2, w = mi.width - 2;
  ModImage out = ModImage::zeros(h, w, mi.modulus);
  for (std::uint32_t r = 0; r < h; ++r)
    for (std::uint32_t c = 0; c < w; ++c)
      out.pixels[std::size_t(r) * w + c] =
          mi.pixels[std::size_t(r + 1) * (mi.width) + (c + 1)];
  return out;
}

// Interior differential embedded into the framed dimensions with a zero
// frame differential.
inline ModImage embed_interior(const ModImage& interior) {
  const std::uint32_t h = interior.height, w = interior.width;
  ModImage out = ModImage::zeros(h + 2, w + 2, interior.modulus);
  for (std::uint32_t r = 0; r < h; ++r)
    for (std::uint32_t c = 0; c < w; ++c)
      out.pixels[std::size_t(r + 1) * (w + 2) + (c + 1)] =
          interior.pixels[std::size_t(r) * w + c];
  return out;
}

namespace detail {

inline void check_material(const CipherSpec& spec, const RoundMaterial& material,
                           std::uint64_t n, std::uint32_t g) {
  if (material.rounds.size() < spec.rounds)
    throw config_error("round material has fewer rounds than the spec");
  if (g != spec.modulus) throw config_error("image modulus does not match cipher spec");
  for (std::uint32_t r = 0; r < spec.rounds; ++r) {
    const RoundKeys& keys = material.rounds[r];
    if (keys.perm.size() != n || keys.mask.size() != n)
      throw config_error("round material is not sized for the working image");
    if (keys.mask.modulus != spec.modulus)
      throw config_error("mask modulus does not match cipher spec");
  }
}

inline PermutationVector effective_perm(const CipherSpec& spec,
                                        const PermutationVector& w,
                                        std::uint32_t h, std::uint32_t ww) {
  PermutationVector eff = w;
  if (spec.column_stretch) eff = compose(eff, column_stretch(h, ww));
  if (spec.rotate_stage) eff = compose(eff, rotation90(h, ww));
  return eff;
}

}  // namespace detail

// The N-round permutation-substitution core on the working image (no frame
// handling here).
inline ModImage encrypt_working(const CipherSpec& spec, const RoundMaterial& material,
                                ModImage x) {
  detail::check_material(spec, material, x.size(), x.modulus);
  for (std::uint32_t r = 0; r < spec.rounds; ++r) {
    const RoundKeys& keys = material.rounds[r];
    const PermutationVector eff =
        detail::effective_perm(spec, keys.perm, x.height, x.width);
    if (spec.order == StageOrder::PermuteThenSubstitute) {
      x = sub_encrypt(spec.variant, apply(eff, x), keys.mask);
    } else {
      x = apply(eff, sub_encrypt(spec.variant, x, keys.mask));
    }
  }
  return x;
}

inline ModImage decrypt_working(const CipherSpec& spec, const RoundMaterial& material,
                                ModImage x) {
  detail::check_material(spec, material, x.size(), x.modulus);
  for (std::uint32_t r = spec.rounds; r-- > 0;) {
    const RoundKeys& keys = material.rounds[r];
    const PermutationVector inv =
        invert(detail::effective_perm(spec, keys.perm, x.height, x.width));
    if (spec.order == StageOrder::PermuteThenSubstitute) {
      x = apply(inv, sub_decrypt(spec.variant, x, keys.mask));
    } else {
      x = sub_decrypt(spec.variant, apply(inv, x), keys.mask);
    }
  }
  return x;
}

// Full encryption. For border specs a fresh frame is drawn from `frame`, or
// from system entropy when none is supplied; the frame is never derived from
// the key schedule.
inline ModImage encrypt(const CipherSpec& spec, const RoundMaterial& material,
                        const ModImage& m, Keystream* frame = nullptr) {
  if (!spec.border_insertion) return encrypt_working(spec, material, m);
  if (frame) return encrypt_working(spec, material, border_wrap(m, *frame));
  auto entropy = fresh_entropy_stream(m.modulus);
  return encrypt_working(spec, material, border_wrap(m, *entropy));
}

// Frame-bearing decryption result, before the frame is removed.
inline ModImage decrypt_to_working(const CipherSpec& spec,
                                   const RoundMaterial& material, const ModImage& c) {
  return decrypt_working(spec, material, c);
}

// Full decryption; strips the frame last so border specs return H x W.
inline ModImage decrypt(const CipherSpec& spec, const RoundMaterial& material,
                        const ModImage& c) {
  ModImage x = decrypt_working(spec, material, c);
  if (spec.border_insertion) return border_strip(x);
  return x;
}

}  // namespace modcrack
