#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "modcrack/attack.hpp"
#include "modcrack/cipher.hpp"
#include "modcrack/errors.hpp"

namespace modcrack {

namespace detail {

inline void put_u8(std::ostream& out, std::uint8_t v) { out.put(char(v)); }

inline void put_u32(std::ostream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(char(v >> (8 * i) & 0xff));
}

inline void put_u64(std::ostream& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.put(char(v >> (8 * i) & 0xff));
}

inline std::uint8_t get_u8(std::istream& in) {
  const int c = in.get();
  if (c == EOF) throw format_error("unexpected end of file");
  return std::uint8_t(c);
}

inline std::uint32_t get_u32(std::istream& in) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(get_u8(in)) << (8 * i);
  return v;
}

inline std::uint64_t get_u64(std::istream& in) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(get_u8(in)) << (8 * i);
  return v;
}

inline void expect_magic(std::istream& in, const char* magic) {
  char buf[4];
  in.read(buf, 4);
  if (in.gcount() != 4 || std::string(buf, 4) != magic)
    throw format_error("bad file magic");
}

}  // namespace detail

// Atoms file: "MCAT", version, LL, PT_H, PT_W, G as little-endian 64-bit
// counts, density flag, then the base plaintext followed by one atom per
// ciphertext pixel. Sparse atoms store (index, value) pairs with 0-based
// flat indices. Samples are 32-bit little-endian throughout.
inline void write_atoms(const AttackAtoms& atoms, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw format_error("cannot write atoms file: " + path);
  out.write("MCAT", 4);
  detail::put_u8(out, 1);
  detail::put_u64(out, atoms.ciphertext_len);
  detail::put_u64(out, atoms.base.height);
  detail::put_u64(out, atoms.base.width);
  detail::put_u64(out, atoms.base.modulus);
  detail::put_u8(out, atoms.is_sparse ? 1 : 0);
  for (std::uint32_t p : atoms.base.pixels) detail::put_u32(out, p);
  if (atoms.is_sparse) {
    for (const auto& a : atoms.sparse) {
      detail::put_u64(out, a.nnz());
      for (const auto& [idx, val] : a.entries) {
        detail::put_u64(out, idx);
        detail::put_u32(out, val);
      }
    }
  } else {
    for (const auto& a : atoms.dense)
      for (std::uint32_t p : a.pixels) detail::put_u32(out, p);
  }
  if (!out) throw format_error("short write: " + path);
}

inline AttackAtoms read_atoms(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open atoms file: " + path);
  detail::expect_magic(in, "MCAT");
  if (detail::get_u8(in) != 1) throw format_error("unsupported atoms file version");
  AttackAtoms atoms;
  atoms.ciphertext_len = detail::get_u64(in);
  const std::uint64_t h = detail::get_u64(in);
  const std::uint64_t w = detail::get_u64(in);
  const std::uint64_t g = detail::get_u64(in);
  if (h == 0 || w == 0 || h > 0xffffffffull || w > 0xffffffffull || g < 2 ||
      g > 0xffffffffull)
    throw format_error("bad atoms header");
  atoms.is_sparse = detail::get_u8(in) != 0;
  atoms.ct_height = 1;
  atoms.ct_width = std::uint32_t(atoms.ciphertext_len);

  const std::size_t n = std::size_t(h) * std::size_t(w);
  std::vector<std::uint32_t> px(n);
  for (auto& p : px) p = detail::get_u32(in);
  atoms.base = ModImage(std::move(px), std::uint32_t(h), std::uint32_t(w),
                        std::uint32_t(g));

  if (atoms.is_sparse) {
    atoms.sparse.resize(atoms.ciphertext_len);
    for (auto& a : atoms.sparse) {
      a.height = std::uint32_t(h);
      a.width = std::uint32_t(w);
      a.modulus = std::uint32_t(g);
      const std::uint64_t nnz = detail::get_u64(in);
      if (nnz > n) throw format_error("sparse atom has more entries than pixels");
      a.entries.resize(nnz);
      std::uint64_t prev = 0;
      bool first = true;
      for (auto& [idx, val] : a.entries) {
        idx = detail::get_u64(in);
        val = detail::get_u32(in);
        if (idx >= n || val == 0 || val >= g || (!first && idx <= prev))
          throw format_error("malformed sparse atom entry");
        prev = idx;
        first = false;
      }
    }
  } else {
    atoms.dense.resize(atoms.ciphertext_len);
    for (auto& a : atoms.dense) {
      std::vector<std::uint32_t> apx(n);
      for (auto& p : apx) p = detail::get_u32(in);
      a = ModImage(std::move(apx), std::uint32_t(h), std::uint32_t(w),
                   std::uint32_t(g));
    }
  }
  return atoms;
}

// Material file: "MCKM", version, rounds, H, W, G, then per round the
// permutation (0-based 64-bit indices) and the mask (32-bit residues).
inline void write_material(const RoundMaterial& material, const std::string& path) {
  if (material.rounds.empty()) throw config_error("no rounds to write");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw format_error("cannot write material file: " + path);
  out.write("MCKM", 4);
  detail::put_u8(out, 1);
  const ModImage& mask0 = material.rounds[0].mask;
  detail::put_u64(out, material.rounds.size());
  detail::put_u64(out, mask0.height);
  detail::put_u64(out, mask0.width);
  detail::put_u64(out, mask0.modulus);
  for (const auto& round : material.rounds) {
    if (round.mask.height != mask0.height || round.mask.width != mask0.width ||
        round.mask.modulus != mask0.modulus || round.perm.size() != mask0.size())
      throw config_error("rounds disagree on dimensions");
    for (std::uint64_t idx : round.perm.indices()) detail::put_u64(out, idx);
    for (std::uint32_t p : round.mask.pixels) detail::put_u32(out, p);
  }
  if (!out) throw format_error("short write: " + path);
}

inline RoundMaterial read_material(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open material file: " + path);
  detail::expect_magic(in, "MCKM");
  if (detail::get_u8(in) != 1) throw format_error("unsupported material file version");
  const std::uint64_t rounds = detail::get_u64(in);
  const std::uint64_t h = detail::get_u64(in);
  const std::uint64_t w = detail::get_u64(in);
  const std::uint64_t g = detail::get_u64(in);
  if (rounds == 0 || rounds > 4096 || h == 0 || w == 0 || h > 0xffffffffull ||
      w > 0xffffffffull || g < 2 || g > 0xffffffffull)
    throw format_error("bad material header");
  const std::size_t n = std::size_t(h) * std::size_t(w);
  RoundMaterial out;
  for (std::uint64_t r = 0; r < rounds; ++r) {
    std::vector<std::uint64_t> perm(n);
    for (auto& idx : perm) idx = detail::get_u64(in);
    std::vector<std::uint32_t> mask(n);
    for (auto& p : mask) p = detail::get_u32(in);
    try {
      out.rounds.push_back({PermutationVector(std::move(perm)),
                            ModImage(std::move(mask), std::uint32_t(h),
                                     std::uint32_t(w), std::uint32_t(g))});
    } catch (const error& e) {
      throw format_error(std::string("malformed material payload: ") + e.what());
    }
  }
  return out;
}

}  // namespace modcrack
