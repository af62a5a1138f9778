#pragma once

#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "modcrack/attack.hpp"
#include "modcrack/oracle.hpp"

namespace modcrack {

namespace detail {

inline void print_row(std::ostream& os, const std::string& label,
                      const std::vector<std::uint32_t>& px) {
  os << "  " << std::left << std::setw(8) << label << "{";
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (i) os << ", ";
    os << px[i];
  }
  os << "}\n";
}

}  // namespace detail

// Replays the bundled 3x3 transcript: ten chosen ciphertexts, their answers,
// the derived atoms, and the keyless recovery of the eavesdropped
// ciphertext. Every printed value is checked against the recorded walkthrough;
// returns false on the first mismatch.
inline bool run_demo(std::ostream& os) {
  static const std::uint32_t expected_atoms[9][9] = {
      {1, 254, 255, 2, 1, 0, 0, 0, 0},   {0, 1, 254, 255, 2, 1, 0, 0, 0},
      {0, 0, 1, 254, 255, 2, 1, 0, 0},   {255, 0, 0, 1, 254, 255, 2, 1, 0},
      {253, 255, 0, 0, 1, 254, 255, 2, 1}, {0, 253, 255, 0, 0, 1, 254, 255, 2},
      {5, 0, 253, 255, 0, 0, 1, 254, 255}, {1, 3, 255, 255, 0, 0, 0, 1, 254},
      {254, 255, 2, 1, 0, 0, 0, 0, 1},
  };
  static const std::uint32_t expected_delta[9] = {171, 255, 61, 116, 63,
                                                  191, 203, 242, 62};
  static const std::uint32_t expected_plain[9] = {0, 15, 33, 47, 65, 165, 56, 96, 255};

  bool ok = true;
  auto verify = [&](bool cond, const char* what) {
    if (!cond) {
      os << "MISMATCH: " << what << "\n";
      ok = false;
    }
  };

  FixtureOracle oracle = demo_transcript();
  os << "Chosen ciphertexts (3x3, modulus 256): the zero image and nine unit "
        "impulses.\n";

  os << "\nOracle answers:\n";
  const ModImage m0 = oracle.decrypt(ModImage::zeros(3, 3, 256));
  detail::print_row(os, "M0", m0.pixels);
  std::vector<ModImage> answers;
  for (std::uint64_t i = 0; i < 9; ++i) {
    answers.push_back(oracle.decrypt(ModImage::unit_impulse(3, 3, 256, i)));
    detail::print_row(os, "M" + std::to_string(i + 1), answers.back().pixels);
  }

  os << "\nAtoms (differentials against M0):\n";
  FixtureOracle fresh = demo_transcript();
  const AttackAtoms atoms = build_atoms(fresh);
  verify(fresh.queries() == 10, "atom construction used a query count other than 10");
  verify(atoms.base == m0, "base plaintext");
  for (std::uint64_t i = 0; i < 9; ++i) {
    detail::print_row(os, "dM" + std::to_string(i + 1), atoms.dense[i].pixels);
    verify(atoms.dense[i].pixels ==
               std::vector<std::uint32_t>(expected_atoms[i], expected_atoms[i] + 9),
           "atom value");
    verify(atoms.dense[i] == mod_sub(answers[i], m0), "atom derivation");
  }

  const ModImage eavesdropped({29, 67, 144, 143, 74, 127, 101, 24, 139}, 3, 3, 256);
  os << "\nEavesdropped ciphertext:\n";
  detail::print_row(os, "C", eavesdropped.pixels);

  const ModImage delta = weighted_modsum(
      std::span<const std::uint32_t>(eavesdropped.pixels),
      std::span<const ModImage>(atoms.dense));
  os << "\nWeighted atom sum:\n";
  detail::print_row(os, "dM", delta.pixels);
  verify(delta.pixels == std::vector<std::uint32_t>(expected_delta, expected_delta + 9),
         "weighted differential");

  const ModImage recovered = recover(atoms, eavesdropped);
  os << "\nRecovered plaintext (no key, no further queries):\n";
  detail::print_row(os, "M", recovered.pixels);
  verify(recovered.pixels ==
             std::vector<std::uint32_t>(expected_plain, expected_plain + 9),
         "recovered plaintext");
  verify(recovered == mod_add(delta, m0), "recovery composition");
  verify(fresh.queries() == 10, "recovery issued oracle queries");

  os << "\n" << (ok ? "All transcript values reproduced." : "Transcript mismatch.")
     << "\n";
  return ok;
}

}  // namespace modcrack
