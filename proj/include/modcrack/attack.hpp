#pragma once

#include <chrono>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "modcrack/cipher.hpp"
#include "modcrack/errors.hpp"
#include "modcrack/keystream.hpp"
#include "modcrack/mod_image.hpp"
#include "modcrack/oracle.hpp"

namespace modcrack {

// The recovery dictionary: the plaintext of the zero ciphertext plus one
// plaintext differential per ciphertext pixel. Immutable once built; safe to
// share across threads for parallel recoveries.
struct AttackAtoms {
  ModImage base;  // plaintext of the zero ciphertext
  std::vector<ModImage> dense;
  std::vector<SparseDifferential> sparse;
  bool is_sparse = false;
  std::uint64_t ciphertext_len = 0;
  std::uint32_t ct_height = 0;
  std::uint32_t ct_width = 0;

  std::uint32_t modulus() const { return base.modulus; }
  std::uint64_t count() const { return is_sparse ? sparse.size() : dense.size(); }
};

struct AtomDensity {
  std::uint64_t total_nnz = 0;
  std::uint64_t max_nnz = 0;
};

inline AtomDensity atom_density(const AttackAtoms& atoms) {
  AtomDensity d;
  auto tally = [&d](std::uint64_t nnz) {
    d.total_nnz += nnz;
    if (nnz > d.max_nnz) d.max_nnz = nnz;
  };
  if (atoms.is_sparse) {
    for (const auto& a : atoms.sparse) tally(a.nnz());
  } else {
    for (const auto& a : atoms.dense) {
      std::uint64_t nnz = 0;
      for (std::uint32_t p : a.pixels) nnz += p != 0;
      tally(nnz);
    }
  }
  return d;
}

// Queries the zero ciphertext and every unit impulse — exactly LL+1 calls —
// and subtracts the base answer from each impulse answer.
inline AttackAtoms build_atoms(const DecryptionOracle& oracle, unsigned jobs = 1) {
  const OracleDims& dims = oracle.dims();
  const std::uint64_t ll = dims.ciphertext_len();
  if (ll == 0) throw dimension_error("oracle reports an empty ciphertext");

  const ModImage zero_ct =
      ModImage::zeros(dims.ct_height, dims.ct_width, dims.modulus);
  AttackAtoms atoms;
  atoms.base = oracle.decrypt(zero_ct);
  if (atoms.base.size() != dims.plaintext_len() || atoms.base.modulus != dims.modulus)
    throw protocol_error("oracle answer does not match its advertised plaintext dims");
  atoms.ciphertext_len = ll;
  atoms.ct_height = dims.ct_height;
  atoms.ct_width = dims.ct_width;
  atoms.dense.resize(ll);

  auto probe_one = [&](std::uint64_t i) {
    const ModImage answer = oracle.decrypt(
        ModImage::unit_impulse(dims.ct_height, dims.ct_width, dims.modulus, i));
    if (answer.height != atoms.base.height || answer.width != atoms.base.width ||
        answer.modulus != atoms.base.modulus)
      throw protocol_error("oracle answer dims drifted between queries");
    atoms.dense[i] = mod_sub(answer, atoms.base);
  };

  if (jobs <= 1) {
    for (std::uint64_t i = 0; i < ll; ++i) probe_one(i);
    return atoms;
  }

  std::vector<std::thread> workers;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::atomic<std::uint64_t> cursor{0};
  for (unsigned t = 0; t < jobs; ++t) {
    workers.emplace_back([&]() {
      try {
        for (std::uint64_t i = cursor.fetch_add(1); i < ll; i = cursor.fetch_add(1))
          probe_one(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& worker : workers) worker.join();
  if (failure) std::rethrow_exception(failure);
  return atoms;
}

// Keyless recovery: weighted modular sum of the atoms under the ciphertext's
// own pixels, shifted by the base plaintext. No oracle access.
inline ModImage recover(const AttackAtoms& atoms, const ModImage& c) {
  if (c.size() != atoms.ciphertext_len || c.modulus != atoms.modulus())
    throw dimension_error("recover: ciphertext does not match the atoms");
  const std::span<const std::uint32_t> weights(c.pixels);
  const ModImage delta =
      atoms.is_sparse
          ? weighted_modsum(weights, std::span<const SparseDifferential>(atoms.sparse))
          : weighted_modsum(weights, std::span<const ModImage>(atoms.dense));
  return mod_add(delta, atoms.base);
}

struct SparsifyResult {
  AttackAtoms atoms;
  AtomDensity density;
  bool within_budget = true;
};

// Converts dense atoms to their nonzero entries. Recovery through the sparse
// path is bit-identical; a budget overrun is reported, never an error.
inline SparsifyResult sparsify_atoms(const AttackAtoms& input,
                                     std::optional<std::uint64_t> nnz_budget = {}) {
  if (input.is_sparse) {
    SparsifyResult out{input, atom_density(input), true};
    if (nnz_budget) out.within_budget = out.density.max_nnz <= *nnz_budget;
    return out;
  }
  SparsifyResult out;
  out.atoms.base = input.base;
  out.atoms.is_sparse = true;
  out.atoms.ciphertext_len = input.ciphertext_len;
  out.atoms.ct_height = input.ct_height;
  out.atoms.ct_width = input.ct_width;
  out.atoms.sparse.reserve(input.dense.size());
  for (const auto& a : input.dense)
    out.atoms.sparse.push_back(SparseDifferential::from_dense(a));
  out.density = atom_density(out.atoms);
  if (nnz_budget) out.within_budget = out.density.max_nnz <= *nnz_budget;
  return out;
}

struct RecoveryRecord {
  std::uint64_t ciphertext_id = 0;
  bool success = false;
};

struct AttackReport {
  std::uint64_t queries_used = 0;
  AtomDensity density;
  std::vector<RecoveryRecord> recoveries;
  double build_seconds = 0.0;
  double recover_seconds = 0.0;
};

struct EndToEndResult {
  AttackReport report;
  ModImage recovered;
  bool success = false;
};

// Full drill: encrypt a plaintext under (spec, seed), build atoms against an
// oracle holding the same deployment, then recover the eavesdropped
// ciphertext without further queries and compare bit-for-bit.
inline EndToEndResult attack_end_to_end(const CipherSpec& spec,
                                        std::span<const std::uint8_t> seed,
                                        const ModImage& plaintext,
                                        Schedule schedule = Schedule::LogisticSine,
                                        unsigned jobs = 1) {
  using clock = std::chrono::steady_clock;
  auto stream = make_stream(schedule, seed, spec.modulus);
  RoundMaterial material = material_for(spec, plaintext.height, plaintext.width, *stream);
  const ModImage eavesdropped = encrypt(spec, material, plaintext);

  auto oracle = cipher_oracle(spec, std::move(material), plaintext.height, plaintext.width);

  EndToEndResult out;
  const auto t0 = clock::now();
  AttackAtoms atoms = build_atoms(*oracle, jobs);
  const auto t1 = clock::now();
  out.recovered = recover(atoms, eavesdropped);
  const auto t2 = clock::now();

  out.success = out.recovered == plaintext;
  out.report.queries_used = oracle->queries();
  out.report.density = atom_density(atoms);
  out.report.recoveries.push_back({0, out.success});
  out.report.build_seconds = std::chrono::duration<double>(t1 - t0).count();
  out.report.recover_seconds = std::chrono::duration<double>(t2 - t1).count();
  return out;
}

}  // namespace modcrack
