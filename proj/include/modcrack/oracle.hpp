#pragma once

#include <atomic>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "modcrack/cipher.hpp"
#include "modcrack/errors.hpp"
#include "modcrack/mod_image.hpp"

namespace modcrack {

struct OracleDims {
  std::uint32_t ct_height = 0;
  std::uint32_t ct_width = 0;
  std::uint32_t pt_height = 0;
  std::uint32_t pt_width = 0;
  std::uint32_t modulus = 2;

  std::uint64_t ciphertext_len() const { return std::uint64_t(ct_height) * ct_width; }
  std::uint64_t plaintext_len() const { return std::uint64_t(pt_height) * pt_width; }
};

// The adversary's only capability: ciphertext in, plaintext out. Answers are
// deterministic; the query counter never misses a call even when decryption
// is issued from several threads.
class DecryptionOracle {
 public:
  virtual ~DecryptionOracle() = default;

  ModImage decrypt(const ModImage& c) const {
    queries_.fetch_add(1, std::memory_order_relaxed);
    return do_decrypt(c);
  }

  std::uint64_t queries() const { return queries_.load(std::memory_order_relaxed); }
  const OracleDims& dims() const { return dims_; }

 protected:
  explicit DecryptionOracle(OracleDims d) : dims_(d) {}

  // the atomic counter travels by value
  DecryptionOracle(const DecryptionOracle& other)
      : queries_(other.queries_.load()), dims_(other.dims_) {}
  DecryptionOracle& operator=(const DecryptionOracle& other) {
    queries_.store(other.queries_.load());
    dims_ = other.dims_;
    return *this;
  }

 private:
  virtual ModImage do_decrypt(const ModImage& c) const = 0;

  mutable std::atomic<std::uint64_t> queries_{0};
  OracleDims dims_;
};

// Oracle backed by a live cipher instance.
class CipherOracle final : public DecryptionOracle {
 public:
  CipherOracle(CipherSpec spec, RoundMaterial material, std::uint32_t pt_h,
               std::uint32_t pt_w)
      : DecryptionOracle(make_dims(spec, pt_h, pt_w)),
        spec_(std::move(spec)),
        material_(std::move(material)) {
    auto [h, w] = working_dims(spec_, pt_h, pt_w);
    detail::check_material(spec_, material_, std::uint64_t(h) * w, spec_.modulus);
  }

 private:
  static OracleDims make_dims(const CipherSpec& spec, std::uint32_t pt_h,
                              std::uint32_t pt_w) {
    auto [h, w] = working_dims(spec, pt_h, pt_w);
    return OracleDims{h, w, pt_h, pt_w, spec.modulus};
  }

  ModImage do_decrypt(const ModImage& c) const override {
    return modcrack::decrypt(spec_, material_, c);
  }

  CipherSpec spec_;
  RoundMaterial material_;
};

inline std::unique_ptr<DecryptionOracle> cipher_oracle(CipherSpec spec,
                                                       RoundMaterial material,
                                                       std::uint32_t pt_h,
                                                       std::uint32_t pt_w) {
  return std::make_unique<CipherOracle>(std::move(spec), std::move(material), pt_h,
                                        pt_w);
}

// Oracle backed by a preloaded ciphertext -> plaintext table, keyed on exact
// pixel equality. Unknown ciphertexts fail loudly instead of guessing.
class FixtureOracle final : public DecryptionOracle {
 public:
  explicit FixtureOracle(OracleDims dims) : DecryptionOracle(dims) {}

  void add_entry(std::vector<std::uint32_t> ciphertext,
                 std::vector<std::uint32_t> plaintext) {
    if (ciphertext.size() != dims().ciphertext_len() ||
        plaintext.size() != dims().plaintext_len())
      throw dimension_error("fixture entry does not match oracle dims");
    table_[std::move(ciphertext)] = std::move(plaintext);
  }

  std::size_t entries() const { return table_.size(); }

  // Text format: first line "CT_H CT_W PT_H PT_W G", then one
  // "c1,c2,... -> p1,p2,..." line per transcript entry. '#' starts a comment.
  static FixtureOracle from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw format_error("cannot open fixture file: " + path);
    std::string line;
    OracleDims dims;
    bool have_header = false;
    FixtureOracle out(OracleDims{1, 1, 1, 1, 2});
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      if (!have_header) {
        std::istringstream hs(line);
        if (!(hs >> dims.ct_height >> dims.ct_width >> dims.pt_height >>
              dims.pt_width >> dims.modulus))
          throw format_error("fixture header must be: CT_H CT_W PT_H PT_W G");
        if (dims.modulus < 2) throw format_error("fixture modulus must be >= 2");
        out = FixtureOracle(dims);
        have_header = true;
        continue;
      }
      const auto arrow = line.find("->");
      if (arrow == std::string::npos)
        throw format_error("fixture entry is missing '->'");
      auto parse_csv = [&](const std::string& text) {
        std::vector<std::uint32_t> vals;
        std::istringstream ss(text);
        std::string field;
        while (std::getline(ss, field, ',')) {
          if (field.find_first_not_of(" \t\r") == std::string::npos) continue;
          std::uint64_t v = 0;
          try {
            v = std::stoull(field);
          } catch (const std::exception&) {
            throw format_error("fixture entry has a non-numeric field");
          }
          if (v >= dims.modulus) throw format_error("fixture value out of range");
          vals.push_back(std::uint32_t(v));
        }
        return vals;
      };
      try {
        out.add_entry(parse_csv(line.substr(0, arrow)),
                      parse_csv(line.substr(arrow + 2)));
      } catch (const dimension_error& e) {
        throw format_error(std::string("fixture entry: ") + e.what());
      }
    }
    if (!have_header) throw format_error("fixture file has no header line");
    return out;
  }

 private:
  ModImage do_decrypt(const ModImage& c) const override {
    if (c.size() != dims().ciphertext_len() || c.modulus != dims().modulus)
      throw dimension_error("fixture oracle: ciphertext dims/modulus mismatch");
    const auto it = table_.find(c.pixels);
    if (it == table_.end())
      throw fixture_miss("fixture oracle holds no answer for this ciphertext");
    return ModImage(it->second, dims().pt_height, dims().pt_width, dims().modulus);
  }

  std::map<std::vector<std::uint32_t>, std::vector<std::uint32_t>> table_;
};

// Bundled 3x3 transcript captured from a two-round chained-addition cipher:
// the zero ciphertext plus the nine unit impulses, with their decryptions.
// Exactly the ten answers the recovery walkthrough needs; the eavesdropped
// ciphertext is deliberately absent.
inline FixtureOracle demo_transcript() {
  static const std::uint32_t answers[10][9] = {
      {85, 16, 228, 187, 2, 230, 109, 110, 193},  // zero ciphertext
      {86, 14, 227, 189, 3, 230, 109, 110, 193},  // impulse at pixel 1
      {85, 17, 226, 186, 4, 231, 109, 110, 193},
      {85, 16, 229, 185, 1, 232, 110, 110, 193},
      {84, 16, 228, 188, 0, 229, 111, 111, 193},
      {82, 15, 228, 187, 3, 228, 108, 112, 194},
      {85, 13, 227, 187, 2, 231, 107, 109, 195},
      {90, 16, 225, 186, 2, 230, 110, 108, 192},
      {86, 19, 227, 186, 2, 230, 109, 111, 191},
      {83, 15, 230, 188, 2, 230, 109, 110, 194},
  };
  FixtureOracle out(OracleDims{3, 3, 3, 3, 256});
  for (std::size_t entry = 0; entry < 10; ++entry) {
    std::vector<std::uint32_t> ct(9, 0);
    if (entry > 0) ct[entry - 1] = 1;
    out.add_entry(std::move(ct),
                  std::vector<std::uint32_t>(answers[entry], answers[entry] + 9));
  }
  return out;
}

}  // namespace modcrack
