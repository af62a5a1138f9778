#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <random>
#include <vector>

#include "modcrack/mod_image.hpp"
#include "modcrack/substitution.hpp"

using namespace modcrack;

namespace {

ModImage random_img(std::mt19937_64& rng, std::uint32_t h, std::uint32_t w,
                    std::uint32_t g) {
  std::uniform_int_distribution<std::uint32_t> dist(0, g - 1);
  std::vector<std::uint32_t> px(std::size_t(h) * w);
  for (auto& p : px) p = dist(rng);
  return ModImage(std::move(px), h, w, g);
}

ModImage row(std::vector<std::uint32_t> px, std::uint32_t g = 256) {
  const auto w = std::uint32_t(px.size());
  return ModImage(std::move(px), 1, w, g);
}

const SubstitutionVariant kModularVariants[] = {
    SubstitutionVariant::mod_add(),
    SubstitutionVariant::mod_add_chain1(),
    SubstitutionVariant::mod_add_chain2(),
    SubstitutionVariant::mod_sub(),
    SubstitutionVariant::filtering(),
};

// Deltas of the substitution under a fixed mask; bases must not matter for
// the modular family.
ModImage delta_of(const SubstitutionVariant& v, const ModImage& base,
                  const ModImage& delta, const ModImage& k) {
  return mod_sub(sub_encrypt(v, mod_add(base, delta), k), sub_encrypt(v, base, k));
}

}  // namespace

TEST_CASE("sub_encrypt basics") {
  std::mt19937_64 rng(5);
  const ModImage k = random_img(rng, 1, 9, 256);
  CHECK(sub_encrypt(SubstitutionVariant::mod_add(), ModImage::zeros(1, 9, 256), k) == k);
  CHECK(sub_encrypt(SubstitutionVariant::mod_sub(), k, k) == ModImage::zeros(1, 9, 256));
  CHECK_THROWS_AS(sub_encrypt(SubstitutionVariant::mod_add(), row({1, 2}), row({1})),
                  dimension_error);
  CHECK_THROWS_AS(
      sub_encrypt(SubstitutionVariant::mod_add_chain2(), row({1}), row({1})),
      domain_error);
  CHECK_THROWS_AS(
      sub_encrypt(SubstitutionVariant::mod_add_chain1(), row({1}), row({1})),
      domain_error);
}

TEST_CASE("round trips across the family") {
  std::mt19937_64 rng(6);
  for (const std::uint32_t g : {4u, 256u, 65536u}) {
    for (const auto& variant : kModularVariants) {
      for (int t = 0; t < 300; ++t) {
        const ModImage m = random_img(rng, 1, 16, g);
        const ModImage k = random_img(rng, 1, 16, g);
        CHECK(sub_decrypt(variant, sub_encrypt(variant, m, k), k) == m);
      }
    }
    // XOR control round-trips too (it fails later, not here)
    for (int t = 0; t < 100; ++t) {
      const ModImage m = random_img(rng, 1, 16, g);
      const ModImage k = random_img(rng, 1, 16, g);
      const auto xorv = SubstitutionVariant::xor_control();
      CHECK(sub_decrypt(xorv, sub_encrypt(xorv, m, k), k) == m);
    }
  }
}

TEST_CASE("chain1 two-pixel system solved by hand") {
  std::mt19937_64 rng(8);
  const auto v = SubstitutionVariant::mod_add_chain1();
  for (int t = 0; t < 50; ++t) {
    const ModImage m = random_img(rng, 1, 2, 256);
    const ModImage k = random_img(rng, 1, 2, 256);
    const ModImage c = sub_encrypt(v, m, k);
    const std::uint32_t p2 = std::uint32_t((256 + 256 + c.pixels[1] - k.pixels[1] - c.pixels[0]) % 256);
    const std::uint32_t p1 = std::uint32_t((256 + 256 + c.pixels[0] - k.pixels[0] - p2) % 256);
    CHECK(sub_decrypt(v, c, k) == row({p1, p2}));
  }
}

TEST_CASE("chain2 decrypt needs three pixels") {
  const auto v = SubstitutionVariant::mod_add_chain2();
  const ModImage m = row({1, 2});
  const ModImage k = row({3, 4});
  const ModImage c = sub_encrypt(v, m, k);  // encryption itself is fine
  CHECK_THROWS_AS(sub_decrypt(v, c, k), domain_error);
}

TEST_CASE("fib_mod") {
  CHECK(fib_mod(1, 256) == 1);
  CHECK(fib_mod(2, 256) == 1);
  // iterate the recurrence independently
  std::uint64_t a = 1, b = 1;
  for (int i = 3; i <= 10; ++i) {
    const std::uint64_t next = a + b;
    a = b;
    b = next;
  }
  CHECK(fib_mod(10, 256) == b % 256);
  CHECK(fib_mod(10, 256) == 55);
  CHECK(fib_mod(14, 4) == 377 % 4);
  CHECK(fib_mod(14, 4) == 1);
  CHECK_THROWS_AS(fib_mod(0, 256), domain_error);
}

TEST_CASE("closed form equals the sequential recurrence") {
  const auto chain2 = SubstitutionVariant::mod_add_chain2();

  SECTION("first pixel matches the boundary branch") {
    std::mt19937_64 rng(9);
    const ModImage m = random_img(rng, 1, 5, 256);
    const ModImage k = random_img(rng, 1, 5, 256);
    const ModImage d = fibonacci_closed_form(m, k);
    const std::uint64_t expected =
        (std::uint64_t(m.pixels[0]) + k.pixels[0] + m.pixels[4] + m.pixels[3]) % 256;
    CHECK(d.pixels[0] == expected);
  }

  SECTION("zeros map to zeros") {
    CHECK(fibonacci_closed_form(ModImage::zeros(1, 6, 256), ModImage::zeros(1, 6, 256)) ==
          ModImage::zeros(1, 6, 256));
  }

  SECTION("exhaustive masks at G=4, L in 2..6") {
    std::mt19937_64 rng(10);
    for (std::uint32_t len = 2; len <= 6; ++len) {
      std::uint64_t masks = 1;
      for (std::uint32_t i = 0; i < len; ++i) masks *= 4;
      for (std::uint64_t n = 0; n < masks; ++n) {
        std::vector<std::uint32_t> kv(len);
        std::uint64_t acc = n;
        for (auto& x : kv) {
          x = std::uint32_t(acc % 4);
          acc /= 4;
        }
        const ModImage k = ModImage(kv, 1, len, 4);
        for (int s = 0; s < 3; ++s) {
          const ModImage m = random_img(rng, 1, len, 4);
          CHECK(fibonacci_closed_form(m, k) == sub_encrypt(chain2, m, k));
        }
      }
    }
  }

  SECTION("random draws at G=256, L=64") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
      const ModImage m = random_img(rng, 8, 8, 256);
      const ModImage k = random_img(rng, 8, 8, 256);
      CHECK(fibonacci_closed_form(m, k) == sub_encrypt(chain2, m, k));
    }
  }

  CHECK_THROWS_AS(fibonacci_closed_form(row({1}), row({1})), domain_error);
}

TEST_CASE("differential linearity of the modular family") {
  SECTION("sampled at G=256") {
    std::mt19937_64 rng(12);
    for (const auto& variant : kModularVariants) {
      for (int t = 0; t < 1000; ++t) {
        const ModImage k1 = random_img(rng, 1, 9, 256);
        const ModImage k2 = random_img(rng, 1, 9, 256);
        const ModImage base1 = random_img(rng, 1, 9, 256);
        const ModImage base2 = random_img(rng, 1, 9, 256);
        const ModImage delta = random_img(rng, 1, 9, 256);
        // independent of both the mask and the base image
        const ModImage d = delta_of(variant, base1, delta, k1);
        CHECK(d == delta_of(variant, base2, delta, k1));
        CHECK(d == delta_of(variant, base1, delta, k2));
      }
    }
  }

  SECTION("exhaustive pairs at G=4, L=3") {
    std::mt19937_64 rng(13);
    for (const auto& variant : kModularVariants) {
      const ModImage k = random_img(rng, 1, 3, 4);
      std::vector<ModImage> all;
      for (std::uint32_t n = 0; n < 64; ++n)
        all.push_back(ModImage({n % 4, (n / 4) % 4, (n / 16) % 4}, 1, 3, 4));
      const ModImage zero = ModImage::zeros(1, 3, 4);
      for (const auto& m1 : all)
        for (const auto& m2 : all) {
          const ModImage lhs = mod_sub(sub_encrypt(variant, m1, k),
                                       sub_encrypt(variant, m2, k));
          const ModImage rhs = delta_of(variant, zero, mod_sub(m1, m2), k);
          CHECK(lhs == rhs);
        }
    }
  }
}

TEST_CASE("scalar equivariance of the differential map, exhaustive at G=4, L=3") {
  std::mt19937_64 rng(14);
  for (const auto& variant : kModularVariants) {
    const ModImage k = random_img(rng, 1, 3, 4);
    const ModImage zero = ModImage::zeros(1, 3, 4);
    for (std::uint32_t n = 0; n < 64; ++n) {
      const ModImage delta({n % 4, (n / 4) % 4, (n / 16) % 4}, 1, 3, 4);
      for (std::uint32_t lam = 0; lam < 4; ++lam) {
        CHECK(delta_of(variant, zero, scalar_mul(lam, delta), k) ==
              scalar_mul(lam, delta_of(variant, zero, delta, k)));
      }
    }
  }
}

TEST_CASE("the XOR control is not modular-additive") {
  std::mt19937_64 rng(15);
  const auto xorv = SubstitutionVariant::xor_control();
  const ModImage k = random_img(rng, 1, 9, 256);
  const ModImage zero = ModImage::zeros(1, 9, 256);
  bool found = false;
  for (int t = 0; t < 100 && !found; ++t) {
    const ModImage d1 = random_img(rng, 1, 9, 256);
    const ModImage d2 = random_img(rng, 1, 9, 256);
    const ModImage lhs = delta_of(xorv, zero, mod_add(d1, d2), k);
    const ModImage rhs = mod_add(delta_of(xorv, zero, d1, k), delta_of(xorv, zero, d2, k));
    if (lhs != rhs) found = true;
  }
  CHECK(found);
  CHECK_THROWS_AS(
      sub_encrypt(xorv, ModImage::zeros(1, 4, 100), ModImage::zeros(1, 4, 100)),
      domain_error);
}

TEST_CASE("modular subtraction negates the differential") {
  std::mt19937_64 rng(16);
  const auto v = SubstitutionVariant::mod_sub();
  for (int t = 0; t < 100; ++t) {
    const ModImage k = random_img(rng, 1, 7, 256);
    const ModImage base = random_img(rng, 1, 7, 256);
    const ModImage delta = random_img(rng, 1, 7, 256);
    CHECK(delta_of(v, base, delta, k) ==
          mod_sub(ModImage::zeros(1, 7, 256), delta));
  }
}

TEST_CASE("filter kernels") {
  CHECK_THROWS_AS(
      sub_encrypt(SubstitutionVariant::filtering(FilterKernel{{{1, 1}}}),
                  row({1, 2, 3}), row({0, 0, 0})),
      domain_error);
  CHECK_THROWS_AS(
      sub_encrypt(SubstitutionVariant::filtering(FilterKernel{{{-1, 300}}}),
                  row({1, 2, 3}), row({0, 0, 0})),
      domain_error);

  // a wider causal kernel still round-trips
  std::mt19937_64 rng(17);
  const auto wide = SubstitutionVariant::filtering(
      FilterKernel{{{-1, 3}, {-2, 7}, {-4, 1}}});
  for (int t = 0; t < 100; ++t) {
    const ModImage m = random_img(rng, 2, 5, 256);
    const ModImage k = random_img(rng, 2, 5, 256);
    CHECK(sub_decrypt(wide, sub_encrypt(wide, m, k), k) == m);
  }
}
