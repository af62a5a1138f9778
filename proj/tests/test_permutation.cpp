#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "modcrack/keystream.hpp"
#include "modcrack/mod_image.hpp"
#include "modcrack/permutation.hpp"

using namespace modcrack;

namespace {

ModImage row(std::vector<std::uint32_t> px, std::uint32_t g = 256) {
  const auto w = std::uint32_t(px.size());
  return ModImage(std::move(px), 1, w, g);
}

PermutationVector random_perm(std::mt19937_64& rng, std::uint64_t n) {
  std::vector<std::uint64_t> w(n);
  std::iota(w.begin(), w.end(), 0);
  std::shuffle(w.begin(), w.end(), rng);
  return PermutationVector(std::move(w));
}

}  // namespace

TEST_CASE("apply follows p(i) = m(w(i))") {
  const ModImage m = row({10, 20, 30});
  CHECK(apply(PermutationVector::identity(3), m) == m);
  CHECK(apply(PermutationVector::reversed(3), row({1, 2, 3})) == row({3, 2, 1}));
  // 1-based {2,3,1} puts m(2),m(3),m(1) into the output
  CHECK(apply(PermutationVector({1, 2, 0}), m) == row({20, 30, 10}));
  CHECK_THROWS_AS(apply(PermutationVector::identity(4), m), dimension_error);
  CHECK_THROWS_AS(PermutationVector({0, 0, 1}), validation_error);
  CHECK_THROWS_AS(PermutationVector({0, 3, 1}), validation_error);
}

TEST_CASE("invert") {
  CHECK(invert(PermutationVector::identity(5)) == PermutationVector::identity(5));
  CHECK(invert(PermutationVector({1, 2, 0})) == PermutationVector({2, 0, 1}));
  CHECK(invert(PermutationVector::reversed(4)) == PermutationVector::reversed(4));

  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const PermutationVector w = random_perm(rng, 16);
    CHECK(invert(invert(w)) == w);
    ModImage m = row(std::vector<std::uint32_t>(16));
    for (std::size_t i = 0; i < m.size(); ++i) m.pixels[i] = std::uint32_t(i * 7 % 256);
    CHECK(apply(invert(w), apply(w, m)) == m);
  }
}

TEST_CASE("compose") {
  std::mt19937_64 rng(13);
  const PermutationVector w = random_perm(rng, 8);
  CHECK(compose(w, PermutationVector::identity(8)) == w);
  CHECK(compose(w, invert(w)) == PermutationVector::identity(8));
  CHECK(compose(PermutationVector({1, 2, 0}), PermutationVector({1, 2, 0})) ==
        PermutationVector({2, 0, 1}));

  // the defining equation, on random triples
  for (int t = 0; t < 20; ++t) {
    const PermutationVector a = random_perm(rng, 12);
    const PermutationVector b = random_perm(rng, 12);
    const PermutationVector c = random_perm(rng, 12);
    ModImage m = row(std::vector<std::uint32_t>(12));
    for (std::size_t i = 0; i < m.size(); ++i) m.pixels[i] = std::uint32_t(i);
    CHECK(apply(compose(a, b), m) == apply(b, apply(a, m)));
    CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
  }

  // exhaustive associativity over S_3
  std::vector<PermutationVector> s3;
  std::vector<std::uint64_t> base{0, 1, 2};
  std::sort(base.begin(), base.end());
  do {
    s3.push_back(PermutationVector(base));
  } while (std::next_permutation(base.begin(), base.end()));
  REQUIRE(s3.size() == 6);
  for (const auto& a : s3)
    for (const auto& b : s3)
      for (const auto& c : s3)
        CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
}

TEST_CASE("rotation90") {
  CHECK(rotation90(1, 1) == PermutationVector::identity(1));

  // {1,2; 3,4} turns into {3,1; 4,2}
  const ModImage m = ModImage({1, 2, 3, 4}, 2, 2, 256);
  CHECK(apply(rotation90(2, 2), m).pixels == std::vector<std::uint32_t>{3, 1, 4, 2});

  PermutationVector four = rotation90(2, 2);
  for (int i = 0; i < 3; ++i) four = compose(four, rotation90(2, 2));
  CHECK(four == PermutationVector::identity(4));

  // non-square: compare against an independently computed 2-D rotation
  const std::uint32_t h = 3, w = 4;
  ModImage src = ModImage::zeros(h, w, 256);
  for (std::size_t i = 0; i < src.size(); ++i) src.pixels[i] = std::uint32_t(i + 1);
  std::vector<std::uint32_t> rotated(h * w);
  for (std::uint32_t r = 0; r < h; ++r)
    for (std::uint32_t c = 0; c < w; ++c)
      rotated[std::size_t(c) * h + (h - 1 - r)] = src.pixels[std::size_t(r) * w + c];
  CHECK(apply(rotation90(h, w), src).pixels == rotated);
}

TEST_CASE("column_stretch reads column by column") {
  ModImage src = ModImage({1, 2, 3, 4, 5, 6}, 2, 3, 256);
  CHECK(apply(column_stretch(2, 3), src).pixels ==
        std::vector<std::uint32_t>{1, 4, 2, 5, 3, 6});
}

TEST_CASE("permutation_from_stream") {
  SECTION("constant-zero draws, traced by hand") {
    // swaps: (2,0) then (1,0) then the trivial (0,0)
    ConstantStream zeros(0, 256);
    CHECK(permutation_from_stream(zeros, 3) == PermutationVector({1, 2, 0}));
  }

  SECTION("L=1 is the identity") {
    ConstantStream s(5, 256);
    CHECK(permutation_from_stream(s, 1) == PermutationVector::identity(1));
  }

  SECTION("deterministic and consumes exactly L draws") {
    const std::vector<std::uint8_t> seed{1, 2, 3};
    CounterStream a(seed, 256), b(seed, 256);
    CHECK(permutation_from_stream(a, 64) == permutation_from_stream(b, 64));

    FixedStream exact(std::vector<std::uint32_t>(8, 3), 256);
    CHECK_NOTHROW(permutation_from_stream(exact, 8));
    CHECK_THROWS_AS(exact.next(), generation_error);

    FixedStream short_stream(std::vector<std::uint32_t>(7, 3), 256);
    CHECK_THROWS_AS(permutation_from_stream(short_stream, 8), generation_error);
  }

  SECTION("always a bijection") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
      std::vector<std::uint8_t> seed{std::uint8_t(t), 9};
      CounterStream s(seed, 16);
      const PermutationVector w = permutation_from_stream(s, 40);
      std::vector<std::uint64_t> sorted = w.indices();
      std::sort(sorted.begin(), sorted.end());
      for (std::uint64_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
    }
  }
}

TEST_CASE("cyclic_from_stream") {
  const std::vector<std::uint8_t> seed{8, 8};
  CounterStream a(seed, 256), b(seed, 256);
  const PermutationVector w = cyclic_from_stream(a, 9);
  CHECK(w == cyclic_from_stream(b, 9));
  // a cyclic shift: w[i+1] - w[i] constant mod L
  for (std::uint64_t i = 0; i + 1 < w.size(); ++i)
    CHECK((w[i] + 1) % 9 == w[i + 1]);
  FixedStream exact(std::vector<std::uint32_t>(9, 1), 256);
  CHECK_NOTHROW(cyclic_from_stream(exact, 9));
  CHECK_THROWS_AS(exact.next(), generation_error);
}

TEST_CASE("permutation preserves the value multiset and commutes with the algebra") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::uint32_t> dist(0, 255);
  for (int t = 0; t < 30; ++t) {
    const PermutationVector w = random_perm(rng, 24);
    ModImage a = row(std::vector<std::uint32_t>(24));
    ModImage b = a;
    for (auto& p : a.pixels) p = dist(rng);
    for (auto& p : b.pixels) p = dist(rng);

    std::vector<std::uint32_t> before = a.pixels, after = apply(w, a).pixels;
    std::sort(before.begin(), before.end());
    std::sort(after.begin(), after.end());
    CHECK(before == after);

    CHECK(mod_sub(apply(w, a), apply(w, b)) == apply(w, mod_sub(a, b)));
    const std::uint32_t lam = dist(rng);
    CHECK(apply(w, scalar_mul(lam, a)) == scalar_mul(lam, apply(w, a)));
  }
}
