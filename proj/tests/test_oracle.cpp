#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <thread>
#include <vector>

#include "modcrack/attack.hpp"
#include "modcrack/oracle.hpp"

using namespace modcrack;

namespace {

ModImage random_img(std::mt19937_64& rng, std::uint32_t h, std::uint32_t w,
                    std::uint32_t g) {
  std::uniform_int_distribution<std::uint32_t> dist(0, g - 1);
  std::vector<std::uint32_t> px(std::size_t(h) * w);
  for (auto& p : px) p = dist(rng);
  return ModImage(std::move(px), h, w, g);
}

}  // namespace

TEST_CASE("cipher-backed oracle") {
  std::mt19937_64 rng(31);
  CipherSpec spec = preset("zhou");
  auto stream = CounterStream({1, 2, 3}, 256);
  RoundMaterial mat = material_for(spec, 4, 4, stream);
  auto oracle = cipher_oracle(spec, mat, 4, 4);

  const ModImage m = random_img(rng, 4, 4, 256);
  const ModImage c = encrypt(spec, mat, m);
  CHECK(oracle->decrypt(c) == m);
  CHECK(oracle->queries() == 1);

  const ModImage again = oracle->decrypt(c);
  CHECK(again == m);
  CHECK(oracle->queries() == 2);
}

TEST_CASE("border oracle dims are asymmetric") {
  CipherSpec spec = preset("hua_ma");
  auto stream = CounterStream({4, 5}, 256);
  RoundMaterial mat = material_for(spec, 6, 6, stream);
  auto oracle = cipher_oracle(spec, mat, 6, 6);
  CHECK(oracle->dims().ct_height == 8);
  CHECK(oracle->dims().ct_width == 8);
  CHECK(oracle->dims().pt_height == 6);
  CHECK(oracle->dims().pt_width == 6);

  std::mt19937_64 rng(32);
  const ModImage m = random_img(rng, 6, 6, 256);
  const ModImage c = encrypt(spec, mat, m);
  CHECK(c.height == 8);
  CHECK(oracle->decrypt(c) == m);
}

TEST_CASE("query counting is exact under concurrency") {
  CipherSpec spec = preset("basic");
  auto stream = CounterStream({9}, 256);
  RoundMaterial mat = material_for(spec, 4, 4, stream);
  auto oracle = cipher_oracle(spec, mat, 4, 4);

  const ModImage c = ModImage::zeros(4, 4, 256);
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t)
    threads.emplace_back([&]() {
      for (int i = 0; i < 50; ++i) (void)oracle->decrypt(c);
    });
  for (auto& th : threads) th.join();
  CHECK(oracle->queries() == 8 * 50);
}

TEST_CASE("bundled transcript oracle") {
  FixtureOracle oracle = demo_transcript();
  CHECK(oracle.entries() == 10);
  CHECK(oracle.dims().modulus == 256);

  const ModImage zero_ct = ModImage::zeros(3, 3, 256);
  CHECK(oracle.decrypt(zero_ct) ==
        ModImage({85, 16, 228, 187, 2, 230, 109, 110, 193}, 3, 3, 256));
  CHECK(oracle.decrypt(ModImage::unit_impulse(3, 3, 256, 8)) ==
        ModImage({83, 15, 230, 188, 2, 230, 109, 110, 194}, 3, 3, 256));

  // the eavesdropped ciphertext is not in the table
  const ModImage eavesdropped({29, 67, 144, 143, 74, 127, 101, 24, 139}, 3, 3, 256);
  CHECK_THROWS_AS(oracle.decrypt(eavesdropped), fixture_miss);

  CHECK_THROWS_AS(oracle.decrypt(ModImage::zeros(2, 2, 256)), dimension_error);
}

TEST_CASE("query accounting across atom construction and recovery") {
  FixtureOracle oracle = demo_transcript();
  const AttackAtoms atoms = build_atoms(oracle);
  CHECK(oracle.queries() == 10);  // L+1 for L=9

  const ModImage eavesdropped({29, 67, 144, 143, 74, 127, 101, 24, 139}, 3, 3, 256);
  for (int i = 0; i < 5; ++i) (void)recover(atoms, eavesdropped);
  CHECK(oracle.queries() == 10);  // recovery never talks to the oracle
}

TEST_CASE("fixture oracle from a transcript file") {
  const std::string path = "fixture_oracle_test.txt";
  {
    std::ofstream out(path);
    out << "# tiny transcript\n";
    out << "1 2 1 2 256\n";
    out << "0,0 -> 7,9\n";
    out << "1, 0 -> 8 , 9\n";
  }
  FixtureOracle oracle = FixtureOracle::from_file(path);
  CHECK(oracle.entries() == 2);
  CHECK(oracle.decrypt(ModImage({1, 0}, 1, 2, 256)) == ModImage({8, 9}, 1, 2, 256));
  CHECK_THROWS_AS(oracle.decrypt(ModImage({5, 5}, 1, 2, 256)), fixture_miss);
  std::remove(path.c_str());

  CHECK_THROWS_AS(FixtureOracle::from_file("no_such_file.txt"), format_error);

  {
    std::ofstream out(path);
    out << "1 2 1 2 256\n";
    out << "0,0 7,9\n";  // missing arrow
  }
  CHECK_THROWS_AS(FixtureOracle::from_file(path), format_error);
  {
    std::ofstream out(path);
    out << "1 2 1 2 256\n";
    out << "0,999 -> 7,9\n";  // value over modulus
  }
  CHECK_THROWS_AS(FixtureOracle::from_file(path), format_error);
  std::remove(path.c_str());
}
