#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "pseudoent/gf2m.hpp"
#include "pseudoent/keys.hpp"
#include "pseudoent/oracles.hpp"

using namespace pseudoent;

// chi-square critical value for 255 degrees of freedom at alpha = 0.01
static constexpr double kChi2Crit255 = 310.45738821990585;

TEST_CASE("gf2m field axioms on sampled triples") {
  for (int m : {4, 8, 12, 16}) {
    GF2m field(m);
    SeededKey key(99, KeyRole::HashCoeffs);
    for (int i = 0; i < 200; ++i) {
      const std::uint64_t a = prf_mix64(key.seed, 3 * i) & field.mask();
      const std::uint64_t b = prf_mix64(key.seed, 3 * i + 1) & field.mask();
      const std::uint64_t c = prf_mix64(key.seed, 3 * i + 2) & field.mask();
      CHECK(field.mul(a, b) == field.mul(b, a));
      CHECK(field.mul(a, field.mul(b, c)) == field.mul(field.mul(a, b), c));
      CHECK(field.mul(a, b ^ c) == (field.mul(a, b) ^ field.mul(a, c)));
      CHECK(field.mul(a, 1) == a);
    }
  }
}

TEST_CASE("four-wise hash: zero polynomial and identity coefficient") {
  FourWiseHash zero(8, std::array<std::uint64_t, 4>{0, 0, 0, 0});
  CHECK(zero.eval(5) == 0);
  CHECK(zero.sign(5) == 1);

  FourWiseHash identity(8, std::array<std::uint64_t, 4>{0, 1, 0, 0});
  for (std::uint64_t x = 0; x < 256; ++x) {
    CHECK(identity.eval(x) == x);
  }
}

TEST_CASE("four-wise hash: sign patterns on 4-tuples are uniform") {
  // For fixed distinct points, sign outputs over random coefficient
  // vectors land on each of the 16 patterns with frequency 1/16.
  const int m = 8;
  const int coeff_samples = 4000;
  SeededKey master(42, KeyRole::HashCoeffs);

  // 16 distinct sample points
  std::vector<std::uint64_t> points;
  for (std::uint64_t x = 0; points.size() < 16; ++x) {
    points.push_back(prf_mix64(master.seed, x) & 0xFF);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
  }
  REQUIRE(points.size() == 16);

  std::mt19937_64 pick(7);
  const double expected = coeff_samples / 16.0;
  const double sigma = std::sqrt(coeff_samples * (1.0 / 16) * (15.0 / 16));
  for (int tuple_idx = 0; tuple_idx < 40; ++tuple_idx) {
    std::array<std::uint64_t, 4> tuple{};
    std::set<std::uint64_t> chosen;
    while (chosen.size() < 4) {
      chosen.insert(points[pick() % points.size()]);
    }
    std::copy(chosen.begin(), chosen.end(), tuple.begin());

    std::array<int, 16> counts{};
    for (int s = 0; s < coeff_samples; ++s) {
      FourWiseHash h(m, SeededKey(1000 + s, KeyRole::HashCoeffs));
      int pattern = 0;
      for (int j = 0; j < 4; ++j) {
        pattern = (pattern << 1) | (h.sign(tuple[j]) < 0 ? 1 : 0);
      }
      ++counts[pattern];
    }
    for (int pattern = 0; pattern < 16; ++pattern) {
      CHECK(std::abs(counts[pattern] - expected) <= 4.0 * sigma);
    }
  }
}

TEST_CASE("feistel: bijective with exact inverse on the full domain") {
  for (int width : {2, 4, 6, 8, 10, 12, 14, 16}) {
    SeededKey key(5 + width, KeyRole::OuterPerm);
    FeistelPermutation perm(width, key);
    std::vector<bool> hit(std::size_t{1} << width, false);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << width); ++x) {
      const std::uint64_t y = perm.forward(x);
      REQUIRE(y < (std::uint64_t{1} << width));
      REQUIRE(!hit[y]);
      hit[y] = true;
      REQUIRE(perm.inverse(y) == x);
    }
  }
}

TEST_CASE("feistel: no collisions among sampled outputs at w=8") {
  SeededKey key(7, KeyRole::OuterPerm);
  FeistelPermutation perm(16, key);
  std::set<std::uint64_t> outputs;
  for (std::uint64_t x = 0; x < 10000; ++x) {
    outputs.insert(perm.forward(x));
  }
  CHECK(outputs.size() == 10000);
}

TEST_CASE("feistel rejects odd widths") {
  SeededKey key(1, KeyRole::OuterPerm);
  CHECK_THROWS_AS(FeistelPermutation(9, key), std::invalid_argument);
}

TEST_CASE("domain permutation covers odd widths via cycle walking") {
  for (int width : {3, 5, 7, 9, 11}) {
    SeededKey key(23 + width, KeyRole::OuterPerm);
    DomainPermutation perm(width, key);
    std::vector<bool> hit(std::size_t{1} << width, false);
    for (std::uint64_t x = 0; x < perm.domain_size(); ++x) {
      const std::uint64_t y = perm.forward(x);
      REQUIRE(y < perm.domain_size());
      REQUIRE(!hit[y]);
      hit[y] = true;
      REQUIRE(perm.inverse(y) == x);
    }
  }
}

TEST_CASE("prf stand-in: determinism, uniformity, sign balance") {
  SeededKey k1(101, KeyRole::Phase);
  SeededKey k2(202, KeyRole::Phase);

  CHECK(prf_eval(k1, 77, 32) == prf_eval(k1, 77, 32));

  // chi-square over 256 buckets, 2^12 inputs, for two distinct keys
  for (const SeededKey& key : {k1, k2}) {
    std::array<int, 256> buckets{};
    const int samples = 1 << 12;
    for (int x = 0; x < samples; ++x) {
      ++buckets[prf_eval(key, static_cast<std::uint64_t>(x), 8)];
    }
    const double expected = samples / 256.0;
    double chi2 = 0.0;
    for (int b : buckets) {
      chi2 += (b - expected) * (b - expected) / expected;
    }
    CHECK(chi2 < kChi2Crit255);
  }

  // +/-1 mean over 2^12 inputs within 3 * 2^-6 of zero
  double mean = 0.0;
  const int samples = 1 << 12;
  for (int x = 0; x < samples; ++x) {
    mean += prf_sign(k1, static_cast<std::uint64_t>(x));
  }
  mean /= samples;
  CHECK(std::abs(mean) <= 3.0 / 64.0);
}

TEST_CASE("key substreams: distinct roles give distinct functions") {
  SeededKey master(31337, KeyRole::Phase);
  const SeededKey a = master.substream(KeyRole::Round1);
  const SeededKey b = master.substream(KeyRole::Round2);
  CHECK(a.seed != b.seed);
  CHECK(master.substream(KeyRole::Round1) == a);
}

TEST_CASE("small range: boundary values of k") {
  SeededKey fk(11, KeyRole::Phase);
  SeededKey gk(22, KeyRole::Phase);
  const int width = 12;

  // k = width: mod is the identity, result equals f(g(x))
  for (std::uint64_t x : {0ull, 17ull, 4095ull}) {
    CHECK(small_range_eval(fk, gk, width, width, x) ==
          prf_eval(fk, prf_eval(gk, x, width), width));
  }

  // k = 0: constant function
  const std::uint64_t c = small_range_eval(fk, gk, width, 0, 0);
  for (std::uint64_t x = 1; x < 64; ++x) {
    CHECK(small_range_eval(fk, gk, width, 0, x) == c);
  }

  // width=12, k=4: image has at most 16 values
  std::set<std::uint64_t> image;
  for (std::uint64_t x = 0; x < 4096; ++x) {
    image.insert(small_range_eval(fk, gk, width, 4, x));
  }
  CHECK(image.size() <= 16);
}

TEST_CASE("k-to-one: exact preimage profile") {
  SeededKey key(404, KeyRole::InnerPerm);

  SUBCASE("w=8, k=8 is a bijection") {
    KToOneFunction g(8, 8, key);
    std::set<std::uint64_t> image;
    for (std::uint64_t x = 0; x < 256; ++x) {
      image.insert(g.eval(x));
    }
    CHECK(image.size() == 256);
  }

  SUBCASE("w=8, k=3: every achieved value has exactly 32 preimages") {
    KToOneFunction g(8, 3, key);
    std::map<std::uint64_t, int> counts;
    for (std::uint64_t x = 0; x < 256; ++x) {
      ++counts[g.eval(x)];
    }
    CHECK(counts.size() == 8);
    for (const auto& [value, count] : counts) {
      CHECK(count == 32);
    }
  }

  SUBCASE("w=8, k=0 is constant") {
    KToOneFunction g(8, 0, key);
    const std::uint64_t c = g.eval(0);
    for (std::uint64_t x = 0; x < 256; ++x) {
      CHECK(g.eval(x) == c);
    }
  }

  SUBCASE("full profile at w=16") {
    for (int k : {0, 4, 11}) {
      KToOneFunction g(16, k, SeededKey(5050 + k, KeyRole::InnerPerm));
      std::map<std::uint64_t, int> counts;
      for (std::uint64_t x = 0; x < (1 << 16); ++x) {
        ++counts[g.eval(x)];
      }
      CHECK(counts.size() == (std::size_t{1} << k));
      for (const auto& [value, count] : counts) {
        CHECK(count == (1 << (16 - k)));
      }
    }
  }
}

TEST_CASE("lazy random function: memo is query-order invariant") {
  LazyRandomFunction f1(10, 16, 777);
  LazyRandomFunction f2(10, 16, 777);
  std::vector<std::uint64_t> order1 = {5, 900, 3, 512, 5, 0};
  std::vector<std::uint64_t> order2 = {0, 512, 900, 3, 5};
  for (std::uint64_t x : order1) {
    f1.eval(x);
  }
  for (std::uint64_t x : order2) {
    f2.eval(x);
  }
  for (std::uint64_t x : {0ull, 3ull, 5ull, 512ull, 900ull}) {
    CHECK(f1.eval(x) == f2.eval(x));
  }
  CHECK(f1.memo_size() == 5);

  // repeated queries return identical values
  LazyRandomFunction f3(10, 1, 1234);
  const std::uint64_t v = f3.eval(42);
  CHECK(f3.eval(42) == v);
}

TEST_CASE("lazy random permutation: bijection with inverse") {
  LazyRandomPermutation perm(10, 2024);
  std::vector<bool> hit(1024, false);
  for (std::uint64_t x = 0; x < 1024; ++x) {
    const std::uint64_t y = perm.forward(x);
    REQUIRE(!hit[y]);
    hit[y] = true;
    REQUIRE(perm.inverse(y) == x);
  }
}

TEST_CASE("key role names round trip") {
  for (auto role : {KeyRole::Phase, KeyRole::InnerPerm, KeyRole::OuterPerm,
                    KeyRole::Round1, KeyRole::Round4, KeyRole::HashCoeffs}) {
    CHECK(key_role_from_name(key_role_name(role)) == role);
  }
  CHECK_THROWS_AS(key_role_from_name("nope"), std::invalid_argument);
}

TEST_CASE("four-wise hash rejects out-of-domain input") {
  FourWiseHash h(8, SeededKey(1, KeyRole::HashCoeffs));
  CHECK_THROWS_AS(h.eval(256), std::invalid_argument);
}
