#include "doctest.h"

#include <cmath>

#include "abm/fundamental.hpp"

using namespace abm;

TEST_CASE("fundamental step follows the jump rule") {
  FundamentalParams p;
  p.jump_size = 0.002;
  p.jump_prob = 0.001;
  SUBCASE("no jump above the threshold") {
    FundamentalProcess f(p);
    CHECK(f.step(0.9, 0.002) == 1000.0);
  }
  SUBCASE("jump below the threshold") {
    FundamentalProcess f(p);
    CHECK(f.step(0.0005, 0.002) == doctest::Approx(1002.0).epsilon(1e-15));
  }
  SUBCASE("zero jump keeps the value constant") {
    FundamentalProcess f(p);
    for (double u : {0.0, 0.0001, 0.5, 0.999}) CHECK(f.step(u, 0.0) == 1000.0);
  }
}

TEST_CASE("fundamental rejects jumps that would make the value non-positive") {
  FundamentalProcess f;
  CHECK_THROWS_AS(f.step(0.0, -1.0), ValidationError);
}

TEST_CASE("property: jump frequency matches the configured probability") {
  FundamentalParams p;
  p.jump_prob = 0.01;
  FundamentalProcess f(p);
  Rng rng(123);
  const int n = 200000;
  int jumps = 0;
  double prev = f.value();
  for (int i = 0; i < n; ++i) {
    const double v = f.step(rng);
    if (v != prev) ++jumps;
    CHECK(v > 0.0);
    prev = v;
  }
  // Binomial(n, 0.01): mean 2000, sd about 44.5; allow five sd.
  CHECK(std::abs(jumps - 2000) < 5 * std::sqrt(n * 0.01 * 0.99));
}

TEST_CASE("property: positive one-sided jumps make the value monotone") {
  FundamentalParams p;
  p.jump_prob = 0.05;
  p.signed_jumps = false;
  FundamentalProcess f(p);
  Rng rng(5);
  double prev = f.value();
  for (int i = 0; i < 10000; ++i) {
    const double v = f.step(rng);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("the random step always consumes the same number of draws") {
  FundamentalParams jumpy, still;
  jumpy.jump_prob = 1.0;
  still.jump_prob = 0.0;
  Rng a(9), b(9);
  FundamentalProcess fa(jumpy), fb(still);
  for (int i = 0; i < 100; ++i) {
    fa.step(a);
    fb.step(b);
  }
  CHECK(a() == b());
}
