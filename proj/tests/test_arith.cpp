#include "doctest.h"
#include "lmoment/arith.hpp"

#include <cmath>
#include <random>

using namespace lmoment;

TEST_CASE("sieved tables agree with brute-force definitions") {
  MultiplicativeTable t(10000);
  for (i64 n = 1; n <= 10000; ++n) {
    if (n >= 2) {
      REQUIRE(n % t.spf[n] == 0);
      REQUIRE(is_prime(t.spf[n]));
    }
    REQUIRE(t.mu[n] == mobius(n));
    REQUIRE(t.phi[n] == euler_phi(n));
    REQUIRE(t.tau[2][n] == num_divisors(n));
    REQUIRE(t.omega[n] == i64(factorize(n).size()));
  }
  // tau_3 and tau_4 by explicit divisor sums on a sample
  for (i64 n = 1; n <= 2000; n += 13) {
    i64 t3 = 0, t4 = 0;
    for (i64 d : divisors(n)) {
      t3 += num_divisors(n / d);
      for (i64 e : divisors(n / d)) t4 += num_divisors(n / d / e);
    }
    CHECK(t.tau[3][n] == t3);
    CHECK(t.tau[4][n] == t4);
  }
}

TEST_CASE("divisor convolution with psi") {
  auto c3 = kronecker_character(-3);
  CHECK(divisor_conv_psi(c3, 1) == 1);
  CHECK(divisor_conv_psi(c3, 2) == 0);
  CHECK(divisor_conv_psi(c3, 7) == 2);
  auto tab = conv_table(c3, 5000);
  for (i64 n = 1; n <= 5000; ++n) {
    REQUIRE(tab[n] == divisor_conv_psi(c3, n));
    REQUIRE(tab[n] >= 0);
  }
}

TEST_CASE("alpha and h") {
  auto c3 = kronecker_character(-3);
  CHECK(alpha(1) == rational(1));
  CHECK(alpha(2) == rational(2, 3));
  CHECK(alpha(6) == rational(1, 2));
  CHECK(h_psi(c3, 1) == rational(1));
  CHECK(h_psi(c3, 2) == rational(9, 7));
  CHECK(h_psi(c3, 7) == rational(64, 71));
}

TEST_CASE("mollifier coefficients") {
  auto c3 = kronecker_character(-3);
  auto M = build_mollifier(c3, 100);
  CHECK(M.rho1_exact[1] == rational(1));
  CHECK(M.rho1_exact[2] == rational(0));
  CHECK(M.rho1_exact[3] == rational(-3, 4));
  CHECK(M.rho1_exact[4] == rational(-4, 7));
  CHECK(M.rho1_exact[7] == rational(-112, 71));
  CHECK(M.rho1_exact[12] == rational(3, 7));
  CHECK(M.rho1_exact[49] == rational(49, 71));
  CHECK(M.rho1_exact[98] == rational(0));
  for (i64 n = 1; n <= 100; ++n) CHECK(std::abs(M.rho1[n] - to_double(M.rho1_exact[n])) < 1e-15);

  auto M4 = build_mollifier(c3, 4);
  CHECK(M4.rho2_exact[1] == rational(995, 784));
  CHECK(M4.rho2_exact[3] == rational(-3, 2));
  CHECK(M4.rho2_exact[4] == rational(-48, 49));
  CHECK(M4.rho2_exact[9] == rational(9, 16));
  CHECK(M4.rho2_exact[12] == rational(6, 7));
  CHECK(M4.rho2_exact[16] == rational(16, 49));
  CHECK(M4.rho2_exact[2] == rational(0));
  rational r21 = 0;
  for (i64 d = 1; d <= 4; ++d) r21 += M4.rho1_exact[d] * M4.rho1_exact[d] / d;
  CHECK(M4.rho2_exact[1] == r21);
}

TEST_CASE("rho1 support and bounds") {
  for (i64 D : {-3, -4, -7, -8}) {
    auto psi = kronecker_character(D);
    auto r1 = rho1_table(psi, 100000);
    MultiplicativeTable t(100000);
    for (i64 n = 1; n <= 100000; ++n) {
      bool cubefree = true;
      for (auto [p, e] : factorize(n))
        if (e >= 3) cubefree = false;
      if (!cubefree) REQUIRE(r1[n] == 0.0);
      REQUIRE(std::abs(r1[n]) <= std::pow(3.0, t.omega[n]) + 1e-12);
    }
    for (i64 p : primes_up_to(1000)) {
      CHECK(std::abs(to_double(rho1_prime_power(p, psi(p), 1))) <= 2.0 * 9 / 7);
      CHECK(std::abs(to_double(rho1_prime_power(p, psi(p), 2))) <= 9.0 / 7);
    }
  }
}

TEST_CASE("rho2 by pair expansion matches") {
  for (i64 D : {-3, -4}) {
    auto M = build_mollifier(kronecker_character(D), 30);
    auto alt = rho2_by_pair_expansion(M);
    for (i64 a = 1; a <= 900; ++a) REQUIRE(alt[a] == M.rho2_exact[a]);
  }
}

TEST_CASE("Hecke relation on mock systems") {
  auto s = MockHeckeSystem::with_angles(10007, 1, 100, {{2, kPi / 3}, {3, kPi / 2}});
  CHECK(std::abs(s.lambda(2) * s.lambda(4)) < 1e-12);
  CHECK(std::abs(s.lambda(8) + s.lambda(2)) < 1e-12);
  CHECK(std::abs(hecke_product(s, 2, 4) - s.lambda(2) * s.lambda(4)) < 1e-12);
  CHECK(std::abs(hecke_product(s, 3, 5) - s.lambda(15)) < 1e-12);

  auto small = MockHeckeSystem::random(7, -1, 10000, 11);
  CHECK(hecke_product(small, 7, 7) == doctest::Approx(small.lambda(49)));
  CHECK(small.root_number() == -1);
  CHECK(std::sqrt(7.0) * small.lambda(7) == doctest::Approx(-1.0));

  std::mt19937_64 rng(5);
  for (int sys = 0; sys < 5; ++sys) {
    auto L = MockHeckeSystem::random(sys % 2 ? 11 : 101, sys % 2 ? 1 : -1, 10000, 100 + sys);
    auto tab = L.table(10000);
    std::uniform_int_distribution<i64> U(1, 100);
    for (int t = 0; t < 1000; ++t) {
      i64 m = U(rng), n = U(rng);
      REQUIRE(std::abs(hecke_product(L, m, n) - L.lambda(m) * L.lambda(n)) < 1e-12);
    }
    for (i64 n = 1; n <= 10000; ++n) REQUIRE(std::abs(tab[n]) <= num_divisors(n) + 1e-9);
  }
}

TEST_CASE("mollifier value and square") {
  auto c3 = kronecker_character(-3);
  auto s = MockHeckeSystem::with_angles(10007, 1, 10000, {{2, kPi / 3}, {3, kPi / 2}});
  CHECK(mollifier_value(s, build_mollifier(c3, 1)) == 1.0);
  CHECK(std::abs(mollifier_value(s, build_mollifier(c3, 4)) - 1.0) < 1e-15);
  auto r = MockHeckeSystem::random(10007, 1, 10000, 3);
  CHECK(std::abs(mollifier_value(r, build_mollifier(c3, 2)) - 1.0) < 1e-15);
  CHECK(mollifier_square_check(s, build_mollifier(c3, 1)) == 0.0);
  CHECK(mollifier_square_check(s, build_mollifier(c3, 4)) <= 1e-12);
  CHECK_THROWS(mollifier_square_check(MockHeckeSystem::random(3, 1, 100, 1), build_mollifier(c3, 4)));
}

TEST_CASE("recursion formula") {
  auto c3 = kronecker_character(-3);
  CHECK(recursion_check(c3, 1, 17));
  CHECK(recursion_check(c3, 4, 6));
  // untwisted weights break at inert and ramified primes: (1*psi)(4) = 1
  // while (1*psi)(2)^2 - 1 = -1
  CHECK_FALSE(recursion_check(c3, 2, 2));
  CHECK_FALSE(recursion_check(c3, 3, 3));
  for (i64 D : {-3, -4, -7}) {
    auto psi = kronecker_character(D);
    for (i64 b = 1; b <= 60; ++b)
      for (i64 n = 1; n <= 60; ++n) {
        REQUIRE(recursion_check_twisted(psi, b, n));
        if (gcd(b, n) == 1) REQUIRE(recursion_check(psi, b, n));
      }
  }
}
