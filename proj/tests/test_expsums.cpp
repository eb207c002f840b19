#include "doctest.h"
#include "lmoment/expsums.hpp"

#include <cmath>

using namespace lmoment;

TEST_CASE("Kloosterman sums") {
  CHECK(std::abs(kloosterman(1, 1, 2) - 1.0) < 1e-14);
  CHECK(std::abs(kloosterman(1, 1, 3) + 1.0) < 1e-14);
  CHECK(std::abs(kloosterman(1, 2, 5) - 4 * std::cos(4 * kPi / 5)) < 1e-13);
  CHECK(std::abs(kloosterman(3, 7, 30) - -0.381966011250105151795413165636) < 1e-13);
  CHECK(std::abs(kloosterman(5, 5, 49) - 3.98338621283445418618704190846) < 1e-12);
  CHECK(std::abs(kloosterman(1, 1, 1) - 1.0) < 1e-15);
  CHECK(std::abs(kloosterman(0, 0, 12) - double(euler_phi(12))) < 1e-12);
  for (i64 c = 1; c <= 120; ++c) {
    UnitTable t(c);
    for (i64 m = -5; m <= 20; ++m)
      for (i64 n = -5; n <= 20; ++n) {
        cplx s = kloosterman(t, m, n);
        REQUIRE(std::abs(s.imag()) < 1e-9);
        REQUIRE(std::abs(s - kloosterman(t, n, m)) < 1e-9);
      }
  }
}

TEST_CASE("Kloosterman sums are twisted multiplicative") {
  for (i64 c1 : {3, 4, 7, 9})
    for (i64 c2 : {5, 8, 11, 25}) {
      if (gcd(c1, c2) != 1) continue;
      for (i64 m = 1; m <= 6; ++m)
        for (i64 n = 1; n <= 6; ++n) {
          i64 i2 = modinv(c2, c1), i1 = modinv(c1, c2);
          cplx rhs = kloosterman(m, n * i2 * i2, c1) * kloosterman(m, n * i1 * i1, c2);
          REQUIRE(std::abs(kloosterman(m, n, c1 * c2) - rhs) < 1e-9);
        }
    }
}

TEST_CASE("Gauss-Kloosterman sums") {
  auto c3 = kronecker_character(-3), c4 = kronecker_character(-4), c5 = kronecker_character(5);
  cplx i(0, 1);
  CHECK(std::abs(gauss_kloosterman(c3, 1, 0, 3) - i * std::sqrt(3.0)) < 1e-14);
  CHECK(std::abs(gauss_kloosterman(c3, 1, 1, 3) + i * std::sqrt(3.0)) < 1e-14);
  CHECK(std::abs(gauss_kloosterman(c3, 2, 5, 12)) < 1e-13);
  CHECK(std::abs(gauss_kloosterman(c4, 1, 3, 20)) < 1e-13);
  CHECK(std::abs(gauss_kloosterman(c5, 1, 0, 5) - std::sqrt(5.0)) < 1e-14);
  CHECK_THROWS_AS(gauss_kloosterman(c3, 1, 1, 4), std::invalid_argument);
  ExpSumQuery q{1, 1, 3, c3};
  CHECK(std::abs(evaluate(q) + i * std::sqrt(3.0)) < 1e-14);
  q.chi.reset();
  CHECK(std::abs(evaluate(q) + 1.0) < 1e-14);
}

TEST_CASE("closed form for S_chi(m, 0; c)") {
  auto c3 = kronecker_character(-3), c8 = kronecker_character(-8);
  cplx i(0, 1);
  CHECK(std::abs(nelson_eval(c3, 1, 3) - i * std::sqrt(3.0)) < 1e-14);
  CHECK(nelson_eval(c3, 1, 9) == 0.0);
  CHECK(std::abs(nelson_eval(c3, 2, 6) - i * std::sqrt(3.0)) < 1e-14);
  CHECK(std::abs(nelson_eval(c8, 1, 8) - i * std::sqrt(8.0)) < 1e-14);
  CHECK(nelson_eval(c8, 3, 16) == 0.0);
  // trivial character gives Ramanujan sums
  auto one = trivial_character();
  CHECK(std::abs(nelson_eval(one, 1, 12) - double(mobius(12))) < 1e-14);
  CHECK(std::abs(nelson_eval(one, 6, 12) + 4.0) < 1e-14);
  CHECK_THROWS_AS(nelson_eval(c3, 1, 4), std::invalid_argument);
  CHECK_THROWS_AS(nelson_eval(c3, 0, 3), std::invalid_argument);
}

TEST_CASE("closed form agrees exhaustively") {
  auto r = nelson_sweep(12, 240, 240);
  CHECK(r.failures == 0);
  CHECK(r.max_error < 1e-9);
  CHECK(r.checked > 100000);
}

TEST_CASE("Weil bound") {
  CHECK(weil_check(1, 1, 3));
  CHECK(weil_check(0, 0, 30));
  CHECK(weil_bound(1, 1, 3) == doctest::Approx(2 * std::sqrt(3.0)));
  auto r = weil_sweep(50, 500);
  CHECK(r.failures == 0);
  CHECK(r.checked == 50 * 50 * 500);
  CHECK(r.max_error <= 1.0);
}

TEST_CASE("nu kernel") {
  auto one = trivial_character();
  CHECK(std::abs(ramanujan_nu(one, 2, 3, 5) - 1.0) < 1e-15);
  CHECK(ramanujan_nu(one, 2, 3, 2) == 0.0);
  CHECK(std::abs(ramanujan_nu(one, 2, 3, 1) - 1.0) < 1e-15);
  CHECK_THROWS_AS(ramanujan_nu(one, 4, 4, 1), std::invalid_argument);
  // nu_{c1,c2} has total mass phi(c1) phi(c2) for trivial chi
  auto t = ramanujan_nu_table(one, 6, 10);
  double mass = 0;
  for (auto v : t) mass += v.real();
  CHECK(mass == double(euler_phi(6) * euler_phi(10)));
  auto r = nu_sweep(60);
  CHECK(r.failures == 0);
  CHECK(r.max_error <= 1.0);
}

TEST_CASE("Poisson orthogonality") {
  auto w = bump_window(50);
  // fhat(0) against a fine composite Simpson rule
  double simpson = 0;
  const int N = 20000;
  for (int k = 0; k <= N; ++k) {
    double x = -50 + 100.0 * k / N;
    simpson += (k == 0 || k == N ? 1 : (k % 2 ? 4 : 2)) * w.f(x);
  }
  simpson *= 100.0 / N / 3;
  CHECK(std::abs(w.fhat(0) - simpson) < 1e-10);

  struct Spec {
    i64 disc, c1, c2;
  };
  for (Spec s : {Spec{1, 2, 3}, Spec{-3, 3, 6}, Spec{1, 4, 6}, Spec{-4, 4, 12}}) {
    auto chi = s.disc == 1 ? trivial_character() : kronecker_character(s.disc);
    auto r = poisson_orthogonality_check(chi, s.c1, s.c2, w);
    CHECK(r.discrepancy <= 1e-6);
  }
  auto z = poisson_orthogonality_check(trivial_character(), 2, 3, zero_window(50));
  CHECK(z.discrepancy == 0.0);
}

TEST_CASE("factored Kloosterman sums") {
  FactoredKloosterman K({360, 1009 * 12, 49 * 101});
  for (i64 c : {1, 5, 8, 9, 45, 360, 1009 * 12, 49 * 101, 1009 * 4})
    for (i64 m : {1, 2, 7, 30})
      for (i64 n : {1, 5, 12, -3}) REQUIRE(std::abs(K(m, n, c) - kloosterman(m, n, c)) < 1e-9);
  CHECK_THROWS_AS(K(1, 1, 11), std::out_of_range);
}
