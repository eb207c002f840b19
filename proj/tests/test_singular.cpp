#include "doctest.h"
#include "lmoment/singular.hpp"

#include "lmoment/arith.hpp"

#include <cmath>

using namespace lmoment;

TEST_CASE("geometric sums") {
  CHECK(poly_geom_sum(0, 2) == 2);
  CHECK(poly_geom_sum(1, 2) == 4);
  CHECK(poly_geom_sum(2, 2) == 12);
  CHECK(poly_geom_sum(0, 3, Parity::even) == rational(9, 8));
  CHECK(poly_geom_sum(0, 3, Parity::odd) == rational(3, 8));
  CHECK(poly_geom_sum(1, 5) == rational(25, 16));
  CHECK(poly_geom_sum(2, 5) == rational(25 * 6, 64));
  // parity halves add back to the full sum
  for (int j = 0; j <= 2; ++j)
    for (i64 p : {2, 3, 11})
      CHECK(poly_geom_sum(j, p, Parity::even) + poly_geom_sum(j, p, Parity::odd) == poly_geom_sum(j, p));
  CHECK_THROWS(poly_geom_sum(3, 2));
}

TEST_CASE("local factor examples") {
  CHECK(local_factor(LocalFactorKind::P1, 2, -1).series == rational(6, 7));
  CHECK(local_factor(LocalFactorKind::P1, 3, 0).series == rational(3, 4));
  CHECK(local_factor(LocalFactorKind::P1, 7, 1).series == rational(42, 71));
  CHECK(local_factor(LocalFactorKind::P2, 2, -1).series == rational(36, 49));
  CHECK_THROWS(local_factor(LocalFactorKind::P1, 9, 1));
}

TEST_CASE("local factor identities for p <= 10^4") {
  for (i64 p : primes_up_to(10000))
    for (int s : {-1, 0, 1})
      for (auto k : {LocalFactorKind::P1, LocalFactorKind::P2, LocalFactorKind::P0}) {
        auto lf = local_factor(k, p, s);
        REQUIRE(lf.agree());
        REQUIRE(lf.series > 0);
        REQUIRE(lf.series <= 1);
      }
}

TEST_CASE("Euler products") {
  auto c3 = kronecker_character(-3), c7 = kronecker_character(-7);
  auto s = frak_s1(c3, 2);
  CHECK(s.value == bigfloat(9) / 14);
  CHECK(s.primes == std::vector<i64>{2, 3});

  auto big = frak_s1(c3, 10000);
  CHECK(abs(big.value - bigfloat("0.03240615578207791595078220571750203179384")) < bigfloat("1e-40"));
  bigfloat lsum = 0;
  for (const auto& l : big.per_prime_log) lsum += l;
  CHECK(abs(exp(lsum) - big.value) < bigfloat("1e-14") * big.value);
  CHECK(abs(frak_s1(c7, 1000).value - bigfloat("0.02133477060446691059580516609084117799386")) < bigfloat("1e-40"));

  for (i64 D : {3, 4, 7, 8, 11, 19, 43, 67, 163}) {
    auto psi = kronecker_character(-D);
    auto s1 = frak_s1(psi, 10000), s2 = frak_s2(psi, 10000);
    CHECK(abs(s2.value - s1.value * s1.value) < bigfloat("1e-13") * s2.value);
    CHECK(s1.value > 0);
    CHECK(s1.value <= 1);
  }
  // monotone in X
  bigfloat prev = 2;
  for (i64 X : {2, 5, 10, 100, 1000, 5000}) {
    auto v = frak_s1(c3, X).value;
    CHECK(v <= prev);
    prev = v;
  }
  CHECK_THROWS(frak_s1(c3, 1));
}

TEST_CASE("S_1 series") {
  auto c3 = kronecker_character(-3), c7 = kronecker_character(-7);
  CHECK(std::abs(s1_series(c3, 1, 0.0) - 1.0) < 1e-15);
  S1Series S(c3, 200);
  CHECK(std::abs(S(0.0) - -0.4108579484523889067109562899992981153814) < 1e-13);
  CHECK(std::abs(S(0.5) - 0.4932987062389457039584057755924234619851) < 1e-13);
  CHECK(std::abs(S.derivative_at_zero(0) - S(0.0).real()) < 1e-13);
  cplx ref(0.08258084520018536441782751706415722219551, 0.233594695289188335323144442333427549315);
  CHECK(std::abs(s1_series(c7, 300, cplx(0.2, 0.3)) - ref) < 1e-13);
  // majorant sum_n tau(n) 3^omega(n) n^{-3/2}
  MultiplicativeTable t(200);
  double maj = 0;
  for (i64 n = 1; n <= 200; ++n) maj += t.tau[2][n] * std::pow(3.0, t.omega[n]) * std::pow(n, -1.5);
  CHECK(std::abs(S(0.5)) <= maj);
  CHECK(S.majorant(0.5) <= maj);
}

TEST_CASE("S_2 series") {
  auto c3 = kronecker_character(-3), c7 = kronecker_character(-7);
  CHECK(std::abs(s2_series(c3, 1, 0.0, 0.0) - 1.0) < 1e-15);
  S2Series S(c3, 10);
  CHECK(std::abs(S(0.0, 0.0) - 1.89359032135067117598118492822734368589) < 1e-12);
  CHECK(std::abs(S(0.1, 0.3) - 0.9573289562863509950990887081544810732779) < 1e-12);
  cplx ref(11.98222026338427233505235888299474919594, -7.84562189006331343098858705482505156577);
  CHECK(std::abs(s2_series(c7, 12, cplx(0, 0.2), -0.1) - ref) < 1e-11);
  S2Series S50(c3, 50);
  for (double u : {-0.1, 0.1, 0.3})
    for (double v : {-0.1, 0.1, 0.3}) CHECK(std::abs(S50(u, v) - S50(v, u)) < 1e-12 * std::max(1.0, std::abs(S50(u, v))));
  CHECK(std::abs(S50.derivative_at_zero(1, 0) - S50.derivative_at_zero(0, 1)) < 1e-10);
}

TEST_CASE("Q(0)") {
  auto c3 = kronecker_character(-3);
  CHECK(std::abs(q0_logderiv(c3, 2) - (std::log(2.0) + std::log(3.0)) / 3) < 1e-15);
  auto terms = q0_terms(c3, 2);
  REQUIRE(terms.size() == 2);
  CHECK(terms[0].coefficient == rational(1, 3));
  CHECK(terms[1].coefficient == rational(1, 3));
  for (i64 D : {3, 4, 7}) {
    auto psi = kronecker_character(-D);
    for (const auto& t : q0_terms(psi, 100000)) REQUIRE(t.coefficient > 0);
    // Q(0) is the logarithmic derivative at u = 0 of the product of
    // sum_n rho1(p^n) (1*psi)(p^n) p^{-n(1+u)}
    auto local = [&](double u) {
      double s = 0;
      for (i64 p : primes_up_to(1000)) {
        int sp = psi(p);
        double a = double(p) / (p + 1), h = 1 / (1 + a * a * sp / p), x = std::pow(double(p), -1 - u);
        double r1 = -a * (1 + sp) * h, r2 = a * a * sp * h;
        s += std::log(1 + r1 * (1 + sp) * x + r2 * (1 + sp + sp * sp) * x * x);
      }
      return s;
    };
    double h = 1e-5;
    CHECK(std::abs((local(h) - local(-h)) / (2 * h) - q0_logderiv(psi, 1000)) < 1e-6);
  }
}

TEST_CASE("Euler factors f_ab and alpha_D") {
  auto c3 = kronecker_character(-3), c7 = kronecker_character(-7);
  CHECK(f_ab(1, 1, c3, 2.0) == cplx(1.0));
  CHECK(f_ab(2, 1, c3, 2.0) == cplx(0.0));
  CHECK(std::abs(f_ab(2, 1, c7, 2.0) - 1.6) < 1e-14);
  cplx ref(4.011276591327201259003504369804655012356, 3.182831196482574451131875850580580445345);
  CHECK(std::abs(f_ab(4, 2, c7, cplx(1.5, 2)) - ref) < 1e-13);
  CHECK(std::abs(alpha_D(c3, 1.0) - 0.75) < 1e-15);
  CHECK_THROWS(f_ab(1, 1, c3, 0.5));
  for (i64 a = 1; a <= 200; ++a)
    for (i64 b = 1; b <= 200; ++b)
      REQUIRE(std::abs(f_ab(a, b, c7, 1.0)) <= double(num_divisors(a) * num_divisors(b)) + 1e-12);

  // local series quotient at p = 2 for psi mod 7, s = 2
  auto c = [](int k) { return k + 1; };
  double num = 0, den = 0;
  for (int j = 0; j < 80; ++j) {
    num += c(1 + j) * c(j) * std::pow(4.0, -j);
    den += c(j) * c(j) * std::pow(4.0, -j);
  }
  CHECK(std::abs(num / den - f_ab(2, 1, c7, 2.0).real()) < 1e-12);

  // Dirichlet series quotient at s = 3
  auto conv = conv_table(c7, 2000000);
  double sn = 0, sd = 0;
  for (i64 n = 1000000; n >= 1; --n) {
    double w = std::pow(double(n), -3.0);
    sn += double(conv[2 * n]) * conv[n] * w;
    sd += double(conv[n]) * conv[n] * w;
  }
  CHECK(std::abs(sn / sd - f_ab(2, 1, c7, 3.0).real()) < 1e-8);
}

TEST_CASE("derivative probes") {
  auto c3 = kronecker_character(-3);
  auto zero = derivative_probe([](cplx) { return cplx(2.0); }, 0.01);
  CHECK(std::abs(zero.circle) < 1e-14);
  S1Series S(c3, 200);
  auto r = derivative_probe([&](cplx u) { return S(u); }, 0.01);
  CHECK(r.rel_diff <= 1e-6);
  CHECK(std::abs(r.circle.real() - S.derivative_at_zero(1)) < 1e-10 * std::max(1.0, std::abs(S.derivative_at_zero(1))));
  S2Series S2(c3, 20);
  auto du = derivative_probe([&](cplx u) { return S2(u, 0.0); }, 0.01);
  auto dv = derivative_probe([&](cplx v) { return S2(0.0, v); }, 0.01);
  CHECK(std::abs(du.circle - dv.circle) <= 1e-10);
  auto duv = mixed_derivative_probe([&](cplx u, cplx v) { return S2(u, v); }, 0.01);
  CHECK(duv.rel_diff <= 1e-6);
  CHECK(std::abs(duv.circle.real() - S2.derivative_at_zero(1, 1)) < 1e-8 * std::max(1.0, std::abs(S2.derivative_at_zero(1, 1))));
  CHECK_THROWS_AS(derivative_probe([](cplx u) { return u; }, 0.5), std::invalid_argument);
  // a non-analytic function makes the two methods disagree
  CHECK_THROWS_AS(derivative_probe([](cplx u) { return u.real() > 0 ? u * u : -u * u; }, 0.01), NumericError);
}
