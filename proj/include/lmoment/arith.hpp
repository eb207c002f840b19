#pragma once

#include "lmoment/characters.hpp"
#include "lmoment/common.hpp"

#include <cstdint>
#include <vector>

namespace lmoment {

struct MultiplicativeTable {
  i64 limit = 0;
  std::vector<i64> spf;
  std::vector<int> mu;
  std::vector<i64> phi;
  // tau[k][n] = tau_k(n) for k = 1..4 (tau[0] unused)
  std::vector<std::vector<i64>> tau;
  std::vector<int> omega;

  explicit MultiplicativeTable(i64 N);
};

struct MockHeckeSystem {
  i64 level = 2;
  int sign = 1;
  // theta[i] for the i-th prime in primes (the level excluded)
  std::vector<i64> primes;
  std::vector<double> theta;

  // random angles in (0, pi) for primes up to pmax
  static MockHeckeSystem random(i64 q, int sign, i64 pmax, std::uint64_t seed);
  // explicit angles, given as (p, theta_p) pairs; other primes get theta = pi/2
  static MockHeckeSystem with_angles(i64 q, int sign, i64 pmax, const std::vector<std::pair<i64, double>>& angles);

  double angle(i64 p) const;
  double lambda_prime_power(i64 p, int k) const;
  double lambda(i64 n) const;
  // table of lambda(n) for n <= N
  std::vector<double> table(i64 N) const;
  int root_number() const { return sign; }
};

struct MollifierCoeffs {
  i64 X = 1;
  RealCharacter psi;
  std::vector<double> rho1;  // index 0..X
  std::vector<double> rho2;  // index 0..X^2
  // exact values when small enough (rho1: X <= 1000, rho2: X <= 100)
  std::vector<rational> rho1_exact;
  std::vector<rational> rho2_exact;
};

int divisor_conv_psi(const RealCharacter& psi, i64 n);
rational alpha(i64 n);
rational h_psi(const RealCharacter& psi, i64 n);
// rho1(p^k) as a function of p and psi(p)
rational rho1_prime_power(i64 p, int psi_p, int k);
rational rho1_exact(const RealCharacter& psi, i64 n);

std::vector<double> rho1_table(const RealCharacter& psi, i64 X);
MollifierCoeffs build_mollifier(const RealCharacter& psi, i64 X);

double hecke_product(const MockHeckeSystem& lambda, i64 m, i64 n);
double mollifier_value(const MockHeckeSystem& lambda, const MollifierCoeffs& M);
// |M^2 - sum rho2(a) lambda(a)/sqrt(a)|; needs level > X so that the level
// never divides two mollifier indices
double mollifier_square_check(const MockHeckeSystem& lambda, const MollifierCoeffs& M);
// the recursion with Moebius weights mu(g) only, as printed
bool recursion_check(const RealCharacter& psi, i64 b, i64 n);
// the same recursion with weights mu(g) psi(g)
bool recursion_check_twisted(const RealCharacter& psi, i64 b, i64 n);

// rho2 recomputed by expanding M^2 over pairs (a, b) with the Hecke relation
std::vector<rational> rho2_by_pair_expansion(const MollifierCoeffs& M);

}  // namespace lmoment
