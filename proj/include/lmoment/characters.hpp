#pragma once

#include "lmoment/common.hpp"

#include <vector>

namespace lmoment {

// Real primitive character attached to a fundamental discriminant. The
// trivial character has disc = modulus = 1.
struct RealCharacter {
  i64 modulus = 1;
  i64 disc = 1;
  std::vector<int> value_table{1};
  bool is_odd = false;
  bool is_primitive = true;

  int operator()(i64 n) const { return value_table[mod(n, modulus)]; }
};

int kronecker(i64 d, i64 n);
bool is_fundamental_discriminant(i64 d);

RealCharacter trivial_character();
RealCharacter kronecker_character(i64 disc);

// Prime discriminants whose product is disc (e.g. -15 -> {-3, 5}).
std::vector<i64> prime_discriminants(i64 disc);

// Component of psi built from the prime discriminants whose modulus divides m.
RealCharacter component(const RealCharacter& psi, i64 m);
RealCharacter product(const RealCharacter& a, const RealCharacter& b);

// Brute-force checks of the RealCharacter invariants.
bool brute_is_primitive(i64 modulus, const std::vector<int>& table);
bool check_invariants(const RealCharacter& psi);

std::vector<RealCharacter> enumerate_odd_real_primitive(i64 d_max);
// every real primitive character of modulus <= d_max, trivial included
std::vector<RealCharacter> enumerate_real_primitive(i64 d_max);

int char_value(const RealCharacter& psi, i64 n);

cplx gauss_sum(const RealCharacter& psi);

// L(s, psi) via Hurwitz zeta with Euler-Maclaurin tails.
cplx l_value(const RealCharacter& psi, cplx s, double rel_tol = 1e-12);

// (1*psi)(n) for 0 <= n <= N (entry 0 unused)
std::vector<int> conv_table(const RealCharacter& psi, i64 N);
// (psi1*psi2)(n) for 0 <= n <= N
std::vector<int> conv_table(const RealCharacter& psi1, const RealCharacter& psi2, i64 N);

enum class LMethod { direct_series, finite_sum_lemma };

struct LValueReport {
  double L1 = 0;
  // finite sums over n <= D^2
  double L1_prime = 0;
  double L1_double_prime = 0;
  LMethod method = LMethod::finite_sum_lemma;
  // bounds on |lemma value - true value| for L' and L''
  double est_error = 0;
  double est_error_second = 0;
  // Cauchy-circle derivatives of l_value
  double L1_prime_direct = 0;
  double L1_double_prime_direct = 0;
  // L(1) (log D)^2
  double lemma_scale = 0;
};

LValueReport l1_derivatives(const RealCharacter& psi);

// Taylor coefficients of L(s) at s = 1 up to order 2, via a Cauchy circle
struct LTaylor {
  double c0, c1, c2;  // L, L', L''
};
LTaylor l_taylor_at_one(const RealCharacter& psi);

double lacunarity_sum(const RealCharacter& psi, double x);
double prime_sum_split(const RealCharacter& psi, double x);

}  // namespace lmoment
