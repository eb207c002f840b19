#pragma once

#include "lmoment/characters.hpp"
#include "lmoment/common.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace lmoment {

enum class LocalFactorKind { P1, P2, P0 };

struct LocalFactor {
  rational closed_form;
  rational series;  // exactly summed multi-index series
  bool agree() const { return closed_form == series; }
};

LocalFactor local_factor(LocalFactorKind kind, i64 p, int psi_p);
rational local_factor_closed(LocalFactorKind kind, i64 p, int psi_p);
rational local_factor_series(LocalFactorKind kind, i64 p, int psi_p);

enum class Parity { even, odd };
// sum_{n >= 0} (n+1)^j p^{-n}, optionally over n of one parity
rational poly_geom_sum(int j, i64 p, std::optional<Parity> parity = std::nullopt);

struct EulerProductValue {
  bigfloat value;
  i64 X = 0;
  RealCharacter psi;
  // log of each local factor, ascending primes (p | D first when p > X)
  std::vector<i64> primes;
  std::vector<bigfloat> per_prime_log;
  double to_double() const { return value.convert_to<double>(); }
};

// product of local factors over p <= X and over p | D
EulerProductValue euler_product(LocalFactorKind kind, const RealCharacter& psi, i64 X);
EulerProductValue frak_s1(const RealCharacter& psi, i64 X);
EulerProductValue frak_s2(const RealCharacter& psi, i64 X);

// S_1(u) = sum_{n <= X} rho1(n) (1*psi)(n) n^{-1-u}
class S1Series {
 public:
  S1Series(const RealCharacter& psi, i64 X);
  cplx operator()(cplx u) const;
  // sum a_n (-log n)^j, the j-th derivative at u = 0
  double derivative_at_zero(int j) const;
  // sum |a_n| n^{-sigma}
  double majorant(double sigma) const;

 private:
  std::vector<double> a_, logn_;
};

cplx s1_series(const RealCharacter& psi, i64 X, cplx u);

// S_2(u, v) = sum_{ab <= X^2} rho2(ab) a^{-1-u} b^{-1-v} sum_{n <= X} (1*psi)(an)(1*psi)(bn) n^{-1-u-v}
class S2Series {
 public:
  S2Series(const RealCharacter& psi, i64 X);
  cplx operator()(cplx u, cplx v) const;
  // d^{i+j}/du^i dv^j at (0, 0), exact from the coefficients
  double derivative_at_zero(int i, int j) const;

 private:
  // terms c * (an)^{-u} (bn)^{-v}, merged by (an, bn)
  std::vector<double> c_, la_, lb_;
};

cplx s2_series(const RealCharacter& psi, i64 X, cplx u, cplx v);

struct Q0Term {
  i64 p;
  rational coefficient;  // term = coefficient * log p
  double term;
};

std::vector<Q0Term> q0_terms(const RealCharacter& psi, i64 X);
double q0_logderiv(const RealCharacter& psi, i64 X);

cplx f_ab(i64 a, i64 b, const RealCharacter& psi, cplx s);
cplx alpha_D(const RealCharacter& psi, cplx s);

struct DerivativeProbe {
  cplx circle, finite_difference;
  double rel_diff = 0;
};

// f'(0) by (1/2 pi i) int f(u) du/u^2 on |u| = radius, against a central
// difference; throws NumericError if they disagree by more than tol
DerivativeProbe derivative_probe(const std::function<cplx(cplx)>& f, double radius, double tol = 1e-6);
// d^2/du dv at (0, 0) by a product circle, against a four-point difference
DerivativeProbe mixed_derivative_probe(const std::function<cplx(cplx, cplx)>& f, double radius, double tol = 1e-6);

}  // namespace lmoment
