#pragma once

#include "lmoment/arith.hpp"
#include "lmoment/characters.hpp"
#include "lmoment/common.hpp"
#include "lmoment/expsums.hpp"
#include "lmoment/special.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace lmoment {

struct MomentConfig {
  i64 q = 0;
  RealCharacter psi;
  i64 X = 1;
  int k = 1;
  i64 n_max = 1000;
  i64 c_max = 10;
  ContourSpec contour{};
  double Q = 0;  // qD / (4 pi^2)

  // q prime, gcd(q, D) = 1, psi nontrivial, k in {1, 2}
  static MomentConfig make(i64 q, const RealCharacter& psi, i64 X, int k, i64 n_max = 1000, i64 c_max = 10,
                           ContourSpec contour = {});
  // k! (1 + (-1)^{k+1} psi(q))
  double prefactor() const;
};

// Phi_k(y) = sum_d psi(d) V_k(d^2 y) / d
class PhiFunction {
 public:
  PhiFunction(const RealCharacter& psi, int k, ContourSpec spec = {});
  // direct sum over d <= N0, Euler-Maclaurin tail over residue classes mod D
  double dsum(double y) const;
  // (1/2 pi i) int G Gamma(1+u)^2 L(1+2u, psi) y^{-u} du / u^{k+1}
  double contour(double y) const;
  i64 head_length() const { return n0_; }
  // |Phi_k(y)| <= exp(log_constant(sigma)) y^{-sigma}, sigma > 0
  double log_constant(double sigma) const;

 private:
  RealCharacter psi_;
  int k_;
  i64 n0_;
  VkKernel v_;
  std::vector<ContourKernel> deriv_;  // F^{(1)}, F^{(3)}, F^{(5)}, F^{(7)} kernels
  std::unique_ptr<ContourKernel> line_;
  double f(double t, double y) const;
};

// Phi_k tabulated on a uniform grid in log y, read by 6-point interpolation
class PhiTable {
 public:
  PhiTable(const PhiFunction& phi, double y_min, double y_max, double h = 0.002);
  double operator()(double y) const;

 private:
  double l0_, h_;
  std::vector<double> v_;
};

struct TailCap {
  double value = 0;
  double cap = 0;
  bool truncation_ok = true;  // cap <= 1e-10 max(1, |value|)
};

// sum_{n > N} tau_j(n) n^{-s}, rigorous for s > 1, from sum_{n <= x} tau_j(n)/n <= (1 + log x)^j
double divisor_tail_bound(int j, double s, double N);

TailCap afe_lambda_derivative(const MockHeckeSystem& lambda, const MomentConfig& cfg);

struct PeterssonPair {
  double value = 0;
  double tail_cap = 0;
};

// Petersson right-hand side 1_{m=n} - (2 pi / q) sum_{c <= c_max} S(m, n; cq) J_1(4 pi sqrt(mn)/cq) / c
class PeterssonKernel {
 public:
  PeterssonKernel(i64 q, i64 c_max);
  PeterssonPair operator()(i64 m, i64 n) const;
  // the rigorous bound on the c > C terms
  double tail_cap(i64 m, i64 n, i64 C) const;

 private:
  i64 q_, c_max_;
  FactoredKloosterman kl_;
};

PeterssonPair petersson_pair(i64 m, i64 n, const MomentConfig& cfg);

double first_moment_diagonal(const MomentConfig& cfg);
// the same sum without the prefactor
double first_moment_diagonal_core(const MomentConfig& cfg);

struct FirstMomentContour {
  double full = 0, residue = 0, shifted = 0;
  double shifted_sigma = -0.4;
  double abs_error = 0;  // rounding estimate of full - residue - shifted
};

FirstMomentContour first_moment_contour(const MomentConfig& cfg);
FirstMomentContour first_moment_contour_core(const MomentConfig& cfg);
double first_moment_main_term(const MomentConfig& cfg);

TailCap second_moment_diagonal(const MomentConfig& cfg);

struct TcValue {
  double value = 0;
  // sum of |term| with |S| replaced by the Weil bound and |J_1(x)| by x/2
  double majorant = 0;
  i64 m_max = 0;
};

// T(c) with m, n <= cfg.n_max
TcValue t_c_kernel(i64 c, i64 a, i64 b, i64 g, i64 d1, i64 d, const MomentConfig& cfg);

struct EkEstimate {
  double value = 0;
  double tail_cap = 0;  // c > c_max, for the m, n <= n_max truncation
  double bound_shape = 0;
  i64 c_max = 0;
};

// c-sum to c_max; throws std::length_error above the cost budget
EkEstimate e_k_estimate(const MomentConfig& cfg, i64 c_max, double budget = 5e9);

struct MomentReport {
  double diagonal = 0;
  double contour = 0;
  double residue_main = 0;
  double shifted_tail = 0;
  double petersson_tail = 0;
  double petersson_cap = 0;
  bool petersson_computed = false;
  double main_term_prediction = 0;
  std::map<std::string, double> discrepancies;
};

// first-moment pipeline; the off-diagonal Petersson piece is computed only
// when X n_max c_max (q + c_max) <= budget
MomentReport first_moment_report(const MomentConfig& cfg, double budget = 2e9);

}  // namespace lmoment
