#pragma once

#include "lmoment/characters.hpp"
#include "lmoment/common.hpp"

#include <vector>

namespace lmoment {

// exp(4 - 1/((t - 1)(2 - t))) on 1 < t < 2, peak value 1 at t = 3/2
double bump_template(double t);

enum class WindowShape { bump, plateau };

// f(m, n) = w(m/M) w(n/N), with w the bump template or the indicator of [1, 2]
struct TensorWindow {
  double M = 1, N = 1;
  WindowShape shape = WindowShape::bump;
  double scale = 1;

  double weight(double t) const;
  double operator()(double m, double n) const { return scale * weight(m / M) * weight(n / N); }
  // P in m^i n^j f^{(ij)} << P^{i+j}; 1 for the fixed template
  double flatness() const { return 1; }
};

struct ShiftedConvSpec {
  i64 a = 1, b = 1, h = 1;
  RealCharacter psi1, psi2;
  TensorWindow window;

  // a, b >= 1, h != 0, coprime moduli, psi1 psi2 nontrivial
  static ShiftedConvSpec make(i64 a, i64 b, i64 h, const RealCharacter& psi1, const RealCharacter& psi2,
                              TensorWindow window);
  RealCharacter psi() const { return product(psi1, psi2); }
};

// sum over am - bn = h of (psi1*psi2)(m) (1*psi)(n) f(m, n)
double shifted_conv_bruteforce(const ShiftedConvSpec& spec);

struct FrakS {
  cplx value;
  double tail_cap = 0;  // bound on the terms l > l_max
  i64 l_max = 0;
};

// S_chi(h, 0; l) with h of either sign
cplx ramanujan_gauss(const RealCharacter& chi, i64 h, i64 l);

FrakS frak_s_abh(i64 a, i64 b, i64 h, const RealCharacter& psi1, const RealCharacter& psi2, i64 l_max);

// (1/ab) int f((y + h)/a, y/b) dy
double main_term_integral(const ShiftedConvSpec& spec);

struct PropositionReport {
  double bruteforce = 0;
  double main_term = 0;
  double frak_s = 0;
  double frak_s_cap = 0;
  double integral = 0;
  double L1 = 0;
  double rel_error = 0;
  double error_shape = 0;  // D P^{5/4} (abMN)^{1/4} (aM + bN)^{1/4}
};

// budget caps the number of n visited by the brute force
PropositionReport proposition_check(const ShiftedConvSpec& spec, i64 l_max = 4000, double budget = 1e8);

struct TrendReport {
  std::vector<double> rungs;
  std::vector<PropositionReport> reports;
  bool non_increasing = false;
};

// M = rung and N = rung a/b, so that the line am - bn = h crosses the window
TrendReport proposition_trend(i64 a, i64 b, i64 h, const RealCharacter& psi1, const RealCharacter& psi2,
                              const std::vector<double>& rungs, i64 l_max = 4000);

// Voronoi windows g(x) = w(x/X) with the bump template
struct VoronoiCheck {
  cplx lhs, main, dual;
  double discrepancy = 0;
  i64 dual_terms = 0;
  double dual_tail = 0;  // largest |term| among the last tenth of the dual sum
};

// sum (1*psi)(n) e(an/c) g(n) against rho1(a, c) L(1, psi) int g + T1(a, c);
// dual_truncation 0 picks the default scale
VoronoiCheck voronoi_check(const RealCharacter& psi, i64 a, i64 c, double X, i64 dual_truncation = 0);

struct Voronoi2Check {
  std::vector<i64> a_values;
  cplx phase;                     // least-squares eps_l
  double unimodularity_error = 0;  // | |eps| - 1 |
  double discrepancy = 0;          // max over a of the residual with the fitted phase
  std::vector<cplx> lhs, main, dual_without_phase;
  i64 dual_terms = 0;
  double dual_tail = 0;
};

Voronoi2Check voronoi2_check(const RealCharacter& psi1, const RealCharacter& psi2, const std::vector<i64>& a_values,
                             i64 ell, double X, i64 dual_truncation = 0);

}  // namespace lmoment
