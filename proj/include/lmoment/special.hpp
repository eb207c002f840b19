#pragma once

#include "lmoment/common.hpp"

#include <functional>
#include <vector>

namespace lmoment {

cplx complex_gamma(cplx s);
// log Gamma(s) up to a multiple of 2 pi i; the real part is log |Gamma(s)|
cplx log_gamma(cplx s);

double bessel_j(int order, double x);

// G(u) = exp(u^6) (u^4 - 1)^2
struct TestFunctionG {
  static cplx value(cplx u);
  // log of G(u), branch irrelevant (used for magnitudes)
  static cplx log_value(cplx u);
};

struct ContourSpec {
  double sigma = 0.25;
  double t_max = 3.0;
  double step = 0.005;

  void validate() const;
};

struct ContourResult {
  double value = 0;
  // rounding estimate: eps * sum |integrand| * step / pi
  double abs_error = 0;
  // |integrand| at t_max, relative to x^{-sigma}
  double tail = 0;
  bool truncation_ok = true;
};

// (1/2 pi i) int_{(sigma)} w(u) x^{-u} du for w with w(conj u) = conj w(u),
// evaluated as (1/pi) int_0^{t_max} Re(w(u) x^{-u}) dt by the trapezoid rule.
// Node values of w are cached, so repeated evaluation in x is cheap.
class ContourKernel {
 public:
  ContourKernel(ContourSpec spec, const std::function<cplx(cplx)>& w);
  ContourResult eval(double x) const;
  const ContourSpec& spec() const { return spec_; }
  const std::vector<cplx>& nodes() const { return u_; }
  const std::vector<cplx>& weights() const { return w_; }

 private:
  ContourSpec spec_;
  std::vector<cplx> u_, w_;
  double abs_w_sum_ = 0;
  double tail_w_ = 0;
};

// G(u) Gamma(1 + u)^2 / u^{k+1}
cplx vk_weight(cplx u, int k);

// V_k(x) on a line; for sigma < 0 the residue at u = 0 is added back.
// Throws NumericError when the truncation at t_max is insufficient or the
// result is not finite.
class VkKernel {
 public:
  VkKernel(int k, ContourSpec spec = {});
  ContourResult eval(double x) const;
  double operator()(double x) const { return eval(x).value; }
  int k() const { return k_; }

 private:
  int k_;
  ContourKernel line_;
};

double v_k(double x, int k, const ContourSpec& spec = {});
ContourResult v_k_detailed(double x, int k, const ContourSpec& spec = {});

// residue of G Gamma(1+u)^2 x^{-u} / u^{k+1} at u = 0
double vk_residue(double x, int k);

// log C_k(sigma), C_k(sigma) = (1/2 pi) int |G Gamma(1+u)^2 / u^{k+1}| dt on Re u = sigma
double vk_log_constant(int k, double sigma);
// min over a sigma grid of C_k(sigma) x^{-sigma}; bounds |V_k(x)| for all x > 0
double vk_majorant(double x, int k);

struct MellinCheck {
  double integral = 0, closed_form = 0, discrepancy = 0;
};

// int_0^inf J0(x) J1(x) x^{-2u} dx against its Gamma-quotient closed form
MellinCheck mellin_j0j1_check(double u);

}  // namespace lmoment
