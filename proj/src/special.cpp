#include "lmoment/special.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace lmoment {

namespace {

constexpr double kBernoulli[] = {1.0 / 6,      -1.0 / 30,        1.0 / 42, -1.0 / 30,
                                 5.0 / 66,     -691.0 / 2730,    7.0 / 6,  -3617.0 / 510};

bool is_pole(cplx s) { return s.imag() == 0 && s.real() <= 0 && s.real() == std::floor(s.real()); }

// Stirling series for log Gamma, |s| >= 15 and Re s > 0
cplx stirling(cplx s) {
  const cplx s2 = 1.0 / (s * s);
  cplx pw = 1.0 / s, corr = 0;
  for (int k = 1; k <= 8; ++k) {
    corr += kBernoulli[k - 1] / double(2 * k * (2 * k - 1)) * pw;
    pw *= s2;
  }
  return (s - 0.5) * std::log(s) - s + 0.5 * std::log(2 * kPi) + corr;
}

}  // namespace

cplx log_gamma(cplx s) {
  if (is_pole(s)) throw NumericError("log_gamma: pole at a non-positive integer");
  if (s.real() < 0.5) return std::log(kPi) - std::log(std::sin(kPi * s)) - log_gamma(1.0 - s);
  cplx acc = 0;
  while (s.real() < 15) {
    acc += std::log(s);
    s += 1.0;
  }
  return stirling(s) - acc;
}

cplx complex_gamma(cplx s) {
  if (is_pole(s)) throw NumericError("complex_gamma: pole at a non-positive integer");
  if (s.real() < 0.5) return kPi / (std::sin(kPi * s) * complex_gamma(1.0 - s));
  cplx prod = 1;
  while (s.real() < 15) {
    prod *= s;
    s += 1.0;
  }
  return std::exp(stirling(s)) / prod;
}

double bessel_j(int order, double x) {
  if (order != 0 && order != 1) throw std::invalid_argument("bessel_j: order must be 0 or 1");
  if (!(x >= 0)) throw std::invalid_argument("bessel_j: x >= 0");
  if (x == 0) return order == 0 ? 1.0 : 0.0;
  return boost::math::cyl_bessel_j(order, x);
}

cplx TestFunctionG::value(cplx u) {
  cplx u2 = u * u, u4 = u2 * u2;
  cplx p = u4 - 1.0;
  return std::exp(u4 * u2) * p * p;
}

cplx TestFunctionG::log_value(cplx u) {
  cplx u2 = u * u, u4 = u2 * u2;
  return u4 * u2 + 2.0 * std::log(u4 - 1.0);
}

void ContourSpec::validate() const {
  if (!(t_max >= 2)) throw std::invalid_argument("ContourSpec: t_max >= 2");
  if (!(step > 0 && step <= 0.01)) throw std::invalid_argument("ContourSpec: 0 < step <= 0.01");
  if (!(sigma > -1.5 && sigma < 3)) throw std::invalid_argument("ContourSpec: sigma in (-3/2, 3)");
  if (std::abs(sigma) < 1e-9 || std::abs(sigma + 1) < 1e-9)
    throw std::invalid_argument("ContourSpec: sigma on a pole of the integrand");
}

ContourKernel::ContourKernel(ContourSpec spec, const std::function<cplx(cplx)>& w) : spec_(spec) {
  spec_.validate();
  const i64 n = i64(std::llround(spec_.t_max / spec_.step));
  u_.resize(n + 1);
  w_.resize(n + 1);
  for (i64 j = 0; j <= n; ++j) {
    u_[j] = cplx(spec_.sigma, j * spec_.step);
    double tw = (j == 0 || j == n) ? 0.5 : 1.0;
    w_[j] = tw * spec_.step / kPi * w(u_[j]);
    abs_w_sum_ += std::abs(w_[j]);
  }
  tail_w_ = std::abs(w(u_[n]));
}

ContourResult ContourKernel::eval(double x) const {
  if (!(x > 0)) throw std::invalid_argument("ContourKernel: x > 0");
  const double lx = std::log(x), scale = std::exp(-spec_.sigma * lx);
  const cplx rot = std::polar(1.0, -spec_.step * lx);
  CompensatedSum<double> s;
  cplx z = 1;
  for (size_t j = 0; j < w_.size(); ++j) {
    if (j % 64 == 0) z = std::polar(1.0, -double(j) * spec_.step * lx);
    s.add((w_[j] * z).real());
    z *= rot;
  }
  ContourResult r;
  r.value = scale * s.value();
  r.abs_error = 8 * std::numeric_limits<double>::epsilon() * abs_w_sum_ * scale;
  r.tail = tail_w_ * scale;
  r.truncation_ok = r.tail <= 1e-14;
  return r;
}

cplx vk_weight(cplx u, int k) {
  cplx g = complex_gamma(1.0 + u);
  return TestFunctionG::value(u) * g * g / std::pow(u, k + 1);
}

double vk_residue(double x, int k) {
  // [u^k] exp(-(2 gamma + log x) u + zeta(2) u^2 + ...), G = 1 + O(u^4)
  const double a1 = -(2 * kEulerGamma + std::log(x)), a2 = kPi * kPi / 6;
  switch (k) {
    case 0:
      return 1.0;
    case 1:
      return a1;
    case 2:
      return a2 + 0.5 * a1 * a1;
    default:
      throw std::invalid_argument("vk_residue: k in {0, 1, 2}");
  }
}

VkKernel::VkKernel(int k, ContourSpec spec)
    : k_(k), line_(spec, [k](cplx u) { return vk_weight(u, k); }) {
  if (k < 0 || k > 2) throw std::invalid_argument("VkKernel: k in {0, 1, 2}");
}

ContourResult VkKernel::eval(double x) const {
  ContourResult r = line_.eval(x);
  if (!r.truncation_ok) throw NumericError("v_k: integrand at t_max exceeds 1e-14; truncation insufficient");
  if (!std::isfinite(r.value) || !std::isfinite(r.abs_error)) throw NumericError("v_k: overflow on the contour");
  if (line_.spec().sigma < 0) r.value += vk_residue(x, k_);
  return r;
}

ContourResult v_k_detailed(double x, int k, const ContourSpec& spec) { return VkKernel(k, spec).eval(x); }

double v_k(double x, int k, const ContourSpec& spec) { return v_k_detailed(x, k, spec).value; }

namespace {

constexpr std::array<double, 12> kMajorantSigmas = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5};

double log_constant_uncached(int k, double sigma) {
  // trapezoid in log space over t in [0, T]; |integrand| is even in t
  const double T = 5 * sigma + 4, h = 0.001;
  const i64 n = i64(T / h);
  std::vector<double> lv(n + 1);
  double mx = -std::numeric_limits<double>::infinity();
  for (i64 j = 0; j <= n; ++j) {
    cplx u(sigma, j * h);
    lv[j] = TestFunctionG::log_value(u).real() + 2 * log_gamma(1.0 + u).real() - (k + 1) * std::log(std::abs(u));
    mx = std::max(mx, lv[j]);
  }
  CompensatedSum<double> s;
  for (i64 j = 0; j <= n; ++j) s.add((j == 0 || j == n ? 0.5 : 1.0) * std::exp(lv[j] - mx));
  // (1/2 pi) * 2 * int_0^T
  return mx + std::log(s.value() * h / kPi);
}

const std::array<std::array<double, kMajorantSigmas.size()>, 3>& log_constant_table() {
  static const auto table = [] {
    std::array<std::array<double, kMajorantSigmas.size()>, 3> t{};
    for (int k = 0; k <= 2; ++k)
      for (size_t i = 0; i < kMajorantSigmas.size(); ++i) t[k][i] = log_constant_uncached(k, kMajorantSigmas[i]);
    return t;
  }();
  return table;
}

}  // namespace

double vk_log_constant(int k, double sigma) {
  if (k < 0 || k > 2) throw std::invalid_argument("vk_log_constant: k in {0, 1, 2}");
  if (!(sigma > 0)) throw std::invalid_argument("vk_log_constant: sigma > 0");
  return log_constant_uncached(k, sigma);
}

double vk_majorant(double x, int k) {
  if (k < 0 || k > 2) throw std::invalid_argument("vk_majorant: k in {0, 1, 2}");
  if (!(x > 0)) throw std::invalid_argument("vk_majorant: x > 0");
  const auto& t = log_constant_table()[k];
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < kMajorantSigmas.size(); ++i) best = std::min(best, t[i] - kMajorantSigmas[i] * std::log(x));
  return std::exp(best);
}

namespace {

// Hankel coefficients a_k(nu) for k = 0..K
std::vector<double> hankel_coeffs(int nu, int K) {
  std::vector<double> a(K + 1);
  const double mu = 4.0 * nu * nu;
  a[0] = 1;
  for (int k = 1; k <= K; ++k) a[k] = a[k - 1] * (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0);
  return a;
}

// I(s) = int_A^inf x^{-s} e^{2ix} dx by repeated integration by parts
cplx osc_tail(double s, double A, int depth) {
  cplx sum = 0, coef = 1;
  const cplx e = std::polar(1.0, 2 * A);
  const cplx two_i(0, 2);
  double ss = s;
  for (int d = 0; d < depth; ++d) {
    sum += coef * (-std::pow(A, -ss) * e / two_i);
    coef *= ss / two_i;
    ss += 1;
  }
  return sum;
}

}  // namespace

MellinCheck mellin_j0j1_check(double u) {
  if (!(u > 0 && u < 0.5)) throw std::domain_error("mellin_j0j1_check: the integral converges only for 0 < u < 1/2");
  auto f = [u](double x) { return bessel_j(0, x) * bessel_j(1, x) * std::pow(x, -2 * u); };
  GaussLegendre gl(30);
  CompensatedSum<double> head;
  // geometric panels towards the x^{1-2u} endpoint, then unit panels
  for (int j = 60; j >= 1; --j) head.add(gl.integrate(f, std::ldexp(1.0, -j), std::ldexp(1.0, -j + 1)));
  const int A = 500;
  for (int j = 1; j < A; ++j) head.add(gl.integrate(f, j, j + 1));

  // J0 J1 = (1/(pi x)) [-(P0 P1 - Q0 Q1) cos 2x + (P0 Q1 + Q0 P1) sin 2x + (P0 Q1 - Q0 P1)]
  const int K = 12;
  auto a0 = hankel_coeffs(0, K), a1 = hankel_coeffs(1, K);
  // P = sum (-1)^k a_{2k} x^{-2k}, Q = sum (-1)^k a_{2k+1} x^{-2k-1}, as coefficient arrays in 1/x
  auto series = [K](const std::vector<double>& a, bool odd) {
    std::vector<double> c(K + 1, 0.0);
    for (int j = odd ? 1 : 0; j <= K; j += 2) c[j] = ((j / 2) % 2 ? -1.0 : 1.0) * a[j];
    return c;
  };
  auto P0 = series(a0, false), Q0 = series(a0, true), P1 = series(a1, false), Q1 = series(a1, true);
  auto mul = [K](const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> z(K + 1, 0.0);
    for (int i = 0; i <= K; ++i)
      for (int j = 0; i + j <= K; ++j) z[i + j] += x[i] * y[j];
    return z;
  };
  auto p0p1 = mul(P0, P1), q0q1 = mul(Q0, Q1), p0q1 = mul(P0, Q1), q0p1 = mul(Q0, P1);
  CompensatedSum<double> tail;
  for (int j = 0; j <= K; ++j) {
    const double s = 1 + j + 2 * u;
    const double cc = -(p0p1[j] - q0q1[j]), sc = p0q1[j] + q0p1[j], nc = p0q1[j] - q0p1[j];
    cplx I = osc_tail(s, A, 12);
    tail.add(cc * I.real() + sc * I.imag());
    if (nc != 0) tail.add(nc * std::pow(double(A), 1 - s) / (s - 1));
  }
  MellinCheck r;
  r.integral = head.value() + tail.value() / kPi;
  r.closed_form = (complex_gamma(0.5 + u) * complex_gamma(1.0 - u) /
                   (2 * std::sqrt(kPi) * complex_gamma(1.0 + u) * complex_gamma(1.0 + u)))
                      .real();
  r.discrepancy = std::abs(r.integral - r.closed_form);
  return r;
}

}  // namespace lmoment
