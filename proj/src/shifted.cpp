#include "lmoment/shifted.hpp"

#include "lmoment/expsums.hpp"
#include "lmoment/special.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lmoment {

double bump_template(double t) {
  if (!(t > 1 && t < 2)) return 0.0;
  return std::exp(4.0 - 1.0 / ((t - 1) * (2 - t)));
}

double TensorWindow::weight(double t) const {
  if (shape == WindowShape::plateau) return (t >= 1 && t <= 2) ? 1.0 : 0.0;
  return bump_template(t);
}

ShiftedConvSpec ShiftedConvSpec::make(i64 a, i64 b, i64 h, const RealCharacter& psi1, const RealCharacter& psi2,
                                      TensorWindow window) {
  if (a < 1 || b < 1) throw std::invalid_argument("ShiftedConvSpec: a, b >= 1");
  if (h == 0) throw std::invalid_argument("ShiftedConvSpec: h != 0");
  if (gcd(psi1.modulus, psi2.modulus) != 1) throw std::invalid_argument("ShiftedConvSpec: moduli not coprime");
  if (psi1.modulus * psi2.modulus == 1) throw std::invalid_argument("ShiftedConvSpec: psi trivial");
  if (!(window.M > 0 && window.N > 0)) throw std::invalid_argument("ShiftedConvSpec: M, N > 0");
  return {a, b, h, psi1, psi2, window};
}

double shifted_conv_bruteforce(const ShiftedConvSpec& s) {
  const auto& w = s.window;
  const i64 n_lo = std::max<i64>(1, i64(std::ceil(w.N))), n_hi = i64(std::floor(2 * w.N));
  if (n_hi < n_lo) return 0.0;
  const i64 m_hi = (s.h + s.b * n_hi) / s.a + 1;
  if (m_hi < 1) return 0.0;
  auto A = conv_table(s.psi1, s.psi2, m_hi);
  auto B = conv_table(s.psi(), n_hi);
  return block_reduce(n_hi - n_lo + 1, 4096, [&](i64 lo, i64 hi) {
    CompensatedSum<double> acc;
    for (i64 i = lo; i < hi; ++i) {
      const i64 n = n_lo + i, num = s.h + s.b * n;
      if (num < s.a || num % s.a) continue;
      const i64 m = num / s.a;
      const double f = w(double(m), double(n));
      if (f != 0) acc.add(double(A[m]) * B[n] * f);
    }
    return acc.value();
  });
}

cplx ramanujan_gauss(const RealCharacter& chi, i64 h, i64 l) {
  if (h == 0) throw std::invalid_argument("ramanujan_gauss: h != 0");
  if (h > 0) return nelson_eval(chi, h, l);
  return double(chi(-1)) * nelson_eval(chi, -h, l);
}

// sum_{l > L} gcd(h, l) / l^2 <= sum_{g | h} (1/g) sum_{j > L/g} j^{-2}
static double gcd_tail(i64 h, i64 L) {
  double t = 0;
  for (i64 g : divisors(h < 0 ? -h : h)) {
    const i64 J = L / g;
    t += (J >= 1 ? 1.0 / double(J) : kPi * kPi / 6) / double(g);
  }
  return t;
}

FrakS frak_s_abh(i64 a, i64 b, i64 h, const RealCharacter& psi1, const RealCharacter& psi2, i64 l_max) {
  if (l_max < 1) throw std::invalid_argument("frak_s_abh: l_max >= 1");
  if (a < 1 || b < 1 || h == 0) throw std::invalid_argument("frak_s_abh: a, b >= 1 and h != 0");
  const auto psi = product(psi1, psi2);
  const i64 D1 = psi1.modulus, D2 = psi2.modulus, D = D1 * D2;
  const cplx t1 = gauss_sum(psi1), t2 = gauss_sum(psi2), t = gauss_sum(psi);
  CompensatedSum<cplx> acc;
  for (i64 l = 1; l <= l_max; ++l) {
    const i64 ga = gcd(a, l), gb = gcd(b, l);
    const i64 ap = a / ga, bp = b / gb, la = l / ga, lb = l / gb;
    const bool full = lb % D == 0;
    cplx s = 0;
    // on units mod l with D | l, psi psi1 agrees with psi2 and psi psi2 with psi1
    if (la % D1 == 0) {
      const cplx c = t1 * double(psi1(-ap) * psi2(la / D1));
      s += c * double(psi(lb)) * ramanujan_gauss(psi1, h, l);
      if (full) s += c * t * double(psi(bp)) * ramanujan_gauss(psi2, h, l);
    }
    if (la % D2 == 0) {
      const cplx c = t2 * double(psi2(-ap) * psi1(la / D2));
      s += c * double(psi(lb)) * ramanujan_gauss(psi2, h, l);
      if (full) s += c * t * double(psi(bp)) * ramanujan_gauss(psi1, h, l);
    }
    if (s != 0.0) acc.add(s / (double(la) * double(lb)));
  }
  // |S_chi(h, 0; l)| <= sqrt(mod chi) gcd(h, l) and l_a' l_b' >= l^2 / ab
  const double k0 = double(D1 + D2 + 2 * D) * double(a) * double(b);
  return {acc.value(), k0 * gcd_tail(h, l_max), l_max};
}

double main_term_integral(const ShiftedConvSpec& s) {
  const auto& w = s.window;
  const double lo = std::max(s.a * w.M - s.h, s.b * w.N), hi = std::min(2 * s.a * w.M - s.h, 2 * s.b * w.N);
  if (!(hi > lo) || w.scale == 0) return 0.0;
  auto f = [&](double y) { return w((y + s.h) / s.a, y / s.b); };
  double I;
  if (w.shape == WindowShape::plateau) {
    I = w.scale * (hi - lo);
  } else {
    double err = 0;
    I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 20, 1e-12, &err);
    if (err > 1e-8 * std::abs(I) + 1e-300) throw NumericError("main_term_integral: quadrature did not converge");
  }
  return I / (double(s.a) * double(s.b));
}

PropositionReport proposition_check(const ShiftedConvSpec& s, i64 l_max, double budget) {
  const auto& w = s.window;
  if (w.N + 1 > budget) throw std::length_error("proposition_check: enumeration over budget");
  PropositionReport r;
  const auto psi = s.psi();
  r.bruteforce = shifted_conv_bruteforce(s);
  auto fs = frak_s_abh(s.a, s.b, s.h, s.psi1, s.psi2, l_max);
  r.frak_s = fs.value.real();
  r.frak_s_cap = fs.tail_cap;
  r.integral = main_term_integral(s);
  r.L1 = l_value(psi, 1.0).real();
  r.main_term = r.L1 * r.L1 * r.frak_s * r.integral;
  const double diff = std::abs(r.bruteforce - r.main_term);
  r.rel_error = diff == 0 ? 0.0 : diff / std::abs(r.bruteforce);
  const double P = w.flatness();
  r.error_shape = double(psi.modulus) * std::pow(P, 1.25) * std::pow(double(s.a * s.b) * w.M * w.N, 0.25) *
                  std::pow(s.a * w.M + s.b * w.N, 0.25);
  return r;
}

TrendReport proposition_trend(i64 a, i64 b, i64 h, const RealCharacter& psi1, const RealCharacter& psi2,
                              const std::vector<double>& rungs, i64 l_max) {
  TrendReport t;
  t.rungs = rungs;
  for (double R : rungs) {
    TensorWindow w{R, R * double(a) / double(b)};
    t.reports.push_back(proposition_check(ShiftedConvSpec::make(a, b, h, psi1, psi2, w), l_max));
  }
  t.non_increasing = true;
  for (size_t i = 1; i < t.reports.size(); ++i)
    if (t.reports[i].rel_error > t.reports[i - 1].rel_error) t.non_increasing = false;
  return t;
}

namespace {

// nodes and weights of int_X^{2X} g(x) dx with g(x) = w(x/X), the weight folded in
struct WindowRule {
  std::vector<double> x, wg;
  double integral = 0;
};

WindowRule window_rule(double X, i64 panels) {
  static const GaussLegendre gl(20);
  WindowRule r;
  const double step = X / double(panels);
  CompensatedSum<double> acc;
  for (i64 p = 0; p < panels; ++p) {
    const double lo = X + p * step, mid = lo + step / 2;
    for (size_t i = 0; i < gl.x.size(); ++i) {
      const double x = mid + step / 2 * gl.x[i];
      const double v = step / 2 * gl.w[i] * bump_template(x / X);
      r.x.push_back(x);
      r.wg.push_back(v);
      acc.add(v);
    }
  }
  r.integral = acc.value();
  return r;
}

// int J0(4 pi sqrt(m x) / C) g(x) dx for 1 <= m <= m_max
std::vector<double> hankel_transforms(double X, double C, i64 m_max) {
  const double omega = 4 * kPi * std::sqrt(double(m_max) * X) / C * (std::sqrt(2.0) - 1);
  const auto rule = window_rule(X, std::max<i64>(64, i64(std::ceil(omega / 4))));
  std::vector<double> out(m_max + 1, 0.0);
  parallel_for(m_max, [&](i64 i) {
    const double k = 4 * kPi * std::sqrt(double(i + 1)) / C;
    CompensatedSum<double> acc;
    for (size_t j = 0; j < rule.x.size(); ++j)
      if (rule.wg[j] != 0) acc.add(rule.wg[j] * bessel_j(0, k * std::sqrt(rule.x[j])));
    out[i + 1] = acc.value();
  });
  return out;
}

i64 default_dual_truncation(double X, double C) { return std::max<i64>(128, i64(std::ceil(3e4 * C * C / X))); }

cplx windowed_lhs(const std::vector<int>& coef, i64 a, i64 c, double X) {
  const i64 lo = i64(std::floor(X)) + 1, hi = i64(std::ceil(2 * X)) - 1;
  CompensatedSum<cplx> acc;
  for (i64 n = lo; n <= hi; ++n)
    if (coef[n]) acc.add(double(coef[n]) * bump_template(n / X) * expi_frac(mod(a * n, c), c));
  return acc.value();
}

struct DualSum {
  cplx value;
  double tail = 0;
};

// sum_m coef(m) e(-inv m / c) transform(m)
DualSum dual_sum(const std::vector<int>& coef, const std::vector<double>& tr, i64 inv, i64 c) {
  const i64 m_max = i64(tr.size()) - 1;
  DualSum d;
  CompensatedSum<cplx> acc;
  for (i64 m = 1; m <= m_max; ++m) {
    if (!coef[m]) continue;
    const cplx term = double(coef[m]) * tr[m] * expi_frac(mod(-inv * m, c), c);
    acc.add(term);
    if (m > m_max - m_max / 10) d.tail = std::max(d.tail, std::abs(term));
  }
  d.value = acc.value();
  return d;
}

// product of the prime discriminants of chi whose prime divides l (inside) or not
RealCharacter split_part(const RealCharacter& chi, i64 l, bool inside) {
  i64 d = 1;
  for (i64 q : prime_discriminants(chi.disc)) {
    const i64 p = (q % 2 == 0) ? 2 : (q < 0 ? -q : q);
    if ((l % p == 0) == inside) d *= q;
  }
  return kronecker_character(d);
}

}  // namespace

VoronoiCheck voronoi_check(const RealCharacter& psi, i64 a, i64 c, double X, i64 dual_truncation) {
  if (c < 1) throw std::invalid_argument("voronoi_check: c >= 1");
  if (gcd(a, c) != 1) throw std::invalid_argument("voronoi_check: gcd(a, c) = 1");
  if (psi.modulus == 1) throw std::invalid_argument("voronoi_check: psi nontrivial");
  if (!(X >= 1)) throw std::invalid_argument("voronoi_check: X >= 1");
  const i64 D = psi.modulus;
  const auto psi1 = component(psi, c);
  if (psi1.modulus != gcd(c, D)) throw std::invalid_argument("voronoi_check: (c, D) is not a character modulus");
  const auto psi2 = kronecker_character(psi.disc / psi1.disc);
  const i64 D2 = psi2.modulus;
  const double C = double(c) * std::sqrt(double(D2));
  const i64 m_max = dual_truncation > 0 ? dual_truncation : default_dual_truncation(X, C);

  VoronoiCheck r;
  r.lhs = windowed_lhs(conv_table(psi, i64(std::ceil(2 * X))), a, c, X);
  const cplx tau = gauss_sum(psi);
  const cplx rho = (double(psi(c)) + (c % D == 0 ? tau * double(psi(a)) : cplx(0))) / double(c);
  const auto rule = window_rule(X, 256);
  r.main = rho * l_value(psi, 1.0).real() * rule.integral;

  const auto tr = hankel_transforms(X, C, m_max);
  const i64 inv = c == 1 ? 0 : modinv(mod(a * D2, c), c);
  const auto d = dual_sum(conv_table(psi1, psi2, m_max), tr, inv, c);
  const cplx pre = 2 * kPi * gauss_sum(psi1) * double(psi1(a) * psi2(c)) / (double(c) * std::sqrt(double(D)));
  r.dual = pre * d.value;
  r.dual_terms = m_max;
  r.dual_tail = std::abs(pre) * d.tail;
  r.discrepancy = std::abs(r.lhs - r.main - r.dual);
  return r;
}

Voronoi2Check voronoi2_check(const RealCharacter& psi1, const RealCharacter& psi2, const std::vector<i64>& a_values,
                             i64 ell, double X, i64 dual_truncation) {
  if (ell < 1) throw std::invalid_argument("voronoi2_check: ell >= 1");
  if (a_values.empty()) throw std::invalid_argument("voronoi2_check: no values of a");
  for (i64 a : a_values)
    if (gcd(a, ell) != 1) throw std::invalid_argument("voronoi2_check: gcd(a, ell) = 1");
  if (!(X >= 1)) throw std::invalid_argument("voronoi2_check: X >= 1");
  const auto psi = product(psi1, psi2);
  if (psi.modulus == 1) throw std::invalid_argument("voronoi2_check: psi nontrivial");
  const i64 D1 = psi1.modulus, D2 = psi2.modulus;
  const auto in1 = split_part(psi1, ell, true), out1 = split_part(psi1, ell, false);
  const auto in2 = split_part(psi2, ell, true), out2 = split_part(psi2, ell, false);
  const auto inner = product(in1, in2), dual1 = product(in1, out2), dual2 = product(out1, in2);
  const i64 Dp = out1.modulus * out2.modulus;
  const double C = double(ell) * std::sqrt(double(Dp));
  const i64 m_max = dual_truncation > 0 ? dual_truncation : default_dual_truncation(X, C);

  const auto lhs_coef = conv_table(psi1, psi2, i64(std::ceil(2 * X)));
  const auto dual_coef = conv_table(dual1, dual2, m_max);
  const auto tr = hankel_transforms(X, C, m_max);
  const double L1 = l_value(psi, 1.0).real(), I = window_rule(X, 256).integral;
  const cplx t1 = gauss_sum(psi1), t2 = gauss_sum(psi2);

  Voronoi2Check r;
  r.a_values = a_values;
  r.dual_terms = m_max;
  CompensatedSum<cplx> num;
  CompensatedSum<double> den;
  for (i64 a : a_values) {
    const cplx lhs = windowed_lhs(lhs_coef, a, ell, X);
    cplx rho = 0;
    if (ell % D1 == 0) rho += t1 * double(psi1(a) * psi2(ell / D1));
    if (ell % D2 == 0) rho += t2 * double(psi2(a) * psi1(ell / D2));
    const cplx main = rho / double(ell) * L1 * I;
    const i64 inv = ell == 1 ? 0 : modinv(mod(a * Dp, ell), ell);
    const auto d = dual_sum(dual_coef, tr, inv, ell);
    const double pre = 2 * kPi * double(inner(a)) / C;
    const cplx dual = pre * d.value;
    r.lhs.push_back(lhs);
    r.main.push_back(main);
    r.dual_without_phase.push_back(dual);
    r.dual_tail = std::max(r.dual_tail, std::abs(pre) * d.tail);
    num.add(std::conj(dual) * (lhs - main));
    den.add(std::norm(dual));
  }
  if (!(den.value() > 0)) throw NumericError("voronoi2_check: dual term vanishes, phase undetermined");
  r.phase = num.value() / den.value();
  r.unimodularity_error = std::abs(std::abs(r.phase) - 1);
  for (size_t i = 0; i < a_values.size(); ++i)
    r.discrepancy = std::max(r.discrepancy, std::abs(r.lhs[i] - r.main[i] - r.phase * r.dual_without_phase[i]));
  return r;
}

}  // namespace lmoment
