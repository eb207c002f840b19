#include "lmoment/singular.hpp"

#include "lmoment/arith.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace lmoment {

namespace {

// sum_{n >= 0} (n+1)^j y^n
rational geom_full(int j, const rational& y) {
  switch (j) {
    case 0:
      return 1 / (1 - y);
    case 1:
      return 1 / ((1 - y) * (1 - y));
    case 2:
      return (1 + y) / ((1 - y) * (1 - y) * (1 - y));
    default:
      throw std::invalid_argument("poly_geom_sum: j in {0, 1, 2}");
  }
}

rational geom(int j, const rational& x, std::optional<Parity> parity) {
  if (!parity) return geom_full(j, x);
  rational a = geom_full(j, x), b = geom_full(j, -x);
  return *parity == Parity::even ? rational((a + b) / 2) : rational((a - b) / 2);
}

Parity parity_of(int a) { return a % 2 ? Parity::odd : Parity::even; }

// rho1(p^k) for k = 0, 1, 2
std::array<rational, 3> rho_local(i64 p, int psi) {
  rational al(p, p + 1);
  rational h = 1 / (1 + al * al * psi / p);
  return {rational(1), -al * (1 + psi) * h, al * al * psi * h};
}

// (1*psi)(p^k)
int c_local(int k, int psi) {
  int s = 0, t = 1;
  for (int i = 0; i <= k; ++i) {
    s += t;
    t *= psi;
  }
  return s;
}

rational pow_inv(i64 p, int k) {
  rational r = 1;
  for (int i = 0; i < k; ++i) r /= p;
  return r;
}

bigfloat to_big(const rational& r) {
  return bigfloat(boost::multiprecision::numerator(r)) / bigfloat(boost::multiprecision::denominator(r));
}

}  // namespace

rational poly_geom_sum(int j, i64 p, std::optional<Parity> parity) {
  if (p < 2) throw std::invalid_argument("poly_geom_sum: p >= 2");
  return geom(j, rational(1, p), parity);
}

rational local_factor_closed(LocalFactorKind kind, i64 p, int psi) {
  rational base = psi == 0 ? rational(p, p + 1) : rational(p * (p - psi), (p + 1) * (p + 1) + psi * p);
  return kind == LocalFactorKind::P2 ? base * base : base;
}

rational local_factor_series(LocalFactorKind kind, i64 p, int psi) {
  if (psi < -1 || psi > 1) throw std::invalid_argument("local_factor: psi(p) in {-1, 0, 1}");
  const auto r = rho_local(p, psi);
  const rational x(1, p);
  rational s = 0;
  switch (kind) {
    case LocalFactorKind::P1:
      for (int n = 0; n <= 2; ++n) s += r[n] * c_local(n, psi) * pow_inv(p, n);
      break;
    case LocalFactorKind::P0:
      // sum over a + b <= 2 of rho1(p^{a+b}) p^{-a-b} sum_{n = a mod 2} (1*psi)(p^{b+n}) p^{-n}
      for (int a = 0; a <= 2; ++a)
        for (int b = 0; a + b <= 2; ++b) {
          auto par = parity_of(a);
          rational inner;
          if (psi == 0)
            inner = geom(0, x, par);
          else if (psi == 1)
            inner = geom(1, x, par) + b * geom(0, x, par);
          else
            inner = (a - b) % 2 == 0 ? geom(0, x, par) : rational(0);
          s += r[a + b] * pow_inv(p, a + b) * inner;
        }
      break;
    case LocalFactorKind::P2:
      // rho2(p^{m1+m2}) expanded over d, split as p^a p^b with a + b = m1 + m2
      for (int d = 0; d <= 2; ++d)
        for (int m1 = 0; d + m1 <= 2; ++m1)
          for (int m2 = 0; d + m2 <= 2; ++m2)
            for (int a = 0; a <= m1 + m2; ++a) {
              int b = m1 + m2 - a;
              rational inner;
              if (psi == 0)
                inner = geom(0, x, std::nullopt);
              else if (psi == 1)
                inner = geom(2, x, std::nullopt) + (a + b) * geom(1, x, std::nullopt) + a * b * geom(0, x, std::nullopt);
              else
                inner = (a - b) % 2 == 0 ? geom(0, x, parity_of(a)) : rational(0);
              s += r[d + m1] * r[d + m2] * pow_inv(p, a + b + d) * inner;
            }
      break;
  }
  return s;
}

LocalFactor local_factor(LocalFactorKind kind, i64 p, int psi_p) {
  if (!is_prime(p)) throw std::invalid_argument("local_factor: p must be prime");
  return {local_factor_closed(kind, p, psi_p), local_factor_series(kind, p, psi_p)};
}

EulerProductValue euler_product(LocalFactorKind kind, const RealCharacter& psi, i64 X) {
  if (X < 2) throw std::invalid_argument("euler_product: X >= 2");
  auto ps = primes_up_to(X);
  for (auto [p, e] : factorize(psi.modulus))
    if (p > X) ps.push_back(p);
  std::sort(ps.begin(), ps.end());
  EulerProductValue r;
  r.X = X;
  r.psi = psi;
  r.primes = ps;
  r.per_prime_log.resize(ps.size());
  std::vector<bigfloat> fac(ps.size());
  parallel_for(i64(ps.size()), [&](i64 i) {
    i64 p = ps[i];
    int sp = psi(p);
    // P2 from the summed series, so that frak_s2 = frak_s1^2 is a genuine check
    rational lf = kind == LocalFactorKind::P2 ? local_factor_series(kind, p, sp) : local_factor_closed(kind, p, sp);
    fac[i] = to_big(lf);
    r.per_prime_log[i] = log(fac[i]);
  });
  r.value = 1;
  for (const auto& f : fac) r.value *= f;
  return r;
}

EulerProductValue frak_s1(const RealCharacter& psi, i64 X) { return euler_product(LocalFactorKind::P1, psi, X); }
EulerProductValue frak_s2(const RealCharacter& psi, i64 X) { return euler_product(LocalFactorKind::P2, psi, X); }

S1Series::S1Series(const RealCharacter& psi, i64 X) {
  if (X < 1) throw std::invalid_argument("S1Series: X >= 1");
  auto r1 = rho1_table(psi, X);
  auto conv = conv_table(psi, X);
  for (i64 n = 1; n <= X; ++n)
    if (r1[n] != 0 && conv[n] != 0) {
      a_.push_back(r1[n] * conv[n] / double(n));
      logn_.push_back(std::log(double(n)));
    }
}

cplx S1Series::operator()(cplx u) const {
  CompensatedSum<cplx> s;
  for (size_t i = 0; i < a_.size(); ++i) s.add(a_[i] * std::exp(-u * logn_[i]));
  return s.value();
}

double S1Series::derivative_at_zero(int j) const {
  CompensatedSum<double> s;
  for (size_t i = 0; i < a_.size(); ++i) s.add(a_[i] * std::pow(-logn_[i], j));
  return s.value();
}

double S1Series::majorant(double sigma) const {
  CompensatedSum<double> s;
  for (size_t i = 0; i < a_.size(); ++i) s.add(std::abs(a_[i]) * std::exp(-sigma * logn_[i]));
  return s.value();
}

cplx s1_series(const RealCharacter& psi, i64 X, cplx u) { return S1Series(psi, X)(u); }

S2Series::S2Series(const RealCharacter& psi, i64 X) {
  if (X < 1) throw std::invalid_argument("S2Series: X >= 1");
  auto M = build_mollifier(psi, X);
  auto conv = conv_table(psi, X * X * X);
  const i64 X2 = X * X;
  for (i64 m = 1; m <= X2; ++m) {
    if (M.rho2[m] == 0) continue;
    for (i64 a : divisors(m)) {
      i64 b = m / a;
      double base = M.rho2[m] / double(a) / double(b);
      for (i64 n = 1; n <= X; ++n) {
        int w = conv[a * n] * conv[b * n];
        if (!w) continue;
        c_.push_back(base * w / double(n));
        la_.push_back(std::log(double(a * n)));
        lb_.push_back(std::log(double(b * n)));
      }
    }
  }
}

cplx S2Series::operator()(cplx u, cplx v) const {
  CompensatedSum<cplx> s;
  for (size_t i = 0; i < c_.size(); ++i) s.add(c_[i] * std::exp(-u * la_[i] - v * lb_[i]));
  return s.value();
}

double S2Series::derivative_at_zero(int i, int j) const {
  CompensatedSum<double> s;
  for (size_t t = 0; t < c_.size(); ++t) s.add(c_[t] * std::pow(-la_[t], i) * std::pow(-lb_[t], j));
  return s.value();
}

cplx s2_series(const RealCharacter& psi, i64 X, cplx u, cplx v) { return S2Series(psi, X)(u, v); }

std::vector<Q0Term> q0_terms(const RealCharacter& psi, i64 X) {
  if (X < 2) throw std::invalid_argument("q0_logderiv: X >= 2");
  auto ps = primes_up_to(X);
  for (auto [p, e] : factorize(psi.modulus))
    if (p > X) ps.push_back(p);
  std::sort(ps.begin(), ps.end());
  std::vector<Q0Term> out;
  for (i64 p : ps) {
    int sp = psi(p);
    rational al(p, p + 1);
    rational h = 1 / (1 + al * al * sp / p);
    rational c;
    if (sp == 0)
      c = al / (p - al);
    else if (sp == -1)
      c = 2 * al * al * h / (rational(p * p) - al * al * h);
    else
      c = (4 * al * h * p - 6 * al * al * h) / (rational(p * p) - 4 * al * h * p + 3 * al * al * h);
    out.push_back({p, c, to_double(c) * std::log(double(p))});
  }
  return out;
}

double q0_logderiv(const RealCharacter& psi, i64 X) {
  CompensatedSum<double> s;
  for (const auto& t : q0_terms(psi, X)) s.add(t.term);
  return s.value();
}

cplx f_ab(i64 a, i64 b, const RealCharacter& psi, cplx s) {
  if (a < 1 || b < 1) throw std::invalid_argument("f_ab: a, b >= 1");
  if (!(s.real() > 0.5)) throw std::invalid_argument("f_ab: Re s > 1/2");
  cplx f = 1;
  for (auto [p, e] : factorize(a * b)) {
    int al = 0, be = 0;
    for (i64 t = a; t % p == 0; t /= p) ++al;
    for (i64 t = b; t % p == 0; t /= p) ++be;
    int sp = psi(p);
    cplx x = std::exp(-s * std::log(double(p)));
    if (sp == 1) {
      cplx F0 = 1.0 / (1.0 - x), F1 = F0 * F0, F2 = (1.0 + x) * F1 * F0;
      f *= (F2 + double(al + be) * F1 + double(al * be) * F0) / F2;
    } else if (sp == -1) {
      if ((al - be) % 2) return 0.0;
      if (al % 2) f *= x;
    }
  }
  return f;
}

cplx alpha_D(const RealCharacter& psi, cplx s) {
  cplx r = 1;
  for (auto [p, e] : factorize(psi.modulus)) r /= 1.0 + std::exp(-s * std::log(double(p)));
  return r;
}

static double probe_rel(cplx a, cplx b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

DerivativeProbe derivative_probe(const std::function<cplx(cplx)>& f, double radius, double tol) {
  if (!(radius >= 1e-3 && radius <= 1e-1)) throw std::invalid_argument("derivative_probe: radius in [1e-3, 1e-1]");
  const int M = 32;
  CompensatedSum<cplx> s;
  for (int j = 0; j < M; ++j) {
    cplx z = std::polar(1.0, 2 * kPi * (j + 0.5) / M);
    s.add(f(radius * z) / z);
  }
  DerivativeProbe r;
  r.circle = s.value() / (M * radius);
  auto D = [&](double h) { return (f(h) - f(-h)) / (2 * h); };
  const double h = 1e-3;
  r.finite_difference = (4.0 * D(h / 2) - D(h)) / 3.0;
  r.rel_diff = probe_rel(r.circle, r.finite_difference, 1e-10 * (1 + std::abs(f(0.0))) / radius);
  if (!(r.rel_diff <= tol)) throw NumericError("derivative_probe: circle and finite-difference derivatives disagree");
  return r;
}

DerivativeProbe mixed_derivative_probe(const std::function<cplx(cplx, cplx)>& f, double radius, double tol) {
  if (!(radius >= 1e-3 && radius <= 1e-1)) throw std::invalid_argument("derivative_probe: radius in [1e-3, 1e-1]");
  const int M = 16;
  CompensatedSum<cplx> s;
  for (int j = 0; j < M; ++j)
    for (int k = 0; k < M; ++k) {
      cplx z = std::polar(1.0, 2 * kPi * (j + 0.5) / M), w = std::polar(1.0, 2 * kPi * (k + 0.5) / M);
      s.add(f(radius * z, radius * w) / (z * w));
    }
  DerivativeProbe r;
  r.circle = s.value() / (double(M) * M * radius * radius);
  auto D = [&](double h) { return (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h); };
  const double h = 1e-2;
  r.finite_difference = (4.0 * D(h / 2) - D(h)) / 3.0;
  r.rel_diff = probe_rel(r.circle, r.finite_difference, 1e-10 * (1 + std::abs(f(0.0, 0.0))) / (radius * radius));
  if (!(r.rel_diff <= tol)) throw NumericError("mixed_derivative_probe: circle and finite-difference derivatives disagree");
  return r;
}

}  // namespace lmoment
