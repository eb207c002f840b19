#include "lmoment/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace lmoment {

UnitTable::UnitTable(i64 c) : c_(c) {
  if (c < 1) throw std::invalid_argument("UnitTable: c >= 1");
  roots_.resize(c);
  for (i64 k = 0; k < c; ++k) roots_[k] = expi_frac(k, c);
  if (c == 1) {
    u_ = {0};
    inv_ = {0};
    return;
  }
  for (i64 u = 1; u < c; ++u)
    if (gcd(u, c) == 1) {
      u_.push_back(u);
      inv_.push_back(modinv(u, c));
    }
}

cplx kloosterman(const UnitTable& t, i64 m, i64 n) {
  const i64 c = t.modulus();
  const i64 mm = mod(m, c), nn = mod(n, c);
  CompensatedSum<cplx> s;
  const auto& u = t.units();
  const auto& v = t.inverses();
  for (size_t i = 0; i < u.size(); ++i) s.add(t.e((mm * u[i] + nn * v[i]) % c));
  return s.value();
}

cplx kloosterman(i64 m, i64 n, i64 c) { return kloosterman(UnitTable(c), m, n); }

FactoredKloosterman::FactoredKloosterman(const std::vector<i64>& moduli) {
  std::vector<i64> pp;
  for (i64 c : moduli) {
    if (c < 1) throw std::invalid_argument("FactoredKloosterman: moduli >= 1");
    for (auto [p, e] : factorize(c)) {
      i64 f = 1;
      for (int i = 0; i < e; ++i) f *= p;
      pp.push_back(f);
    }
  }
  std::sort(pp.begin(), pp.end());
  pp.erase(std::unique(pp.begin(), pp.end()), pp.end());
  keys_ = pp;
  tables_.reserve(pp.size());
  for (i64 f : pp) tables_.emplace_back(f);
}

const UnitTable& FactoredKloosterman::table(i64 f) const {
  auto it = std::lower_bound(keys_.begin(), keys_.end(), f);
  if (it == keys_.end() || *it != f) throw std::out_of_range("FactoredKloosterman: modulus not prepared");
  return tables_[it - keys_.begin()];
}

cplx FactoredKloosterman::operator()(i64 m, i64 n, i64 c) const {
  if (c < 1) throw std::invalid_argument("FactoredKloosterman: c >= 1");
  if (c == 1) return 1.0;
  cplx s = 1;
  for (auto [p, e] : factorize(c)) {
    i64 f = 1;
    for (int i = 0; i < e; ++i) f *= p;
    const i64 r = mod(c / f, f);
    const i64 ri = modinv(r, f);
    // n (c/f)^{-2} mod f, kept below 2^62
    const i64 nn = mod(mod(n, f) * ri % f * ri, f);
    s *= kloosterman(table(f), m, nn);
  }
  return s;
}

cplx gauss_kloosterman(const RealCharacter& chi, const UnitTable& t, i64 m, i64 n) {
  const i64 c = t.modulus();
  if (c % chi.modulus != 0) throw std::invalid_argument("gauss_kloosterman: modulus of chi must divide c");
  const i64 mm = mod(m, c), nn = mod(n, c);
  CompensatedSum<cplx> s;
  const auto& u = t.units();
  const auto& v = t.inverses();
  for (size_t i = 0; i < u.size(); ++i) {
    int x = chi(u[i]);
    if (x) s.add(double(x) * t.e((mm * u[i] + nn * v[i]) % c));
  }
  return s.value();
}

cplx gauss_kloosterman(const RealCharacter& chi, i64 m, i64 n, i64 c) {
  if (c < 1 || c % chi.modulus != 0) throw std::invalid_argument("gauss_kloosterman: modulus of chi must divide c");
  return gauss_kloosterman(chi, UnitTable(c), m, n);
}

cplx evaluate(const ExpSumQuery& q) {
  if (q.chi) return gauss_kloosterman(*q.chi, q.m, q.n, q.c);
  return kloosterman(q.m, q.n, q.c);
}

// splits n = a b with a supported on primes dividing d and gcd(b, d) = 1
static std::pair<i64, i64> split_by(i64 n, i64 d) {
  i64 a = 1, b = n;
  for (auto [p, e] : factorize(d))
    while (b % p == 0) {
      b /= p;
      a *= p;
    }
  return {a, b};
}

cplx nelson_eval(const RealCharacter& chi, i64 m, i64 c) {
  const i64 d = chi.modulus;
  if (c < 1 || c % d != 0) throw std::invalid_argument("nelson_eval: modulus of chi must divide c");
  if (m < 1) throw std::invalid_argument("nelson_eval: m >= 1");
  auto [c1, c2] = split_by(c, d);
  auto [m1, m2] = split_by(m, d);
  if (d * m1 != c1) return 0.0;
  i64 ram = 0;
  for (i64 r : divisors(gcd(c2, m2))) ram += mobius(c2 / r) * r;
  return double(m1) * double(chi(c2 * m2)) * double(ram) * gauss_sum(chi);
}

double weil_bound(i64 m, i64 n, i64 c) {
  i64 g = gcd(gcd(m, n), c);
  return double(num_divisors(c)) * std::sqrt(double(g)) * std::sqrt(double(c));
}

static bool within_weil(double s, double bound) { return s <= bound * (1 + 1e-12) + 1e-9; }

bool weil_check(i64 m, i64 n, i64 c) { return within_weil(std::abs(kloosterman(m, n, c)), weil_bound(m, n, c)); }

std::vector<cplx> ramanujan_nu_table(const RealCharacter& chi, i64 c1, i64 c2) {
  if (c1 < 1 || c2 < 1) throw std::invalid_argument("ramanujan_nu: c1, c2 >= 1");
  if (c1 == c2) throw std::invalid_argument("ramanujan_nu: c1 != c2");
  if (c1 % chi.modulus != 0 || c2 % chi.modulus != 0)
    throw std::invalid_argument("ramanujan_nu: modulus of chi must divide c1 and c2");
  const i64 L = lcm(c1, c2), a = L / c1, b = L / c2;
  std::vector<i64> nu(L, 0);
  UnitTable t1(c1), t2(c2);
  for (i64 v : t1.units())
    for (i64 w : t2.units()) nu[(v * a + w * b) % L] += chi(v) * chi(w);
  return std::vector<cplx>(nu.begin(), nu.end());
}

cplx ramanujan_nu(const RealCharacter& chi, i64 c1, i64 c2, i64 u) {
  auto t = ramanujan_nu_table(chi, c1, c2);
  return t[mod(u, lcm(c1, c2))];
}

Window bump_window(double W) {
  if (!(W > 0)) throw std::invalid_argument("bump_window: W > 0");
  Window w;
  w.support = W;
  w.f = [W](double x) {
    double t = x / W;
    if (std::abs(t) >= 1) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
  };
  auto gl = std::make_shared<GaussLegendre>(20);
  w.fhat = [W, gl](double xi) {
    // 2 W int_0^1 bump(t) cos(2 pi W xi t) dt
    const double om = 2 * kPi * W * std::abs(xi);
    const int panels = 40 + int(std::ceil(om / 4));
    CompensatedSum<double> s;
    for (int k = 0; k < panels; ++k) {
      double a = double(k) / panels, b = double(k + 1) / panels;
      double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (size_t j = 0; j < gl->x.size(); ++j) {
        double t = mid + half * gl->x[j];
        s.add(gl->w[j] * half * std::exp(-1.0 / (1.0 - t * t)) * std::cos(om * t));
      }
    }
    return 2 * W * s.value();
  };
  return w;
}

Window zero_window(double W) {
  Window w;
  w.support = W;
  w.f = [](double) { return 0.0; };
  w.fhat = [](double) { return 0.0; };
  return w;
}

PoissonCheck poisson_orthogonality_check(const RealCharacter& chi, i64 c1, i64 c2, const Window& f) {
  auto nu = ramanujan_nu_table(chi, c1, c2);
  const i64 L = lcm(c1, c2);
  UnitTable t1(c1), t2(c2);
  PoissonCheck r;

  const i64 H = i64(std::ceil(f.support));
  CompensatedSum<cplx> lhs;
  for (i64 h = -H; h <= H; ++h) {
    double fh = f.f(double(h));
    if (fh == 0) continue;
    lhs.add(fh * gauss_kloosterman(chi, t1, h, 0) * gauss_kloosterman(chi, t2, h, 0));
  }
  r.lhs = lhs.value().real();

  // dual side, stopping once a full period of terms is negligible
  CompensatedSum<double> rhs;
  rhs.add(nu[0].real() * f.fhat(0.0));
  r.dual_terms = 1;
  const i64 tmax = 1000 * L;
  double scale = std::abs(f.fhat(0.0)) + 1.0;
  for (i64 t0 = 1; t0 <= tmax; t0 += L) {
    double block_max = 0;
    for (i64 t = t0; t < t0 + L; ++t) {
      double fh = f.fhat(double(t) / double(L));
      block_max = std::max(block_max, std::abs(fh));
      // f is even, so the terms at t and -t share fhat
      rhs.add(fh * (nu[t % L] + nu[mod(-t, L)]).real());
      r.dual_terms += 2;
    }
    if (double(t0) / L * f.support > 1 && block_max < 1e-14 * scale) break;
  }
  r.rhs = rhs.value();
  r.discrepancy = std::abs(r.lhs - r.rhs);
  return r;
}

SweepResult nelson_sweep(i64 d_max, i64 c_max, i64 m_max, double tol) {
  auto chars = enumerate_real_primitive(d_max);
  std::vector<SweepResult> per_c(c_max + 1);
  parallel_for(c_max, [&](i64 i) {
    const i64 c = i + 1;
    UnitTable t(c);
    SweepResult& r = per_c[c];
    for (const auto& chi : chars) {
      if (c % chi.modulus != 0) continue;
      for (i64 m = 1; m <= m_max; ++m) {
        double err = std::abs(gauss_kloosterman(chi, t, m, 0) - nelson_eval(chi, m, c));
        ++r.checked;
        if (!(err <= tol)) ++r.failures;
        r.max_error = std::max(r.max_error, err);
      }
    }
  });
  SweepResult out;
  for (const auto& r : per_c) {
    out.checked += r.checked;
    out.failures += r.failures;
    out.max_error = std::max(out.max_error, r.max_error);
  }
  return out;
}

SweepResult weil_sweep(i64 mn_max, i64 c_max) {
  std::vector<SweepResult> per_c(c_max + 1);
  parallel_for(c_max, [&](i64 i) {
    const i64 c = i + 1;
    UnitTable t(c);
    SweepResult& r = per_c[c];
    for (i64 m = 1; m <= mn_max; ++m)
      for (i64 n = 1; n <= mn_max; ++n) {
        double s = std::abs(kloosterman(t, m, n)), b = weil_bound(m, n, c);
        ++r.checked;
        if (!within_weil(s, b)) ++r.failures;
        r.max_error = std::max(r.max_error, s / b);
      }
  });
  SweepResult out;
  for (const auto& r : per_c) {
    out.checked += r.checked;
    out.failures += r.failures;
    out.max_error = std::max(out.max_error, r.max_error);
  }
  return out;
}

SweepResult nu_sweep(i64 c_max) {
  auto chars = enumerate_real_primitive(c_max);
  std::vector<SweepResult> per_c(c_max + 1);
  parallel_for(c_max, [&](i64 i) {
    const i64 c1 = i + 1;
    SweepResult& r = per_c[c1];
    for (i64 c2 = 1; c2 <= c_max; ++c2) {
      if (c1 == c2) continue;
      const i64 g = gcd(c1, c2), L = lcm(c1, c2);
      const double bound = double(euler_phi(g));
      for (const auto& chi : chars) {
        if (g % chi.modulus != 0) continue;
        auto nu = ramanujan_nu_table(chi, c1, c2);
        for (i64 u = 0; u < L; ++u) {
          double a = std::abs(nu[u]);
          ++r.checked;
          bool support_ok = a == 0 || gcd(u, L / g) == 1;
          if (a > bound || !support_ok) ++r.failures;
          r.max_error = std::max(r.max_error, a / bound);
        }
      }
    }
  });
  SweepResult out;
  for (const auto& r : per_c) {
    out.checked += r.checked;
    out.failures += r.failures;
    out.max_error = std::max(out.max_error, r.max_error);
  }
  return out;
}

}  // namespace lmoment
