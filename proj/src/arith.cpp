#include "lmoment/arith.hpp"

#include <cmath>
#include <random>

namespace lmoment {

MultiplicativeTable::MultiplicativeTable(i64 N)
    : limit(N), spf(N + 1, 0), mu(N + 1, 0), phi(N + 1, 0), tau(5, std::vector<i64>(N + 1, 0)), omega(N + 1, 0) {
  std::vector<i64> primes;
  if (N >= 1) {
    mu[1] = 1;
    phi[1] = 1;
    for (int k = 1; k <= 4; ++k) tau[k][1] = 1;
  }
  for (i64 i = 2; i <= N; ++i) {
    if (spf[i] == 0) {
      spf[i] = i;
      primes.push_back(i);
    }
    for (i64 p : primes) {
      if (p > spf[i] || i * p > N) break;
      spf[i * p] = p;
    }
  }
  for (i64 n = 2; n <= N; ++n) {
    i64 p = spf[n], m = n;
    int e = 0;
    i64 pe = 1;
    while (m % p == 0) {
      m /= p;
      pe *= p;
      ++e;
    }
    mu[n] = e > 1 ? 0 : -mu[m];
    phi[n] = phi[m] * (pe - pe / p);
    omega[n] = omega[m] + 1;
    for (int k = 1; k <= 4; ++k) {
      // C(e + k - 1, k - 1)
      i64 c = 1;
      for (int j = 1; j < k; ++j) c = c * (e + j) / j;
      tau[k][n] = tau[k][m] * c;
    }
  }
}

MockHeckeSystem MockHeckeSystem::random(i64 q, int sign, i64 pmax, std::uint64_t seed) {
  MockHeckeSystem s;
  s.level = q;
  s.sign = sign;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (i64 p : primes_up_to(pmax)) {
    if (p == q) continue;
    double t;
    do t = kPi * u(rng);
    while (t <= 0.0 || t >= kPi);
    s.primes.push_back(p);
    s.theta.push_back(t);
  }
  return s;
}

MockHeckeSystem MockHeckeSystem::with_angles(i64 q, int sign, i64 pmax, const std::vector<std::pair<i64, double>>& angles) {
  MockHeckeSystem s;
  s.level = q;
  s.sign = sign;
  for (i64 p : primes_up_to(pmax)) {
    if (p == q) continue;
    double t = kPi / 2;
    for (auto& [pp, th] : angles)
      if (pp == p) t = th;
    s.primes.push_back(p);
    s.theta.push_back(t);
  }
  return s;
}

double MockHeckeSystem::angle(i64 p) const {
  auto it = std::lower_bound(primes.begin(), primes.end(), p);
  if (it == primes.end() || *it != p) throw std::out_of_range("MockHeckeSystem: prime outside table");
  return theta[it - primes.begin()];
}

double MockHeckeSystem::lambda_prime_power(i64 p, int k) const {
  if (p == level) return std::pow(sign / std::sqrt(double(level)), k);
  // U_k(cos t) by the three-term recurrence
  double x = 2 * std::cos(angle(p)), u0 = 1, u1 = x;
  if (k == 0) return 1;
  for (int j = 2; j <= k; ++j) {
    double u2 = x * u1 - u0;
    u0 = u1;
    u1 = u2;
  }
  return u1;
}

double MockHeckeSystem::lambda(i64 n) const {
  double v = 1;
  for (auto [p, e] : factorize(n)) v *= lambda_prime_power(p, e);
  return v;
}

std::vector<double> MockHeckeSystem::table(i64 N) const {
  MultiplicativeTable mt(N);
  std::vector<double> t(N + 1, 0.0);
  if (N >= 1) t[1] = 1;
  for (i64 n = 2; n <= N; ++n) {
    i64 p = mt.spf[n], m = n;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    t[n] = t[m] * lambda_prime_power(p, e);
  }
  return t;
}

int divisor_conv_psi(const RealCharacter& psi, i64 n) {
  int s = 0;
  for (i64 d : divisors(n)) s += psi(d);
  return s;
}

rational alpha(i64 n) {
  rational r = 1;
  for (auto [p, e] : factorize(n)) r *= rational(p, p + 1);
  return r;
}

static rational alpha_p(i64 p) { return rational(p, p + 1); }

static rational h_p(i64 p, int psi_p) {
  rational a = alpha_p(p);
  return 1 / (1 + a * a * psi_p / p);
}

rational h_psi(const RealCharacter& psi, i64 n) {
  rational r = 1;
  for (auto [p, e] : factorize(n)) r *= h_p(p, psi(p));
  return r;
}

rational rho1_prime_power(i64 p, int psi_p, int k) {
  if (k == 0) return 1;
  rational a = alpha_p(p);
  if (k == 1) return -a * (1 + psi_p) * h_p(p, psi_p);
  if (k == 2) return a * a * psi_p * h_p(p, psi_p);
  return 0;
}

rational rho1_exact(const RealCharacter& psi, i64 n) {
  rational r = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 2) return 0;
    r *= rho1_prime_power(p, psi(p), e);
  }
  return r;
}

static double rho1_pp_double(i64 p, int psi_p, int k) {
  if (k == 0) return 1;
  if (k > 2) return 0;
  double a = double(p) / (p + 1);
  double h = 1.0 / (1.0 + a * a * psi_p / p);
  return k == 1 ? -a * (1 + psi_p) * h : a * a * psi_p * h;
}

std::vector<double> rho1_table(const RealCharacter& psi, i64 X) {
  MultiplicativeTable mt(X);
  std::vector<double> r(X + 1, 0.0);
  if (X >= 1) r[1] = 1;
  for (i64 n = 2; n <= X; ++n) {
    i64 p = mt.spf[n], m = n;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    r[n] = r[m] * rho1_pp_double(p, psi(p), e);
  }
  return r;
}

MollifierCoeffs build_mollifier(const RealCharacter& psi, i64 X) {
  if (X < 1) throw std::invalid_argument("build_mollifier: X >= 1");
  MollifierCoeffs M;
  M.X = X;
  M.psi = psi;
  M.rho1 = rho1_table(psi, X);
  const i64 X2 = X * X;
  M.rho2.assign(X2 + 1, 0.0);
  for (i64 d = 1; d <= X; ++d) {
    i64 L = X / d;
    for (i64 a1 = 1; a1 <= L; ++a1) {
      double r1 = M.rho1[d * a1];
      if (r1 == 0) continue;
      for (i64 a2 = 1; a2 <= L; ++a2) M.rho2[a1 * a2] += r1 * M.rho1[d * a2] / double(d);
    }
  }
  if (X <= 1000) {
    M.rho1_exact.assign(X + 1, rational(0));
    for (i64 n = 1; n <= X; ++n) M.rho1_exact[n] = rho1_exact(psi, n);
  }
  if (X <= 100) {
    M.rho2_exact.assign(X2 + 1, rational(0));
    for (i64 d = 1; d <= X; ++d) {
      i64 L = X / d;
      for (i64 a1 = 1; a1 <= L; ++a1) {
        const rational& r1 = M.rho1_exact[d * a1];
        if (r1 == 0) continue;
        for (i64 a2 = 1; a2 <= L; ++a2) {
          const rational& r2 = M.rho1_exact[d * a2];
          if (r2 == 0) continue;
          M.rho2_exact[a1 * a2] += r1 * r2 / d;
        }
      }
    }
  }
  return M;
}

double hecke_product(const MockHeckeSystem& lambda, i64 m, i64 n) {
  CompensatedSum<double> s;
  for (i64 d : divisors(gcd(m, n))) {
    if (d % lambda.level == 0) continue;
    s.add(lambda.lambda(m / d * (n / d)));
  }
  return s.value();
}

double mollifier_value(const MockHeckeSystem& lambda, const MollifierCoeffs& M) {
  auto lam = lambda.table(M.X);
  CompensatedSum<double> s;
  for (i64 a = 1; a <= M.X; ++a)
    if (M.rho1[a] != 0) s.add(M.rho1[a] * lam[a] / std::sqrt(double(a)));
  return s.value();
}

double mollifier_square_check(const MockHeckeSystem& lambda, const MollifierCoeffs& M) {
  if (lambda.level <= M.X) throw std::invalid_argument("mollifier_square_check: level must exceed X");
  double m = mollifier_value(lambda, M);
  const i64 X2 = M.X * M.X;
  auto lam = lambda.table(X2);
  CompensatedSum<double> s;
  for (i64 a = 1; a <= X2; ++a)
    if (M.rho2[a] != 0) s.add(M.rho2[a] * lam[a] / std::sqrt(double(a)));
  return std::abs(m * m - s.value());
}

bool recursion_check(const RealCharacter& psi, i64 b, i64 n) {
  i64 lhs = divisor_conv_psi(psi, b * n);
  i64 rhs = 0;
  for (i64 g : divisors(gcd(b, n))) rhs += mobius(g) * divisor_conv_psi(psi, b / g) * divisor_conv_psi(psi, n / g);
  return lhs == rhs;
}

bool recursion_check_twisted(const RealCharacter& psi, i64 b, i64 n) {
  i64 lhs = divisor_conv_psi(psi, b * n);
  i64 rhs = 0;
  for (i64 g : divisors(gcd(b, n)))
    rhs += mobius(g) * psi(g) * divisor_conv_psi(psi, b / g) * divisor_conv_psi(psi, n / g);
  return lhs == rhs;
}

std::vector<rational> rho2_by_pair_expansion(const MollifierCoeffs& M) {
  if (M.rho1_exact.empty()) throw std::invalid_argument("rho2_by_pair_expansion: exact rho1 needed");
  const i64 X = M.X;
  std::vector<rational> r(X * X + 1, rational(0));
  for (i64 a = 1; a <= X; ++a) {
    if (M.rho1_exact[a] == 0) continue;
    for (i64 b = 1; b <= X; ++b) {
      if (M.rho1_exact[b] == 0) continue;
      rational w = M.rho1_exact[a] * M.rho1_exact[b];
      for (i64 d : divisors(gcd(a, b))) r[(a / d) * (b / d)] += w / d;
    }
  }
  return r;
}

}  // namespace lmoment
