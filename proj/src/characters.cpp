#include "lmoment/characters.hpp"

#include <algorithm>
#include <cmath>

namespace lmoment {

namespace {

int jacobi(i64 a, i64 n) {
  // n odd positive
  a = mod(a, n);
  int t = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      i64 r = n % 8;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) t = -t;
    a %= n;
  }
  return n == 1 ? t : 0;
}

bool squarefree(i64 n) {
  for (auto [p, e] : factorize(n))
    if (e > 1) return false;
  return true;
}

const double kBernoulli2k[] = {
    1.0 / 6,          -1.0 / 30,          1.0 / 42,           -1.0 / 30,
    5.0 / 66,         -691.0 / 2730,      7.0 / 6,            -3617.0 / 510,
    43867.0 / 798,    -174611.0 / 330,    854513.0 / 138,     -236364091.0 / 2730,
    8553103.0 / 6,    -23749461029.0 / 870, 8615841276005.0 / 14322};
constexpr int kMaxEM = 15;

// (e^z - 1)/z
cplx expm1_over(cplx z) {
  if (std::abs(z) < 0.1) {
    cplx term = 1, s = 1;
    for (int k = 2; k < 20; ++k) {
      term *= z / double(k);
      s += term;
    }
    return s;
  }
  return (std::exp(z) - 1.0) / z;
}

}  // namespace

int kronecker(i64 d, i64 n) {
  if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
  int t = 1;
  if (n < 0) {
    n = -n;
    if (d < 0) t = -t;
  }
  while (n % 2 == 0) {
    n /= 2;
    if (d % 2 == 0) return 0;
    i64 r = mod(d, 8);
    if (r == 3 || r == 5) t = -t;
  }
  if (n == 1) return t;
  return t * jacobi(d, n);
}

bool is_fundamental_discriminant(i64 d) {
  if (d == 1) return true;
  if (d == 0) return false;
  i64 r = mod(d, 4);
  if (r == 1) return squarefree(d);
  if (r != 0) return false;
  i64 m = d / 4;
  i64 rm = mod(m, 4);
  return (rm == 2 || rm == 3) && squarefree(m);
}

RealCharacter trivial_character() { return RealCharacter{}; }

RealCharacter kronecker_character(i64 disc) {
  if (!is_fundamental_discriminant(disc))
    throw std::invalid_argument("kronecker_character: not a fundamental discriminant");
  RealCharacter c;
  c.disc = disc;
  c.modulus = disc < 0 ? -disc : disc;
  c.value_table.assign(c.modulus, 0);
  for (i64 n = 0; n < c.modulus; ++n) c.value_table[n] = kronecker(disc, n);
  if (c.modulus == 1) c.value_table[0] = 1;
  c.is_odd = disc < 0;
  c.is_primitive = brute_is_primitive(c.modulus, c.value_table);
  return c;
}

std::vector<i64> prime_discriminants(i64 disc) {
  std::vector<i64> out;
  i64 rest = disc;
  for (auto [p, e] : factorize(disc)) {
    if (p == 2) continue;
    i64 ps = (p % 4 == 1) ? p : -p;
    out.push_back(ps);
    rest /= ps;
  }
  if (rest != 1) out.insert(out.begin(), rest);
  return out;
}

RealCharacter component(const RealCharacter& psi, i64 m) {
  i64 d = 1;
  for (i64 q : prime_discriminants(psi.disc))
    if (m % (q < 0 ? -q : q) == 0) d *= q;
  return kronecker_character(d);
}

RealCharacter product(const RealCharacter& a, const RealCharacter& b) {
  if (gcd(a.modulus, b.modulus) != 1) throw std::invalid_argument("product: moduli not coprime");
  return kronecker_character(a.disc * b.disc);
}

bool brute_is_primitive(i64 D, const std::vector<int>& t) {
  for (i64 d : divisors(D)) {
    if (d == D) continue;
    bool induced = true;
    for (i64 n = 1; n < D && induced; ++n)
      if (gcd(n, D) == 1 && n % d == 1 % d && t[n] != 1) induced = false;
    if (induced) return false;
  }
  return true;
}

bool check_invariants(const RealCharacter& psi) {
  i64 D = psi.modulus;
  if (i64(psi.value_table.size()) != D) return false;
  for (i64 n = 0; n < D; ++n) {
    int v = psi.value_table[n];
    bool unit = gcd(n, D) == 1;
    if (unit != (v != 0)) return false;
    if (unit && v * v != 1) return false;
    for (i64 m = 0; m < D; ++m)
      if (psi.value_table[(n * m) % D] != v * psi.value_table[m]) return false;
  }
  if (D > 1 && psi.is_odd != (psi(D - 1) == -1)) return false;
  return psi.is_primitive == brute_is_primitive(D, psi.value_table);
}

std::vector<RealCharacter> enumerate_odd_real_primitive(i64 d_max) {
  std::vector<RealCharacter> out;
  for (i64 D = 3; D <= d_max; ++D)
    if (is_fundamental_discriminant(-D)) out.push_back(kronecker_character(-D));
  return out;
}

std::vector<RealCharacter> enumerate_real_primitive(i64 d_max) {
  std::vector<RealCharacter> out;
  if (d_max >= 1) out.push_back(trivial_character());
  for (i64 D = 3; D <= d_max; ++D) {
    if (is_fundamental_discriminant(-D)) out.push_back(kronecker_character(-D));
    if (is_fundamental_discriminant(D)) out.push_back(kronecker_character(D));
  }
  return out;
}

int char_value(const RealCharacter& psi, i64 n) { return psi(n); }

cplx gauss_sum(const RealCharacter& psi) {
  CompensatedSum<cplx> s;
  for (i64 a = 0; a < psi.modulus; ++a)
    if (psi(a)) s.add(double(psi(a)) * expi_frac(a, psi.modulus));
  return s.value();
}

cplx l_value(const RealCharacter& psi, cplx s, double rel_tol) {
  if (s.real() <= 0) throw std::invalid_argument("l_value: Re(s) must be positive");
  if (rel_tol < 1e-12) throw std::invalid_argument("l_value: rel_tol below 1e-12");
  const i64 D = psi.modulus;
  const bool trivial = D == 1;
  if (trivial && std::abs(s - 1.0) == 0) throw std::invalid_argument("l_value: pole at s = 1");
  const cplx Dms = std::exp(-s * std::log(double(D)));
  for (i64 N = 8; N <= (i64(1) << 14); N *= 2) {
    CompensatedSum<cplx> sum;
    for (i64 m = 1; m <= N * D; ++m)
      if (psi(m)) sum.add(double(psi(m)) * std::exp(-s * std::log(double(m))));
    double err = 0;
    for (i64 a = 1; a <= D; ++a) {
      if (!psi(a)) continue;
      double x = double(N) + double(a) / double(D);
      double lx = std::log(x);
      cplx xs = std::exp(-s * lx);
      cplx tail;
      if (trivial)
        tail = x * xs / (s - 1.0);
      else
        tail = -lx * expm1_over((1.0 - s) * lx);
      tail += 0.5 * xs;
      cplx rising = s, xpow = xs / x;
      double fact = 2;  // (2k)!
      cplx last = 0;
      for (int k = 1; k <= kMaxEM; ++k) {
        cplx t = kBernoulli2k[k - 1] / fact * rising * xpow;
        tail += t;
        last = t;
        rising *= (s + double(2 * k - 1)) * (s + double(2 * k));
        xpow /= x * x;
        fact *= double(2 * k + 1) * double(2 * k + 2);
      }
      sum.add(double(psi(a)) * Dms * tail);
      err += std::abs(Dms * last) * std::abs(s + double(2 * kMaxEM)) / (s.real() + 2 * kMaxEM);
    }
    cplx val = sum.value();
    if (err <= 0.1 * rel_tol * std::abs(val)) return val;
  }
  throw NumericError("l_value: tolerance not reached");
}

std::vector<int> conv_table(const RealCharacter& psi, i64 N) {
  return conv_table(trivial_character(), psi, N);
}

std::vector<int> conv_table(const RealCharacter& psi1, const RealCharacter& psi2, i64 N) {
  std::vector<int> c(N + 1, 0);
  for (i64 d = 1; d <= N; ++d) {
    int a = psi1(d);
    if (!a) continue;
    for (i64 k = 1, n = d; n <= N; ++k, n += d) c[n] += a * psi2(k);
  }
  return c;
}

LTaylor l_taylor_at_one(const RealCharacter& psi) {
  const int M = 64;
  const double r = 0.25;
  CompensatedSum<double> c0, c1, c2;
  for (int j = 0; j < M; ++j) {
    double th = 2 * kPi * (j + 0.5) / M;
    cplx z = std::polar(1.0, th);
    cplx f = l_value(psi, 1.0 + r * z, 1e-12);
    c0.add((f).real());
    c1.add((f / z).real());
    c2.add((f / (z * z)).real());
  }
  return {c0.value() / M, c1.value() / (M * r), 2.0 * c2.value() / (M * r * r)};
}

LValueReport l1_derivatives(const RealCharacter& psi) {
  if (!psi.is_odd || !psi.is_primitive) throw std::invalid_argument("l1_derivatives: psi must be odd primitive");
  const i64 D = psi.modulus;
  const i64 x = D * D;
  const double lx = std::log(double(x));
  auto conv = conv_table(psi, x);
  // H(t) and H1(t) prefix sums
  std::vector<double> H(x + 1, 0.0), H1(x + 1, 0.0);
  {
    CompensatedSum<double> a, b;
    for (i64 n = 1; n <= x; ++n) {
      a.add(1.0 / n);
      b.add(std::log(double(n)) / n);
      H[n] = a.value();
      H1[n] = b.value();
    }
  }
  CompensatedSum<double> S1, S2, ex1, ex23;
  for (i64 n = 1; n <= x; ++n) {
    if (!conv[n]) continue;
    S1.add(conv[n] / double(n));
    S2.add(conv[n] * std::log(double(n)) / n);
  }
  for (i64 m = 1; m <= x; ++m) {
    int c = psi(m);
    if (!c) continue;
    double t = double(x) / m;
    double lt = std::log(t);
    i64 ft = x / m;
    double E = H[ft] - lt - kEulerGamma;
    double E2 = H1[ft] - 0.5 * lt * lt - kStieltjes1;
    ex1.add(c * E / m);
    ex23.add(c * (std::log(double(m)) * E + E2) / m);
  }
  i64 B = 0, part = 0;
  for (i64 n = 1; n <= D; ++n) {
    part += psi(n);
    B = std::max(B, part < 0 ? -part : part);
  }
  const double tailc = 3.0 * B / double(x);

  LTaylor t = l_taylor_at_one(psi);
  LValueReport r;
  r.L1 = t.c0;
  r.L1_prime_direct = t.c1;
  r.L1_double_prime_direct = t.c2;
  r.L1_prime = S1.value();
  r.L1_double_prime = -2 * kEulerGamma * t.c1 - 2 * S2.value();
  r.method = LMethod::finite_sum_lemma;
  r.est_error = std::abs(t.c0) * (lx + kEulerGamma) + std::abs(ex1.value()) + tailc * (lx + kEulerGamma) + tailc * lx;
  double k2 = std::abs(lx * lx + 2 * kStieltjes1);
  r.est_error_second = k2 * std::abs(t.c0) + 2 * std::abs(ex23.value()) + 2 * kEulerGamma * tailc * lx +
                       tailc * lx * lx + k2 * tailc;
  double lD = std::log(double(D));
  r.lemma_scale = t.c0 * lD * lD;
  return r;
}

double lacunarity_sum(const RealCharacter& psi, double x) {
  i64 D2 = psi.modulus * psi.modulus;
  i64 X = i64(std::floor(x));
  if (X <= D2) return 0.0;
  auto conv = conv_table(psi, X);
  CompensatedSum<double> s;
  for (i64 n = D2 + 1; n <= X; ++n)
    if (conv[n]) s.add(conv[n] / double(n));
  return s.value();
}

double prime_sum_split(const RealCharacter& psi, double x) {
  CompensatedSum<double> s;
  for (i64 p : primes_up_to(i64(std::floor(x))))
    if (psi(p) == 1) s.add(std::log(double(p)) / p);
  return s.value();
}

}  // namespace lmoment
