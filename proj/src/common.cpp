#include "lmoment/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numeric>
#include <thread>

namespace lmoment {

i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

i64 lcm(i64 a, i64 b) { return a / gcd(a, b) * b; }

i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

i64 modinv(i64 a, i64 m) {
  if (m == 1) return 0;
  i64 r0 = mod(a, m), r1 = m, s0 = 1, s1 = 0;
  while (r1 != 0) {
    i64 q = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
  }
  if (r0 != 1) throw std::invalid_argument("modinv: not a unit");
  return mod(s0, m);
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

std::vector<i64> primes_up_to(i64 n) {
  std::vector<i64> out;
  if (n < 2) return out;
  std::vector<char> comp(n + 1, 0);
  for (i64 i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (i64 j = i * i; j <= n; j += i) comp[j] = 1;
  }
  return out;
}

std::vector<std::pair<i64, int>> factorize(i64 n) {
  std::vector<std::pair<i64, int>> f;
  if (n < 0) n = -n;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.emplace_back(p, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

std::vector<i64> divisors(i64 n) {
  std::vector<i64> d{1};
  for (auto [p, e] : factorize(n)) {
    std::size_t s = d.size();
    i64 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < s; ++i) d.push_back(d[i] * pk);
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

i64 mobius(i64 n) {
  i64 m = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    m = -m;
  }
  return m;
}

i64 euler_phi(i64 n) {
  i64 r = n;
  for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

i64 num_divisors(i64 n) {
  i64 t = 1;
  for (auto [p, e] : factorize(n)) t *= e + 1;
  return t;
}

i64 sigma1(i64 n) {
  i64 s = 1;
  for (auto [p, e] : factorize(n)) {
    i64 t = 1, pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      t += pk;
    }
    s *= t;
  }
  return s;
}

double to_double(const rational& r) { return r.convert_to<double>(); }

cplx expi_frac(i64 num, i64 den) {
  i64 r = mod(num, den);
  // fold into [-den/2, den/2] for accuracy
  double x = (2 * r > den) ? double(r - den) / double(den) : double(r) / double(den);
  double a = 2.0 * kPi * x;
  return {std::cos(a), std::sin(a)};
}

int thread_count() {
  const char* s = std::getenv("LMOMENT_THREADS");
  if (!s) return 1;
  int n = std::atoi(s);
  return n < 1 ? 1 : n;
}

template <class T>
static T block_reduce_impl(i64 n, i64 block, const std::function<T(i64, i64)>& body) {
  if (n <= 0) return T{};
  i64 nb = (n + block - 1) / block;
  std::vector<T> part(nb);
  int nt = std::min<i64>(thread_count(), nb);
  auto work = [&](int tid) {
    for (i64 b = tid; b < nb; b += nt) part[b] = body(b * block, std::min(n, (b + 1) * block));
  };
  if (nt <= 1) {
    work(0);
  } else {
    std::vector<std::thread> th;
    for (int t = 0; t < nt; ++t) th.emplace_back(work, t);
    for (auto& t : th) t.join();
  }
  CompensatedSum<T> s;
  for (const T& v : part) s.add(v);
  return s.value();
}

double block_reduce(i64 n, i64 block, const std::function<double(i64, i64)>& body) {
  return block_reduce_impl<double>(n, block, body);
}

cplx block_reduce_c(i64 n, i64 block, const std::function<cplx(i64, i64)>& body) {
  return block_reduce_impl<cplx>(n, block, body);
}

void parallel_for(i64 n, const std::function<void(i64)>& body) {
  int nt = std::min<i64>(thread_count(), std::max<i64>(n, 1));
  auto work = [&](int tid) {
    for (i64 i = tid; i < n; i += nt) body(i);
  };
  if (nt <= 1) {
    work(0);
    return;
  }
  std::vector<std::exception_ptr> err(nt);
  std::vector<std::thread> th;
  for (int t = 0; t < nt; ++t)
    th.emplace_back([&, t] {
      try {
        work(t);
      } catch (...) {
        err[t] = std::current_exception();
      }
    });
  for (auto& t : th) t.join();
  for (auto& e : err)
    if (e) std::rethrow_exception(e);
}

GaussLegendre::GaussLegendre(int n) : x(n), w(n) {
  auto legendre = [n](double z, double& dp) {
    double p0 = 1, p1 = z;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1);
    return p1;
  };
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5)), dp = 0;
    for (int it = 0; it < 100; ++it) {
      double dz = legendre(z, dp) / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    legendre(z, dp);
    x[i] = z;
    w[i] = 2.0 / ((1 - z * z) * dp * dp);
  }
}

double GaussLegendre::integrate(const std::function<double(double)>& f, double a, double b) const {
  double h = 0.5 * (b - a), c = 0.5 * (a + b);
  CompensatedSum<double> s;
  for (std::size_t i = 0; i < x.size(); ++i) s.add(w[i] * f(c + h * x[i]));
  return h * s.value();
}

}  // namespace lmoment
