#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lmoment {

using i64 = std::int64_t;
using cplx = std::complex<double>;
using rational = boost::multiprecision::mpq_rational;
using bigfloat = boost::multiprecision::cpp_bin_float_50;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kEulerGamma = 0.5772156649015328606065120900824024310;
// first Stieltjes constant
inline constexpr double kStieltjes1 = -0.0728158454836767248605863758749547;
inline constexpr double kZeta3Half = 2.612375348685488343348567567924071630;
inline constexpr const char* kEulerGamma30 = "0.577215664901532860606512090082";

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Neumaier compensated sum
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

template <>
class CompensatedSum<cplx> {
 public:
  void add(cplx x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<double> re_, im_;
};

i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);
i64 mod(i64 a, i64 m);
// inverse of a mod m, requires gcd(a, m) = 1
i64 modinv(i64 a, i64 m);
bool is_prime(i64 n);
std::vector<i64> primes_up_to(i64 n);
// (prime, exponent) pairs in ascending order
std::vector<std::pair<i64, int>> factorize(i64 n);
std::vector<i64> divisors(i64 n);
i64 mobius(i64 n);
i64 euler_phi(i64 n);
i64 num_divisors(i64 n);
i64 sigma1(i64 n);

double to_double(const rational& r);

// e(x) = exp(2 pi i x) for x = num/den, reduced exactly before the trig call
cplx expi_frac(i64 num, i64 den);

// LMOMENT_THREADS, default 1
int thread_count();

// Splits [0, n) into fixed blocks, evaluates body(lo, hi) per block and
// combines the block results in block order. The partition does not depend
// on the thread count, so results are reproducible.
double block_reduce(i64 n, i64 block, const std::function<double(i64, i64)>& body);
cplx block_reduce_c(i64 n, i64 block, const std::function<cplx(i64, i64)>& body);
// body(i) for i in [0, n), strided over threads; callers write to slot i only
void parallel_for(i64 n, const std::function<void(i64)>& body);

// Gauss-Legendre nodes and weights on [-1, 1]
struct GaussLegendre {
  std::vector<double> x, w;
  explicit GaussLegendre(int n);
  double integrate(const std::function<double(double)>& f, double a, double b) const;
};

}  // namespace lmoment
