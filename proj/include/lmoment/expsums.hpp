#pragma once

#include "lmoment/characters.hpp"
#include "lmoment/common.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace lmoment {

struct ExpSumQuery {
  i64 m = 0, n = 0, c = 1;
  std::optional<RealCharacter> chi;
};

// Units mod c with their inverses and a table of e(k/c); reused across (m, n).
class UnitTable {
 public:
  explicit UnitTable(i64 c);
  i64 modulus() const { return c_; }
  const std::vector<i64>& units() const { return u_; }
  const std::vector<i64>& inverses() const { return inv_; }
  cplx e(i64 k) const { return roots_[mod(k, c_)]; }

 private:
  i64 c_;
  std::vector<i64> u_, inv_;
  std::vector<cplx> roots_;
};

cplx kloosterman(i64 m, i64 n, i64 c);
cplx kloosterman(const UnitTable& t, i64 m, i64 n);

// S(m, n; c) as the product over prime powers f || c of
// S(m, n (c/f)^{-2}; f). Tables for the prime powers of every modulus in
// the constructor list are built up front, so evaluation is thread-safe.
class FactoredKloosterman {
 public:
  explicit FactoredKloosterman(const std::vector<i64>& moduli);
  // throws std::out_of_range if a prime-power factor of c was not prepared
  cplx operator()(i64 m, i64 n, i64 c) const;

 private:
  std::vector<UnitTable> tables_;
  std::vector<i64> keys_;  // sorted moduli of tables_
  const UnitTable& table(i64 f) const;
};

// S_chi(m, n; c) = sum over units u mod c of chi(u) e((m u + n u^{-1})/c)
cplx gauss_kloosterman(const RealCharacter& chi, i64 m, i64 n, i64 c);
cplx gauss_kloosterman(const RealCharacter& chi, const UnitTable& t, i64 m, i64 n);
cplx evaluate(const ExpSumQuery& q);

// closed form of S_chi(m, 0; c)
cplx nelson_eval(const RealCharacter& chi, i64 m, i64 c);

bool weil_check(i64 m, i64 n, i64 c);
double weil_bound(i64 m, i64 n, i64 c);

// nu_{c1,c2}(u) for every residue u mod [c1, c2]
std::vector<cplx> ramanujan_nu_table(const RealCharacter& chi, i64 c1, i64 c2);
cplx ramanujan_nu(const RealCharacter& chi, i64 c1, i64 c2, i64 u);

// Compactly supported even window with its Fourier transform
// fhat(xi) = int f(x) e(-x xi) dx.
struct Window {
  double support = 0;  // f vanishes for |x| >= support
  std::function<double(double)> f;
  std::function<double(double)> fhat;
};

// exp(-1/(1 - (x/W)^2)) on |x| < W, transform by Gauss-Legendre panels
Window bump_window(double W);
Window zero_window(double W);

struct PoissonCheck {
  double lhs = 0, rhs = 0, discrepancy = 0;
  i64 dual_terms = 0;
};

PoissonCheck poisson_orthogonality_check(const RealCharacter& chi, i64 c1, i64 c2, const Window& f);

// exhaustive sweeps
struct SweepResult {
  i64 checked = 0;
  i64 failures = 0;
  double max_error = 0;  // max discrepancy (or max ratio for bound checks)
};

// real primitive chi of modulus d <= d_max, d | c <= c_max, 1 <= m <= m_max
SweepResult nelson_sweep(i64 d_max, i64 c_max, i64 m_max, double tol = 1e-9);
// max of |S| / Weil bound over 1 <= m, n <= mn_max, c <= c_max
SweepResult weil_sweep(i64 mn_max, i64 c_max);
// max of |nu| / phi(gcd(c1, c2)) over c1 != c2 <= c_max, all characters of
// modulus dividing both
SweepResult nu_sweep(i64 c_max);

}  // namespace lmoment
