#include "lmoment/moments.hpp"

#include "lmoment/expsums.hpp"
#include "lmoment/singular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lmoment {

namespace {

double factorial(int k) { return k == 2 ? 2.0 : 1.0; }

// partial sums of tau(c) c^{-3/2}; zeta(3/2)^2 minus this bounds the c > C tail
double tau_tail_32(i64 C) {
  CompensatedSum<double> s;
  s.add(kZeta3Half * kZeta3Half);
  for (i64 c = 1; c <= C; ++c) s.add(-double(num_divisors(c)) * std::pow(double(c), -1.5));
  return std::max(0.0, s.value());
}

const GaussLegendre& gl12() {
  static const GaussLegendre gl(12);
  return gl;
}

}  // namespace

MomentConfig MomentConfig::make(i64 q, const RealCharacter& psi, i64 X, int k, i64 n_max, i64 c_max,
                                ContourSpec contour) {
  if (!is_prime(q)) throw std::invalid_argument("MomentConfig: q must be prime");
  if (psi.modulus <= 1) throw std::invalid_argument("MomentConfig: psi must be nontrivial");
  if (gcd(q, psi.modulus) != 1) throw std::invalid_argument("MomentConfig: gcd(q, D) = 1");
  if (k != 1 && k != 2) throw std::invalid_argument("MomentConfig: k in {1, 2}");
  if (X < 1 || n_max < 1 || c_max < 0) throw std::invalid_argument("MomentConfig: X, n_max >= 1 and c_max >= 0");
  contour.validate();
  MomentConfig c;
  c.q = q;
  c.psi = psi;
  c.X = X;
  c.k = k;
  c.n_max = n_max;
  c.c_max = c_max;
  c.contour = contour;
  c.Q = double(q) * double(psi.modulus) / (4 * kPi * kPi);
  return c;
}

double MomentConfig::prefactor() const {
  const int sign = k % 2 == 1 ? 1 : -1;
  return factorial(k) * (1 + sign * psi(q));
}

PhiFunction::PhiFunction(const RealCharacter& psi, int k, ContourSpec spec) : psi_(psi), k_(k), v_(k, spec) {
  if (psi.modulus <= 1) throw std::invalid_argument("PhiFunction: psi must be nontrivial");
  if (!(spec.sigma > 0)) throw std::invalid_argument("PhiFunction: contour to the right of 0");
  n0_ = std::max<i64>(64, 16 * psi.modulus);
  for (int i : {1, 3, 5, 7})
    deriv_.emplace_back(spec, [k, i](cplx u) {
      cplx p = 1;
      for (int j = 0; j < i; ++j) p *= -1.0 - 2.0 * u - double(j);
      return vk_weight(u, k) * p;
    });
  line_ = std::make_unique<ContourKernel>(
      spec, [this](cplx u) { return vk_weight(u, k_) * l_value(psi_, 1.0 + 2.0 * u, 1e-12); });
}

double PhiFunction::f(double t, double y) const { return v_(t * t * y) / t; }

double PhiFunction::dsum(double y) const {
  if (!(y > 0)) throw std::invalid_argument("PhiFunction: y > 0");
  CompensatedSum<double> s;
  for (i64 d = 1; d <= n0_; ++d) {
    const int c = psi_(d);
    if (c != 0) s.add(c * f(double(d), y));
  }
  // sum_{j >= 0} F(a + jD) = (1/D) int_a^inf F + F(a)/2 - sum_m B_2m/(2m)! D^{2m-1} F^{(2m-1)}(a);
  // the int_{N0}^inf parts cancel against sum_r psi(N0 + r) = 0
  static constexpr double kB[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30};
  static constexpr double kFact[] = {2, 24, 720, 40320};
  const i64 D = psi_.modulus;
  double integral = 0;
  for (i64 r = 1; r <= D; ++r) {
    const double a = double(n0_ + r);
    integral += gl12().integrate([&](double t) { return f(t, y); }, a - 1, a);
    const int c = psi_(n0_ + r);
    if (c == 0) continue;
    double em = -integral / D + f(a, y) / 2;
    double Dp = D;
    for (int m = 0; m < 4; ++m) {
      const int i = 2 * m + 1;
      const double deriv = std::pow(a, -1.0 - i) * deriv_[m].eval(a * a * y).value;
      em -= kB[m] / kFact[m] * Dp * deriv;
      Dp *= double(D) * D;
    }
    s.add(c * em);
  }
  return s.value();
}

double PhiFunction::contour(double y) const {
  if (!(y > 0)) throw std::invalid_argument("PhiFunction: y > 0");
  return line_->eval(y).value;
}

double PhiFunction::log_constant(double sigma) const {
  // |L(1 + 2u)| <= zeta(1 + 2 sigma)
  return std::log(std::riemann_zeta(1 + 2 * sigma)) + vk_log_constant(k_, sigma);
}

PhiTable::PhiTable(const PhiFunction& phi, double y_min, double y_max, double h) : h_(h) {
  if (!(y_min > 0 && y_max >= y_min && h > 0)) throw std::invalid_argument("PhiTable: 0 < y_min <= y_max");
  l0_ = std::log(y_min) - 3 * h;
  const i64 n = i64(std::ceil((std::log(y_max) - std::log(y_min)) / h)) + 7;
  v_.resize(n);
  parallel_for(n, [&](i64 i) { v_[i] = phi.contour(std::exp(l0_ + i * h_)); });
}

double PhiTable::operator()(double y) const {
  const double pos = (std::log(y) - l0_) / h_;
  const i64 i = i64(std::floor(pos));
  if (i < 2 || i + 3 >= i64(v_.size())) throw std::out_of_range("PhiTable: y outside the tabulated range");
  const double t = pos - i;
  double s = 0;
  for (int j = -2; j <= 3; ++j) {
    double w = 1;
    for (int l = -2; l <= 3; ++l)
      if (l != j) w *= (t - l) / double(j - l);
    s += w * v_[i + j];
  }
  return s;
}

double divisor_tail_bound(int j, double s, double N) {
  if (!(s > 1)) throw std::invalid_argument("divisor_tail_bound: s > 1");
  const double beta = s - 1, L = std::log(std::max(N, 1.0));
  // (s - 1) int_L^inf (1 + t)^j e^{-beta t} dt
  double sum = 0, fall = 1;
  for (int i = 0; i <= j; ++i) {
    sum += fall * std::pow(1 + L, j - i) / std::pow(beta, i + 1);
    fall *= j - i;
  }
  return beta * std::exp(-beta * L) * sum;
}

namespace {

// min over sigma of C^Phi(sigma) Q^sigma sum_{n > N} tau_j(n) n^{-s0 - sigma}
double phi_weighted_tail(const PhiFunction& phi, double Q, int j, double s0, double N,
                         std::initializer_list<double> sigmas) {
  double best = std::numeric_limits<double>::infinity();
  for (double sg : sigmas) {
    if (s0 + sg <= 1) continue;
    double lb = phi.log_constant(sg) + sg * std::log(Q) + std::log(divisor_tail_bound(j, s0 + sg, N));
    best = std::min(best, lb);
  }
  return std::exp(best);
}

}  // namespace

TailCap afe_lambda_derivative(const MockHeckeSystem& lambda, const MomentConfig& cfg) {
  const i64 N = cfg.n_max;
  const auto conv = conv_table(cfg.psi, N);
  const auto lam = lambda.table(N);
  PhiFunction phi(cfg.psi, cfg.k, cfg.contour);
  PhiTable tab(phi, 1 / cfg.Q, double(N) / cfg.Q);
  double core = block_reduce(N, 4096, [&](i64 lo, i64 hi) {
    CompensatedSum<double> s;
    for (i64 n = lo + 1; n <= hi; ++n)
      if (conv[n] != 0) s.add(conv[n] * lam[n] / std::sqrt(double(n)) * tab(double(n) / cfg.Q));
    return s.value();
  });
  TailCap r;
  const double pref = cfg.prefactor();
  r.value = pref * core;
  // |(1*psi)(n) lambda(n)| <= tau(n)^2 <= tau_4(n)
  r.cap = std::abs(pref) * phi_weighted_tail(phi, cfg.Q, 4, 0.5, double(N), {0.6, 0.75, 1.0, 1.25, 1.5, 2.0});
  r.truncation_ok = r.cap <= 1e-10 * std::max(1.0, std::abs(r.value));
  return r;
}

namespace {

std::vector<i64> petersson_moduli(i64 q, i64 c_max) {
  std::vector<i64> m;
  for (i64 c = 1; c <= c_max; ++c) m.push_back(c * q);
  return m;
}

}  // namespace

PeterssonKernel::PeterssonKernel(i64 q, i64 c_max) : q_(q), c_max_(c_max), kl_(petersson_moduli(q, c_max)) {
  if (!is_prime(q)) throw std::invalid_argument("PeterssonKernel: q prime");
}

double PeterssonKernel::tail_cap(i64 m, i64 n, i64 C) const {
  // |S(m, n; cq)| <= 2 tau(c) gcd(m, n)^{1/2} (cq)^{1/2} and |J_1(x)| <= x/2
  const double g = double(gcd(m, n));
  return 8 * kPi * kPi * std::sqrt(double(m) * double(n) * g) * std::pow(double(q_), -1.5) * tau_tail_32(C);
}

PeterssonPair PeterssonKernel::operator()(i64 m, i64 n) const {
  if (m < 1 || n < 1) throw std::invalid_argument("petersson_pair: m, n >= 1");
  CompensatedSum<double> s;
  for (i64 c = 1; c <= c_max_; ++c) {
    const double cq = double(c * q_);
    const double x = 4 * kPi * std::sqrt(double(m) * double(n)) / cq;
    s.add(kl_(m, n, c * q_).real() * bessel_j(1, x) / double(c));
  }
  PeterssonPair r;
  r.value = (m == n ? 1.0 : 0.0) - 2 * kPi / double(q_) * s.value();
  r.tail_cap = tail_cap(m, n, c_max_);
  return r;
}

PeterssonPair petersson_pair(i64 m, i64 n, const MomentConfig& cfg) { return PeterssonKernel(cfg.q, cfg.c_max)(m, n); }

double first_moment_diagonal_core(const MomentConfig& cfg) {
  if (cfg.X > cfg.n_max) throw std::invalid_argument("first_moment_diagonal: X <= n_max");
  const auto rho1 = rho1_table(cfg.psi, cfg.X);
  const auto conv = conv_table(cfg.psi, cfg.X);
  std::vector<i64> idx;
  for (i64 n = 1; n <= cfg.X; ++n)
    if (rho1[n] != 0 && conv[n] != 0) idx.push_back(n);
  PhiFunction phi(cfg.psi, cfg.k, cfg.contour);
  std::vector<double> term(idx.size());
  parallel_for(i64(idx.size()), [&](i64 i) {
    const i64 n = idx[i];
    term[i] = rho1[n] * conv[n] / double(n) * phi.dsum(double(n) / cfg.Q);
  });
  CompensatedSum<double> s;
  for (double t : term) s.add(t);
  return s.value();
}

double first_moment_diagonal(const MomentConfig& cfg) { return cfg.prefactor() * first_moment_diagonal_core(cfg); }

FirstMomentContour first_moment_contour_core(const MomentConfig& cfg) {
  if (!(cfg.contour.sigma > 0)) throw std::invalid_argument("first_moment_contour: contour to the right of 0");
  S1Series S(cfg.psi, cfg.X);
  const int k = cfg.k;
  auto w = [&](cplx u) { return vk_weight(u, k) * l_value(cfg.psi, 1.0 + 2.0 * u, 1e-12) * S(u); };
  FirstMomentContour r;
  ContourKernel right(cfg.contour, w);
  ContourKernel left({r.shifted_sigma, cfg.contour.t_max, cfg.contour.step}, w);
  auto a = right.eval(1 / cfg.Q), b = left.eval(1 / cfg.Q);
  if (!a.truncation_ok || !b.truncation_ok || !std::isfinite(a.value) || !std::isfinite(b.value))
    throw NumericError("first_moment_contour: quadrature truncation insufficient");
  r.full = a.value;
  r.shifted = b.value;
  r.abs_error = a.abs_error + b.abs_error;

  // [u^k] of G Gamma(1+u)^2 Q^u L(1+2u) S_1(u); G = 1 + O(u^4)
  const LTaylor L = l_taylor_at_one(cfg.psi);
  const double lq = std::log(cfg.Q), z2 = kPi * kPi / 6;
  const double g2[3] = {1, -2 * kEulerGamma, 2 * kEulerGamma * kEulerGamma + z2};
  const double qs[3] = {1, lq, lq * lq / 2};
  const double ls[3] = {L.c0, 2 * L.c1, 2 * L.c2};
  const double ss[3] = {S.derivative_at_zero(0), S.derivative_at_zero(1), S.derivative_at_zero(2) / 2};
  double prod[3] = {1, 0, 0};
  for (const double* f : {g2, qs, ls, ss}) {
    double nxt[3] = {0, 0, 0};
    for (int i = 0; i <= 2; ++i)
      for (int j = 0; i + j <= 2; ++j) nxt[i + j] += prod[i] * f[j];
    std::copy(nxt, nxt + 3, prod);
  }
  r.residue = prod[k];
  return r;
}

FirstMomentContour first_moment_contour(const MomentConfig& cfg) {
  auto r = first_moment_contour_core(cfg);
  const double p = cfg.prefactor();
  r.full *= p;
  r.residue *= p;
  r.shifted *= p;
  r.abs_error *= std::abs(p);
  return r;
}

double first_moment_main_term(const MomentConfig& cfg) {
  const double S = frak_s1(cfg.psi, std::max<i64>(cfg.X, 2)).to_double();
  const LTaylor L = l_taylor_at_one(cfg.psi);
  const int s = cfg.psi(cfg.q);
  if (cfg.k == 1) return 2 * (1 + s) * S * L.c1;
  return 4 * (1 - s) * S * (L.c2 + (std::log(cfg.Q) - 2 * kEulerGamma) * L.c1);
}

TailCap second_moment_diagonal(const MomentConfig& cfg) {
  const i64 X2 = cfg.X * cfg.X, N = cfg.n_max;
  const auto M = build_mollifier(cfg.psi, cfg.X);
  const auto conv = conv_table(cfg.psi, X2 * N);
  PhiFunction phi(cfg.psi, cfg.k, cfg.contour);
  PhiTable tab(phi, 1 / cfg.Q, double(X2 * N) / cfg.Q);
  std::vector<double> slot(X2 + 1, 0.0);
  parallel_for(X2, [&](i64 i) {
    const i64 a = i + 1;
    CompensatedSum<double> s;
    for (i64 b = 1; a * b <= X2; ++b) {
      const double r = M.rho2[a * b];
      if (r == 0) continue;
      CompensatedSum<double> inner;
      for (i64 n = 1; n <= N; ++n) {
        const int ca = conv[a * n], cb = conv[b * n];
        if (ca == 0 || cb == 0) continue;
        inner.add(double(ca) * cb / double(n) * tab(double(a * n) / cfg.Q) * tab(double(b * n) / cfg.Q));
      }
      s.add(r / double(a * b) * inner.value());
    }
    slot[a] = s.value();
  });
  CompensatedSum<double> s;
  for (double v : slot) s.add(v);

  // tail n > N: tau(an) <= tau(a) tau(n), |Phi(y)| <= C(sigma) y^{-sigma}
  const double sigmas[] = {0.1, 0.25, 0.5, 0.75, 1.0};
  double logc[5];
  for (int i = 0; i < 5; ++i) logc[i] = phi.log_constant(sigmas[i]);
  CompensatedSum<double> cap;
  for (i64 a = 1; a <= X2; ++a)
    for (i64 b = 1; a * b <= X2; ++b) {
      const double r = M.rho2[a * b];
      if (r == 0) continue;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 5; ++i) {
        const double sg = sigmas[i];
        best = std::min(best, 2 * logc[i] - sg * std::log(double(a) * b / (cfg.Q * cfg.Q)) +
                                  std::log(divisor_tail_bound(4, 1 + 2 * sg, double(N))));
      }
      cap.add(std::abs(r) / double(a * b) * double(num_divisors(a) * num_divisors(b)) * std::exp(best));
    }
  const double p = cfg.prefactor();
  TailCap out;
  out.value = p * p * s.value();
  out.cap = p * p * cap.value();
  out.truncation_ok = out.cap <= 1e-10 * std::max(1.0, std::abs(out.value));
  return out;
}

TcValue t_c_kernel(i64 c, i64 a, i64 b, i64 g, i64 d1, i64 d, const MomentConfig& cfg) {
  if (c < 1 || a < 1 || b < 1 || g < 1 || d1 < 1 || d < 1) throw std::invalid_argument("t_c_kernel: positive arguments");
  const i64 N = cfg.n_max, cq = c * cfg.q, ag = a * g;
  VkKernel V(cfg.k, cfg.contour);
  const auto conv = conv_table(cfg.psi, N);
  std::vector<double> vm(N + 1), vn(N + 1);
  parallel_for(N, [&](i64 i) {
    const double n = double(i + 1);
    vm[i + 1] = V(double(d1 * d1) * n / cfg.Q);
    vn[i + 1] = V(double(d * d) * double(b * g * g) * n / cfg.Q);
  });
  FactoredKloosterman kl({cq});
  const double tau_cq = double(num_divisors(cq)), scq = std::sqrt(double(cq));
  std::vector<double> val(N + 1, 0.0), maj(N + 1, 0.0);
  parallel_for(N, [&](i64 i) {
    const i64 m = i + 1;
    if (conv[m] == 0) return;
    CompensatedSum<double> s, t;
    for (i64 n = 1; n <= N; ++n) {
      if (conv[n] == 0) continue;
      const double w = double(conv[m]) * conv[n] / std::sqrt(double(m) * double(n)) * vm[m] * vn[n];
      const double x = 4 * kPi * std::sqrt(double(ag) * double(m) * double(n)) / double(cq);
      s.add(w * kl(m, ag * n, cq).real() * bessel_j(1, x));
      t.add(std::abs(w) * tau_cq * std::sqrt(double(gcd(gcd(m, ag * n), cq))) * scq * x / 2);
    }
    val[m] = s.value();
    maj[m] = t.value();
  });
  CompensatedSum<double> s, t;
  for (i64 m = 1; m <= N; ++m) {
    s.add(val[m]);
    t.add(maj[m]);
  }
  return {double(cq) * s.value(), double(cq) * t.value(), N};
}

EkEstimate e_k_estimate(const MomentConfig& cfg, i64 c_max, double budget) {
  if (c_max < 1) throw std::invalid_argument("e_k_estimate: c_max >= 1");
  const i64 X2 = cfg.X * cfg.X, N = cfg.n_max, q = cfg.q;
  const auto M = build_mollifier(cfg.psi, cfg.X);
  const auto convb = conv_table(cfg.psi, X2);
  struct Triple {
    i64 a, b, g;
    double w;
  };
  std::vector<Triple> tr;
  i64 max_bg2 = 1;
  for (i64 g = 1; g <= X2; ++g) {
    const int mu = int(mobius(g)) * cfg.psi(g);
    if (mu == 0) continue;
    for (i64 b = 1; b * g <= X2; ++b) {
      if (convb[b] == 0) continue;
      for (i64 a = 1; a * b * g <= X2; ++a) {
        const double r = M.rho2[a * b * g];
        if (r == 0) continue;
        tr.push_back({a, b, g, mu * convb[b] * r / (std::sqrt(double(a)) * b * std::pow(double(g), 1.5))});
        max_bg2 = std::max(max_bg2, b * g * g);
      }
    }
  }
  const double cost = double(tr.size()) * double(N) * double(N) * double(c_max) * double(q + c_max);
  if (cost > budget) throw std::length_error("e_k_estimate: configuration exceeds the cost budget");

  const auto conv = conv_table(cfg.psi, N);
  PhiFunction phi(cfg.psi, cfg.k, cfg.contour);
  PhiTable tab(phi, 1 / cfg.Q, double(max_bg2 * N) / cfg.Q);
  std::vector<double> pm(N + 1);
  for (i64 m = 1; m <= N; ++m) pm[m] = tab(double(m) / cfg.Q);
  FactoredKloosterman kl(petersson_moduli(q, c_max));

  CompensatedSum<double> total, cap;
  const double ctail = tau_tail_32(c_max);
  for (const auto& t : tr) {
    const i64 ag = t.a * t.g, bg2 = t.b * t.g * t.g;
    std::vector<double> pn(N + 1);
    for (i64 n = 1; n <= N; ++n) pn[n] = tab(double(bg2 * n) / cfg.Q);
    // per m: the c-weighted sum and the majorant piece
    std::vector<double> sm(N + 1, 0.0), bm(N + 1, 0.0);
    parallel_for(N, [&](i64 i) {
      const i64 m = i + 1;
      if (conv[m] == 0) return;
      CompensatedSum<double> s, bb;
      for (i64 n = 1; n <= N; ++n) {
        if (conv[n] == 0) continue;
        const double ph = pm[m] * pn[n];
        const double w = double(conv[m]) * conv[n] / std::sqrt(double(m) * double(n)) * ph;
        for (i64 c = 1; c <= c_max; ++c) {
          const i64 cq = c * q;
          const double x = 4 * kPi * std::sqrt(double(ag) * double(m) * double(n)) / double(cq);
          // T(c)/c^2 = cq/c^2 * sum
          s.add(double(q) / double(c) * w * kl(m, ag * n, cq).real() * bessel_j(1, x));
        }
        bb.add(std::abs(double(conv[m]) * conv[n]) * std::sqrt(double(gcd(m, ag * n))) * std::abs(ph));
      }
      sm[m] = s.value();
      bm[m] = bb.value();
    });
    CompensatedSum<double> s, bb;
    for (i64 m = 1; m <= N; ++m) {
      s.add(sm[m]);
      bb.add(bm[m]);
    }
    total.add(t.w * s.value());
    // |T(c)| <= 4 pi tau(c) sqrt(cq ag) B
    cap.add(std::abs(t.w) * 4 * kPi * std::sqrt(double(q) * double(ag)) * bb.value() * ctail);
  }
  EkEstimate e;
  const double q2 = double(q) * double(q);
  e.value = total.value() / q2;
  e.tail_cap = cap.value() / q2;
  e.c_max = c_max;
  const double L1 = l_value(cfg.psi, 1.0).real(), lq = std::log(double(q)), D = double(cfg.psi.modulus),
               X = double(cfg.X);
  e.bound_shape = L1 * std::pow(lq, 2 * cfg.k + 24) + std::pow(double(q), -1.0 / 12) * std::pow(D, 5.0 / 3) *
                                                          std::pow(X, 2.5) +
                  std::pow(double(q), -0.25) * std::pow(D, 17.0 / 4) * std::pow(X, 19.0 / 4);
  return e;
}

MomentReport first_moment_report(const MomentConfig& cfg, double budget) {
  MomentReport r;
  const double p = cfg.prefactor();
  const double core_diag = first_moment_diagonal_core(cfg);
  const auto core = first_moment_contour_core(cfg);
  r.diagonal = p * core_diag;
  r.contour = p * core.full;
  r.residue_main = p * core.residue;
  r.shifted_tail = p * core.shifted;
  r.main_term_prediction = first_moment_main_term(cfg);
  r.discrepancies["diagonal_vs_contour"] = std::abs(r.diagonal - r.contour);
  r.discrepancies["residue_identity"] = std::abs(r.contour - r.residue_main - r.shifted_tail);
  r.discrepancies["core_diagonal_vs_contour"] = std::abs(core_diag - core.full);
  r.discrepancies["core_residue_identity"] = std::abs(core.full - core.residue - core.shifted);
  r.discrepancies["main_term"] = std::abs(r.diagonal - r.main_term_prediction);
  r.discrepancies["shifted_over_sqrt_X_over_q"] =
      std::abs(core.shifted) / std::sqrt(double(cfg.X) / double(cfg.q));

  const double cost = double(cfg.X) * double(cfg.n_max) * double(cfg.c_max) * double(cfg.q + cfg.c_max);
  if (cost <= budget && cfg.X <= cfg.n_max) {
    const auto rho1 = rho1_table(cfg.psi, cfg.X);
    const auto conv = conv_table(cfg.psi, cfg.n_max);
    PhiFunction phi(cfg.psi, cfg.k, cfg.contour);
    PhiTable tab(phi, 1 / cfg.Q, double(cfg.n_max) / cfg.Q);
    PeterssonKernel P(cfg.q, cfg.c_max);
    std::vector<double> val(cfg.X + 1, 0.0), cap(cfg.X + 1, 0.0);
    parallel_for(cfg.X, [&](i64 i) {
      const i64 a = i + 1;
      if (rho1[a] == 0) return;
      CompensatedSum<double> s, c;
      for (i64 n = 1; n <= cfg.n_max; ++n) {
        if (conv[n] == 0) continue;
        const double w = rho1[a] / std::sqrt(double(a)) * conv[n] / std::sqrt(double(n)) * tab(double(n) / cfg.Q);
        const auto pp = P(a, n);
        s.add(w * (pp.value - (a == n ? 1.0 : 0.0)));
        c.add(std::abs(w) * P.tail_cap(a, n, 0));
      }
      val[a] = s.value();
      cap[a] = c.value();
    });
    CompensatedSum<double> s, c;
    for (i64 a = 1; a <= cfg.X; ++a) {
      s.add(val[a]);
      c.add(cap[a]);
    }
    r.petersson_tail = p * s.value();
    r.petersson_cap = std::abs(p) * c.value();
    r.petersson_computed = true;
  }
  return r;
}

}  // namespace lmoment
