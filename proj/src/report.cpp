#include "lmoment/report.hpp"

#include "lmoment/arith.hpp"
#include "lmoment/characters.hpp"
#include "lmoment/expsums.hpp"
#include "lmoment/moments.hpp"
#include "lmoment/shifted.hpp"
#include "lmoment/singular.hpp"
#include "lmoment/special.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace lmoment {

using nlohmann::json;

Record bounded(const std::string& name, double value, double tolerance) {
  return {name, value, tolerance, std::abs(value) <= tolerance ? Status::pass : Status::fail};
}

Record report_only(const std::string& name, double value) { return {name, value, std::nullopt, Status::report_only}; }

Record flag(const std::string& name, bool ok) { return {name, ok ? 1.0 : 0.0, 1.0, ok ? Status::pass : Status::fail}; }

const char* status_name(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    default:
      return "report-only";
  }
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s{"identities", "chars",  "singular", "moment1",
                                          "moment2diag", "tail", "shifted",  "voronoi"};
  return s;
}

namespace {

const std::set<std::string> kIntegerParams{"q", "d", "x", "k", "cmax", "nmax", "pmax"};

bool has(const ExperimentConfig& c, const std::string& key) { return c.params.count(key) > 0; }

double param(const ExperimentConfig& c, const std::string& key, double fallback) {
  auto it = c.params.find(key);
  return it == c.params.end() ? fallback : it->second;
}

i64 iparam(const ExperimentConfig& c, const std::string& key, i64 fallback) {
  return i64(param(c, key, double(fallback)));
}

i64 required(const ExperimentConfig& c, const std::string& key) {
  if (!has(c, key)) throw ConfigError("field '" + key + "': required by " + c.subcommand);
  return i64(c.params.at(key));
}

// odd real primitive character of modulus D
RealCharacter odd_character(i64 D) {
  if (!is_fundamental_discriminant(-D)) throw ConfigError("field 'd': no odd real primitive character modulo " + std::to_string(D));
  return kronecker_character(-D);
}

// tolerance, replaced by --tol-override when given
double tol(const ExperimentConfig& c, double t) { return param(c, "tol", t); }

std::string lower(std::string s) {
  for (auto& ch : s) ch = char(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  const auto& subs = subcommands();
  if (std::find(subs.begin(), subs.end(), cfg.subcommand) == subs.end())
    throw ConfigError("field 'subcommand': unknown value '" + cfg.subcommand + "'");
  for (const auto& [key, v] : cfg.params) {
    if (key != "tol" && !kIntegerParams.count(key)) throw ConfigError("field '" + key + "': unknown parameter");
    if (!std::isfinite(v) || !(v > 0)) throw ConfigError("field '" + key + "': must be positive");
    if (kIntegerParams.count(key) && (v != std::floor(v) || v > 9e15))
      throw ConfigError("field '" + key + "': must be an integer");
  }
  if (has(cfg, "tol") && cfg.params.at("tol") < 1e-14) throw ConfigError("field 'tol': must be at least 1e-14");
  if (has(cfg, "q") && !is_prime(i64(cfg.params.at("q")))) throw ConfigError("field 'q': must be prime");
  if (has(cfg, "k") && cfg.params.at("k") > 2) throw ConfigError("field 'k': must be 1 or 2");
  if (has(cfg, "d")) odd_character(i64(cfg.params.at("d")));
  if (has(cfg, "q") && has(cfg, "d") && gcd(i64(cfg.params.at("q")), i64(cfg.params.at("d"))) != 1)
    throw ConfigError("field 'q': must be coprime to d");
  for (double r : cfg.rungs)
    if (!std::isfinite(r) || !(r >= 10)) throw ConfigError("field 'rungs': entries must be at least 10");
}

ExperimentConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const size_t upto = std::min<size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + std::ptrdiff_t(upto), '\n');
    throw ConfigError("line " + std::to_string(line) + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("line 1: top level must be an object");
  auto field = [&](const json& obj, const char* key) -> const json* {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  };
  const json& src = j.contains("config") ? j.at("config") : j;
  ExperimentConfig c;
  if (auto s = field(src, "subcommand"); s && s->is_string())
    c.subcommand = s->get<std::string>();
  else
    throw ConfigError("field 'subcommand': missing or not a string");
  if (auto p = field(src, "parameters")) {
    if (!p->is_object()) throw ConfigError("field 'parameters': must be an object");
    for (auto it = p->begin(); it != p->end(); ++it) {
      if (it.key() == "rungs") {
        if (!it->is_array()) throw ConfigError("field 'rungs': must be an array");
        for (const auto& r : *it) {
          if (!r.is_number()) throw ConfigError("field 'rungs': entries must be numbers");
          c.rungs.push_back(r.get<double>());
        }
      } else {
        if (!it->is_number()) throw ConfigError("field '" + it.key() + "': must be a number");
        c.params[it.key()] = it->get<double>();
      }
    }
  }
  if (auto o = field(src, "output_path")) {
    if (!o->is_string()) throw ConfigError("field 'output_path': must be a string");
    c.output_path = o->get<std::string>();
  }
  if (auto f = field(src, "format")) {
    const auto v = f->is_string() ? lower(f->get<std::string>()) : "";
    if (v == "json")
      c.format = Format::json;
    else if (v == "csv")
      c.format = Format::csv;
    else
      throw ConfigError("field 'format': must be json or csv");
  }
  return c;
}

std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string emit_report(const ExperimentConfig& cfg, const std::vector<Record>& records, Format format,
                        std::optional<double> runtime_seconds) {
  if (records.empty()) throw std::invalid_argument("emit_report: no records");
  std::ostringstream out;
  if (format == Format::csv) {
    out << "name,value,tolerance,status\n";
    for (const auto& r : records) {
      const auto v = format_number(r.value);
      out << r.name << ',' << (v == "null" ? "nan" : v) << ',' << (r.tolerance ? format_number(*r.tolerance) : "")
          << ',' << status_name(r.status) << '\n';
    }
    return out.str();
  }
  out << "{\"config\":{\"subcommand\":" << json(cfg.subcommand).dump() << ",\"parameters\":{";
  bool first = true;
  for (const auto& [k, v] : cfg.params) {
    out << (first ? "" : ",") << json(k).dump() << ':' << format_number(v);
    first = false;
  }
  if (!cfg.rungs.empty()) {
    out << (first ? "" : ",") << "\"rungs\":[";
    for (size_t i = 0; i < cfg.rungs.size(); ++i) out << (i ? "," : "") << format_number(cfg.rungs[i]);
    out << ']';
  }
  out << "},\"format\":\"json\"},\"results\":[";
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out << (i ? "," : "") << "\n{\"name\":" << json(r.name).dump() << ",\"value\":" << format_number(r.value)
        << ",\"tolerance\":" << (r.tolerance ? format_number(*r.tolerance) : "null") << ",\"status\":\""
        << status_name(r.status) << "\"}";
  }
  out << "\n],\"runtime_seconds\":" << (runtime_seconds ? format_number(*runtime_seconds) : "null") << "}\n";
  return out.str();
}

void write_atomic(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string());
    f << bytes;
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, target);
}

namespace {

std::vector<Record> run_identities(const ExperimentConfig& c) {
  const i64 pmax = iparam(c, "pmax", 10000);
  i64 checked = 0, mismatches = 0;
  for (i64 p : primes_up_to(pmax))
    for (int s : {-1, 0, 1})
      for (auto k : {LocalFactorKind::P1, LocalFactorKind::P2, LocalFactorKind::P0}) {
        ++checked;
        if (!local_factor(k, p, s).agree()) ++mismatches;
      }
  std::vector<Record> r{report_only("local_factor_cases", double(checked)),
                        bounded("local_factor_mismatches", double(mismatches), 0)};
  const auto psi = odd_character(iparam(c, "d", 3));
  const i64 X = iparam(c, "x", 10000);
  auto s1 = frak_s1(psi, X), s2 = frak_s2(psi, X);
  r.push_back(report_only("frak_s1", s1.to_double()));
  r.push_back(report_only("frak_s2", s2.to_double()));
  r.push_back(bounded("frak_s2_minus_s1_squared_rel", ((s2.value - s1.value * s1.value) / s2.value).convert_to<double>(),
                      tol(c, 1e-13)));
  return r;
}

std::vector<Record> run_chars(const ExperimentConfig& c) {
  const auto psi = odd_character(iparam(c, "d", 3));
  const double D = double(psi.modulus);
  std::vector<Record> r;
  r.push_back(bounded("gauss_sum_minus_i_sqrt_d", std::abs(gauss_sum(psi) - cplx(0, std::sqrt(D))), tol(c, 1e-9)));
  double worst = 0;
  for (const auto& chi : enumerate_odd_real_primitive(500))
    worst = std::max(worst, std::abs(gauss_sum(chi) - cplx(0, std::sqrt(double(chi.modulus)))));
  r.push_back(bounded("gauss_sum_sweep_d_le_500", worst, tol(c, 1e-9)));
  auto L = l1_derivatives(psi);
  r.push_back(report_only("L1", L.L1));
  r.push_back(report_only("L1_prime", L.L1_prime));
  r.push_back(report_only("L1_double_prime", L.L1_double_prime));
  r.push_back(report_only("L1_prime_lemma_vs_direct", std::abs(L.L1_prime - L.L1_prime_direct)));
  auto ns = nelson_sweep(12, 240, 240);
  r.push_back(bounded("nelson_sweep_failures", double(ns.failures), 0));
  r.push_back(report_only("nelson_sweep_max_error", ns.max_error));
  auto ws = weil_sweep(50, 500);
  r.push_back(bounded("weil_sweep_failures", double(ws.failures), 0));
  r.push_back(report_only("weil_sweep_max_ratio", ws.max_error));
  auto nu = nu_sweep(60);
  r.push_back(bounded("nu_sweep_failures", double(nu.failures), 0));
  const auto w = bump_window(50);
  struct Spec {
    i64 disc, c1, c2;
  };
  for (Spec s : {Spec{1, 2, 3}, Spec{-3, 3, 6}, Spec{1, 4, 6}, Spec{-4, 4, 12}}) {
    auto chi = s.disc == 1 ? trivial_character() : kronecker_character(s.disc);
    auto p = poisson_orthogonality_check(chi, s.c1, s.c2, w);
    r.push_back(bounded("poisson_" + std::to_string(s.disc) + "_" + std::to_string(s.c1) + "_" + std::to_string(s.c2),
                        p.discrepancy, tol(c, 1e-6)));
  }
  return r;
}

std::vector<Record> run_singular(const ExperimentConfig& c) {
  const auto psi = odd_character(iparam(c, "d", 3));
  const i64 X = iparam(c, "x", 10000);
  auto s1 = frak_s1(psi, X), s2 = frak_s2(psi, X);
  std::vector<Record> r{report_only("frak_s1", s1.to_double()), report_only("frak_s2", s2.to_double())};
  r.push_back(bounded("frak_s2_minus_s1_squared_rel", ((s2.value - s1.value * s1.value) / s2.value).convert_to<double>(),
                      tol(c, 1e-13)));
  S1Series S(psi, std::min<i64>(X, 100000));
  r.push_back(report_only("s1_at_zero", S.derivative_at_zero(0)));
  r.push_back(report_only("s1_prime_at_zero", S.derivative_at_zero(1)));
  r.push_back(report_only("q0_logderiv", q0_logderiv(psi, X)));
  for (double u : {0.15, 0.25, 0.35}) {
    auto m = mellin_j0j1_check(u);
    char name[32];
    std::snprintf(name, sizeof name, "mellin_j0j1_u_%g", u);
    r.push_back(bounded(name, m.discrepancy, tol(c, 1e-6)));
  }
  return r;
}

MomentConfig moment_config(const ExperimentConfig& c) {
  const auto psi = odd_character(required(c, "d"));
  return MomentConfig::make(required(c, "q"), psi, iparam(c, "x", 100), int(iparam(c, "k", 1)), iparam(c, "nmax", 1000),
                            iparam(c, "cmax", 10));
}

std::vector<Record> run_moment1(const ExperimentConfig& c) {
  const auto cfg = moment_config(c);
  auto m = first_moment_report(cfg);
  std::vector<Record> r{report_only("prefactor", cfg.prefactor()), report_only("diagonal", m.diagonal),
                        report_only("contour_full", m.contour),    report_only("residue_main", m.residue_main),
                        report_only("shifted_tail", m.shifted_tail), report_only("main_term_prediction", m.main_term_prediction)};
  const double t = tol(c, 1e-6);
  r.push_back(bounded("diagonal_vs_contour", m.discrepancies.at("diagonal_vs_contour"), t));
  r.push_back(bounded("residue_identity", m.discrepancies.at("residue_identity"), t));
  r.push_back(bounded("core_diagonal_vs_contour", m.discrepancies.at("core_diagonal_vs_contour"), t));
  r.push_back(bounded("core_residue_identity", m.discrepancies.at("core_residue_identity"), t));
  r.push_back(report_only("main_term_discrepancy", m.discrepancies.at("main_term")));
  r.push_back(report_only("shifted_over_sqrt_X_over_q", m.discrepancies.at("shifted_over_sqrt_X_over_q")));
  if (m.petersson_computed) {
    r.push_back(report_only("petersson_tail", m.petersson_tail));
    r.push_back(bounded("petersson_tail_within_cap", std::abs(m.petersson_tail), m.petersson_cap));
  }
  return r;
}

std::vector<Record> run_moment2diag(const ExperimentConfig& c) {
  const auto cfg = moment_config(c);
  auto t = second_moment_diagonal(cfg);
  return {report_only("prefactor", cfg.prefactor()), report_only("second_moment_diagonal", t.value),
          report_only("tail_cap", t.cap), flag("truncation_ok", t.truncation_ok)};
}

std::vector<Record> run_tail(const ExperimentConfig& c) {
  const auto cfg = moment_config(c);
  auto e = e_k_estimate(cfg, cfg.c_max);
  return {report_only("e_k", e.value), report_only("e_k_tail_cap", e.tail_cap),
          report_only("bound_shape", e.bound_shape), report_only("c_max", double(e.c_max))};
}

struct TrendSpec {
  i64 a, b, h, d1, d2;
};

const std::vector<TrendSpec>& trend_specs() {
  static const std::vector<TrendSpec> s{{1, 1, 1, 1, -3}, {2, 1, 1, 1, -4}, {1, 1, 2, 1, -3}, {1, 2, 3, 1, -7}, {3, 1, 2, 1, -3}};
  return s;
}

std::string spec_name(const TrendSpec& s) {
  return "a" + std::to_string(s.a) + "_b" + std::to_string(s.b) + "_h" + std::to_string(s.h) + "_psi1_" +
         std::to_string(s.d1) + "_psi2_" + std::to_string(s.d2);
}

std::vector<Record> run_shifted(const ExperimentConfig& c) {
  const std::vector<double> rungs = c.rungs.empty() ? std::vector<double>{1e3, 4e3, 1.6e4} : c.rungs;
  std::vector<Record> r;
  for (const auto& s : trend_specs()) {
    auto t = proposition_trend(s.a, s.b, s.h, kronecker_character(s.d1), kronecker_character(s.d2), rungs);
    const auto base = spec_name(s);
    for (size_t i = 0; i < rungs.size(); ++i) {
      const auto& p = t.reports[i];
      const auto tag = base + "_M" + format_number(rungs[i]);
      r.push_back(report_only(tag + "_bruteforce", p.bruteforce));
      r.push_back(report_only(tag + "_main_term", p.main_term));
      r.push_back(report_only(tag + "_rel_error", p.rel_error));
      r.push_back(report_only(tag + "_error_shape", p.error_shape));
    }
    r.push_back(flag(base + "_non_increasing", t.non_increasing));
  }
  return r;
}

std::vector<Record> run_voronoi(const ExperimentConfig& c) {
  const double X = param(c, "x", 10000), t = tol(c, 1e-6);
  std::vector<Record> r;
  for (i64 d : {3, 4, 7}) {
    const auto psi = odd_character(d);
    for (i64 cc : {i64(1), d, 2 * d, d == 7 ? i64(5) : i64(7)}) {
      const i64 a = gcd(2, cc) == 1 ? 2 : (gcd(3, cc) == 1 ? 3 : 5);
      auto v = voronoi_check(psi, a, cc, X);
      r.push_back(bounded("voronoi_d" + std::to_string(d) + "_c" + std::to_string(cc), v.discrepancy, t));
    }
  }
  for (auto [d1, d2] : {std::pair<i64, i64>{-3, 5}, {-4, 5}, {-3, 1}}) {
    auto v = voronoi2_check(kronecker_character(d1), kronecker_character(d2), {1, 2, 3, 4}, 5, X);
    const auto tag = "voronoi2_" + std::to_string(d1) + "_" + std::to_string(d2) + "_l5";
    r.push_back(report_only(tag + "_phase_re", v.phase.real()));
    r.push_back(report_only(tag + "_phase_im", v.phase.imag()));
    r.push_back(bounded(tag + "_unimodularity", v.unimodularity_error, t));
    r.push_back(bounded(tag + "_residual", v.discrepancy, t));
  }
  return r;
}

}  // namespace

std::vector<Record> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto& s = cfg.subcommand;
  try {
    if (s == "identities") return run_identities(cfg);
    if (s == "chars") return run_chars(cfg);
    if (s == "singular") return run_singular(cfg);
    if (s == "moment1") return run_moment1(cfg);
    if (s == "moment2diag") return run_moment2diag(cfg);
    if (s == "tail") return run_tail(cfg);
    if (s == "shifted") return run_shifted(cfg);
    return run_voronoi(cfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

int run(const ExperimentConfig& cfg, std::string* error) {
  auto fail = [&](int code, const std::string& msg) {
    if (error) *error = msg;
    return code;
  };
  std::vector<Record> records;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    records = run_experiment(cfg);
  } catch (const ConfigError& e) {
    return fail(2, e.what());
  } catch (const std::length_error& e) {
    return fail(3, std::string("budget guard: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto bytes = emit_report(cfg, records, cfg.format, cfg.timing ? std::optional<double>(secs) : std::nullopt);
  if (cfg.output_path.empty())
    std::fwrite(bytes.data(), 1, bytes.size(), stdout);
  else
    write_atomic(cfg.output_path, bytes);
  for (const auto& r : records)
    if (r.status == Status::fail) return 1;
  return 0;
}

}  // namespace lmoment
