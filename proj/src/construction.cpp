#include "nls/construction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "nls/errors.hpp"

namespace nls {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kLn10 = std::numbers::ln10;
constexpr double kRegimeTolerance = 1e-12;

void require_admissible(double s, int d) {
  if (d < 1 || d > kMaxDim) throw DomainError("dimension must be 1, 2 or 3");
  if (d == 1 && s > -0.5 + kRegimeTolerance) {
    throw DomainError("inadmissible (s, d): d = 1 needs s <= -1/2");
  }
  if (d >= 2 && !(s < 0.0)) throw DomainError("inadmissible (s, d): d >= 2 needs s < 0");
}

LogSize ln_f_size(const InflationParams& p) {
  switch (regime_for(p.s, p.d)) {
    case Regime::case1:
      return {};
    case Regime::case2:
      return LogSize::constant(0.5 * std::log(p.lnA.at(p.lnN())));
    case Regime::case3:
      return (p.d / 2.0 + p.s) * p.lnA;
  }
  return {};
}

double log_or_minus_inf(double x) {
  return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
}

std::string format_log_real(double ln_value) {
  char buf[64];
  if (std::abs(ln_value) < 700.0) {
    std::snprintf(buf, sizeof buf, "%.17g", std::exp(ln_value));
  } else {
    std::snprintf(buf, sizeof buf, "2^%.17g", ln_value / kLn2);
  }
  return buf;
}

double parse_log_real(const std::string& text) {
  std::string v = text;
  if (!v.empty() && v[0] == '~') v = v.substr(1);
  if (v.rfind("2^", 0) == 0) return std::stod(v.substr(2)) * kLn2;
  const double x = std::stod(v);
  if (!(x > 0.0)) throw std::invalid_argument("expected a positive number, got '" + text + "'");
  return std::log(x);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::case1:
      return "Case1";
    case Regime::case2:
      return "Case2";
    case Regime::case3:
      return "Case3";
  }
  return "?";
}

Regime parse_regime(const std::string& name) {
  if (name == "Case1") return Regime::case1;
  if (name == "Case2") return Regime::case2;
  if (name == "Case3") return Regime::case3;
  throw std::invalid_argument("unknown regime '" + name + "'");
}

double InflationParams::lnN() const { return log2N * kLn2; }
double InflationParams::R() const { return std::exp(lnR.at(lnN())); }
double InflationParams::T() const { return std::exp(lnT.at(lnN())); }
double InflationParams::ln_f() const { return ln_f_size(*this).at(lnN()); }
double InflationParams::f() const { return std::exp(ln_f()); }

SparseSpectrum build_phi_n(int d, std::int64_t N, std::int64_t A, double R) {
  if (A <= 0 || A % 2 != 0) throw DomainError("build_phi_n: A must be a positive even integer");
  if (N <= 0) throw DomainError("build_phi_n: N must be positive");
  if (!(R >= 0.0) || !std::isfinite(R)) throw DomainError("build_phi_n: R must be >= 0");
  if (A > N) {
    throw DomainError("build_phi_n: cubes overlap (A = " + std::to_string(A) +
                      " > N = " + std::to_string(N) + ")");
  }
  if (R == 0.0) return SparseSpectrum(d);
  const SparseSpectrum near = cube_indicator(LatticePoint::along_axis(d, 0, N), A, R);
  const SparseSpectrum far = cube_indicator(LatticePoint::along_axis(d, 0, 2 * N), A, R);
  return add_exact(near, far);
}

SparseSpectrum build_phi_n(const InflationParams& p) {
  if (!p.realizable()) {
    throw ResourceError("build_phi_n: N = " + format_power_of_two(p.log2N) +
                        " is too large to place on the lattice");
  }
  return build_phi_n(p.d, p.N, p.A, p.R());
}

Regime regime_for(double s, int d) {
  const double crit = -d / 2.0;
  if (std::abs(s - crit) <= kRegimeTolerance) return Regime::case2;
  return s < crit ? Regime::case1 : Regime::case3;
}

double f_of_A(double A, double s, int d) {
  if (!(A >= 1.0)) throw std::invalid_argument("f_of_A: A must be >= 1");
  switch (regime_for(s, d)) {
    case Regime::case1:
      return 1.0;
    case Regime::case2:
      return std::sqrt(std::log(A));
    case Regime::case3:
      return std::pow(A, d / 2.0 + s);
  }
  return 1.0;
}

InflationParams select_parameters(int n, double s, int d, double log2N) {
  require_admissible(s, d);
  if (n < 1) throw std::invalid_argument("select_parameters: n must be >= 1");
  if (!(log2N >= 1.0) || std::floor(log2N) != log2N) {
    throw std::invalid_argument("select_parameters: N must be 2^k with integer k >= 1");
  }
  InflationParams p;
  p.n = n;
  p.d = d;
  p.s = s;
  p.log2N = log2N;
  p.regime = regime_for(s, d);
  const double lnN = p.lnN();

  switch (p.regime) {
    case Regime::case1: {
      p.delta = d == 1 ? std::min(0.1, (-2.0 * s - 1.0) / 3.0 - 0.01) : 0.1;
      if (!(p.delta > 0.0) || !(s < -0.5 - 1.5 * p.delta)) {
        throw DomainError("Case 1: s is too close to -1/2 for a positive delta");
      }
      p.lnA = {(1.0 - p.delta) / d, 0.0};
      p.lnR = {2.0 * p.delta, 0.0};
      p.lnT = {-2.0 - 3.0 * p.delta, 0.0};
      break;
    }
    case Regime::case2: {
      const double lnlnN = std::log(lnN);
      p.lnA = {1.0 / d, -lnlnN / (16.0 * d)};
      p.lnR = {};
      p.lnT = {-2.0, -lnlnN / 8.0};
      break;
    }
    case Regime::case3: {
      p.delta = std::min(0.1, -s / d);
      p.theta = std::min({p.delta / 10.0, -s * p.delta / 4.0, 0.9 * (-2.0 * s - d * p.delta) / 2.0});
      if (!(-2.0 * s > d * p.delta + p.theta) || !(-s * p.delta > 2.0 * p.theta) ||
          !(p.theta > 0.0)) {
        throw DomainError("Case 3: delta/theta violate -2s > d delta + theta, -s delta > 2 theta");
      }
      p.lnA = {2.0 / d - p.delta, 0.0};
      p.lnR = {-1.0 - s + d * p.delta / 2.0 - p.theta, 0.0};
      p.lnT = {-2.0 + 2.0 * s + d * p.delta + p.theta, 0.0};
      break;
    }
  }

  if (log2N <= 62.0) {
    p.N = std::int64_t{1} << static_cast<int>(log2N);
    const double a_real = std::exp2(p.lnA.at(lnN) / kLn2) * (1.0 + 1e-12);
    if (a_real < 2.0) {
      throw std::invalid_argument("N = " + std::to_string(p.N) +
                                  " too small: cube side A rounds below 2");
    }
    auto a = static_cast<std::int64_t>(std::floor(a_real));
    a -= a % 2;
    if (a >= p.N) {
      throw std::invalid_argument("N = " + std::to_string(p.N) + " too small: A = " +
                                  std::to_string(a) + " is not below N (vi)");
    }
    p.A = a;
    p.lnA.rest = std::log(static_cast<double>(a)) - p.lnA.coef * lnN;
  }
  return p;
}

bool ConditionReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.pass; });
}

const ConditionEntry* ConditionReport::first_failure() const {
  for (const auto& e : entries) {
    if (!e.pass) return &e;
  }
  return nullptr;
}

const ConditionEntry& ConditionReport::get(const std::string& id) const {
  for (const auto& e : entries) {
    if (e.id == id) return e;
  }
  throw std::out_of_range("no condition '" + id + "'");
}

ConditionReport check_conditions(const InflationParams& p, const SparseSpectrum& u0,
                                 double margin) {
  ConditionReport rep;
  rep.margin = margin;
  const double lnN = p.lnN();
  const double log10_margin = std::log10(margin);
  const double d = p.d;
  const LogSize ln_n = LogSize::constant(std::log(static_cast<double>(p.n)));
  const LogSize ln_f = ln_f_size(p);
  const LogSize one{};
  const double ln_u0_fl1 = log_or_minus_inf(fl_norm(u0, 1.0));
  const double ln_u0_l2 = log_or_minus_inf(l2_norm(u0));

  auto add = [&](const std::string& id, const std::string& desc, LogSize small, LogSize large,
                 bool derived = false) {
    ConditionEntry e;
    e.id = id;
    e.description = desc;
    e.log10_small = small.at(lnN) / kLn10;
    e.log10_large = large.at(lnN) / kLn10;
    e.log10_ratio = (large - small).at(lnN) / kLn10;
    e.pass = e.log10_ratio >= log10_margin;
    e.derived = derived;
    rep.entries.push_back(e);
  };
  auto add_vs_constant = [&](const std::string& id, const std::string& desc, double ln_small,
                             LogSize large) {
    ConditionEntry e;
    e.id = id;
    e.description = desc;
    e.log10_small = ln_small / kLn10;
    e.log10_large = large.at(lnN) / kLn10;
    e.log10_ratio = std::isinf(ln_small) ? kInfinity : (large.at(lnN) - ln_small) / kLn10;
    e.pass = e.log10_ratio >= log10_margin;
    rep.entries.push_back(e);
  };

  const LogSize tr2a2d = p.lnT + 2.0 * p.lnR + (2.0 * d) * p.lnA;
  add("i", "R A^{d/2} N^s << 1/n", p.lnR + (d / 2.0) * p.lnA + LogSize{p.s, 0.0},
      one - ln_n);
  add("ii", "T R^2 A^{2d} << 1", tr2a2d, one);
  const LogSize lead = p.lnT + 3.0 * p.lnR + (2.0 * d) * p.lnA + ln_f;
  add("iii", "T R^3 A^{2d} f(A) >> n", ln_n, lead);
  {
    // Same ratio as (ii) by construction: lead / tail = 1 / (T R^2 A^{2d}).
    const LogSize tail = 2.0 * p.lnT + 5.0 * p.lnR + (4.0 * d) * p.lnA + ln_f;
    ConditionEntry e;
    e.id = "iv";
    e.description = "T R^3 A^{2d} f(A) >> T^2 R^5 A^{4d} f(A)";
    e.log10_small = tail.at(lnN) / kLn10;
    e.log10_large = lead.at(lnN) / kLn10;
    e.log10_ratio = rep.get("ii").log10_ratio;
    e.pass = rep.get("ii").pass;
    e.derived = true;
    rep.entries.push_back(e);
  }
  add("v", "T << N^{-2}", p.lnT, LogSize{-2.0, 0.0});
  add_vs_constant("vi.a", "R A^d >> ||u0||_{FL^1}", ln_u0_fl1, p.lnR + d * p.lnA);
  add("vi.b", "A << N", p.lnA, LogSize{1.0, 0.0});
  add_vs_constant("vi.c", "R f(A) >> ||u0||_{L^2}", ln_u0_l2, p.lnR + ln_f);
  return rep;
}

ThresholdResult find_threshold(int n, double s, int d, const SparseSpectrum& u0, double margin,
                               double max_log2N) {
  require_admissible(s, d);
  auto passes = [&](double k) {
    try {
      return check_conditions(select_parameters(n, s, d, k), u0, margin).all_pass();
    } catch (const std::invalid_argument&) {
      return false;
    }
  };
  ThresholdResult res;
  double lo = 0.0;
  double hi = 1.0;
  while (!passes(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > max_log2N) return res;
  }
  while (hi - lo > 1.0) {
    const double mid = std::floor(lo + (hi - lo) / 2.0);
    if (mid <= lo || mid >= hi) break;
    if (passes(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  res.found = true;
  res.log2N0 = hi;
  res.samples = {hi, hi + 1, hi + 2, std::floor(hi * 1.5), hi * 2, hi * 4, hi * 16};
  res.verified = std::all_of(res.samples.begin(), res.samples.end(), passes);
  return res;
}

BackgroundProfile BackgroundProfile::parse(const std::string& text) {
  const std::string t = trim(text);
  if (t == "zero") return zero();
  double a = 0, w = 0;
  char close = 0;
  if (std::sscanf(t.c_str(), "gaussian(%lf,%lf%c", &a, &w, &close) == 3 && close == ')') {
    return gaussian(a, w);
  }
  throw std::invalid_argument("background profile must be 'zero' or 'gaussian(a,w)', got '" +
                              text + "'");
}

std::string BackgroundProfile::to_string() const {
  if (kind == Kind::zero) return "zero";
  std::ostringstream os;
  os << "gaussian(" << amplitude << "," << width << ")";
  return os.str();
}

SparseSpectrum build_background(int d, const BackgroundProfile& profile) {
  if (profile.kind == BackgroundProfile::Kind::zero) return SparseSpectrum(d);
  if (!(profile.width >= 1.0)) throw DomainError("build_background: width must be >= 1");
  const auto r = static_cast<std::int64_t>(std::floor(4.0 * profile.width));
  const double w2 = profile.width * profile.width;
  std::vector<SparseSpectrum::Entry> entries;
  LatticePoint xi(d);
  for (int k = 0; k < d; ++k) xi[k] = -r;
  while (true) {
    const double v = profile.amplitude * std::exp(-static_cast<double>(xi.norm_squared()) / w2);
    entries.push_back({xi, v});
    int k = d - 1;
    while (k >= 0) {
      if (++xi[k] <= r) break;
      xi[k] = -r;
      --k;
    }
    if (k < 0) break;
  }
  return SparseSpectrum::from_entries(d, std::move(entries), 0.0);
}

std::string format_power_of_two(double log2N) {
  if (log2N <= 62.0 && std::floor(log2N) == log2N && log2N >= 0.0) {
    return std::to_string(std::int64_t{1} << static_cast<int>(log2N));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "2^%.17g", log2N);
  return buf;
}

void write_params(std::ostream& os, const InflationParams& p) {
  char buf[64];
  os << "n=" << p.n << '\n' << "d=" << p.d << '\n';
  std::snprintf(buf, sizeof buf, "%.17g", p.s);
  os << "s=" << buf << '\n';
  os << "N=" << format_power_of_two(p.log2N) << '\n';
  if (p.A > 0) {
    os << "A=" << p.A << '\n';
  } else {
    std::snprintf(buf, sizeof buf, "~2^%.17g", p.lnA.at(p.lnN()) / kLn2);
    os << "A=" << buf << '\n';
  }
  os << "R=" << format_log_real(p.lnR.at(p.lnN())) << '\n';
  os << "T=" << format_log_real(p.lnT.at(p.lnN())) << '\n';
  std::snprintf(buf, sizeof buf, "%.17g", p.delta);
  os << "delta=" << buf << '\n';
  std::snprintf(buf, sizeof buf, "%.17g", p.theta);
  os << "theta=" << buf << '\n';
  os << "regime=" << regime_name(p.regime) << '\n';
}

InflationParams read_params(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(is, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("params: expected key=value, got '" + t + "'");
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  static const char* const keys[] = {"n", "d", "s", "N", "A", "R", "T", "delta", "theta", "regime"};
  for (const auto& [k, v] : kv) {
    if (std::find_if(std::begin(keys), std::end(keys), [&](const char* x) { return k == x; }) ==
        std::end(keys)) {
      throw std::invalid_argument("params: unknown key '" + k + "'");
    }
  }
  for (const char* k : keys) {
    if (!kv.count(k)) throw std::invalid_argument(std::string("params: missing key '") + k + "'");
  }
  InflationParams p;
  p.n = std::stoi(kv["n"]);
  p.d = std::stoi(kv["d"]);
  p.s = std::stod(kv["s"]);
  p.log2N = parse_log_real(kv["N"]) / kLn2;
  if (kv["N"].rfind("2^", 0) != 0) {
    p.N = std::stoll(kv["N"]);
    p.log2N = std::round(p.log2N);
  }
  p.lnA = LogSize::constant(parse_log_real(kv["A"]));
  if (kv["A"][0] != '~') p.A = std::stoll(kv["A"]);
  p.lnR = LogSize::constant(parse_log_real(kv["R"]));
  p.lnT = LogSize::constant(parse_log_real(kv["T"]));
  p.delta = std::stod(kv["delta"]);
  p.theta = std::stod(kv["theta"]);
  p.regime = parse_regime(kv["regime"]);
  return p;
}

}  // namespace nls
