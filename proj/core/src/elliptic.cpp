#include "rdexact/elliptic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rdexact/error.hpp"

namespace rdexact::elliptic {

Modulus::Modulus(double k) : k_(k) {
  if (!(k >= 0.0 && k <= 1.0)) {
    throw DomainError("elliptic modulus must satisfy 0 <= k <= 1, got " + std::to_string(k));
  }
  kp_ = std::sqrt((1.0 - k) * (1.0 + k));
  if (k == 1.0) {
    quarter_period_ = std::numeric_limits<double>::infinity();
    return;
  }
  if (k == 0.0) {
    quarter_period_ = std::numbers::pi / 2.0;
    return;
  }
  double a = 1.0;
  double b = kp_;
  double c = k;
  agm_a_[0] = a;
  agm_c_[0] = c;
  int n = 0;
  while (std::abs(c) > 4.0 * std::numeric_limits<double>::epsilon() * a && n < kMaxAgm) {
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    c = 0.5 * (a - b);
    a = an;
    b = bn;
    ++n;
    agm_a_[n] = a;
    agm_c_[n] = c;
  }
  agm_steps_ = n;
  quarter_period_ = std::numbers::pi / (2.0 * a);
}

bool JacobiTriple::at_pole() const { return std::abs(sn) < kPoleThreshold; }

double complete_elliptic_k(const Modulus& m) {
  if (m.k() == 1.0) {
    throw DomainError("complete elliptic integral K diverges at k = 1 (unbounded period)");
  }
  return m.quarter_period();
}

struct JacobiKernel {
  static JacobiTriple eval(double y, const Modulus& m) {
    if (m.k_ == 0.0) return {std::sin(y), std::cos(y), 1.0};
    if (m.k_ == 1.0) {
      const double sech = 1.0 / std::cosh(y);
      return {std::tanh(y), sech, sech};
    }
    const double u = std::remainder(y, 4.0 * m.quarter_period_);
    const int n = m.agm_steps_;
    double phi = std::ldexp(m.agm_a_[n] * u, n);
    for (int i = n; i >= 1; --i) {
      phi = 0.5 * (phi + std::asin(m.agm_c_[i] / m.agm_a_[i] * std::sin(phi)));
    }
    const double sn = std::sin(phi);
    return {sn, std::cos(phi), std::sqrt(1.0 - m.k2() * sn * sn)};
  }
};

JacobiTriple jacobi(double y, const Modulus& m) { return JacobiKernel::eval(y, m); }

namespace {

constexpr std::array<std::string_view, 12> kQuotientNames = {
    "sn", "cn", "dn", "ns", "nc", "nd", "sc", "cs", "sd", "ds", "cd", "dc"};

std::optional<double> ratio(double num, double den) {
  if (std::abs(den) < kPoleThreshold) return std::nullopt;
  return num / den;
}

}  // namespace

Quotient parse_quotient(std::string_view name) {
  for (std::size_t i = 0; i < kQuotientNames.size(); ++i) {
    if (kQuotientNames[i] == name) return static_cast<Quotient>(i);
  }
  throw UsageError("unknown Jacobi quotient '" + std::string(name) +
                   "'; expected one of sn cn dn ns nc nd sc cs sd ds cd dc");
}

std::string_view quotient_name(Quotient q) { return kQuotientNames[static_cast<std::size_t>(q)]; }

std::optional<double> quotient_of(Quotient q, const JacobiTriple& j) {
  switch (q) {
    case Quotient::sn: return j.sn;
    case Quotient::cn: return j.cn;
    case Quotient::dn: return j.dn;
    case Quotient::ns: return ratio(1.0, j.sn);
    case Quotient::nc: return ratio(1.0, j.cn);
    case Quotient::nd: return ratio(1.0, j.dn);
    case Quotient::sc: return ratio(j.sn, j.cn);
    case Quotient::cs: return ratio(j.cn, j.sn);
    case Quotient::sd: return ratio(j.sn, j.dn);
    case Quotient::ds: return ratio(j.dn, j.sn);
    case Quotient::cd: return ratio(j.cn, j.dn);
    case Quotient::dc: return ratio(j.dn, j.cn);
  }
  return std::nullopt;
}

std::optional<double> jacobi_quotient(Quotient q, double y, const Modulus& m) {
  return quotient_of(q, jacobi(y, m));
}

}  // namespace rdexact::elliptic
