#include "mvseries/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "mvseries/errors.hpp"

namespace mvseries {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Exact through 33!, which still fits the 128-bit width.
double factorial_double(unsigned k) {
  return k <= 33 ? to_double(factorial(k)) : std::exp(log_factorial(k));
}

double multifactorial_double(const MultiIndex& alpha) {
  return alpha.degree() <= 33 ? to_double(multifactorial(alpha)) : std::exp(log_multifactorial(alpha));
}

double conjugate_of(double rho) {
  if (rho == 1.0) return kInf;
  if (std::isinf(rho)) return 1.0;
  return rho / (rho - 1.0);
}

}  // namespace

RhoExponent::RhoExponent(double value) : value_(value), conjugate_(0.0) {
  if (!(value >= 1.0)) {
    std::ostringstream os;
    os << "rho must lie in [1, inf], got " << value;
    throw DomainError(os.str());
  }
  conjugate_ = conjugate_of(value);
}

RhoExponent RhoExponent::infinity() { return RhoExponent(kInf); }

RhoExponent RhoExponent::parse(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "inf" || s == "infinity") return infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError("cannot parse rho from \"" + std::string(text) + "\"");
  }
  if (used != s.size()) throw ValidationError("cannot parse rho from \"" + std::string(text) + "\"");
  try {
    return RhoExponent(v);
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
}

bool RhoExponent::is_infinite() const { return std::isinf(value_); }

double RhoExponent::layer_exponent() const {
  if (is_infinite()) return 1.0;
  return (value_ - 1.0) / value_;
}

std::string RhoExponent::str() const {
  if (is_infinite()) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

double log_rho_norm(const GradedMatrix& a, RhoExponent rho) {
  const double log_pp = log_factorial(a.p()) + log_factorial(a.p_prime());
  const auto& rows = a.row_slice();
  if (rho.is_infinite()) {
    const double m = a.max_abs();
    if (m == 0.0) return -kInf;
    return std::log(m) - log_pp;
  }
  const double r = rho.value();
  // log of each term: r log|A| - log alpha! - (r-1) log(p! p'!)
  std::vector<double> logs;
  logs.reserve(a.data().size());
  double shift = -kInf;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double row_weight = log_multifactorial(rows.unrank(i)) + (r - 1.0) * log_pp;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double v = std::abs(a(i, j));
      if (v == 0.0) continue;
      logs.push_back(r * std::log(v) - row_weight);
      shift = std::max(shift, logs.back());
    }
  }
  if (logs.empty()) return -kInf;
  double s = 0.0;
  for (double l : logs) s += std::exp(l - shift);
  return (shift + std::log(s)) / r;
}

double rho_norm(const GradedMatrix& a, RhoExponent rho) {
  // 170! is the largest factorial a double holds.
  const bool direct_ok = a.p() <= 170 && a.p_prime() <= 170;
  if (direct_ok) {
    const double pp = factorial_double(a.p()) * factorial_double(a.p_prime());
    if (rho.is_infinite()) return a.max_abs() / pp;
    const double r = rho.value();
    const double pp_weight = std::pow(pp, r - 1.0);
    const auto& rows = a.row_slice();
    double s = 0.0;
    bool any_nonzero = false;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const double w = multifactorial_double(rows.unrank(i)) * pp_weight;
      for (std::size_t j = 0; j < a.cols(); ++j) {
        const double v = std::abs(a(i, j));
        if (v == 0.0) continue;
        any_nonzero = true;
        s += (r == 1.0 ? v : std::pow(v, r)) / w;
      }
    }
    const double out = r == 1.0 ? s : std::pow(s, 1.0 / r);
    if (std::isfinite(out) && std::isfinite(pp_weight) && (out > 0.0 || !any_nonzero)) return out;
  }
  return std::exp(log_rho_norm(a, rho));
}

double point_norm(std::span<const Scalar> h, RhoExponent rho) {
  if (rho.is_infinite()) {
    double m = 0.0;
    for (const auto& x : h) m = std::max(m, std::abs(x));
    return m;
  }
  const double r = rho.value();
  double scale = 0.0;
  for (const auto& x : h) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& x : h) s += std::pow(std::abs(x) / scale, r);
  return scale * std::pow(s, 1.0 / r);
}

}  // namespace mvseries
