#include "mvseries/reference.hpp"

#include <cmath>

#include "mvseries/errors.hpp"

namespace mvseries::reference {

GradedMatrix odot_serial(const GradedMatrix& a, const GradedMatrix& b) {
  if (a.field() != b.field()) throw FieldError("odot_serial: field mismatch");
  if (a.n() != b.n() || a.n_prime() != b.n_prime())
    throw DimensionError("odot_serial: index dimensions differ");
  GradedMatrix c({a.n(), a.p() + b.p()}, {a.n_prime(), a.p_prime() + b.p_prime()}, a.field());
  for (const MultiIndex& alpha : c.row_slice()) {
    for (const MultiIndex& alpha_p : c.col_slice()) {
      Scalar sum{};
      for (const MultiIndex& beta : a.row_slice()) {
        const Exact w = multibinomial(alpha, beta);
        if (w == 0) continue;
        for (const MultiIndex& beta_p : a.col_slice()) {
          if (!beta_p.below(alpha_p)) continue;
          sum += to_double(w) * a.at(beta, beta_p) * b.at(alpha - beta, alpha_p - beta_p);
        }
      }
      c.set(alpha, alpha_p, sum);
    }
  }
  return c;
}

double rho_norm_direct(const GradedMatrix& a, RhoExponent rho) {
  const double pp = to_double(factorial(a.p())) * to_double(factorial(a.p_prime()));
  if (rho.is_infinite()) return a.max_abs() / pp;
  const double r = rho.value();
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double w = to_double(multifactorial(a.row_slice().unrank(i))) * std::pow(pp, r - 1.0);
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::pow(std::abs(a(i, j)), r) / w;
  }
  return std::pow(s, 1.0 / r);
}

}  // namespace mvseries::reference
