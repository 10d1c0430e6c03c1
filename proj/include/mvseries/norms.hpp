#pragma once

#include <string>
#include <string_view>

#include "mvseries/graded_matrix.hpp"

namespace mvseries {

/// An exponent rho in [1, inf] together with its Hoelder conjugate.
///
/// Both values are stored, so conjugate() is an exact involution.
class RhoExponent {
 public:
  // Throws DomainError for values below 1 or NaN. +inf is accepted.
  explicit RhoExponent(double value);
  static RhoExponent infinity();
  // Accepts a decimal number or "inf"/"infinity".
  static RhoExponent parse(std::string_view text);

  double value() const { return value_; }
  double conjugate_value() const { return conjugate_; }
  bool is_infinite() const;
  RhoExponent conjugate() const { return RhoExponent(conjugate_, value_); }

  // (rho - 1) / rho, the exponent of n in the layer width; 1 for rho = inf.
  double layer_exponent() const;

  std::string str() const;

  bool operator==(const RhoExponent& other) const { return value_ == other.value_; }

 private:
  RhoExponent(double value, double conjugate) : value_(value), conjugate_(conjugate) {}

  double value_;
  double conjugate_;
};

/// The weighted norm
///   ||A||_rho = ( sum |A_{alpha,alpha'}|^rho / (alpha! (p! p'!)^(rho-1)) )^(1/rho)
/// and ||A||_inf = max |A_{alpha,alpha'}| / (p! p'!).
/// Only the row factorial alpha! enters the weight; alpha'! does not.
///
/// Sums directly when that is finite and representable, otherwise falls back to
/// the log-domain path.
double rho_norm(const GradedMatrix& a, RhoExponent rho);

/// log ||A||_rho via a max-shifted log-sum-exp; -inf for the zero matrix.
double log_rho_norm(const GradedMatrix& a, RhoExponent rho);

/// Classical l_rho norm of a point, equal to rho_norm of it as a row in M(0,1).
double point_norm(std::span<const Scalar> h, RhoExponent rho);

}  // namespace mvseries
