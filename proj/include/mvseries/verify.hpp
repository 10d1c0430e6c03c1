#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mvseries/norms.hpp"

namespace mvseries {

/// Right-hand side of the ordinary-product bound as commonly stated:
///   (q!)^(2-1/rho) (q'!)^(2/rho-1) ||A||_rho ||B||_conj(rho)
double ordinary_product_bound(unsigned q, unsigned q_prime, RhoExponent rho, double norm_a,
                              double norm_b_conj);

/// The same bound multiplied by d^max(0, (2-rho)/rho), d = number of columns
/// of B. For rho >= 2 the factor is 1. Below 2 the extra factor is needed:
/// A = [1], B = [1, 1] in M_{.,2}(0,1) at rho = 1 has ||AB|| = 2 while the
/// uncorrected bound is 1.
double ordinary_product_bound_corrected(unsigned q, unsigned q_prime, std::size_t columns,
                                        RhoExponent rho, double norm_a, double norm_b_conj);

struct VerifyOptions {
  std::uint64_t seed = 7;
  std::size_t algebra_instances = 200;
  std::size_t inequality_instances = 1000;
  std::size_t power_instances = 10;  // per (n, m) pair
  std::vector<RhoExponent> rhos{RhoExponent(1.0), RhoExponent(1.5), RhoExponent(2.0),
                                RhoExponent(3.0), RhoExponent::infinity()};
  std::size_t max_dim = 3;
  unsigned max_degree = 3;
  unsigned max_power = 6;
  double algebra_tol = 1e-9;
  double power_tol = 1e-12;
  double inequality_tol = 1e-12;
  // Count uncorrected ordinary-product bound failures at rho < 2 as fatal.
  bool strict = false;
};

struct CheckResult {
  std::string name;       // e.g. "odot.associativity"
  std::string variant;    // field or rho
  std::size_t instances = 0;
  std::size_t violations = 0;
  double worst = 0.0;     // worst relative error, or worst lhs/rhs ratio for bounds
  double tolerance = 0.0;
  bool fatal = true;      // violations make the suite fail

  bool passed() const { return violations == 0; }
};

struct VerifySummary {
  std::vector<CheckResult> checks;

  bool ok() const;
  const CheckResult* find(const std::string& name, const std::string& variant) const;
};

// Commutativity, distributivity, associativity, scalars, zero divisors and the
// two mixed laws with the ordinary product; real and complex.
std::vector<CheckResult> check_algebra(const VerifyOptions& opts);
// Closed forms of h^(m), v^(m) against iterated products; the entry formula of
// h^(m)/m! odot E_k; the OpenMP kernel against the serial reference.
std::vector<CheckResult> check_powers(const VerifyOptions& opts);
// Norm axioms per rho.
std::vector<CheckResult> check_norm_axioms(const VerifyOptions& opts);
// Submultiplicativity, ordinary-product bound (stated and corrected), the
// h-power evaluation bound and its multilinear corollary, per rho.
std::vector<CheckResult> check_inequalities(const VerifyOptions& opts);
// Positivity and the upper bound 1 of estimated lambda constants, per rho.
std::vector<CheckResult> check_lambda_bounds(const VerifyOptions& opts);

VerifySummary run_verify(const VerifyOptions& opts);

}  // namespace mvseries
