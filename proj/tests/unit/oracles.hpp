#pragma once

// Brute-force reference computations written directly from the definitions,
// sharing no code paths with the library beyond element access.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "mvseries/graded_matrix.hpp"

namespace oracle {

using Tuple = std::vector<int>;
using C = std::complex<double>;

inline double fact(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

inline double tuple_factorial(const Tuple& t) {
  double r = 1.0;
  for (int x : t) r *= fact(x);
  return r;
}

inline int degree(const Tuple& t) {
  int s = 0;
  for (int x : t) s += x;
  return s;
}

// Every tuple in [0, p]^n with sum p, listed by odometer.
inline std::vector<Tuple> all_of_degree(int n, int p) {
  std::vector<Tuple> out;
  Tuple t(n, 0);
  while (true) {
    if (degree(t) == p) out.push_back(t);
    int k = 0;
    while (k < n && t[k] == p) t[k++] = 0;
    if (k == n) break;
    ++t[k];
  }
  return out;
}

// Degree first, then the larger leading component first.
inline bool before(const Tuple& a, const Tuple& b) {
  if (degree(a) != degree(b)) return degree(a) < degree(b);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

inline std::vector<Tuple> sorted_slice(int n, int p) {
  auto v = all_of_degree(n, p);
  std::sort(v.begin(), v.end(), before);
  return v;
}

inline double tuple_binomial(const Tuple& a, const Tuple& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (b[i] > a[i]) return 0.0;
  Tuple d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return tuple_factorial(a) / (tuple_factorial(b) * tuple_factorial(d));
}

inline mvseries::MultiIndex mi(const Tuple& t) { return mvseries::MultiIndex(std::span<const int>(t)); }

// (A odot B)_{alpha,alpha'} summed over every pair of rows and columns of A.
inline std::vector<C> odot_entries(const mvseries::GradedMatrix& a, const mvseries::GradedMatrix& b) {
  const int n = static_cast<int>(a.n()), np = static_cast<int>(a.n_prime());
  const auto rows = sorted_slice(n, a.p() + b.p());
  const auto cols = sorted_slice(np, a.p_prime() + b.p_prime());
  const auto arows = sorted_slice(n, a.p());
  const auto acols = sorted_slice(np, a.p_prime());
  std::vector<C> out;
  for (const auto& alpha : rows)
    for (const auto& alpha_p : cols) {
      C sum = 0.0;
      for (const auto& beta : arows)
        for (const auto& beta_p : acols) {
          bool fits = true;
          Tuple d(n), dp(np);
          for (int i = 0; i < n; ++i) fits &= (d[i] = alpha[i] - beta[i]) >= 0;
          for (int i = 0; i < np; ++i) fits &= (dp[i] = alpha_p[i] - beta_p[i]) >= 0;
          if (!fits) continue;
          sum += tuple_binomial(alpha, beta) * a.at(mi(beta), mi(beta_p)) * b.at(mi(d), mi(dp));
        }
      out.push_back(sum);
    }
  return out;
}

inline double rho_norm(const mvseries::GradedMatrix& a, double rho) {
  const auto rows = sorted_slice(static_cast<int>(a.n()), a.p());
  const auto cols = sorted_slice(static_cast<int>(a.n_prime()), a.p_prime());
  const double pp = fact(a.p()) * fact(a.p_prime());
  if (std::isinf(rho)) {
    double m = 0.0;
    for (const auto& r : rows)
      for (const auto& c : cols) m = std::max(m, std::abs(a.at(mi(r), mi(c))));
    return m / pp;
  }
  double s = 0.0;
  for (const auto& r : rows)
    for (const auto& c : cols)
      s += std::pow(std::abs(a.at(mi(r), mi(c))), rho) / (tuple_factorial(r) * std::pow(pp, rho - 1.0));
  return std::pow(s, 1.0 / rho);
}

inline C monomial(const std::vector<C>& x, const Tuple& alpha) {
  C r = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (int e = 0; e < alpha[i]; ++e) r *= x[i];
  return r;
}

inline double max_rel(const std::vector<C>& a, const std::vector<C>& b) {
  double scale = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return scale == 0.0 ? worst : worst / scale;
}

inline std::vector<C> entries(const mvseries::GradedMatrix& m) { return {m.data().begin(), m.data().end()}; }

}  // namespace oracle
