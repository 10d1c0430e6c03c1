#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mvseries/graded_matrix.hpp"
#include "mvseries/norms.hpp"

namespace mvseries {

using Point = std::vector<Scalar>;

/// Monomial form  sum_alpha x^alpha a_alpha  with a_alpha in M(0, q').
/// Each key is (alpha, alpha') with |alpha'| = q'.
class CoefficientMap {
 public:
  using Key = std::pair<MultiIndex, MultiIndex>;

  CoefficientMap(std::size_t n, std::size_t n_prime, unsigned q_prime, Field field);

  // Throws ValidationError on wrong lengths, |alpha'| != q', duplicates,
  // or a complex value in a real map.
  void insert(MultiIndex alpha, MultiIndex alpha_prime, Scalar value);

  std::size_t n() const { return n_; }
  std::size_t n_prime() const { return n_prime_; }
  unsigned q_prime() const { return q_prime_; }
  Field field() const { return field_; }

  const std::map<Key, Scalar>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  // Highest |alpha| among the terms; 0 for an empty map.
  unsigned max_degree() const;
  Scalar coefficient(const MultiIndex& alpha, const MultiIndex& alpha_prime) const;

  bool operator==(const CoefficientMap& other) const = default;

 private:
  std::size_t n_;
  std::size_t n_prime_;
  unsigned q_prime_;
  Field field_;
  std::map<Key, Scalar> terms_;
};

/// Truncated series  sum_{m=0}^{M} x^(m)/m! A(m)  with A(m) in M_{n,n'}(m, q').
/// Blocks are stored for every m in 0..M, zero blocks included.
class BlockSeries {
 public:
  BlockSeries(std::size_t n, std::size_t n_prime, unsigned q_prime, Field field,
              std::vector<GradedMatrix> blocks);

  std::size_t n() const { return n_; }
  std::size_t n_prime() const { return n_prime_; }
  unsigned q_prime() const { return q_prime_; }
  Field field() const { return field_; }
  unsigned max_degree() const { return static_cast<unsigned>(blocks_.size() - 1); }
  const GradedMatrix& block(unsigned m) const { return blocks_.at(m); }
  const std::vector<GradedMatrix>& blocks() const { return blocks_; }

 private:
  std::size_t n_;
  std::size_t n_prime_;
  unsigned q_prime_;
  Field field_;
  std::vector<GradedMatrix> blocks_;
};

/// A(m)_{alpha,alpha'} = alpha! a_{alpha,alpha'} for |alpha| = m <= max_degree.
/// Throws ValidationError when a term has |alpha| > max_degree.
BlockSeries from_coefficients(const CoefficientMap& c, unsigned max_degree);

/// sum_m (h^(m)/m!) A(m), computed with h_power_closed and ordinary_mul.
/// A real series evaluated at a complex point is promoted to complex.
GradedMatrix evaluate(const BlockSeries& s, std::span<const Scalar> h);

/// ||A(m)||_rho for m = 0..M.
std::vector<double> block_norms(const BlockSeries& s, RhoExponent rho);

struct BlockRoot {
  unsigned degree;
  double root;  // ||A(m)||^(1/m)
};

struct RadiusEstimate {
  double r_hat = 0.0;
  double radius = 0.0;  // 1 / r_hat, +inf when r_hat = 0
  std::vector<BlockRoot> roots;             // every m >= 1
  std::vector<unsigned> window_degrees;     // degrees the max was taken over
  unsigned window = 0;
};

/// r_hat = max of ||A(m)||^(1/m) over the last `window` nonzero blocks of
/// positive degree. The default window is half of those blocks, at least 3
/// (or all of them when fewer exist). An all-zero tail gives r_hat = 0.
/// An explicit window must satisfy 1 <= window <= M.
RadiusEstimate radius_estimate(const BlockSeries& s, RhoExponent rho,
                               std::optional<unsigned> window = std::nullopt);

enum class Verdict { converged_certified, diverged_certified, unknown };
std::string_view to_string(Verdict v);

struct ConvergenceOptions {
  double margin = 1e-6;
  unsigned divergence_window = 8;
  std::optional<unsigned> radius_window;
};

struct ConvergenceVerdict {
  Verdict status = Verdict::unknown;
  double point_norm = 0.0;   // ||h||_conj(rho)
  double ratio = 0.0;        // ||h||_conj(rho) * r_hat
  double tail_bound = 0.0;   // geometric tail estimate; +inf unless converged
  std::optional<std::size_t> witness_component;  // rank of alpha' for a divergence witness
  std::vector<double> witness_terms;             // its per-degree term sums over the window
  // Per alpha': sum over m <= M of sum_{|alpha|=m} |h^alpha / alpha! A(m)_{alpha,alpha'}|.
  std::vector<double> absolute_sums;
  // Per degree m and alpha': the grouped term sums behind absolute_sums.
  std::vector<std::vector<double>> degree_terms;
  // Same procedure applied to |H_m(h)|, the modulus of the degree-m part before
  // taking absolute values term by term. Reported separately, never merged.
  Verdict grouped_status = Verdict::unknown;
  std::vector<double> grouped_sums;
  RadiusEstimate radius;
};

/// Absolute convergence verdict at h.
///
/// converged_certified when ||h||_conj(rho) * r_hat < 1 - margin; otherwise
/// diverged_certified when some component's degree term sums are positive and
/// non-decreasing over the last `divergence_window` degrees; otherwise unknown.
/// Being outside the radius alone never yields a divergence verdict.
ConvergenceVerdict converges_at(const BlockSeries& s, std::span<const Scalar> h, RhoExponent rho,
                                const ConvergenceOptions& opts = {});

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

/// [R, R n^((rho-1)/rho)], with factor n at rho = inf and a single point at rho = 1.
Interval indeterminacy_layer(const BlockSeries& s, RhoExponent rho,
                             std::optional<unsigned> window = std::nullopt);
Interval indeterminacy_layer(const RadiusEstimate& r, std::size_t n, RhoExponent rho);

struct WitnessReport {
  double r1 = 0.0;
  Interval layer;
  bool beyond_layer = false;
  std::vector<Point> points;                // points[0] is the diagonal witness
  std::vector<ConvergenceVerdict> verdicts;
};

/// Verdicts at the diagonal point R1 n^(-1/conj(rho)) (1,...,1) and at
/// `samples` random points of conj(rho)-norm R1 drawn from `seed`.
WitnessReport layer_witness_scan(const BlockSeries& s, RhoExponent rho, double r1,
                                 std::size_t samples, std::uint64_t seed,
                                 const ConvergenceOptions& opts = {});

/// a_alpha = |alpha|!/alpha! for |alpha| <= M; sum_m (x_1 + ... + x_n)^m, q' = 0.
CoefficientMap geometric_family(std::size_t n, unsigned max_degree);
/// a_m = c^m in one variable, m <= M.
CoefficientMap one_variable_geometric(double c, unsigned max_degree);

}  // namespace mvseries
