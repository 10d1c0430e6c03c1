#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mvseries/graded_matrix.hpp"
#include "mvseries/norms.hpp"
#include "mvseries/series.hpp"

namespace mvseries {

enum class ExtremalMode { lambda_min, opnorm_max };

/// Search budget for the multistart coordinate-perturbation optimizer.
struct Budget {
  unsigned restarts = 64;
  unsigned iterations = 2000;
  double initial_step = 0.5;
  double shrink = 0.7;
  double min_step = 1e-9;
};

struct ExtremalProblem {
  std::size_t n = 1;
  std::size_t n_prime = 1;
  unsigned p = 0;
  unsigned p_prime = 0;
  unsigned q = 0;
  unsigned q_prime = 0;
  RhoExponent rho{2.0};
  ExtremalMode mode = ExtremalMode::lambda_min;
  Field field = Field::real;
  Budget budget;
  std::uint64_t seed = 0;
};

struct ExtremalResult {
  double value = 0.0;
  // lambda_min: {A, B} with unit rho-norm. opnorm_max: h^1..h^m with unit conj(rho)-norm.
  std::vector<GradedMatrix> argument;
  std::vector<double> trace;  // best value of each restart
  bool converged = false;     // the winning restart shrank its step below min_step
  Field field = Field::real;
  std::size_t best_restart = 0;
};

/// ||A odot B|| / (||A|| ||B||), the quantity minimized by lambda_estimate.
double odot_ratio(const GradedMatrix& a, const GradedMatrix& b, RhoExponent rho);

/// Upper estimate of lambda(p,p',q,q') = inf ||A odot B||_rho over ||A|| = ||B|| = 1,
/// searched over prob.field. Every value reported is attained by `argument`.
/// Restart r draws from substream r of prob.seed, so raising restarts or
/// iterations never increases the result.
ExtremalResult lambda_estimate(const ExtremalProblem& prob);

/// For a complex problem: the real-sphere and complex-sphere searches as two
/// separate results (real first). For a real problem: just the real search.
std::vector<ExtremalResult> lambda_estimate_per_field(const ExtremalProblem& prob);

/// ||(h^1 odot ... odot h^m)/m! A||_rho at the given vectors (not normalized).
double multilinear_value(const std::vector<GradedMatrix>& hs, const GradedMatrix& a, RhoExponent rho);

/// Lower estimate of sup ||(h^1 odot ... odot h^m)/m! A||_rho over unit
/// conj(rho)-norm h^i, for A in M(m, q'). Ascent cycles over the h^i.
/// m = 0 returns ||A||_rho.
ExtremalResult opnorm_estimate(const ExtremalProblem& prob, const GradedMatrix& block);

struct RootRow {
  unsigned degree = 0;
  double op_root = 0.0;   // opnorm^(1/m)
  double rho_root = 0.0;  // ||A(m)||_rho^(1/m)
};

/// (m, opnorm(A(m))^(1/m), ||A(m)||_rho^(1/m)) for m = 1..M.
std::vector<RootRow> opnorm_root_sequence(const BlockSeries& s, RhoExponent rho, const Budget& budget,
                                          std::uint64_t seed);

}  // namespace mvseries
