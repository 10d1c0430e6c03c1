#include <gtest/gtest.h>

#include <cmath>
#include <omp.h>

#include "mvseries/extremal.hpp"
#include "mvseries/random.hpp"
#include "oracles.hpp"

using namespace mvseries;

namespace {

// n = n' = 1: every matrix is 1x1, so the ratio is one constant for all pairs,
// computed here from the norm weights of [1] in each space.
double scalar_lambda(unsigned p, unsigned pp, unsigned q, unsigned qp, double rho) {
  using oracle::fact;
  const auto weight = [&](unsigned a, unsigned b) {
    // ||[1]|| in M(a, b) with n = n' = 1.
    if (std::isinf(rho)) return 1.0 / (fact(a) * fact(b));
    return std::pow(1.0 / (fact(a) * std::pow(fact(a) * fact(b), rho - 1.0)), 1.0 / rho);
  };
  const double product = fact(p + q) / (fact(p) * fact(q));
  return product * weight(p + q, pp + qp) / (weight(p, pp) * weight(q, qp));
}

ExtremalProblem scalar_problem(unsigned p, unsigned pp, unsigned q, unsigned qp, RhoExponent rho) {
  ExtremalProblem prob;
  prob.p = p, prob.p_prime = pp, prob.q = q, prob.q_prime = qp;
  prob.rho = rho;
  prob.budget.restarts = 4;
  prob.budget.iterations = 200;
  prob.seed = 5;
  return prob;
}

}  // namespace

TEST(ScalarOracle, AgreesWithBinomialForm) {
  for (unsigned pp = 0; pp <= 3; ++pp)
    for (unsigned qp = 0; qp <= 3; ++qp)
      for (double rho : {1.0, 1.5, 2.0, 3.0}) {
        const double binom = oracle::fact(pp + qp) / (oracle::fact(pp) * oracle::fact(qp));
        EXPECT_NEAR(scalar_lambda(1, pp, 2, qp, rho), std::pow(binom, (1 - rho) / rho), 1e-14);
      }
}

TEST(LambdaEstimate, ScalarCase) {
  const struct { unsigned p, pp, q, qp; } cases[] = {{1, 0, 1, 0}, {0, 1, 0, 1}, {0, 2, 0, 1}, {2, 1, 1, 2}, {0, 3, 1, 3}};
  for (const auto& c : cases)
    for (const auto& rho : {RhoExponent(1.0), RhoExponent(1.5), RhoExponent(2.0), RhoExponent::infinity()}) {
      const auto r = lambda_estimate(scalar_problem(c.p, c.pp, c.q, c.qp, rho));
      EXPECT_NEAR(r.value, scalar_lambda(c.p, c.pp, c.q, c.qp, rho.value()), 1e-9) << rho.str();
    }
  EXPECT_NEAR(lambda_estimate(scalar_problem(0, 1, 0, 1, RhoExponent(2.0))).value, std::sqrt(0.5), 1e-12);
}

TEST(LambdaEstimate, ArgumentReproducesValue) {
  ExtremalProblem prob;
  prob.n = 2, prob.n_prime = 2, prob.p = 1, prob.p_prime = 1, prob.q = 1, prob.q_prime = 0;
  prob.rho = RhoExponent(1.5);
  prob.budget.restarts = 6;
  prob.budget.iterations = 400;
  prob.seed = 17;
  const auto r = lambda_estimate(prob);
  ASSERT_EQ(r.argument.size(), 2u);
  EXPECT_NEAR(rho_norm(r.argument[0], prob.rho), 1.0, 1e-12);
  EXPECT_NEAR(rho_norm(r.argument[1], prob.rho), 1.0, 1e-12);
  EXPECT_NEAR(odot_ratio(r.argument[0], r.argument[1], prob.rho), r.value, 1e-9);
  EXPECT_EQ(r.trace.size(), 6u);
  EXPECT_EQ(r.value, *std::min_element(r.trace.begin(), r.trace.end()));
  EXPECT_GT(r.value, 0.0);
  EXPECT_LE(r.value, 1.0 + 1e-9);
}

TEST(LambdaEstimate, MoreBudgetNeverIncreasesTheValue) {
  ExtremalProblem prob;
  prob.n = 2, prob.n_prime = 1, prob.p = 2, prob.p_prime = 0, prob.q = 1, prob.q_prime = 1;
  prob.rho = RhoExponent(2.0);
  prob.seed = 3;
  double last = INFINITY;
  for (unsigned restarts : {1u, 2u, 4u, 8u}) {
    prob.budget.restarts = restarts;
    prob.budget.iterations = 300;
    const double v = lambda_estimate(prob).value;
    EXPECT_LE(v, last);
    last = v;
  }
  prob.budget.restarts = 4;
  prob.budget.iterations = 150;
  const double short_run = lambda_estimate(prob).value;
  prob.budget.iterations = 600;
  EXPECT_LE(lambda_estimate(prob).value, short_run);
}

TEST(LambdaEstimate, DeterministicAcrossThreadCounts) {
  ExtremalProblem prob;
  prob.n = 2, prob.n_prime = 2, prob.p = 1, prob.p_prime = 0, prob.q = 1, prob.q_prime = 1;
  prob.rho = RhoExponent::infinity();
  prob.budget.restarts = 6;
  prob.budget.iterations = 300;
  prob.seed = 41;
  omp_set_num_threads(1);
  const auto a = lambda_estimate(prob);
  omp_set_num_threads(4);
  const auto b = lambda_estimate(prob);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.best_restart, b.best_restart);
}

TEST(LambdaEstimate, ComplexFieldSearchesBothSpheres) {
  ExtremalProblem prob = scalar_problem(0, 1, 0, 1, RhoExponent(2.0));
  prob.n = 2, prob.n_prime = 2;
  prob.field = Field::complex;
  const auto both = lambda_estimate_per_field(prob);
  ASSERT_EQ(both.size(), 2u);
  EXPECT_EQ(both[0].field, Field::real);
  EXPECT_EQ(both[1].field, Field::complex);
  EXPECT_EQ(both[1].argument[0].field(), Field::complex);
  prob.field = Field::real;
  EXPECT_EQ(lambda_estimate_per_field(prob).size(), 1u);
}

TEST(LambdaEstimate, SandwichOnRandomPairs) {
  ExtremalProblem prob;
  prob.n = 2, prob.n_prime = 2, prob.p = 1, prob.p_prime = 1, prob.q = 1, prob.q_prime = 0;
  prob.rho = RhoExponent(2.0);
  prob.budget.restarts = 8;
  prob.budget.iterations = 500;
  const double lambda = lambda_estimate(prob).value;
  Rng rng = make_stream(44, 0);
  for (int k = 0; k < 1000; ++k) {
    auto a = random_matrix({2, 1}, {2, 1}, Field::real, rng);
    auto b = random_matrix({2, 1}, {2, 0}, Field::real, rng);
    const double prod = rho_norm(odot(a, b), prob.rho), na = rho_norm(a, prob.rho), nb = rho_norm(b, prob.rho);
    EXPECT_LE(lambda * na * nb, prod * (1 + 1e-9));
    EXPECT_LE(prod, na * nb * (1 + 1e-12));
  }
}

TEST(OpnormEstimate, OneDimensionalIsExact) {
  for (unsigned m = 0; m <= 4; ++m) {
    GradedMatrix a({1, m}, {1, 2}, Field::real, {-3.5});
    ExtremalProblem prob;
    prob.p = m, prob.p_prime = 2;
    prob.rho = RhoExponent(1.5);
    prob.mode = ExtremalMode::opnorm_max;
    prob.budget.restarts = 3;
    prob.budget.iterations = 200;
    const auto r = opnorm_estimate(prob, a);
    EXPECT_NEAR(r.value, rho_norm(a, prob.rho), 1e-12);
  }
}

TEST(OpnormEstimate, BoundedByRhoNormAndZeroForZero) {
  Rng rng = make_stream(45, 0);
  for (int k = 0; k < 20; ++k) {
    const unsigned m = 1 + k % 3;
    auto a = random_matrix({2, m}, {2, 1}, k % 2 ? Field::complex : Field::real, rng);
    ExtremalProblem prob;
    prob.n = 2, prob.n_prime = 2, prob.p = m, prob.p_prime = 1;
    prob.rho = k % 4 < 2 ? RhoExponent(2.0) : RhoExponent::infinity();
    prob.mode = ExtremalMode::opnorm_max;
    prob.field = a.field();
    prob.budget.restarts = 3;
    prob.budget.iterations = 200;
    const auto r = opnorm_estimate(prob, a);
    EXPECT_LE(r.value, rho_norm(a, prob.rho) + 1e-9);
    EXPECT_GT(r.value, 0.0);
    EXPECT_NEAR(multilinear_value(r.argument, a, prob.rho), r.value, 1e-9 * r.value);
    for (const auto& h : r.argument) EXPECT_NEAR(rho_norm(h, prob.rho.conjugate()), 1.0, 1e-12);
    EXPECT_EQ(opnorm_estimate(prob, zero_like(a)).value, 0.0);
  }
}

TEST(OpnormEstimate, DiagonalLowerBound) {
  // For the geometric block A(m) (entries m!) the value at h = (1,1)/||(1,1)|| is a lower bound
  // the optimizer must reach.
  const unsigned m = 3;
  GradedMatrix a({2, m}, {1, 0});
  for (std::size_t i = 0; i < a.rows(); ++i) a.set(i, 0, oracle::fact(m));
  const RhoExponent rho(2.0);
  const double c = 1.0 / std::sqrt(2.0);
  std::vector<GradedMatrix> hs(m, GradedMatrix::row_vector(std::vector<Scalar>{c, c}));
  const double diag = multilinear_value(hs, a, rho);
  ExtremalProblem prob;
  prob.n = 2, prob.p = m;
  prob.rho = rho;
  prob.mode = ExtremalMode::opnorm_max;
  prob.budget.restarts = 4;
  prob.budget.iterations = 400;
  EXPECT_GE(opnorm_estimate(prob, a).value, diag * (1 - 1e-9));
}

TEST(RootSequence, OneVariableSequencesCoincide) {
  const auto s = from_coefficients(one_variable_geometric(-2.5, 6), 6);
  Budget b;
  b.restarts = 2;
  b.iterations = 100;
  const auto rows = opnorm_root_sequence(s, RhoExponent(2.0), b, 1);
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& r : rows) {
    EXPECT_NEAR(r.op_root, 2.5, 1e-12);
    EXPECT_NEAR(r.rho_root, 2.5, 1e-12);
  }
}

TEST(RootSequence, ZeroSeriesGivesZeros) {
  const auto s = from_coefficients(CoefficientMap(2, 1, 0, Field::real), 4);
  Budget b;
  b.restarts = 2;
  b.iterations = 50;
  for (const auto& r : opnorm_root_sequence(s, RhoExponent(2.0), b, 1)) {
    EXPECT_EQ(r.op_root, 0.0);
    EXPECT_EQ(r.rho_root, 0.0);
  }
}
