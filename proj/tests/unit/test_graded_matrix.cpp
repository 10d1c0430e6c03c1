#include <gtest/gtest.h>

#include <omp.h>

#include "mvseries/errors.hpp"
#include "mvseries/graded_matrix.hpp"
#include "mvseries/odot_kernel.hpp"
#include "mvseries/random.hpp"
#include "mvseries/reference.hpp"
#include "oracles.hpp"

using namespace mvseries;

namespace {

GradedMatrix row(std::initializer_list<Scalar> h) { return GradedMatrix::row_vector(std::vector<Scalar>(h)); }
GradedMatrix column(std::initializer_list<Scalar> v) { return GradedMatrix::column_vector(std::vector<Scalar>(v)); }

std::vector<Scalar> values(const GradedMatrix& m) { return oracle::entries(m); }

GradedMatrix random_block(Rng& rng, std::size_t n, std::size_t np, Field f, unsigned max_deg = 3) {
  std::uniform_int_distribution<unsigned> d(0, max_deg);
  return random_matrix({n, d(rng)}, {np, d(rng)}, f, rng);
}

}  // namespace

TEST(GradedMatrix, ShapeFollowsSlices) {
  GradedMatrix a({3, 2}, {2, 3}, Field::real);
  EXPECT_EQ(a.rows(), 6u);
  EXPECT_EQ(a.cols(), 4u);
  EXPECT_TRUE(a.is_zero());
  GradedMatrix b({4, 0}, {1, 7});
  EXPECT_EQ(b.rows(), 1u);
  EXPECT_EQ(b.cols(), 1u);
}

TEST(GradedMatrix, EntryAddressing) {
  GradedMatrix a({2, 2}, {1, 0});
  a.set(MultiIndex{1, 1}, MultiIndex{0}, 7.0);
  EXPECT_EQ(a(1, 0), Scalar(7.0));
  EXPECT_EQ(a.at(MultiIndex{1, 1}, MultiIndex{0}), Scalar(7.0));
  EXPECT_EQ(a.at(MultiIndex{2, 1}, MultiIndex{0}), Scalar(0.0));
}

TEST(GradedMatrix, RealMatrixRejectsComplexValues) {
  GradedMatrix a({1, 1}, {1, 1});
  EXPECT_THROW(a.set(0, 0, Scalar(1.0, 2.0)), FieldError);
  GradedMatrix c({1, 1}, {1, 1}, Field::complex);
  EXPECT_NO_THROW(c.set(0, 0, Scalar(1.0, 2.0)));
  EXPECT_THROW((void)c.as_field(Field::real), FieldError);
}

TEST(GradedMatrix, AddAndScaleExamples) {
  Rng rng = make_stream(3, 0);
  auto a = random_matrix({2, 2}, {3, 1}, Field::real, rng);
  EXPECT_EQ(values(a + zero_like(a)), values(a));
  EXPECT_TRUE(scale(0.0, a).is_zero());
  EXPECT_EQ(values(scale(2.0, row({1, 3}))), (std::vector<Scalar>{2, 6}));
  EXPECT_THROW((void)(a + random_matrix({2, 1}, {3, 1}, Field::real, rng)), DimensionError);
  EXPECT_THROW((void)(a + a.as_field(Field::complex)), FieldError);
}

TEST(OrdinaryMul, Examples) {
  Rng rng = make_stream(4, 0);
  auto a = random_matrix({3, 1}, {2, 2}, Field::real, rng);
  EXPECT_TRUE(approx_equal(ordinary_mul(identity(3, 1), a), a, 0.0, 0.0));
  EXPECT_EQ(values(ordinary_mul(GradedMatrix({1, 1}, {1, 1}, Field::real, {3.0}), column({5.0}))),
            (std::vector<Scalar>{15.0}));
  auto b = random_matrix({2, 2}, {1, 0}, Field::real, rng);
  EXPECT_TRUE(ordinary_mul(a, zero_like(b)).is_zero());
  EXPECT_THROW((void)ordinary_mul(a, a), DimensionError);
}

TEST(Odot, SmallExamples) {
  EXPECT_EQ(values(odot(row({1, 2}), row({1, 2}))), (std::vector<Scalar>{1, 4, 4}));
  EXPECT_EQ(values(odot(column({3.0}), column({5.0}))), (std::vector<Scalar>{30.0}));
  Rng rng = make_stream(5, 0);
  auto a = random_matrix({2, 1}, {2, 2}, Field::real, rng);
  EXPECT_TRUE(odot(a, zero_like(a)).is_zero());
  EXPECT_THROW((void)odot(a, random_matrix({3, 1}, {2, 2}, Field::real, rng)), DimensionError);
}

TEST(Odot, MatchesBruteForceSum) {
  Rng rng = make_stream(6, 0);
  for (int trial = 0; trial < 150; ++trial) {
    const Field f = trial % 2 ? Field::complex : Field::real;
    std::uniform_int_distribution<std::size_t> dim(1, 3);
    const std::size_t n = dim(rng), np = dim(rng);
    auto a = random_block(rng, n, np, f);
    auto b = random_block(rng, n, np, f);
    EXPECT_LT(oracle::max_rel(values(odot(a, b)), oracle::odot_entries(a, b)), 1e-13);
  }
}

TEST(Odot, OneByOneScalarCase) {
  // n = n' = 1: (A odot B) = C(p+q, p) a b.
  for (unsigned p = 0; p <= 5; ++p)
    for (unsigned q = 0; q <= 5; ++q) {
      GradedMatrix a({1, p}, {1, 1}, Field::real, {2.0});
      GradedMatrix b({1, q}, {1, 2}, Field::real, {-3.0});
      const double want = oracle::fact(p + q) / (oracle::fact(p) * oracle::fact(q)) * -6.0;
      EXPECT_DOUBLE_EQ(odot(a, b)(0, 0).real(), want);
    }
}

TEST(Odot, DegreeZeroSideAdaptsToDimension) {
  // A scalar [c] in M(0,0) acts as c for any (n, n').
  Rng rng = make_stream(7, 0);
  auto a = random_matrix({3, 2}, {2, 1}, Field::real, rng);
  GradedMatrix c({1, 0}, {1, 0}, Field::real, {2.5});
  EXPECT_TRUE(approx_equal(odot(c, a), scale(2.5, a), 1e-15, 0.0));
  const auto unit = odot_power(a, 0);
  EXPECT_EQ(unit.p() + unit.p_prime(), 0u);
  EXPECT_EQ(values(unit), (std::vector<Scalar>{1.0}));
  EXPECT_TRUE(approx_equal(odot(unit, a), a, 0.0, 0.0));
}

TEST(Odot, AlgebraLawsBothFields) {
  Rng rng = make_stream(8, 0);
  std::uniform_int_distribution<std::size_t> dim(1, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const Field f = trial % 2 ? Field::complex : Field::real;
    const std::size_t n = dim(rng), np = dim(rng);
    auto a = random_block(rng, n, np, f);
    auto b = random_block(rng, n, np, f);
    auto c = random_block(rng, n, np, f);
    auto a2 = random_matrix(a.row_grading(), a.col_grading(), f, rng);
    EXPECT_TRUE(approx_equal(odot(a, b), odot(b, a)));
    EXPECT_TRUE(approx_equal(odot(odot(a, b), c), odot(a, odot(b, c))));
    EXPECT_TRUE(approx_equal(odot(a + a2, c), odot(a, c) + odot(a2, c)));
    const Scalar lambda = f == Field::real ? Scalar(-0.7) : Scalar(0.3, -1.1);
    EXPECT_TRUE(approx_equal(odot(lambda * a, b), lambda * odot(a, b)));
    EXPECT_FALSE(odot(a, b).is_zero());
  }
}

TEST(Odot, MixedLaws) {
  Rng rng = make_stream(9, 0);
  std::uniform_int_distribution<std::size_t> dim(1, 3);
  std::uniform_int_distribution<unsigned> deg(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const Field f = trial % 2 ? Field::complex : Field::real;
    const std::size_t n0 = dim(rng), n = dim(rng), np = dim(rng);
    const unsigned r = deg(rng), k = deg(rng);
    auto a = random_matrix({n0, deg(rng)}, {n, r}, f, rng);
    auto b = random_matrix({n, r}, {np, deg(rng)}, f, rng);
    auto h = random_matrix({n, 0}, {np, deg(rng)}, f, rng);
    EXPECT_TRUE(approx_equal(ordinary_mul(a, odot(b, h)), odot(ordinary_mul(a, b), h)));
    auto v = random_matrix({n, deg(rng)}, {n, 0}, f, rng);
    auto x = random_matrix({n, k}, {np, deg(rng)}, f, rng);
    EXPECT_TRUE(approx_equal(ordinary_mul(odot(identity(n, k, f), v), x), odot(x, v)));
  }
}

TEST(OdotPower, SmallExamples) {
  EXPECT_EQ(values(odot_power(row({1, 2}), 0)), (std::vector<Scalar>{1}));
  EXPECT_EQ(values(odot_power(row({1, 2}), 2)), (std::vector<Scalar>{1, 4, 4}));
  EXPECT_EQ(values(odot_power(column({1, 1}), 3)), (std::vector<Scalar>{6, 6, 6, 6}));
}

TEST(ClosedForms, Examples) {
  EXPECT_EQ(values(h_power_closed(row({1, 2}), 2)), (std::vector<Scalar>{1, 4, 4}));
  Rng rng = make_stream(10, 0);
  auto h = random_matrix({3, 0}, {3, 1}, Field::complex, rng);
  EXPECT_TRUE(approx_equal(h_power_closed(h, 1), h, 0.0, 0.0));
  EXPECT_EQ(values(v_power_closed(column({2.0}), 3)), (std::vector<Scalar>{48.0}));
}

TEST(ClosedForms, MatchIteratedPowers) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (unsigned m = 0; m <= 6; ++m)
      for (Field f : {Field::real, Field::complex}) {
        Rng rng = make_stream(100 + n, m);
        auto h = random_matrix({n, 0}, {n, 1}, f, rng);
        auto v = random_matrix({n, 1}, {n, 0}, f, rng);
        EXPECT_LE(max_relative_difference(odot_power(h, m), h_power_closed(h, m)), 1e-12);
        EXPECT_LE(max_relative_difference(odot_power(v, m), v_power_closed(v, m)), 1e-12);
      }
}

TEST(ClosedForms, HPowerAgainstMonomials) {
  // (h^(m))_{0,alpha'} = m!/alpha'! h^alpha'
  const std::vector<Scalar> h{0.5, -1.25, 2.0};
  const auto hm = h_power_closed(GradedMatrix::row_vector(h), 4);
  const auto cols = oracle::sorted_slice(3, 4);
  for (std::size_t j = 0; j < cols.size(); ++j)
    EXPECT_NEAR(std::abs(hm(0, j) - oracle::fact(4) / oracle::tuple_factorial(cols[j]) * oracle::monomial(h, cols[j])),
                0.0, 1e-12);
}

TEST(Identity, Examples) {
  EXPECT_EQ(identity(2, 1).rows(), 2u);
  EXPECT_EQ(values(identity(2, 1)), (std::vector<Scalar>{1, 0, 0, 1}));
  EXPECT_EQ(values(identity(4, 0)), (std::vector<Scalar>{1}));
  EXPECT_EQ(identity(2, 2).rows(), 3u);
  EXPECT_EQ(values(identity(2, 2)), (std::vector<Scalar>{1, 0, 0, 0, 1, 0, 0, 0, 1}));
}

TEST(Identity, HPowerOverFactorialOdotIdentityEntries) {
  // (h^(m)/m! odot E_k)_{alpha,beta} = h^(beta-alpha)/(beta-alpha)!
  const std::vector<Scalar> h{0.75, -0.5};
  for (unsigned m = 0; m <= 4; ++m)
    for (unsigned k = 0; k <= 4; ++k) {
      const auto lhs = odot(scale(1.0 / oracle::fact(m), odot_power(GradedMatrix::row_vector(h), m)), identity(2, k));
      const auto rows = oracle::sorted_slice(2, k), cols = oracle::sorted_slice(2, m + k);
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) {
          oracle::Tuple d{cols[j][0] - rows[i][0], cols[j][1] - rows[i][1]};
          const Scalar want = d[0] < 0 || d[1] < 0 ? Scalar(0.0)
                                                   : oracle::monomial(h, d) / oracle::tuple_factorial(d);
          EXPECT_NEAR(std::abs(lhs(i, j) - want), 0.0, 1e-13);
        }
    }
}

TEST(Kernel, ParallelMatchesSerialReferenceBitForBit) {
  const std::size_t old = odot_parallel_threshold();
  set_odot_parallel_threshold(0);
  Rng rng = make_stream(12, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const Field f = trial % 2 ? Field::complex : Field::real;
    auto a = random_matrix({3, 3}, {3, 2}, f, rng);
    auto b = random_matrix({3, 2}, {3, 3}, f, rng);
    omp_set_num_threads(1);
    const auto one = odot(a, b);
    omp_set_num_threads(4);
    const auto four = odot(a, b);
    EXPECT_EQ(values(one), values(four));
    EXPECT_TRUE(approx_equal(one, reference::odot_serial(a, b), 1e-13, 0.0));
  }
  set_odot_parallel_threshold(old);
}

TEST(Kernel, PlanWorkCountsTerms) {
  const auto plan = odot_plan(1, 1, 2, 0, 3, 0);
  EXPECT_EQ(plan->work(), 1u);
  EXPECT_EQ(plan->result_rows(), (Grading{1, 5}));
}
