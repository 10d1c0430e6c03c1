#include <gtest/gtest.h>

#include "mvseries/norms.hpp"
#include "mvseries/verify.hpp"

using namespace mvseries;

namespace {

VerifyOptions small() {
  VerifyOptions o;
  o.algebra_instances = 20;
  o.inequality_instances = 60;
  o.power_instances = 1;
  return o;
}

}  // namespace

TEST(ProductBound, CountsColumnsBelowTwo) {
  // A = [1] in M_{1,1}(0,0), B = [1, 1] in M_{1,2}(0,1): ||AB||_1 = 2, stated bound 1.
  GradedMatrix a({1, 0}, {1, 0}, Field::real, {1.0});
  GradedMatrix b({1, 0}, {2, 1}, Field::real, {1.0, 1.0});
  const RhoExponent one(1.0);
  const double lhs = rho_norm(ordinary_mul(a, b), one);
  EXPECT_DOUBLE_EQ(lhs, 2.0);
  EXPECT_DOUBLE_EQ(ordinary_product_bound(0, 1, one, rho_norm(a, one), rho_norm(b, one.conjugate())), 1.0);
  EXPECT_DOUBLE_EQ(ordinary_product_bound_corrected(0, 1, 2, one, rho_norm(a, one), rho_norm(b, one.conjugate())), 2.0);
  for (double rv : {2.0, 3.0}) {
    const RhoExponent rho(rv);
    EXPECT_EQ(ordinary_product_bound_corrected(2, 1, 5, rho, 1.0, 1.0), ordinary_product_bound(2, 1, rho, 1.0, 1.0));
  }
}

TEST(Verify, SmallRunPassesAndIsDeterministic) {
  const auto a = run_verify(small());
  const auto b = run_verify(small());
  EXPECT_TRUE(a.ok());
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    EXPECT_EQ(a.checks[i].violations, b.checks[i].violations);
    EXPECT_EQ(a.checks[i].worst, b.checks[i].worst);
    if (a.checks[i].fatal) EXPECT_TRUE(a.checks[i].passed()) << a.checks[i].name << " " << a.checks[i].variant;
  }
  for (const char* v : {"rho=1", "rho=1.5", "rho=2", "rho=3", "rho=inf"}) {
    ASSERT_NE(a.find("bound.ordinary_product_corrected", v), nullptr) << v;
    EXPECT_TRUE(a.find("bound.ordinary_product_corrected", v)->passed());
  }
  ASSERT_NE(a.find("power.h_closed_form", "complex"), nullptr);
  EXPECT_EQ(a.find("power.h_closed_form", "complex")->instances, 21u);
}

TEST(Verify, StrictModeMakesStatedBoundFatal) {
  auto o = small();
  o.strict = true;
  const auto checks = check_inequalities(o);
  for (const auto& c : checks) EXPECT_TRUE(c.fatal);
}
