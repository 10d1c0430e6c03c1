#include "mvseries/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "mvseries/extremal.hpp"
#include "mvseries/graded_matrix.hpp"
#include "mvseries/random.hpp"
#include "mvseries/reference.hpp"

namespace mvseries {

namespace {

struct Outcome {
  bool violated = false;
  double measure = 0.0;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Runs `fn` on `instances` independent substreams; `fn` also receives the
// instance number. Deterministic under any schedule.
CheckResult run_check_indexed(const VerifyOptions& opts, std::string name, std::string variant,
                              std::size_t instances, double tol, bool fatal,
                              const std::function<Outcome(Rng&, std::size_t)>& fn) {
  std::vector<Outcome> outcomes(instances);
  const std::uint64_t base = fnv1a(name + "/" + variant) ^ opts.seed;
  const long count = static_cast<long>(instances);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    Rng rng = make_stream(base, static_cast<std::uint64_t>(i));
    outcomes[i] = fn(rng, static_cast<std::size_t>(i));
  }
  CheckResult r{std::move(name), std::move(variant), instances, 0, 0.0, tol, fatal};
  for (const auto& o : outcomes) {
    r.violations += o.violated ? 1 : 0;
    r.worst = std::max(r.worst, o.measure);
  }
  return r;
}

CheckResult run_check(const VerifyOptions& opts, std::string name, std::string variant,
                      std::size_t instances, double tol, bool fatal,
                      const std::function<Outcome(Rng&)>& fn) {
  return run_check_indexed(opts, std::move(name), std::move(variant), instances, tol, fatal,
                           [&](Rng& rng, std::size_t) { return fn(rng); });
}

std::size_t rand_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

unsigned rand_degree(Rng& rng, unsigned hi) { return std::uniform_int_distribution<unsigned>(0, hi)(rng); }

Scalar rand_scalar(Field field, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double re = u(rng);
  return field == Field::real ? Scalar{re} : Scalar{re, u(rng)};
}

GradedMatrix rand_matrix(Rng& rng, std::size_t n, std::size_t n_prime, unsigned p, unsigned p_prime, Field field) {
  return random_matrix({n, p}, {n_prime, p_prime}, field, rng);
}

// Matrix-relative error, violated unless approx_equal at tol with a 1e-12 floor.
Outcome compare(const GradedMatrix& a, const GradedMatrix& b, double tol) {
  const double scale = std::max({a.max_abs(), b.max_abs(), 1e-300});
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return {!approx_equal(a, b, tol, 1e-12), worst / scale};
}

Outcome bound(double lhs, double rhs, double tol) {
  const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? INFINITY : 0.0);
  return {lhs > rhs * (1.0 + tol), ratio};
}

const char* field_name(Field f) { return f == Field::real ? "real" : "complex"; }

double fact(unsigned k) { return to_double(factorial(k)); }

}  // namespace

double ordinary_product_bound(unsigned q, unsigned q_prime, RhoExponent rho, double norm_a, double norm_b_conj) {
  const double inv = rho.is_infinite() ? 0.0 : 1.0 / rho.value();
  return std::pow(fact(q), 2.0 - inv) * std::pow(fact(q_prime), 2.0 * inv - 1.0) * norm_a * norm_b_conj;
}

double ordinary_product_bound_corrected(unsigned q, unsigned q_prime, std::size_t columns, RhoExponent rho,
                                        double norm_a, double norm_b_conj) {
  const double exponent = rho.is_infinite() ? 0.0 : std::max(0.0, (2.0 - rho.value()) / rho.value());
  return ordinary_product_bound(q, q_prime, rho, norm_a, norm_b_conj) *
         std::pow(static_cast<double>(std::max<std::size_t>(columns, 1)), exponent);
}

bool VerifySummary::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed() || !c.fatal; });
}

const CheckResult* VerifySummary::find(const std::string& name, const std::string& variant) const {
  for (const auto& c : checks)
    if (c.name == name && c.variant == variant) return &c;
  return nullptr;
}

std::vector<CheckResult> check_algebra(const VerifyOptions& o) {
  std::vector<CheckResult> out;
  const std::size_t N = o.algebra_instances;
  const double tol = o.algebra_tol;
  for (Field field : {Field::real, Field::complex}) {
    const std::string v = field_name(field);
    // Shared random shape: n, n' <= max_dim, degrees <= max_degree.
    auto dims = [&](Rng& rng) { return std::pair{rand_size(rng, 1, o.max_dim), rand_size(rng, 1, o.max_dim)}; };

    out.push_back(run_check(o, "odot.commutativity", v, N, tol, true, [&](Rng& rng) {
      auto [n, np] = dims(rng);
      auto a = rand_matrix(rng, n, np, rand_degree(rng, o.max_degree), rand_degree(rng, o.max_degree), field);
      auto b = rand_matrix(rng, n, np, rand_degree(rng, o.max_degree), rand_degree(rng, o.max_degree), field);
      return compare(odot(a, b), odot(b, a), tol);
    }));
    out.push_back(run_check(o, "odot.distributivity", v, N, tol, true, [&](Rng& rng) {
      auto [n, np] = dims(rng);
      const unsigned p = rand_degree(rng, o.max_degree), pp = rand_degree(rng, o.max_degree);
      auto a = rand_matrix(rng, n, np, p, pp, field);
      auto b = rand_matrix(rng, n, np, p, pp, field);
      auto c = rand_matrix(rng, n, np, rand_degree(rng, o.max_degree), rand_degree(rng, o.max_degree), field);
      return compare(odot(a + b, c), odot(a, c) + odot(b, c), tol);
    }));
    out.push_back(run_check(o, "odot.associativity", v, N, tol, true, [&](Rng& rng) {
      auto [n, np] = dims(rng);
      auto a = rand_matrix(rng, n, np, rand_degree(rng, o.max_degree), rand_degree(rng, o.max_degree), field);
      auto b = rand_matrix(rng, n, np, rand_degree(rng, o.max_degree), rand_degree(rng, o.max_degree), field);
      auto c = rand_matrix(rng, n, np, rand_degree(rng, o.max_degree), rand_degree(rng, o.max_degree), field);
      return compare(odot(odot(a, b), c), odot(a, odot(b, c)), tol);
    }));
    out.push_back(run_check(o, "odot.scalar", v, N, tol, true, [&](Rng& rng) {
      auto [n, np] = dims(rng);
      auto a = rand_matrix(rng, n, np, rand_degree(rng, o.max_degree), rand_degree(rng, o.max_degree), field);
      auto b = rand_matrix(rng, n, np, rand_degree(rng, o.max_degree), rand_degree(rng, o.max_degree), field);
      const Scalar lambda = rand_scalar(field, rng);
      return compare(odot(lambda * a, b), lambda * odot(a, b), tol);
    }));
    out.push_back(run_check(o, "odot.no_zero_divisors", v, N, tol, true, [&](Rng& rng) {
      auto [n, np] = dims(rng);
      auto a = rand_matrix(rng, n, np, rand_degree(rng, o.max_degree), rand_degree(rng, o.max_degree), field);
      auto b = rand_matrix(rng, n, np, rand_degree(rng, o.max_degree), rand_degree(rng, o.max_degree), field);
      const bool product_nonzero = !odot(a, b).is_zero();
      const bool zero_kills = odot(a, zero_like(b)).is_zero();
      return Outcome{a.is_zero() || b.is_zero() || !product_nonzero || !zero_kills, 0.0};
    }));
    out.push_back(run_check(o, "mixed.ordinary_then_odot", v, N, tol, true, [&](Rng& rng) {
      // A (B odot H) = (A B) odot H with H in M(0, t).
      const std::size_t n0 = rand_size(rng, 1, o.max_dim);
      auto [n, np] = dims(rng);
      const unsigned p0 = rand_degree(rng, o.max_degree), r = rand_degree(rng, o.max_degree);
      const unsigned s = rand_degree(rng, o.max_degree), t = rand_degree(rng, o.max_degree);
      auto a = rand_matrix(rng, n0, n, p0, r, field);
      auto b = rand_matrix(rng, n, np, r, s, field);
      auto h = rand_matrix(rng, n, np, 0, t, field);
      return compare(ordinary_mul(a, odot(b, h)), odot(ordinary_mul(a, b), h), tol);
    }));
    out.push_back(run_check(o, "mixed.identity_odot", v, N, tol, true, [&](Rng& rng) {
      // (E_k odot V) A = A odot V with V in M(p, 0).
      auto [n, np] = dims(rng);
      const unsigned k = rand_degree(rng, o.max_degree), p = rand_degree(rng, o.max_degree);
      const unsigned qp = rand_degree(rng, o.max_degree);
      auto vm = rand_matrix(rng, n, n, p, 0, field);
      auto a = rand_matrix(rng, n, np, k, qp, field);
      return compare(ordinary_mul(odot(identity(n, k, field), vm), a), odot(a, vm), tol);
    }));
  }
  return out;
}

std::vector<CheckResult> check_powers(const VerifyOptions& o) {
  std::vector<CheckResult> out;
  for (Field field : {Field::real, Field::complex}) {
    const std::string v = field_name(field);
    const std::size_t pairs = o.max_dim * (o.max_power + 1);
    // Instance i covers the (n, m) pair i mod pairs, so every pair is hit power_instances times.
    auto nm = [&](std::size_t i) {
      const std::size_t k = i % pairs;
      return std::pair{k / (o.max_power + 1) + 1, static_cast<unsigned>(k % (o.max_power + 1))};
    };
    out.push_back(run_check_indexed(o, "power.h_closed_form", v, pairs * o.power_instances, o.power_tol, true,
                                    [&](Rng& rng, std::size_t i) {
      auto [n, m] = nm(i);
      auto h = rand_matrix(rng, n, n, 0, 1, field);
      const double err = max_relative_difference(odot_power(h, m), h_power_closed(h, m));
      return Outcome{err > o.power_tol, err};
    }));
    out.push_back(run_check_indexed(o, "power.v_closed_form", v, pairs * o.power_instances, o.power_tol, true,
                                    [&](Rng& rng, std::size_t i) {
      auto [n, m] = nm(i);
      auto vm = rand_matrix(rng, n, n, 1, 0, field);
      const double err = max_relative_difference(odot_power(vm, m), v_power_closed(vm, m));
      return Outcome{err > o.power_tol, err};
    }));
    out.push_back(run_check(o, "power.h_odot_identity_entries", v, o.algebra_instances, o.algebra_tol, true,
                            [&](Rng& rng) {
      // (h^(m)/m! odot E_k)_{alpha,beta} = h^(beta-alpha) / (beta-alpha)!
      const std::size_t n = rand_size(rng, 1, o.max_dim);
      const unsigned m = rand_degree(rng, 4), k = rand_degree(rng, 4);
      auto h = rand_matrix(rng, n, n, 0, 1, field);
      const auto direct = odot(scale(1.0 / fact(m), odot_power(h, m)), identity(n, k, field));
      GradedMatrix formula({n, k}, {n, m + k}, field);
      for (std::size_t i = 0; i < formula.rows(); ++i) {
        const MultiIndex& alpha = formula.row_slice().unrank(i);
        for (std::size_t j = 0; j < formula.cols(); ++j) {
          const MultiIndex& beta = formula.col_slice().unrank(j);
          if (!alpha.below(beta)) continue;
          const MultiIndex d = beta - alpha;
          Scalar value = 1.0;
          for (std::size_t c = 0; c < n; ++c)
            for (unsigned e = 1; e <= d[c]; ++e) value *= h(0, c) / static_cast<double>(e);
          formula.set(i, j, value);
        }
      }
      return compare(direct, formula, o.algebra_tol);
    }));
    out.push_back(run_check(o, "kernel.parallel_vs_serial", v, o.algebra_instances, 1e-12, true, [&](Rng& rng) {
      const std::size_t n = rand_size(rng, 1, o.max_dim), np = rand_size(rng, 1, o.max_dim);
      auto a = rand_matrix(rng, n, np, rand_degree(rng, o.max_degree), rand_degree(rng, o.max_degree), field);
      auto b = rand_matrix(rng, n, np, rand_degree(rng, o.max_degree), rand_degree(rng, o.max_degree), field);
      return compare(odot(a, b), reference::odot_serial(a, b), 1e-12);
    }));
  }
  return out;
}

std::vector<CheckResult> check_norm_axioms(const VerifyOptions& o) {
  std::vector<CheckResult> out;
  const double tol = o.algebra_tol;
  for (const RhoExponent& rho : o.rhos) {
    const std::string v = "rho=" + rho.str();
    out.push_back(run_check(o, "norm.definite", v, o.algebra_instances, tol, true, [&](Rng& rng) {
      const std::size_t n = rand_size(rng, 1, o.max_dim), np = rand_size(rng, 1, o.max_dim);
      auto a = rand_matrix(rng, n, np, rand_degree(rng, o.max_degree), rand_degree(rng, o.max_degree), Field::complex);
      const bool ok = rho_norm(a, rho) > 0.0 && rho_norm(zero_like(a), rho) == 0.0;
      return Outcome{!ok, 0.0};
    }));
    out.push_back(run_check(o, "norm.homogeneity", v, o.algebra_instances, tol, true, [&](Rng& rng) {
      const std::size_t n = rand_size(rng, 1, o.max_dim), np = rand_size(rng, 1, o.max_dim);
      auto a = rand_matrix(rng, n, np, rand_degree(rng, o.max_degree), rand_degree(rng, o.max_degree), Field::complex);
      const Scalar lambda = 4.0 * rand_scalar(Field::complex, rng);
      const double lhs = rho_norm(lambda * a, rho), rhs = std::abs(lambda) * rho_norm(a, rho);
      const double err = std::abs(lhs - rhs) / std::max(rhs, 1e-300);
      return Outcome{err > tol, err};
    }));
    out.push_back(run_check(o, "norm.triangle", v, o.algebra_instances, tol, true, [&](Rng& rng) {
      const std::size_t n = rand_size(rng, 1, o.max_dim), np = rand_size(rng, 1, o.max_dim);
      const unsigned p = rand_degree(rng, o.max_degree), pp = rand_degree(rng, o.max_degree);
      auto a = rand_matrix(rng, n, np, p, pp, Field::complex);
      auto b = rand_matrix(rng, n, np, p, pp, Field::complex);
      return bound(rho_norm(a + b, rho), rho_norm(a, rho) + rho_norm(b, rho), tol);
    }));
  }
  return out;
}

std::vector<CheckResult> check_inequalities(const VerifyOptions& o) {
  std::vector<CheckResult> out;
  const std::size_t N = o.inequality_instances;
  const double tol = o.inequality_tol;
  for (const RhoExponent& rho : o.rhos) {
    const std::string v = "rho=" + rho.str();
    const RhoExponent conj = rho.conjugate();
    // Fields alternate with the instance stream.
    auto pick_field = [](Rng& rng) { return (rng() & 1u) ? Field::complex : Field::real; };

    out.push_back(run_check(o, "bound.odot_submultiplicative", v, N, tol, true, [&](Rng& rng) {
      const Field f = pick_field(rng);
      const std::size_t n = rand_size(rng, 1, o.max_dim), np = rand_size(rng, 1, o.max_dim);
      auto a = rand_matrix(rng, n, np, rand_degree(rng, o.max_degree), rand_degree(rng, o.max_degree), f);
      auto b = rand_matrix(rng, n, np, rand_degree(rng, o.max_degree), rand_degree(rng, o.max_degree), f);
      return bound(rho_norm(odot(a, b), rho), rho_norm(a, rho) * rho_norm(b, rho), tol);
    }));

    // Both ordinary-product checks share instances through the same stream name.
    auto product_instance = [&](Rng& rng, bool corrected) {
      const Field f = pick_field(rng);
      const std::size_t n = rand_size(rng, 1, o.max_dim), n2 = rand_size(rng, 1, o.max_dim);
      const std::size_t np = rand_size(rng, 1, o.max_dim);
      const unsigned p = rand_degree(rng, o.max_degree), q = rand_degree(rng, o.max_degree);
      const unsigned qp = rand_degree(rng, o.max_degree);
      auto a = rand_matrix(rng, n, n2, p, q, f);
      auto b = rand_matrix(rng, n2, np, q, qp, f);
      const double lhs = rho_norm(ordinary_mul(a, b), rho);
      const double na = rho_norm(a, rho), nb = rho_norm(b, conj);
      const double rhs = corrected ? ordinary_product_bound_corrected(q, qp, b.cols(), rho, na, nb)
                                   : ordinary_product_bound(q, qp, rho, na, nb);
      return bound(lhs, rhs, tol);
    };
    const bool stated_fatal = o.strict || rho.is_infinite() || rho.value() >= 2.0;
    {
      auto r = run_check(o, "bound.ordinary_product", v, N, tol, stated_fatal,
                         [&](Rng& rng) { return product_instance(rng, false); });
      out.push_back(std::move(r));
      // Same substreams as above: rename after running under the shared stream name.
      auto c = run_check(o, "bound.ordinary_product", v, N, tol, true,
                         [&](Rng& rng) { return product_instance(rng, true); });
      c.name = "bound.ordinary_product_corrected";
      out.push_back(std::move(c));
    }

    out.push_back(run_check(o, "bound.h_power_identity", v, N, tol, true, [&](Rng& rng) {
      const Field f = pick_field(rng);
      const std::size_t n = rand_size(rng, 1, o.max_dim), np = rand_size(rng, 1, o.max_dim);
      const unsigned m = rand_degree(rng, 4), k = rand_degree(rng, 4), qp = rand_degree(rng, o.max_degree);
      auto h = rand_matrix(rng, n, n, 0, 1, f);
      auto a = rand_matrix(rng, n, np, m + k, qp, f);
      const auto op = odot(scale(1.0 / fact(m), odot_power(h, m)), identity(n, k, f));
      const double lhs = rho_norm(ordinary_mul(op, a), rho);
      const double rhs = to_double(binomial(m + k, k)) * std::pow(rho_norm(h, conj), m) * rho_norm(a, rho);
      return bound(lhs, rhs, tol);
    }));

    out.push_back(run_check(o, "bound.multilinear", v, N, tol, true, [&](Rng& rng) {
      const Field f = pick_field(rng);
      const std::size_t n = rand_size(rng, 1, o.max_dim), np = rand_size(rng, 1, o.max_dim);
      const unsigned m = rand_degree(rng, 4), qp = rand_degree(rng, o.max_degree);
      std::vector<GradedMatrix> hs;
      double rhs = 1.0;
      for (unsigned i = 0; i < m; ++i) {
        hs.push_back(rand_matrix(rng, n, n, 0, 1, f));
        rhs *= rho_norm(hs.back(), conj);
      }
      auto a = rand_matrix(rng, n, np, m, qp, f);
      rhs *= rho_norm(a, rho);
      return bound(multilinear_value(hs, a, rho), rhs, tol);
    }));
  }
  return out;
}

std::vector<CheckResult> check_lambda_bounds(const VerifyOptions& o) {
  std::vector<CheckResult> out;
  for (const RhoExponent& rho : o.rhos) {
    const std::string v = "rho=" + rho.str();
    out.push_back(run_check(o, "lambda.positive_and_at_most_one", v, 10, 1e-9, true, [&](Rng& rng) {
      ExtremalProblem prob;
      prob.n = rand_size(rng, 1, 2);
      prob.n_prime = rand_size(rng, 1, 2);
      prob.p = rand_degree(rng, 2);
      prob.p_prime = rand_degree(rng, 2);
      prob.q = rand_degree(rng, 2);
      prob.q_prime = rand_degree(rng, 2);
      prob.rho = rho;
      prob.budget.restarts = 4;
      prob.budget.iterations = 300;
      prob.seed = rng();
      double lambda = lambda_estimate(prob).value;
      // Random pairs can only lower the estimate of the infimum.
      for (int i = 0; i < 50; ++i) {
        auto a = rand_matrix(rng, prob.n, prob.n_prime, prob.p, prob.p_prime, Field::real);
        auto b = rand_matrix(rng, prob.n, prob.n_prime, prob.q, prob.q_prime, Field::real);
        lambda = std::min(lambda, odot_ratio(a, b, rho));
      }
      return Outcome{!(lambda > 0.0) || lambda > 1.0 + 1e-9, lambda};
    }));
  }
  return out;
}

VerifySummary run_verify(const VerifyOptions& opts) {
  VerifySummary s;
  for (auto part : {check_algebra, check_powers, check_norm_axioms, check_inequalities, check_lambda_bounds}) {
    auto checks = part(opts);
    s.checks.insert(s.checks.end(), std::make_move_iterator(checks.begin()), std::make_move_iterator(checks.end()));
  }
  return s;
}

}  // namespace mvseries
