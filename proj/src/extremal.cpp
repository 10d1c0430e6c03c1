#include "mvseries/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "mvseries/errors.hpp"
#include "mvseries/odot_kernel.hpp"
#include "mvseries/random.hpp"

namespace mvseries {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// rho-norm of raw row-major data with the weights of a fixed grading.
class WeightedNorm {
 public:
  WeightedNorm(Grading rows, Grading cols, RhoExponent rho) : rho_(rho) {
    const auto row_slice = graded_slice(rows.dim, rows.degree);
    cols_ = graded_slice(cols.dim, cols.degree)->size();
    const double log_pp = log_factorial(rows.degree) + log_factorial(cols.degree);
    if (rho.is_infinite()) {
      inf_scale_ = std::exp(-log_pp);
    } else {
      for (const auto& alpha : *row_slice)
        row_weights_.push_back(std::exp(-log_multifactorial(alpha) - (rho.value() - 1.0) * log_pp));
    }
  }

  double operator()(std::span<const Scalar> x) const {
    if (rho_.is_infinite()) {
      double m = 0.0;
      for (const auto& v : x) m = std::max(m, std::abs(v));
      return m * inf_scale_;
    }
    const double r = rho_.value();
    double s = 0.0;
    for (std::size_t i = 0; i < row_weights_.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        const double v = std::abs(x[i * cols_ + j]);
        s += (r == 1.0 ? v : std::pow(v, r)) * row_weights_[i];
      }
    return r == 1.0 ? s : std::pow(s, 1.0 / r);
  }

 private:
  RhoExponent rho_;
  std::size_t cols_ = 0;
  std::vector<double> row_weights_;
  double inf_scale_ = 1.0;
};

struct Outcome {
  double best = kInf;  // in minimization sign
  std::vector<std::vector<Scalar>> argument;
  bool converged = false;
};

// Multistart building block: one restart of coordinate perturbation with a
// shrinking step. Parts are renormalized after every trial move.
// `objective` is minimized; callers negate it to maximize.
template <class Objective>
Outcome run_restart(const std::vector<std::size_t>& sizes, const std::vector<WeightedNorm>& norms,
                    Field field, const Budget& budget, bool cycle_parts, Rng& rng,
                    Objective& objective) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const std::size_t parts = sizes.size();
  const std::size_t per_entry = field == Field::complex ? 2 : 1;

  std::vector<std::vector<Scalar>> x(parts);
  for (std::size_t k = 0; k < parts; ++k) {
    double nrm = 0.0;
    while (nrm == 0.0) {
      x[k].assign(sizes[k], Scalar{});
      for (auto& v : x[k]) v = field == Field::complex ? Scalar{unit(rng), unit(rng)} : Scalar{unit(rng)};
      nrm = norms[k](x[k]);
    }
    for (auto& v : x[k]) v /= nrm;
  }

  std::size_t coordinates = 0;
  for (auto s : sizes) coordinates += s * per_entry;

  Outcome out;
  double f = objective(x);
  double step = budget.initial_step;
  std::size_t fails = 0;
  std::vector<Scalar> saved;

  for (unsigned it = 0; it < budget.iterations; ++it) {
    std::size_t part = 0;
    std::size_t coord = 0;
    if (cycle_parts) {
      part = it % parts;
      coord = std::uniform_int_distribution<std::size_t>(0, sizes[part] * per_entry - 1)(rng);
    } else {
      coord = std::uniform_int_distribution<std::size_t>(0, coordinates - 1)(rng);
      while (coord >= sizes[part] * per_entry) coord -= sizes[part++] * per_entry;
    }
    const std::size_t entry = coord / per_entry;
    const bool imag = coord % per_entry == 1;

    bool improved = false;
    saved = x[part];
    for (double dir : {1.0, -1.0}) {
      x[part] = saved;
      x[part][entry] += imag ? Scalar{0.0, dir * step} : Scalar{dir * step, 0.0};
      const double nrm = norms[part](x[part]);
      if (nrm == 0.0) continue;
      for (auto& v : x[part]) v /= nrm;
      const double trial = objective(x);
      if (trial < f - 1e-14 * std::abs(f)) {
        f = trial;
        improved = true;
        break;
      }
    }
    if (improved) {
      fails = 0;
      continue;
    }
    x[part] = saved;
    if (++fails >= coordinates) {
      fails = 0;
      step *= budget.shrink;
      if (step < budget.min_step) {
        out.converged = true;
        break;
      }
    }
  }
  out.best = f;
  out.argument = std::move(x);
  return out;
}

template <class MakeObjective>
std::vector<Outcome> run_restarts(const std::vector<std::size_t>& sizes,
                                  const std::vector<WeightedNorm>& norms, Field field,
                                  const Budget& budget, std::uint64_t seed, bool cycle_parts,
                                  MakeObjective make_objective) {
  if (budget.restarts == 0) throw DomainError("budget needs at least one restart");
  std::vector<Outcome> outcomes(budget.restarts);
  const long count = static_cast<long>(budget.restarts);
#pragma omp parallel for schedule(dynamic)
  for (long r = 0; r < count; ++r) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(r));
    auto objective = make_objective();
    outcomes[r] = run_restart(sizes, norms, field, budget, cycle_parts, rng, objective);
  }
  return outcomes;
}

// Lowest index wins ties, so the reduction is schedule independent.
std::size_t best_index(const std::vector<Outcome>& outcomes) {
  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r)
    if (outcomes[r].best < outcomes[best].best) best = r;
  return best;
}

GradedMatrix unit_of(std::size_t n, std::size_t n_prime, Field field) {
  return GradedMatrix({n, 0}, {n_prime, 0}, field, {Scalar{1.0}});
}

}  // namespace

double odot_ratio(const GradedMatrix& a, const GradedMatrix& b, RhoExponent rho) {
  return rho_norm(odot(a, b), rho) / (rho_norm(a, rho) * rho_norm(b, rho));
}

ExtremalResult lambda_estimate(const ExtremalProblem& prob) {
  if (prob.mode != ExtremalMode::lambda_min) throw DomainError("lambda_estimate needs mode lambda_min");
  const Grading ar{prob.n, prob.p}, ac{prob.n_prime, prob.p_prime};
  const Grading br{prob.n, prob.q}, bc{prob.n_prime, prob.q_prime};
  const auto plan = odot_plan(prob.n, prob.n_prime, prob.p, prob.p_prime, prob.q, prob.q_prime);

  const std::vector<std::size_t> sizes{graded_slice(ar.dim, ar.degree)->size() * graded_slice(ac.dim, ac.degree)->size(),
                                       graded_slice(br.dim, br.degree)->size() * graded_slice(bc.dim, bc.degree)->size()};
  const std::vector<WeightedNorm> norms{WeightedNorm(ar, ac, prob.rho), WeightedNorm(br, bc, prob.rho)};
  const WeightedNorm c_norm(plan->result_rows(), plan->result_cols(), prob.rho);
  const std::size_t c_size = graded_slice(prob.n, prob.p + prob.q)->size() *
                             graded_slice(prob.n_prime, prob.p_prime + prob.q_prime)->size();

  auto make_objective = [&] {
    return [&, buffer = std::vector<Scalar>(c_size)](const std::vector<std::vector<Scalar>>& x) mutable {
      plan->apply_into(x[0], x[1], buffer);
      return c_norm(buffer) / (norms[0](x[0]) * norms[1](x[1]));
    };
  };
  const auto outcomes = run_restarts(sizes, norms, prob.field, prob.budget, prob.seed, false, make_objective);
  const std::size_t best = best_index(outcomes);

  ExtremalResult result;
  result.field = prob.field;
  result.best_restart = best;
  result.converged = outcomes[best].converged;
  for (const auto& o : outcomes) result.trace.push_back(o.best);
  result.argument.emplace_back(ar, ac, prob.field, outcomes[best].argument[0]);
  result.argument.emplace_back(br, bc, prob.field, outcomes[best].argument[1]);
  result.value = odot_ratio(result.argument[0], result.argument[1], prob.rho);
  return result;
}

std::vector<ExtremalResult> lambda_estimate_per_field(const ExtremalProblem& prob) {
  ExtremalProblem real = prob;
  real.field = Field::real;
  std::vector<ExtremalResult> out{lambda_estimate(real)};
  if (prob.field == Field::complex) out.push_back(lambda_estimate(prob));
  return out;
}

double multilinear_value(const std::vector<GradedMatrix>& hs, const GradedMatrix& a, RhoExponent rho) {
  if (hs.size() != a.p())
    throw DimensionError("need " + std::to_string(a.p()) + " vectors for a degree-" + std::to_string(a.p()) +
                         " block, got " + std::to_string(hs.size()));
  const Field field = a.field();
  GradedMatrix product = unit_of(a.n(), a.n(), field);
  for (const auto& h : hs) {
    if (h.p() != 0 || h.p_prime() != 1 || h.n_prime() != a.n())
      throw DimensionError("each h must be a row vector in M(0,1) of length n");
    product = odot(product, h.as_field(field));
  }
  product = scale(1.0 / to_double(factorial(a.p())), product);
  return rho_norm(ordinary_mul(product, a), rho);
}

ExtremalResult opnorm_estimate(const ExtremalProblem& prob, const GradedMatrix& block) {
  if (prob.mode != ExtremalMode::opnorm_max) throw DomainError("opnorm_estimate needs mode opnorm_max");
  const unsigned m = block.p();
  const std::size_t n = block.n();
  const Field field = (prob.field == Field::complex || block.field() == Field::complex) ? Field::complex : Field::real;
  const GradedMatrix a = block.as_field(field);

  ExtremalResult result;
  result.field = field;
  if (m == 0) {
    result.value = rho_norm(a, prob.rho);
    result.converged = true;
    result.trace.push_back(result.value);
    return result;
  }

  const RhoExponent h_rho = prob.rho.conjugate();
  const std::vector<std::size_t> sizes(m, n);
  const std::vector<WeightedNorm> norms(m, WeightedNorm({n, 0}, {n, 1}, h_rho));
  // plans[k] multiplies a degree-(k+1) row by one more h.
  std::vector<std::shared_ptr<const OdotPlan>> plans;
  for (unsigned k = 1; k < m; ++k) plans.push_back(odot_plan(n, n, 0, k, 0, 1));
  const WeightedNorm y_norm({n, 0}, {block.n_prime(), block.p_prime()}, prob.rho);
  const double inv_mfact = 1.0 / to_double(factorial(m));
  const std::size_t out_cols = block.cols();
  const auto adata = a.data();

  auto make_objective = [&] {
    std::vector<std::vector<Scalar>> buffers;
    for (unsigned k = 1; k < m; ++k) buffers.emplace_back(graded_slice(n, k + 1)->size());
    return [&, buffers = std::move(buffers), y = std::vector<Scalar>(out_cols)](
               const std::vector<std::vector<Scalar>>& x) mutable {
      std::span<const Scalar> current = x[0];
      for (unsigned k = 1; k < m; ++k) {
        plans[k - 1]->apply_into(current, x[k], buffers[k - 1]);
        current = buffers[k - 1];
      }
      std::fill(y.begin(), y.end(), Scalar{});
      for (std::size_t i = 0; i < current.size(); ++i) {
        const Scalar c = current[i] * inv_mfact;
        for (std::size_t j = 0; j < out_cols; ++j) y[j] += c * adata[i * out_cols + j];
      }
      double denom = 1.0;
      for (unsigned k = 0; k < m; ++k) denom *= norms[k](x[k]);
      return -y_norm(y) / denom;
    };
  };
  const auto outcomes = run_restarts(sizes, norms, field, prob.budget, prob.seed, true, make_objective);
  const std::size_t best = best_index(outcomes);

  result.best_restart = best;
  result.converged = outcomes[best].converged;
  for (const auto& o : outcomes) result.trace.push_back(-o.best);
  for (const auto& h : outcomes[best].argument) result.argument.push_back(GradedMatrix::row_vector(h, field));
  result.value = multilinear_value(result.argument, a, prob.rho);
  return result;
}

std::vector<RootRow> opnorm_root_sequence(const BlockSeries& s, RhoExponent rho, const Budget& budget,
                                          std::uint64_t seed) {
  std::vector<RootRow> rows;
  for (unsigned m = 1; m <= s.max_degree(); ++m) {
    const GradedMatrix& block = s.block(m);
    RootRow row{m, 0.0, 0.0};
    if (!block.is_zero()) {
      ExtremalProblem prob;
      prob.rho = rho;
      prob.mode = ExtremalMode::opnorm_max;
      prob.field = s.field();
      prob.budget = budget;
      prob.seed = seed + 0x9e3779b97f4a7c15ULL * m;
      const auto est = opnorm_estimate(prob, block);
      row.op_root = std::pow(est.value, 1.0 / m);
      row.rho_root = std::exp(log_rho_norm(block, rho) / m);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mvseries
