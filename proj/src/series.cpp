#include "mvseries/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mvseries/errors.hpp"
#include "mvseries/random.hpp"

namespace mvseries {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool any_complex(std::span<const Scalar> h) {
  return std::any_of(h.begin(), h.end(), [](Scalar x) { return x.imag() != 0.0; });
}

// |h^alpha| / alpha!, evaluated in the log domain.
double abs_monomial_over_factorial(std::span<const double> log_abs_h, const MultiIndex& alpha) {
  double l = -log_multifactorial(alpha);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == 0) continue;
    if (std::isinf(log_abs_h[i])) return 0.0;
    l += alpha[i] * log_abs_h[i];
  }
  return std::exp(l);
}

Scalar monomial_over_factorial(std::span<const Scalar> h, const MultiIndex& alpha) {
  Scalar out = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (unsigned k = 1; k <= alpha[i]; ++k) out *= h[i] / static_cast<double>(k);
  return out;
}

// The last `window` entries of a per-degree sequence are positive and non-decreasing.
bool non_vanishing_tail(const std::vector<double>& seq, unsigned window) {
  if (window == 0 || seq.size() < window) return false;
  const std::size_t first = seq.size() - window;
  if (!(seq[first] > 0.0)) return false;
  for (std::size_t m = first + 1; m < seq.size(); ++m)
    if (seq[m] < seq[m - 1]) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

CoefficientMap::CoefficientMap(std::size_t n, std::size_t n_prime, unsigned q_prime, Field field)
    : n_(n), n_prime_(n_prime), q_prime_(q_prime), field_(field) {
  if (n == 0 || n_prime == 0) throw ValidationError("n and n_prime must be >= 1");
}

void CoefficientMap::insert(MultiIndex alpha, MultiIndex alpha_prime, Scalar value) {
  if (alpha.size() != n_)
    throw ValidationError("alpha " + alpha.str() + " has length " + std::to_string(alpha.size()) +
                          ", expected n = " + std::to_string(n_));
  if (alpha_prime.size() != n_prime_)
    throw ValidationError("alpha_prime " + alpha_prime.str() + " has length " +
                          std::to_string(alpha_prime.size()) + ", expected n_prime = " +
                          std::to_string(n_prime_));
  if (alpha_prime.degree() != q_prime_)
    throw ValidationError("alpha_prime " + alpha_prime.str() + " has degree " +
                          std::to_string(alpha_prime.degree()) + ", expected q_prime = " +
                          std::to_string(q_prime_));
  if (field_ == Field::real && value.imag() != 0.0)
    throw ValidationError("complex coefficient in a real series");
  const auto key_str = alpha.str() + "/" + alpha_prime.str();
  if (!terms_.try_emplace({std::move(alpha), std::move(alpha_prime)}, value).second)
    throw ValidationError("duplicate term " + key_str);
}

unsigned CoefficientMap::max_degree() const {
  unsigned d = 0;
  for (const auto& [key, value] : terms_) d = std::max(d, key.first.degree());
  return d;
}

Scalar CoefficientMap::coefficient(const MultiIndex& alpha, const MultiIndex& alpha_prime) const {
  auto it = terms_.find({alpha, alpha_prime});
  return it == terms_.end() ? Scalar{} : it->second;
}

BlockSeries::BlockSeries(std::size_t n, std::size_t n_prime, unsigned q_prime, Field field,
                         std::vector<GradedMatrix> blocks)
    : n_(n), n_prime_(n_prime), q_prime_(q_prime), field_(field), blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw DimensionError("a block series needs at least the degree-0 block");
  for (std::size_t m = 0; m < blocks_.size(); ++m) {
    const auto& b = blocks_[m];
    if (b.n() != n || b.n_prime() != n_prime || b.p() != m || b.p_prime() != q_prime ||
        b.field() != field)
      throw DimensionError("block " + std::to_string(m) + " does not lie in M(" +
                           std::to_string(m) + "," + std::to_string(q_prime) + ")");
  }
}

BlockSeries from_coefficients(const CoefficientMap& c, unsigned max_degree) {
  std::vector<GradedMatrix> blocks;
  blocks.reserve(max_degree + 1);
  for (unsigned m = 0; m <= max_degree; ++m)
    blocks.emplace_back(Grading{c.n(), m}, Grading{c.n_prime(), c.q_prime()}, c.field());
  for (const auto& [key, value] : c.terms()) {
    const auto& [alpha, alpha_prime] = key;
    if (alpha.degree() > max_degree)
      throw ValidationError("term " + alpha.str() + " has degree above the truncation " +
                            std::to_string(max_degree));
    const double f = alpha.degree() <= 33 ? to_double(multifactorial(alpha))
                                          : std::exp(log_multifactorial(alpha));
    blocks[alpha.degree()].set(alpha, alpha_prime, f * value);
  }
  return BlockSeries(c.n(), c.n_prime(), c.q_prime(), c.field(), std::move(blocks));
}

GradedMatrix evaluate(const BlockSeries& s, std::span<const Scalar> h) {
  if (h.size() != s.n())
    throw DimensionError("point has length " + std::to_string(h.size()) + ", expected " +
                         std::to_string(s.n()));
  const Field field = (s.field() == Field::complex || any_complex(h)) ? Field::complex : Field::real;
  const GradedMatrix row = GradedMatrix::row_vector(h, field);
  GradedMatrix total({s.n(), 0}, {s.n_prime(), s.q_prime()}, field);
  for (unsigned m = 0; m <= s.max_degree(); ++m) {
    const GradedMatrix& block = s.block(m);
    if (block.is_zero()) continue;
    const double inv_mfact = 1.0 / to_double(factorial(m));
    const GradedMatrix hm = scale(inv_mfact, h_power_closed(row, m));
    total = total + ordinary_mul(hm, block.as_field(field));
  }
  return total;
}

std::vector<double> block_norms(const BlockSeries& s, RhoExponent rho) {
  std::vector<double> out(s.max_degree() + 1);
  const long count = static_cast<long>(out.size());
#pragma omp parallel for schedule(dynamic)
  for (long m = 0; m < count; ++m) out[m] = rho_norm(s.block(static_cast<unsigned>(m)), rho);
  return out;
}

RadiusEstimate radius_estimate(const BlockSeries& s, RhoExponent rho, std::optional<unsigned> window) {
  const unsigned M = s.max_degree();
  if (window && (*window < 1 || *window > M))
    throw DomainError("radius window must satisfy 1 <= window <= M = " + std::to_string(M));

  std::vector<double> log_norms(M + 1);
  const long count = static_cast<long>(M + 1);
#pragma omp parallel for schedule(dynamic)
  for (long m = 0; m < count; ++m) log_norms[m] = log_rho_norm(s.block(static_cast<unsigned>(m)), rho);

  RadiusEstimate est;
  std::vector<unsigned> nonzero;
  for (unsigned m = 1; m <= M; ++m) {
    const double root = std::isinf(log_norms[m]) ? 0.0 : std::exp(log_norms[m] / m);
    est.roots.push_back({m, root});
    if (!std::isinf(log_norms[m])) nonzero.push_back(m);
  }
  if (nonzero.empty()) {
    est.r_hat = 0.0;
    est.radius = kInf;
    est.window = 0;
    return est;
  }
  const unsigned available = static_cast<unsigned>(nonzero.size());
  unsigned w = window ? *window : std::max<unsigned>(3, available / 2);
  w = std::min(w, available);
  est.window = w;
  est.window_degrees.assign(nonzero.end() - w, nonzero.end());
  for (unsigned m : est.window_degrees) est.r_hat = std::max(est.r_hat, est.roots[m - 1].root);
  est.radius = est.r_hat == 0.0 ? kInf : 1.0 / est.r_hat;
  return est;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::converged_certified: return "converged_certified";
    case Verdict::diverged_certified: return "diverged_certified";
    case Verdict::unknown: return "unknown";
  }
  return "unknown";
}

ConvergenceVerdict converges_at(const BlockSeries& s, std::span<const Scalar> h, RhoExponent rho,
                                const ConvergenceOptions& opts) {
  if (h.size() != s.n())
    throw DimensionError("point has length " + std::to_string(h.size()) + ", expected " +
                         std::to_string(s.n()));
  const unsigned M = s.max_degree();
  const std::size_t components = graded_slice(s.n_prime(), s.q_prime())->size();

  ConvergenceVerdict out;
  out.radius = radius_estimate(s, rho, opts.radius_window);
  out.point_norm = point_norm(h, rho.conjugate());
  out.ratio = out.radius.r_hat == 0.0 ? 0.0 : out.point_norm * out.radius.r_hat;

  std::vector<double> log_abs_h(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) log_abs_h[i] = std::log(std::abs(h[i]));

  // degree_terms[m][j] = sum_{|alpha|=m} |h^alpha/alpha! A(m)_{alpha,j}|, grouped[m][j] = |H_m(h)_j|.
  out.degree_terms.assign(M + 1, std::vector<double>(components, 0.0));
  std::vector<std::vector<double>> grouped(M + 1, std::vector<double>(components, 0.0));
  const long count = static_cast<long>(M + 1);
#pragma omp parallel for schedule(dynamic)
  for (long mm = 0; mm < count; ++mm) {
    const auto m = static_cast<unsigned>(mm);
    const GradedMatrix& block = s.block(m);
    std::vector<Scalar> signed_sum(components);
    for (std::size_t i = 0; i < block.rows(); ++i) {
      const MultiIndex& alpha = block.row_slice().unrank(i);
      const double weight = abs_monomial_over_factorial(log_abs_h, alpha);
      const Scalar mono = monomial_over_factorial(h, alpha);
      for (std::size_t j = 0; j < components; ++j) {
        const Scalar a = block(i, j);
        out.degree_terms[m][j] += weight * std::abs(a);
        signed_sum[j] += mono * a;
      }
    }
    for (std::size_t j = 0; j < components; ++j) grouped[m][j] = std::abs(signed_sum[j]);
  }

  out.absolute_sums.assign(components, 0.0);
  out.grouped_sums.assign(components, 0.0);
  for (unsigned m = 0; m <= M; ++m)
    for (std::size_t j = 0; j < components; ++j) {
      out.absolute_sums[j] += out.degree_terms[m][j];
      out.grouped_sums[j] += grouped[m][j];
    }

  auto column = [&](const std::vector<std::vector<double>>& table, std::size_t j) {
    std::vector<double> seq(M + 1);
    for (unsigned m = 0; m <= M; ++m) seq[m] = table[m][j];
    return seq;
  };

  out.tail_bound = kInf;
  if (out.ratio < 1.0 - opts.margin) {
    out.status = Verdict::converged_certified;
    const double theta = out.ratio;
    if (theta == 0.0) {
      out.tail_bound = 0.0;
    } else {
      // Each block obeys ||A(m)|| <= K r_hat^m with K taken over the data.
      const auto norms = block_norms(s, rho);
      double K = 0.0;
      for (unsigned m = 1; m <= M; ++m)
        K = std::max(K, norms[m] / std::pow(out.radius.r_hat, static_cast<double>(m)));
      const double component = std::pow(to_double(factorial(s.q_prime())), rho.layer_exponent());
      out.tail_bound = K * component * std::pow(theta, M + 1.0) / (1.0 - theta);
    }
  } else {
    for (std::size_t j = 0; j < components; ++j) {
      const auto seq = column(out.degree_terms, j);
      if (non_vanishing_tail(seq, opts.divergence_window)) {
        out.status = Verdict::diverged_certified;
        out.witness_component = j;
        out.witness_terms = std::vector<double>(seq.begin() + (seq.size() - opts.divergence_window), seq.end());
        break;
      }
    }
  }

  // Grouped-by-degree series: root test on the tail window, same divergence rule.
  out.grouped_status = Verdict::unknown;
  bool grouped_diverges = false;
  double grouped_root = 0.0;
  for (std::size_t j = 0; j < components; ++j) {
    const auto seq = column(grouped, j);
    if (non_vanishing_tail(seq, opts.divergence_window)) grouped_diverges = true;
    for (unsigned m : out.radius.window_degrees)
      if (seq[m] > 0.0) grouped_root = std::max(grouped_root, std::pow(seq[m], 1.0 / m));
  }
  if (grouped_diverges)
    out.grouped_status = Verdict::diverged_certified;
  else if (grouped_root < 1.0 - opts.margin)
    out.grouped_status = Verdict::converged_certified;
  return out;
}

Interval indeterminacy_layer(const RadiusEstimate& r, std::size_t n, RhoExponent rho) {
  const double factor = std::pow(static_cast<double>(n), rho.layer_exponent());
  return {r.radius, r.radius * factor};
}

Interval indeterminacy_layer(const BlockSeries& s, RhoExponent rho, std::optional<unsigned> window) {
  return indeterminacy_layer(radius_estimate(s, rho, window), s.n(), rho);
}

WitnessReport layer_witness_scan(const BlockSeries& s, RhoExponent rho, double r1,
                                 std::size_t samples, std::uint64_t seed,
                                 const ConvergenceOptions& opts) {
  if (!(r1 > 0.0)) throw DomainError("witness radius R1 must be positive");
  WitnessReport report;
  report.r1 = r1;
  report.layer = indeterminacy_layer(radius_estimate(s, rho, opts.radius_window), s.n(), rho);
  report.beyond_layer = r1 > report.layer.upper;

  const RhoExponent point_rho = rho.conjugate();
  // ||c(1,...,1)||_conj = c n^(1/conj) and 1/conj(rho) = (rho-1)/rho.
  const double c = r1 * std::pow(static_cast<double>(s.n()), -rho.layer_exponent());
  report.points.push_back(Point(s.n(), Scalar{c}));
  for (std::size_t k = 0; k < samples; ++k) {
    Rng rng = make_stream(seed, k);
    report.points.push_back(random_point_on_sphere(s.n(), s.field(), point_rho, r1, rng));
  }

  report.verdicts.resize(report.points.size());
  const long count = static_cast<long>(report.points.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) report.verdicts[i] = converges_at(s, report.points[i], rho, opts);
  return report;
}

CoefficientMap geometric_family(std::size_t n, unsigned max_degree) {
  CoefficientMap c(n, 1, 0, Field::real);
  for (unsigned m = 0; m <= max_degree; ++m)
    for (const auto& alpha : *graded_slice(n, m)) c.insert(alpha, MultiIndex{0}, to_double(multinomial(alpha)));
  return c;
}

CoefficientMap one_variable_geometric(double c, unsigned max_degree) {
  CoefficientMap out(1, 1, 0, Field::real);
  for (unsigned m = 0; m <= max_degree; ++m)
    out.insert(MultiIndex{static_cast<int>(m)}, MultiIndex{0}, std::pow(c, static_cast<double>(m)));
  return out;
}

}  // namespace mvseries
