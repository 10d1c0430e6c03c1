#include "mvseries/odot_kernel.hpp"

#include <atomic>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "mvseries/errors.hpp"

namespace mvseries {

namespace {

std::atomic<std::size_t> g_parallel_threshold{1u << 14};

// Dimension of the combined index space; a degree-0 side does not pin it.
std::size_t merge_dim(Grading a, Grading b, const char* side) {
  if (a.dim == b.dim || b.degree == 0) return a.dim;
  if (a.degree == 0) return b.dim;
  throw DimensionError(std::string("odot: ") + side + " dimensions differ (" + std::to_string(a.dim) +
                       " vs " + std::to_string(b.dim) + ")");
}

}  // namespace

OdotPlan::OdotPlan(std::size_t n, std::size_t n_prime, unsigned p, unsigned p_prime, unsigned q,
                   unsigned q_prime)
    : n_(n), n_prime_(n_prime), p_(p), p_prime_(p_prime), q_(q), q_prime_(q_prime) {
  const auto a_rows = graded_slice(n, p);
  const auto b_rows = graded_slice(n, q);
  const auto c_rows = graded_slice(n, p + q);
  const auto a_cols = graded_slice(n_prime, p_prime);
  const auto b_cols = graded_slice(n_prime, q_prime);
  const auto c_cols = graded_slice(n_prime, p_prime + q_prime);
  a_cols_ = a_cols->size();
  b_cols_ = b_cols->size();
  c_rows_ = c_rows->size();
  c_cols_ = c_cols->size();

  row_offsets_.reserve(c_rows_ + 1);
  row_offsets_.push_back(0);
  for (const auto& alpha : *c_rows) {
    for (std::size_t i = 0; i < a_rows->size(); ++i) {
      const MultiIndex& beta = a_rows->unrank(i);
      if (!beta.below(alpha)) continue;
      row_terms_.push_back({static_cast<std::uint32_t>(i),
                            static_cast<std::uint32_t>(b_rows->rank(alpha - beta)),
                            to_double(multibinomial(alpha, beta))});
    }
    row_offsets_.push_back(row_terms_.size());
  }

  col_offsets_.reserve(c_cols_ + 1);
  col_offsets_.push_back(0);
  for (const auto& alpha : *c_cols) {
    for (std::size_t j = 0; j < a_cols->size(); ++j) {
      const MultiIndex& beta = a_cols->unrank(j);
      if (!beta.below(alpha)) continue;
      col_terms_.push_back({static_cast<std::uint32_t>(j),
                            static_cast<std::uint32_t>(b_cols->rank(alpha - beta))});
    }
    col_offsets_.push_back(col_terms_.size());
  }
  work_ = row_terms_.size() * col_terms_.size();
}

GradedMatrix OdotPlan::apply(const GradedMatrix& a, const GradedMatrix& b) const {
  if (a.field() != b.field()) throw FieldError("odot: field mismatch");
  if (a.p() != p_ || a.p_prime() != p_prime_ || b.p() != q_ || b.p_prime() != q_prime_)
    throw DimensionError("odot: operands do not match the plan degrees");
  GradedMatrix c(result_rows(), result_cols(), a.field());
  apply_into(a.data(), b.data(), c.entries_);
  return c;
}

void OdotPlan::apply_into(std::span<const Scalar> a, std::span<const Scalar> b,
                          std::span<Scalar> c) const {
  const Scalar* ad = a.data();
  const Scalar* bd = b.data();
  Scalar* cd = c.data();
  const long rows = static_cast<long>(c_rows_);
  const bool parallel = work_ >= g_parallel_threshold.load(std::memory_order_relaxed);

#pragma omp parallel for schedule(static) if (parallel)
  for (long r = 0; r < rows; ++r) {
    Scalar* crow = cd + static_cast<std::size_t>(r) * c_cols_;
    for (std::size_t j = 0; j < c_cols_; ++j) crow[j] = Scalar{};
    for (std::size_t t = row_offsets_[r]; t < row_offsets_[r + 1]; ++t) {
      const RowTerm& rt = row_terms_[t];
      const Scalar* arow = ad + rt.a_row * a_cols_;
      const Scalar* brow = bd + rt.b_row * b_cols_;
      for (std::size_t j = 0; j < c_cols_; ++j) {
        Scalar acc{};
        for (std::size_t u = col_offsets_[j]; u < col_offsets_[j + 1]; ++u)
          acc += arow[col_terms_[u].a_col] * brow[col_terms_[u].b_col];
        crow[j] += rt.weight * acc;
      }
    }
  }
}

std::shared_ptr<const OdotPlan> odot_plan(std::size_t n, std::size_t n_prime, unsigned p,
                                          unsigned p_prime, unsigned q, unsigned q_prime) {
  using Key = std::tuple<std::size_t, std::size_t, unsigned, unsigned, unsigned, unsigned>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const OdotPlan>> memo;
  const Key key{n, n_prime, p, p_prime, q, q_prime};
  {
    std::lock_guard lock(mutex);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  auto plan = std::make_shared<const OdotPlan>(n, n_prime, p, p_prime, q, q_prime);
  std::lock_guard lock(mutex);
  return memo.try_emplace(key, std::move(plan)).first->second;
}

void set_odot_parallel_threshold(std::size_t work) { g_parallel_threshold = work; }
std::size_t odot_parallel_threshold() { return g_parallel_threshold; }

GradedMatrix odot(const GradedMatrix& a, const GradedMatrix& b) {
  if (a.field() != b.field()) throw FieldError("odot: field mismatch");
  const std::size_t n = merge_dim(a.row_grading(), b.row_grading(), "row");
  const std::size_t n_prime = merge_dim(a.col_grading(), b.col_grading(), "column");
  const auto plan = odot_plan(n, n_prime, a.p(), a.p_prime(), b.p(), b.p_prime());
  return plan->apply(a.with_dims(n, n_prime), b.with_dims(n, n_prime));
}

}  // namespace mvseries
