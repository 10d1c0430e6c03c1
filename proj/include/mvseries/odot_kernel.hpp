#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mvseries/graded_matrix.hpp"

namespace mvseries {

/// Precomputed index structure of the odot convolution for fixed
/// (n, n', p, p', q, q').
///
/// The row part lists, for every output row alpha, the pairs (beta, alpha-beta)
/// with beta << alpha together with binom(alpha, beta); the column part lists
/// the pairs (beta', alpha'-beta') for every output column. Both are stored in
/// CSR form. apply() parallelizes over output rows with OpenMP; each row is
/// written by exactly one thread in a fixed order, so results do not depend
/// on the thread count.
class OdotPlan {
 public:
  OdotPlan(std::size_t n, std::size_t n_prime, unsigned p, unsigned p_prime, unsigned q,
           unsigned q_prime);

  Grading result_rows() const { return {n_, p_ + q_}; }
  Grading result_cols() const { return {n_prime_, p_prime_ + q_prime_}; }

  GradedMatrix apply(const GradedMatrix& a, const GradedMatrix& b) const;

  // Raw form for hot loops: a, b, c are row-major with the plan's shapes.
  void apply_into(std::span<const Scalar> a, std::span<const Scalar> b, std::span<Scalar> c) const;

  // Number of scalar multiply-adds per application.
  std::size_t work() const { return work_; }

 private:
  struct RowTerm {
    std::uint32_t a_row;
    std::uint32_t b_row;
    double weight;
  };
  struct ColTerm {
    std::uint32_t a_col;
    std::uint32_t b_col;
  };

  std::size_t n_, n_prime_;
  unsigned p_, p_prime_, q_, q_prime_;
  std::size_t a_cols_, b_cols_, c_rows_, c_cols_;
  std::vector<std::size_t> row_offsets_;
  std::vector<RowTerm> row_terms_;
  std::vector<std::size_t> col_offsets_;
  std::vector<ColTerm> col_terms_;
  std::size_t work_ = 0;
};

/// Memoized plan lookup; thread safe.
std::shared_ptr<const OdotPlan> odot_plan(std::size_t n, std::size_t n_prime, unsigned p,
                                          unsigned p_prime, unsigned q, unsigned q_prime);

/// Plans with fewer multiply-adds than this run single threaded.
void set_odot_parallel_threshold(std::size_t work);
std::size_t odot_parallel_threshold();

}  // namespace mvseries
