#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "mvseries/multiindex.hpp"

namespace mvseries {

enum class Field { real, complex };

std::string_view to_string(Field f);
Field parse_field(std::string_view s);

// Scalars are stored as complex doubles; containers carry the field tag and
// a real container never holds a nonzero imaginary part.
using Scalar = std::complex<double>;

/// One side of a graded matrix: the slice {|alpha| = degree} of I_dim.
struct Grading {
  std::size_t dim = 1;
  unsigned degree = 0;

  bool operator==(const Grading&) const = default;
};

/// A dense matrix in M_{n,n'}(p,p';F). Rows are indexed by the ordered
/// slice {|alpha| = p} of I_n, columns by {|alpha'| = p'} of I_{n'}.
/// Storage is row-major.
class GradedMatrix {
 public:
  GradedMatrix(Grading rows, Grading cols, Field field = Field::real);
  GradedMatrix(Grading rows, Grading cols, Field field, std::vector<Scalar> entries);

  static GradedMatrix row_vector(std::span<const Scalar> h, Field field = Field::real);
  static GradedMatrix column_vector(std::span<const Scalar> v, Field field = Field::real);

  std::size_t n() const { return rows_.dim; }
  std::size_t n_prime() const { return cols_.dim; }
  unsigned p() const { return rows_.degree; }
  unsigned p_prime() const { return cols_.degree; }
  Grading row_grading() const { return rows_; }
  Grading col_grading() const { return cols_; }
  Field field() const { return field_; }

  std::size_t rows() const { return row_slice_->size(); }
  std::size_t cols() const { return col_slice_->size(); }
  const GradedSlice& row_slice() const { return *row_slice_; }
  const GradedSlice& col_slice() const { return *col_slice_; }

  Scalar operator()(std::size_t i, std::size_t j) const { return entries_[i * cols() + j]; }
  // A_{alpha,alpha'}; zero when either index lies outside its slice.
  Scalar at(const MultiIndex& alpha, const MultiIndex& alpha_prime) const;

  // Throws FieldError when a complex value is written into a real matrix.
  void set(std::size_t i, std::size_t j, Scalar value);
  void set(const MultiIndex& alpha, const MultiIndex& alpha_prime, Scalar value);

  std::span<const Scalar> data() const { return entries_; }
  bool is_zero() const;
  double max_abs() const;

  // Real -> complex always works; complex -> real only when every entry is real.
  GradedMatrix as_field(Field field) const;
  // Rebinds the dimension of a degree-0 side (the slice is {0} for every n).
  GradedMatrix with_dims(std::size_t n, std::size_t n_prime) const;

 private:
  Grading rows_;
  Grading cols_;
  Field field_;
  std::shared_ptr<const GradedSlice> row_slice_;
  std::shared_ptr<const GradedSlice> col_slice_;
  std::vector<Scalar> entries_;

  friend GradedMatrix add(const GradedMatrix&, const GradedMatrix&);
  friend GradedMatrix scale(Scalar, const GradedMatrix&);
  friend GradedMatrix ordinary_mul(const GradedMatrix&, const GradedMatrix&);
  friend class OdotPlan;
};

GradedMatrix add(const GradedMatrix& a, const GradedMatrix& b);
GradedMatrix scale(Scalar lambda, const GradedMatrix& a);
GradedMatrix operator+(const GradedMatrix& a, const GradedMatrix& b);
GradedMatrix operator-(const GradedMatrix& a, const GradedMatrix& b);
GradedMatrix operator*(Scalar lambda, const GradedMatrix& a);

/// Ordinary matrix product. A's column space must be B's row space.
GradedMatrix ordinary_mul(const GradedMatrix& a, const GradedMatrix& b);

/// The graded product:
///   (A odot B)_{alpha,alpha'} = sum binom(alpha,beta) A_{beta,beta'} B_{alpha-beta,alpha'-beta'}
/// over beta << alpha, |beta| = p and beta' << alpha', |beta'| = p'.
/// Runs the OpenMP kernel from odot_kernel.hpp.
GradedMatrix odot(const GradedMatrix& a, const GradedMatrix& b);

/// m-fold odot product; m = 0 gives the 1x1 unit of degree (0,0).
GradedMatrix odot_power(const GradedMatrix& a, unsigned m);

/// (h^(m))_{0,alpha'} = multinomial(alpha') h^alpha' for a row h in M(0,1).
GradedMatrix h_power_closed(const GradedMatrix& h, unsigned m);
/// (v^(m))_{alpha,0} = m! v^alpha for a column v in M(1,0).
GradedMatrix v_power_closed(const GradedMatrix& v, unsigned m);

/// E_k: the unit matrix over {|alpha| = k} of I_n.
GradedMatrix identity(std::size_t n, unsigned k, Field field = Field::real);

GradedMatrix zero_like(const GradedMatrix& a);

/// Shapes and fields agree and every entry differs by at most
/// abs_tol + rel_tol * max(max_abs(a), max_abs(b)).
bool approx_equal(const GradedMatrix& a, const GradedMatrix& b, double rel_tol = 1e-9,
                  double abs_tol = 1e-12);

/// Largest |a_ij - b_ij| / max(|a_ij|, |b_ij|) over nonzero pairs.
double max_relative_difference(const GradedMatrix& a, const GradedMatrix& b);

}  // namespace mvseries
