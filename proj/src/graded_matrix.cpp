#include "mvseries/graded_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mvseries/errors.hpp"

namespace mvseries {

namespace {

std::string describe(const GradedMatrix& a) {
  return "M_{" + std::to_string(a.n()) + "," + std::to_string(a.n_prime()) + "}(" +
         std::to_string(a.p()) + "," + std::to_string(a.p_prime()) + ";" +
         std::string(to_string(a.field())) + ")";
}

void require_same_field(const GradedMatrix& a, const GradedMatrix& b) {
  if (a.field() != b.field())
    throw FieldError("field mismatch: " + describe(a) + " vs " + describe(b));
}

void require_same_space(const GradedMatrix& a, const GradedMatrix& b) {
  require_same_field(a, b);
  if (a.row_grading() != b.row_grading() || a.col_grading() != b.col_grading())
    throw DimensionError("shape mismatch: " + describe(a) + " vs " + describe(b));
}

bool same_index_space(Grading x, Grading y) {
  // Every I_n has the single degree-0 element, so the dimension is irrelevant there.
  return x == y || (x.degree == 0 && y.degree == 0);
}

Scalar monomial(std::span<const Scalar> h, const MultiIndex& alpha) {
  Scalar out = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (unsigned k = 0; k < alpha[i]; ++k) out *= h[i];
  return out;
}

void check_scalar_field(Field field, Scalar value) {
  if (field == Field::real && value.imag() != 0.0)
    throw FieldError("complex value written into a real matrix");
}

}  // namespace

std::string_view to_string(Field f) { return f == Field::real ? "real" : "complex"; }

Field parse_field(std::string_view s) {
  if (s == "real") return Field::real;
  if (s == "complex") return Field::complex;
  throw ValidationError("field must be \"real\" or \"complex\", got \"" + std::string(s) + "\"");
}

GradedMatrix::GradedMatrix(Grading rows, Grading cols, Field field)
    : rows_(rows),
      cols_(cols),
      field_(field),
      row_slice_(graded_slice(rows.dim, rows.degree)),
      col_slice_(graded_slice(cols.dim, cols.degree)),
      entries_(row_slice_->size() * col_slice_->size(), Scalar{}) {}

GradedMatrix::GradedMatrix(Grading rows, Grading cols, Field field, std::vector<Scalar> entries)
    : GradedMatrix(rows, cols, field) {
  if (entries.size() != entries_.size())
    throw DimensionError("expected " + std::to_string(entries_.size()) + " entries for " +
                         describe(*this) + ", got " + std::to_string(entries.size()));
  for (const auto& e : entries) check_scalar_field(field, e);
  entries_ = std::move(entries);
}

GradedMatrix GradedMatrix::row_vector(std::span<const Scalar> h, Field field) {
  if (h.empty()) throw DimensionError("row vector must have at least one entry");
  return GradedMatrix({h.size(), 0}, {h.size(), 1}, field, {h.begin(), h.end()});
}

GradedMatrix GradedMatrix::column_vector(std::span<const Scalar> v, Field field) {
  if (v.empty()) throw DimensionError("column vector must have at least one entry");
  return GradedMatrix({v.size(), 1}, {v.size(), 0}, field, {v.begin(), v.end()});
}

Scalar GradedMatrix::at(const MultiIndex& alpha, const MultiIndex& alpha_prime) const {
  if (!row_slice_->contains(alpha) || !col_slice_->contains(alpha_prime)) return {};
  return (*this)(row_slice_->rank(alpha), col_slice_->rank(alpha_prime));
}

void GradedMatrix::set(std::size_t i, std::size_t j, Scalar value) {
  if (i >= rows() || j >= cols()) throw DimensionError("entry index out of range for " + describe(*this));
  check_scalar_field(field_, value);
  entries_[i * cols() + j] = value;
}

void GradedMatrix::set(const MultiIndex& alpha, const MultiIndex& alpha_prime, Scalar value) {
  set(row_slice_->rank(alpha), col_slice_->rank(alpha_prime), value);
}

bool GradedMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](Scalar s) { return s == Scalar{}; });
}

double GradedMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, std::abs(e));
  return m;
}

GradedMatrix GradedMatrix::as_field(Field field) const {
  if (field == field_) return *this;
  if (field == Field::real) {
    for (const auto& e : entries_)
      if (e.imag() != 0.0) throw FieldError("cannot demote a matrix with complex entries to real");
  }
  GradedMatrix out = *this;
  out.field_ = field;
  return out;
}

GradedMatrix GradedMatrix::with_dims(std::size_t n, std::size_t n_prime) const {
  if ((n != rows_.dim && rows_.degree != 0) || (n_prime != cols_.dim && cols_.degree != 0))
    throw DimensionError("only a degree-0 side can change its dimension: " + describe(*this));
  return GradedMatrix({n, rows_.degree}, {n_prime, cols_.degree}, field_, entries_);
}

GradedMatrix add(const GradedMatrix& a, const GradedMatrix& b) {
  require_same_space(a, b);
  GradedMatrix out = a;
  for (std::size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] += b.entries_[i];
  return out;
}

GradedMatrix scale(Scalar lambda, const GradedMatrix& a) {
  check_scalar_field(a.field(), lambda);
  GradedMatrix out = a;
  for (auto& e : out.entries_) e *= lambda;
  return out;
}

GradedMatrix operator+(const GradedMatrix& a, const GradedMatrix& b) { return add(a, b); }
GradedMatrix operator-(const GradedMatrix& a, const GradedMatrix& b) { return add(a, scale(-1.0, b)); }
GradedMatrix operator*(Scalar lambda, const GradedMatrix& a) { return scale(lambda, a); }

GradedMatrix ordinary_mul(const GradedMatrix& a, const GradedMatrix& b) {
  require_same_field(a, b);
  if (!same_index_space(a.col_grading(), b.row_grading()))
    throw DimensionError("inner index spaces differ: " + describe(a) + " times " + describe(b));
  GradedMatrix out(a.row_grading(), b.col_grading(), a.field());
  const std::size_t inner = a.cols();
  const std::size_t nc = out.cols();
  for (std::size_t i = 0; i < out.rows(); ++i) {
    Scalar* row = out.entries_.data() + i * nc;
    for (std::size_t k = 0; k < inner; ++k) {
      const Scalar aik = a(i, k);
      if (aik == Scalar{}) continue;
      const Scalar* brow = b.entries_.data() + k * nc;
      for (std::size_t j = 0; j < nc; ++j) row[j] += aik * brow[j];
    }
  }
  return out;
}

GradedMatrix odot_power(const GradedMatrix& a, unsigned m) {
  if (m == 0) return GradedMatrix({a.n(), 0}, {a.n_prime(), 0}, a.field(), {Scalar{1.0}});
  GradedMatrix out = a;
  for (unsigned i = 1; i < m; ++i) out = odot(out, a);
  return out;
}

GradedMatrix h_power_closed(const GradedMatrix& h, unsigned m) {
  if (h.p() != 0 || h.p_prime() != 1) throw DimensionError("h must lie in M(0,1)");
  const auto hv = h.data();
  GradedMatrix out({h.n(), 0}, {h.n_prime(), m}, h.field());
  const auto& cols = out.col_slice();
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const MultiIndex& alpha = cols.unrank(j);
    out.set(0, j, to_double(multinomial(alpha)) * monomial(hv, alpha));
  }
  return out;
}

GradedMatrix v_power_closed(const GradedMatrix& v, unsigned m) {
  if (v.p() != 1 || v.p_prime() != 0) throw DimensionError("v must lie in M(1,0)");
  const auto vv = v.data();
  const double mfact = to_double(factorial(m));
  GradedMatrix out({v.n(), m}, {v.n_prime(), 0}, v.field());
  const auto& rows = out.row_slice();
  for (std::size_t i = 0; i < rows.size(); ++i) out.set(i, 0, mfact * monomial(vv, rows.unrank(i)));
  return out;
}

GradedMatrix identity(std::size_t n, unsigned k, Field field) {
  GradedMatrix out({n, k}, {n, k}, field);
  for (std::size_t i = 0; i < out.rows(); ++i) out.set(i, i, 1.0);
  return out;
}

GradedMatrix zero_like(const GradedMatrix& a) {
  return GradedMatrix(a.row_grading(), a.col_grading(), a.field());
}

bool approx_equal(const GradedMatrix& a, const GradedMatrix& b, double rel_tol, double abs_tol) {
  if (a.field() != b.field() || a.row_grading() != b.row_grading() ||
      a.col_grading() != b.col_grading())
    return false;
  const double tol = abs_tol + rel_tol * std::max(a.max_abs(), b.max_abs());
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i)
    if (std::abs(da[i] - db[i]) > tol) return false;
  return true;
}

double max_relative_difference(const GradedMatrix& a, const GradedMatrix& b) {
  require_same_space(a, b);
  double worst = 0.0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double scale = std::max(std::abs(da[i]), std::abs(db[i]));
    if (scale > 0.0) worst = std::max(worst, std::abs(da[i] - db[i]) / scale);
  }
  return worst;
}

}  // namespace mvseries
