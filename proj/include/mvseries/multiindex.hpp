#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mvseries {

// Exact nonnegative integer used for factorials and binomials.
using Exact = unsigned __int128;

std::string to_string(Exact value);
double to_double(Exact value);

/// An element of I_n: an n-tuple of nonnegative integers.
///
/// The length is fixed at construction and is at least 1. Arithmetic and
/// comparison require equal lengths and throw DimensionError otherwise.
class MultiIndex {
 public:
  using value_type = std::uint32_t;

  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> entries);
  explicit MultiIndex(std::span<const int> entries);
  explicit MultiIndex(std::vector<value_type> entries);

  // The zero multi-index of length n.
  static MultiIndex zero(std::size_t n);
  // The unit vector e_i of length n.
  static MultiIndex unit(std::size_t n, std::size_t i);

  std::size_t size() const { return entries_.size(); }
  value_type operator[](std::size_t i) const { return entries_[i]; }
  std::span<const value_type> entries() const { return entries_; }

  // |alpha|
  unsigned degree() const { return degree_; }

  // this << other: componentwise <=.
  bool below(const MultiIndex& other) const;

  MultiIndex operator+(const MultiIndex& other) const;
  // Throws DomainError unless other << *this.
  MultiIndex operator-(const MultiIndex& other) const;

  bool operator==(const MultiIndex& other) const = default;
  // The graded order of I_n; see compare().
  std::strong_ordering operator<=>(const MultiIndex& other) const;

  std::string str() const;

 private:
  std::vector<value_type> entries_;
  unsigned degree_ = 0;
};

/// Total order on I_n: lower degree first; among equal degrees the tuple
/// with the larger first differing component comes first, so
/// (2,0) < (1,1) < (0,2).
std::strong_ordering compare(const MultiIndex& a, const MultiIndex& b);

/// The ordered slice {alpha in I_n : |alpha| = p}.
class GradedSlice {
 public:
  GradedSlice(std::size_t n, unsigned p);

  std::size_t dim() const { return n_; }
  unsigned degree() const { return p_; }
  std::size_t size() const { return elements_.size(); }

  const MultiIndex& unrank(std::size_t rank) const;
  // Throws DimensionError when alpha does not belong to the slice.
  std::size_t rank(const MultiIndex& alpha) const;
  bool contains(const MultiIndex& alpha) const;

  const std::vector<MultiIndex>& elements() const { return elements_; }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

 private:
  std::size_t n_;
  unsigned p_;
  std::vector<MultiIndex> elements_;
};

/// Shared, memoized slice for (n, p). Safe to call from several threads.
std::shared_ptr<const GradedSlice> graded_slice(std::size_t n, unsigned p);

/// Largest slice the memo will build; larger requests throw CapacityError.
void set_slice_size_limit(std::size_t limit);
std::size_t slice_size_limit();

std::vector<MultiIndex> enumerate_slice(std::size_t n, unsigned p);

/// C(p+n-1, n-1), the number of alpha in I_n with |alpha| = p.
std::size_t slice_dimension(std::size_t n, unsigned p);

/// Position of a multi-index inside its own graded slice.
struct GradedSliceIndex {
  std::size_t n = 1;
  unsigned p = 0;
  std::size_t rank = 0;

  static GradedSliceIndex of(const MultiIndex& alpha);
  MultiIndex unrank() const;
};

Exact factorial(unsigned k);
Exact binomial(unsigned n, unsigned k);

// alpha! = alpha_1! ... alpha_n!
Exact multifactorial(const MultiIndex& alpha);
// alpha! / (beta! (alpha - beta)!), zero unless beta << alpha.
Exact multibinomial(const MultiIndex& alpha, const MultiIndex& beta);
// |alpha|! / alpha!
Exact multinomial(const MultiIndex& alpha);

double log_factorial(unsigned k);
double log_multifactorial(const MultiIndex& alpha);

}  // namespace mvseries
