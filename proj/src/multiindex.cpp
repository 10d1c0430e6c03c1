#include "mvseries/multiindex.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <sstream>

#include "mvseries/errors.hpp"

namespace mvseries {

namespace {

MultiIndex::value_type checked_entry(long long v) {
  if (v < 0) throw DomainError("multi-index entries must be nonnegative, got " + std::to_string(v));
  if (v > static_cast<long long>(UINT32_MAX)) throw CapacityError("multi-index entry too large");
  return static_cast<MultiIndex::value_type>(v);
}

void require_same_length(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size())
    throw DimensionError("multi-index length mismatch: " + a.str() + " vs " + b.str());
}

Exact checked_mul(Exact a, Exact b) {
  Exact out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw CapacityError("exact integer overflow (128-bit)");
  return out;
}

}  // namespace

std::string to_string(Exact value) {
  if (value == 0) return "0";
  std::string digits;
  while (value != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

double to_double(Exact value) { return static_cast<double>(value); }

MultiIndex::MultiIndex(std::initializer_list<int> entries)
    : MultiIndex(std::span<const int>(entries.begin(), entries.size())) {}

MultiIndex::MultiIndex(std::span<const int> entries) {
  if (entries.empty()) throw DimensionError("multi-index must have length >= 1");
  entries_.reserve(entries.size());
  for (int e : entries) {
    entries_.push_back(checked_entry(e));
    degree_ += entries_.back();
  }
}

MultiIndex::MultiIndex(std::vector<value_type> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw DimensionError("multi-index must have length >= 1");
  for (auto e : entries_) degree_ += e;
}

MultiIndex MultiIndex::zero(std::size_t n) { return MultiIndex(std::vector<value_type>(n, 0)); }

MultiIndex MultiIndex::unit(std::size_t n, std::size_t i) {
  std::vector<value_type> e(n, 0);
  e.at(i) = 1;
  return MultiIndex(std::move(e));
}

bool MultiIndex::below(const MultiIndex& other) const {
  require_same_length(*this, other);
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i] > other.entries_[i]) return false;
  return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  require_same_length(*this, other);
  std::vector<value_type> e(entries_.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = entries_[i] + other.entries_[i];
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  if (!other.below(*this)) throw DomainError(other.str() + " is not below " + str());
  std::vector<value_type> e(entries_.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = entries_[i] - other.entries_[i];
  return MultiIndex(std::move(e));
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
  return compare(*this, other);
}

std::string MultiIndex::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < entries_.size(); ++i) os << (i ? "," : "") << entries_[i];
  os << ')';
  return os.str();
}

std::strong_ordering compare(const MultiIndex& a, const MultiIndex& b) {
  require_same_length(a, b);
  if (a.degree() != b.degree()) return a.degree() <=> b.degree();
  for (std::size_t i = 0; i < a.size(); ++i) {
    // Larger component means smaller element.
    if (a[i] != b[i]) return b[i] <=> a[i];
  }
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Slices

namespace {

std::size_t g_slice_limit = std::size_t{1} << 22;

void generate(std::size_t pos, unsigned remaining, std::vector<MultiIndex::value_type>& cur,
              std::vector<MultiIndex>& out) {
  if (pos + 1 == cur.size()) {
    cur[pos] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (unsigned v = 0; v <= remaining; ++v) {
    cur[pos] = v;
    generate(pos + 1, remaining - v, cur, out);
  }
}

}  // namespace

GradedSlice::GradedSlice(std::size_t n, unsigned p) : n_(n), p_(p) {
  if (n == 0) throw DimensionError("slice dimension n must be >= 1");
  const std::size_t expected = slice_dimension(n, p);
  if (expected > g_slice_limit)
    throw CapacityError("slice (n=" + std::to_string(n) + ", p=" + std::to_string(p) + ") has " +
                        std::to_string(expected) + " elements, above the limit");
  elements_.reserve(expected);
  std::vector<MultiIndex::value_type> cur(n, 0);
  generate(0, p, cur, elements_);
  std::sort(elements_.begin(), elements_.end(),
            [](const MultiIndex& a, const MultiIndex& b) { return compare(a, b) < 0; });
}

const MultiIndex& GradedSlice::unrank(std::size_t rank) const {
  if (rank >= elements_.size())
    throw DimensionError("rank " + std::to_string(rank) + " outside slice of size " +
                         std::to_string(elements_.size()));
  return elements_[rank];
}

bool GradedSlice::contains(const MultiIndex& alpha) const {
  return alpha.size() == n_ && alpha.degree() == p_;
}

std::size_t GradedSlice::rank(const MultiIndex& alpha) const {
  if (!contains(alpha))
    throw DimensionError(alpha.str() + " is not in slice (n=" + std::to_string(n_) +
                         ", p=" + std::to_string(p_) + ")");
  auto it = std::lower_bound(elements_.begin(), elements_.end(), alpha,
                             [](const MultiIndex& a, const MultiIndex& b) { return compare(a, b) < 0; });
  return static_cast<std::size_t>(it - elements_.begin());
}

std::shared_ptr<const GradedSlice> graded_slice(std::size_t n, unsigned p) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, unsigned>, std::shared_ptr<const GradedSlice>> memo;
  const auto key = std::make_pair(n, p);
  {
    std::lock_guard lock(mutex);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  auto slice = std::make_shared<const GradedSlice>(n, p);
  std::lock_guard lock(mutex);
  // Another thread may have won the race; keep the first entry.
  return memo.try_emplace(key, std::move(slice)).first->second;
}

void set_slice_size_limit(std::size_t limit) { g_slice_limit = limit; }
std::size_t slice_size_limit() { return g_slice_limit; }

std::vector<MultiIndex> enumerate_slice(std::size_t n, unsigned p) {
  return graded_slice(n, p)->elements();
}

std::size_t slice_dimension(std::size_t n, unsigned p) {
  if (n == 0) throw DimensionError("slice dimension n must be >= 1");
  const Exact d = binomial(p + static_cast<unsigned>(n) - 1, static_cast<unsigned>(n) - 1);
  if (d > static_cast<Exact>(SIZE_MAX)) throw CapacityError("slice dimension exceeds size_t");
  return static_cast<std::size_t>(d);
}

GradedSliceIndex GradedSliceIndex::of(const MultiIndex& alpha) {
  auto slice = graded_slice(alpha.size(), alpha.degree());
  return {alpha.size(), alpha.degree(), slice->rank(alpha)};
}

MultiIndex GradedSliceIndex::unrank() const { return graded_slice(n, p)->unrank(rank); }

// ---------------------------------------------------------------------------
// Exact combinatorics

Exact factorial(unsigned k) {
  Exact out = 1;
  for (unsigned i = 2; i <= k; ++i) out = checked_mul(out, i);
  return out;
}

Exact binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Exact out = 1;
  for (unsigned i = 1; i <= k; ++i) {
    // out * (n-k+i) is divisible by i; with g = gcd(out, i), (n-k+i) is
    // divisible by i/g.
    Exact a = out, b = i;
    while (b != 0) a = std::exchange(b, a % b);
    const Exact g = a;
    out = checked_mul(out / g, (n - k + i) / (i / g));
  }
  return out;
}

Exact multifactorial(const MultiIndex& alpha) {
  Exact out = 1;
  for (auto a : alpha.entries()) out = checked_mul(out, factorial(a));
  return out;
}

Exact multibinomial(const MultiIndex& alpha, const MultiIndex& beta) {
  if (!beta.below(alpha)) return 0;
  Exact out = 1;
  for (std::size_t i = 0; i < alpha.size(); ++i) out = checked_mul(out, binomial(alpha[i], beta[i]));
  return out;
}

Exact multinomial(const MultiIndex& alpha) {
  Exact out = 1;
  unsigned running = 0;
  for (auto a : alpha.entries()) {
    running += a;
    out = checked_mul(out, binomial(running, a));
  }
  return out;
}

namespace {

constexpr unsigned kLogTableSize = 4096;

const std::array<double, kLogTableSize>& log_factorial_table() {
  static const auto table = [] {
    std::array<double, kLogTableSize> t{};
    Exact f = 1;
    for (unsigned k = 0; k < kLogTableSize; ++k) {
      if (k <= 33) {
        if (k > 1) f *= k;
        t[k] = std::log(to_double(f));
      } else {
        t[k] = std::lgamma(static_cast<double>(k) + 1.0);
      }
    }
    return t;
  }();
  return table;
}

}  // namespace

double log_factorial(unsigned k) {
  if (k < kLogTableSize) return log_factorial_table()[k];
  return std::lgamma(static_cast<double>(k) + 1.0);
}

double log_multifactorial(const MultiIndex& alpha) {
  double s = 0.0;
  for (auto a : alpha.entries()) s += log_factorial(a);
  return s;
}

}  // namespace mvseries
