#include "mvseries/random.hpp"

namespace mvseries {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Scalar draw(Field field, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double re = u(rng);
  if (field == Field::real) return re;
  return {re, u(rng)};
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{splitmix64(seed), splitmix64(seed ^ splitmix64(stream + 1))};
  return Rng(seq);
}

GradedMatrix random_matrix(Grading rows, Grading cols, Field field, Rng& rng) {
  GradedMatrix a(rows, cols, field);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a.set(i, j, draw(field, rng));
  return a;
}

std::vector<Scalar> random_point(std::size_t n, Field field, Rng& rng) {
  std::vector<Scalar> h(n);
  for (auto& x : h) x = draw(field, rng);
  return h;
}

std::vector<Scalar> random_point_on_sphere(std::size_t n, Field field, RhoExponent norm,
                                           double radius, Rng& rng) {
  std::vector<Scalar> h;
  double current = 0.0;
  do {
    h = random_point(n, field, rng);
    current = point_norm(h, norm);
  } while (current == 0.0);
  for (auto& x : h) x *= radius / current;
  return h;
}

}  // namespace mvseries
