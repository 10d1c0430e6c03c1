#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mvseries/graded_matrix.hpp"
#include "mvseries/norms.hpp"

namespace mvseries {

using Rng = std::mt19937_64;

// Independent substream `stream` of a master seed (splitmix64 mixing), so
// work split across threads draws the same numbers under any schedule.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

// Entries uniform in [-1, 1]; complex entries get independent real and imaginary parts.
GradedMatrix random_matrix(Grading rows, Grading cols, Field field, Rng& rng);
std::vector<Scalar> random_point(std::size_t n, Field field, Rng& rng);
// A random point rescaled to the given norm.
std::vector<Scalar> random_point_on_sphere(std::size_t n, Field field, RhoExponent norm,
                                           double radius, Rng& rng);

}  // namespace mvseries
