#pragma once

#include "mvseries/graded_matrix.hpp"
#include "mvseries/norms.hpp"

// Serial, literal implementations kept as test oracles for the fast paths.
namespace mvseries::reference {

// The odot product evaluated entry by entry from its definition, with
// at()-lookups and exact multibinomials. No plan, no OpenMP.
GradedMatrix odot_serial(const GradedMatrix& a, const GradedMatrix& b);

// The rho-norm summed directly in double precision.
double rho_norm_direct(const GradedMatrix& a, RhoExponent rho);

}  // namespace mvseries::reference
