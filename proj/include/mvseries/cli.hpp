#pragma once

#include <complex>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace mvseries {

/// Runs one subcommand: radius, eval, converges, layer, witness, lambda,
/// opnorm or verify. `args` excludes the program name.
/// Returns 0 on success, 2 on invalid input, 1 on any other failure
/// (including verification violations).
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Comma-separated coordinates; each is a real ("0.5"), an imaginary
/// ("2i") or a complex value ("0.5-2i", "1e-3+4e-2i").
std::vector<std::complex<double>> parse_point(std::string_view text);

}  // namespace mvseries
