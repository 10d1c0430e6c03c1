#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mvseries/series.hpp"

namespace mvseries {

// Series files are UTF-8 JSON:
//   {"n": 2, "n_prime": 1, "q_prime": 0, "field": "real",
//    "terms": [{"alpha": [2,0], "alpha_prime": [0], "re": 5, "im": 0}]}
// "im" is optional (default 0) and must be 0 in a real file. Errors are
// ValidationError with the offending term index in the message.
CoefficientMap parse_series_text(std::string_view text);
CoefficientMap parse_series_file(const std::filesystem::path& path);

// Terms are written in key order; "im" only appears for complex series.
std::string serialize_series(const CoefficientMap& c);
void write_series_file(const CoefficientMap& c, const std::filesystem::path& path);

}  // namespace mvseries
