#include "mvseries/series_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mvseries/errors.hpp"

namespace mvseries {

namespace {

using nlohmann::json;

std::size_t line_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

long long require_integer(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ValidationError(where + "missing \"" + key + "\"");
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ValidationError(where + "\"" + key + "\" must be an integer");
  return v.get<long long>();
}

MultiIndex read_index(const json& term, const char* key, std::size_t length, const std::string& where) {
  if (!term.contains(key)) throw ValidationError(where + "missing \"" + key + "\"");
  const json& arr = term.at(key);
  if (!arr.is_array()) throw ValidationError(where + "\"" + key + "\" must be an integer array");
  if (arr.size() != length)
    throw ValidationError(where + "\"" + key + "\" has length " + std::to_string(arr.size()) + ", expected " +
                          std::to_string(length));
  std::vector<int> entries;
  for (const auto& e : arr) {
    if (!e.is_number_integer() || e.get<long long>() < 0 || e.get<long long>() > 1'000'000)
      throw ValidationError(where + "\"" + key + "\" entries must be nonnegative integers");
    entries.push_back(e.get<int>());
  }
  return MultiIndex(std::span<const int>(entries));
}

double read_number(const json& term, const char* key, double fallback, bool required, const std::string& where) {
  if (!term.contains(key)) {
    if (required) throw ValidationError(where + "missing \"" + key + "\"");
    return fallback;
  }
  const json& v = term.at(key);
  if (!v.is_number()) throw ValidationError(where + "\"" + key + "\" must be a number");
  return v.get<double>();
}

}  // namespace

CoefficientMap parse_series_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON at line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) throw ValidationError("series file must hold a JSON object");

  const long long n = require_integer(doc, "n", "");
  const long long n_prime = require_integer(doc, "n_prime", "");
  const long long q_prime = require_integer(doc, "q_prime", "");
  if (n < 1 || n_prime < 1) throw ValidationError("\"n\" and \"n_prime\" must be >= 1");
  if (q_prime < 0) throw ValidationError("\"q_prime\" must be >= 0");
  if (!doc.contains("field") || !doc.at("field").is_string()) throw ValidationError("missing string \"field\"");
  const Field field = parse_field(doc.at("field").get<std::string>());
  if (!doc.contains("terms") || !doc.at("terms").is_array()) throw ValidationError("missing array \"terms\"");

  CoefficientMap out(static_cast<std::size_t>(n), static_cast<std::size_t>(n_prime),
                     static_cast<unsigned>(q_prime), field);
  std::size_t index = 0;
  for (const auto& term : doc.at("terms")) {
    const std::string where = "term " + std::to_string(index) + ": ";
    if (!term.is_object()) throw ValidationError(where + "must be an object");
    MultiIndex alpha = read_index(term, "alpha", out.n(), where);
    MultiIndex alpha_prime = read_index(term, "alpha_prime", out.n_prime(), where);
    const double re = read_number(term, "re", 0.0, true, where);
    const double im = read_number(term, "im", 0.0, false, where);
    try {
      out.insert(std::move(alpha), std::move(alpha_prime), Scalar{re, im});
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
    ++index;
  }
  return out;
}

CoefficientMap parse_series_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open series file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_series_text(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string serialize_series(const CoefficientMap& c) {
  json doc;
  doc["n"] = c.n();
  doc["n_prime"] = c.n_prime();
  doc["q_prime"] = c.q_prime();
  doc["field"] = std::string(to_string(c.field()));
  doc["terms"] = json::array();
  for (const auto& [key, value] : c.terms()) {
    json term;
    term["alpha"] = std::vector<std::uint32_t>(key.first.entries().begin(), key.first.entries().end());
    term["alpha_prime"] = std::vector<std::uint32_t>(key.second.entries().begin(), key.second.entries().end());
    term["re"] = value.real();
    if (c.field() == Field::complex) term["im"] = value.imag();
    doc["terms"].push_back(std::move(term));
  }
  return doc.dump(2) + "\n";
}

void write_series_file(const CoefficientMap& c, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize_series(c);
}

}  // namespace mvseries
