#include <gtest/gtest.h>

#include <filesystem>
#include <nlohmann/json.hpp>

#include "mvseries/errors.hpp"
#include "mvseries/series_io.hpp"

using namespace mvseries;

namespace {

std::string error_of(const std::string& text) {
  try {
    (void)parse_series_text(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ParseSeries, Example) {
  const auto c = parse_series_text(
      R"({"n":2,"n_prime":1,"q_prime":0,"field":"real","terms":[{"alpha":[2,0],"alpha_prime":[0],"re":5}]})");
  EXPECT_EQ(c.n(), 2u);
  EXPECT_EQ(c.size(), 1u);
  EXPECT_EQ(c.coefficient(MultiIndex{2, 0}, MultiIndex{0}), Scalar(5.0));
}

TEST(ParseSeries, ComplexValues) {
  const auto c = parse_series_text(
      R"({"n":1,"n_prime":2,"q_prime":1,"field":"complex","terms":[{"alpha":[3],"alpha_prime":[0,1],"re":1.5,"im":-2}]})");
  EXPECT_EQ(c.coefficient(MultiIndex{3}, MultiIndex{0, 1}), Scalar(1.5, -2.0));
}

TEST(ParseSeries, Errors) {
  EXPECT_NE(error_of(R"({"n":2,"n_prime":1,"q_prime":0,"field":"real","terms":[
    {"alpha":[1,0],"alpha_prime":[0],"re":1},
    {"alpha":[1,0],"alpha_prime":[0],"re":2}]})").find("term 1: duplicate"), std::string::npos);
  EXPECT_NE(error_of(R"({"n":2,"n_prime":1,"q_prime":1,"field":"real","terms":[
    {"alpha":[1,0],"alpha_prime":[2],"re":1}]})").find("term 0"), std::string::npos);
  EXPECT_NE(error_of(R"({"n":2,"n_prime":1,"q_prime":0,"field":"real","terms":[
    {"alpha":[1,0,0],"alpha_prime":[0],"re":1}]})").find("term 0: \"alpha\" has length 3"), std::string::npos);
  EXPECT_NE(error_of(R"({"n":1,"n_prime":1,"q_prime":0,"field":"real","terms":[
    {"alpha":[1],"alpha_prime":[0],"re":1,"im":0.5}]})").find("term 0"), std::string::npos);
  EXPECT_NE(error_of("{\"n\":1,\n\"n_prime\":1,\n\"terms\":[}").find("malformed JSON at line 3"), std::string::npos);
  EXPECT_NE(error_of(R"({"n":1,"n_prime":1,"q_prime":0,"field":"quaternion","terms":[]})"), "");
  EXPECT_NE(error_of(R"({"n":0,"n_prime":1,"q_prime":0,"field":"real","terms":[]})"), "");
  EXPECT_NE(error_of(R"({"n":1,"n_prime":1,"q_prime":0,"field":"real","terms":[{"alpha":[-1],"alpha_prime":[0],"re":1}]})"), "");
  EXPECT_NE(error_of(R"({"n":1,"n_prime":1,"q_prime":0,"field":"real","terms":[{"alpha":[1],"alpha_prime":[0]}]})")
                .find("missing \"re\""), std::string::npos);
  EXPECT_NE(error_of(R"([1,2])"), "");
  EXPECT_THROW((void)parse_series_file("/nonexistent/series.json"), ValidationError);
}

TEST(ParseSeries, ImaginaryZeroAllowedInRealFile) {
  const auto c = parse_series_text(
      R"({"n":1,"n_prime":1,"q_prime":0,"field":"real","terms":[{"alpha":[1],"alpha_prime":[0],"re":2,"im":0}]})");
  EXPECT_EQ(c.size(), 1u);
}

TEST(SerializeSeries, RoundTripAndFieldNames) {
  CoefficientMap c(2, 2, 1, Field::complex);
  c.insert(MultiIndex{0, 2}, MultiIndex{1, 0}, Scalar(0.1, 1.0 / 3.0));
  c.insert(MultiIndex{1, 0}, MultiIndex{0, 1}, Scalar(-4.0, 0.0));
  const std::string text = serialize_series(c);
  EXPECT_EQ(parse_series_text(text), c);
  const auto j = nlohmann::json::parse(text);
  for (const char* key : {"n", "n_prime", "q_prime", "field", "terms"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["terms"][0]["alpha"], nlohmann::json::array({1, 0}));
  EXPECT_TRUE(j["terms"][0].contains("im"));
}

TEST(SerializeSeries, FileRoundTripOfDegenerateSeries) {
  const auto dir = std::filesystem::temp_directory_path() / "mvseries_io_test";
  std::filesystem::create_directories(dir);
  CoefficientMap empty(3, 2, 4, Field::real);
  write_series_file(empty, dir / "empty.json");
  EXPECT_EQ(parse_series_file(dir / "empty.json"), empty);
  EXPECT_FALSE(nlohmann::json::parse(serialize_series(empty))["terms"].size());
  std::filesystem::remove_all(dir);
}
