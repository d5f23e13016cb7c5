#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace horncode {

struct CheckResult {
  std::string name;
  std::string measured;
  std::string expected;
  double tolerance = 0.0;
  bool pass = false;
};

nlohmann::json to_json(const CheckResult& check);

bool all_pass(const std::vector<CheckResult>& checks);

// "PASS name: measured (expected expected, tol t)" style one-liner.
std::string render_line(const CheckResult& check);

// Reads a UTF-8 JSON file. Missing files raise Io; syntax errors raise ParseError
// with the 1-based column of the offending byte on its line.
nlohmann::json load_json(const std::filesystem::path& path);

// Fixed four-decimal rendering used in check summaries.
std::string fixed4(double x);

// Shortest decimal that reads back to the same double.
std::string format_double(double x);

}  // namespace horncode
