#include "horncode/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "horncode/error.hpp"

namespace horncode {

nlohmann::json to_json(const CheckResult& c) {
  return {{"name", c.name}, {"measured", c.measured}, {"expected", c.expected}, {"tolerance", c.tolerance},
          {"pass", c.pass}};
}

bool all_pass(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string render_line(const CheckResult& c) {
  std::string line = (c.pass ? "PASS " : "FAIL ") + c.name + ": " + c.measured;
  if (!c.expected.empty()) line += " (expected " + c.expected;
  if (!c.expected.empty() && c.tolerance > 0) line += ", tol " + format_double(c.tolerance);
  if (!c.expected.empty()) line += ")";
  return line;
}

nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t at = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line_start = at == 0 ? std::string::npos : text.rfind('\n', at - 1);
    const std::size_t col = line_start == std::string::npos ? at + 1 : at - line_start;
    const std::size_t line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(at), '\n');
    throw ParseError(col, path.string() + ":" + std::to_string(line) + ": invalid JSON");
  }
}

std::string fixed4(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

}  // namespace horncode
