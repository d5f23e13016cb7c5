#include <cstdio>
#include <iostream>

#include "horncode/checks.hpp"

int main() {
  using namespace horncode;
  const SuiteOptions opts;
  bool all = true;
  for (const auto& c : acceptance_criteria()) {
    const auto out = run_criterion(c, opts);
    char secs[32];
    std::snprintf(secs, sizeof secs, " [%.1f s]", out.seconds);
    std::cout << render_line(out.check) << secs << std::endl;
    all = all && out.check.pass;
  }
  return all ? 0 : 1;
}
