// One PASS/FAIL line per acceptance criterion.  Optional arguments pick criteria by number.

#include <cstdio>
#include <cstdlib>

#include "wick/report/report.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty())
    for (int i = 1; i <= wick::acceptance_count(); ++i) ids.push_back(i);
  const auto tol = wick::tolerance_profile("default");
  int passed = 0;
  double seconds = 0.0;
  for (int id : ids) {
    const auto rep = wick::run_acceptance(tol, {id});
    seconds += rep.seconds;
    for (const auto& v : rep.verdicts) {
      if (v.criterion <= 0) continue;
      std::printf("%s [%d] %s: %s\n", v.pass ? "PASS" : "FAIL", v.criterion, v.name.c_str(), v.detail.c_str());
      std::fflush(stdout);
      passed += v.pass;
    }
  }
  std::printf("%d/%zu criteria passed in %.1f s\n", passed, ids.size(), seconds);
  return passed == static_cast<int>(ids.size()) ? 0 : 1;
}
