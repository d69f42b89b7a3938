// One PASS/FAIL line per acceptance criterion, failing checks listed under their criterion.
// Exit status: 0 once every criterion has been evaluated, 1 with --strict if any criterion fails,
// 3 if the suite itself throws.
#include <cstdio>
#include <cstring>
#include <exception>

#include "checks.hpp"

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  int failed = 0;
  try {
    for (const auto& crit : so12::cli::acceptance_suite()) {
      const bool ok = crit.pass();
      failed += !ok;
      std::printf("%s %2d %s\n", ok ? "PASS" : "FAIL", crit.id, crit.title.c_str());
      for (const auto& c : crit.checks)
        if (!c.pass())
          std::printf("       - %s: computed %.10g, expected %.10g, delta %.3g, tol %.3g%s%s\n", c.name.c_str(),
                      c.computed, c.expected, c.delta(), c.tol, c.note.empty() ? "" : ", ", c.note.c_str());
    }
  } catch (const std::exception& e) {
    std::printf("ERROR %s\n", e.what());
    return 3;
  }
  std::printf("%d of 15 criteria failed\n", failed);
  return strict && failed ? 1 : 0;
}
