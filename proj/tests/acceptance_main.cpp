// Acceptance suite: runs every contract criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit code 0 only if all pass.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "rwi/acceptance.hpp"

int main(int argc, char** argv) {
  rwi::acc::Options opts;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      opts.seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (std::strcmp(argv[i], "--serial") == 0) {
      opts.parallel = false;
    } else {
      ids.push_back(std::atoi(argv[i]));
    }
  }

  std::vector<rwi::acc::Criterion> rows =
      ids.empty() ? rwi::acc::run_all(opts) : rwi::acc::run_selected(opts, ids);

  int failures = 0;
  for (const auto& c : rows) {
    std::printf("%s criterion %2d: %s  (%.2f s)\n", c.pass ? "[PASS]" : "[FAIL]", c.id,
                c.name.c_str(), c.seconds);
    if (!c.pass) {
      ++failures;
      std::printf("        details: %s\n", c.details.dump().c_str());
    }
  }
  std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(rows.size()) - failures,
              rows.size());
  return failures == 0 ? 0 : 1;
}
