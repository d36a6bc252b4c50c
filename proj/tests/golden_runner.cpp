// Usage: kgf_golden <kgf executable> <golden dir> [--update]
#include <cstring>
#include <iostream>

#include "golden.hpp"

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: kgf_golden <kgf> <golden dir> [--update]\n";
    return 2;
  }
  const bool update = argc > 3 && std::strcmp(argv[3], "--update") == 0;
  const auto results = golden::run_corpus(argv[1], argv[2], update);
  int failed = 0;
  for (const auto& r : results) {
    std::cout << (r.ok ? "ok   " : "FAIL ") << r.name << (r.ok ? "" : ": " + r.detail) << "\n";
    failed += r.ok ? 0 : 1;
  }
  std::cout << results.size() - failed << "/" << results.size() << " golden cases match\n";
  return failed == 0 && !results.empty() ? 0 : 1;
}
