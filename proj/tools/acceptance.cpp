#include <cstdio>
#include <cstdlib>
#include <string>

#include "agr/acceptance.hpp"
#include "agr/parallel.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 20240601;
  for (int i = 1; i + 1 < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--seed") seed = std::strtoull(argv[++i], nullptr, 10);
    else if (a == "--threads") agr::set_thread_count(unsigned(std::strtoul(argv[++i], nullptr, 10)));
  }
  int failed = 0;
  agr::run_acceptance(seed, [&](const agr::CriterionResult& r) {
    failed += !r.pass;
    std::printf("%s %2d %s: %s (%.2f s)\n", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.detail.c_str(),
                r.seconds);
    std::fflush(stdout);
  });
  std::printf("%d of 11 criteria passed\n", 11 - failed);
  return failed == 0 ? 0 : 1;
}
