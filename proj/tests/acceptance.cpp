#include <cstdio>
#include <cstdlib>
#include <string>

#include "dglab/validation.hpp"

int main(int argc, char** argv) {
  dglab::ValidationOptions opt;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--quick") opt.quick = true;
    else opt.criteria.push_back(std::atoi(a.c_str()));
  }
  opt.on_result = [](const dglab::CriterionResult& r) {
    std::printf("%s (%.1fs)\n", dglab::format_line(r).c_str(), r.seconds);
    std::fflush(stdout);
  };
  try {
    auto res = dglab::run_validation(opt);
    bool ok = dglab::suite_passed(res);
    std::printf("%s\n", ok ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED");
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::printf("FAIL  internal error: %s\n", e.what());
    return 3;
  }
}
