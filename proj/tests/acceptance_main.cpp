#include <cstdio>

#include "pvar/acceptance.hpp"

int main() {
  const auto results = pvar::run_acceptance();
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s\n", pvar::format_result(r).c_str());
    if (!r.pass()) ++failed;
  }
  std::printf("%zu/%zu criteria passed\n", results.size() - static_cast<std::size_t>(failed), results.size());
  return failed == 0 ? 0 : 1;
}
