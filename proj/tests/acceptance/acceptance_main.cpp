// Acceptance suite: runs every criterion and prints one pass/fail line each.
// Exit status is nonzero when any criterion fails.

#include <cstdio>

#include "suites.hpp"

int main() {
    const auto results = beamlu::cli::run_all_criteria();
    bool all_ok = true;
    for (const auto& r : results) {
        all_ok = all_ok && r.passed;
        std::printf("%s  criterion %2d  %-45s [%s]  (%.0f ms)\n",
                    r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(), r.ms);
    }
    std::printf("%s\n", all_ok ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
    return all_ok ? 0 : 1;
}
