#pragma once

#include <string>
#include <vector>

#include "beamlu/diagnostics.hpp"

namespace beamlu::cli {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double ms = 0.0;
};

/// Factor-bound checks accumulated across criteria 1-8; criterion 10 reports
/// the totals.
struct AcceptanceTally {
    std::size_t factor_checks = 0;
    std::size_t factor_failures = 0;
    std::vector<std::string> failure_names;

    void absorb(const std::vector<BoundCheck>& checks);
};

/// Runs acceptance criterion `id` (1-11). Criterion 10 reads `tally`; the
/// others contribute their factor-bound checks to it.
CriterionResult run_criterion(int id, AcceptanceTally& tally);

std::vector<std::string> suite_names();
/// Criteria bundled under a named suite; throws std::invalid_argument for an
/// unknown suite.
std::vector<int> suite_criteria(const std::string& suite);

/// `verify <suite>`: prints a pass/fail table. Exit 0 when every criterion of
/// the suite passed, 2 on failure, 1 for an unknown suite.
int verify_command(const std::string& suite, bool quiet);

/// All criteria in order, sharing one tally (as the acceptance binary runs
/// them).
std::vector<CriterionResult> run_all_criteria();

} // namespace beamlu::cli
