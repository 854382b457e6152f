// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cmi {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Golden checks: code matrices, Gold table, pixel counts, FOV/resolution and
// sensitivity numbers. With `golden_dir`, walsh8.txt, rademacher8.txt and
// gold_n5.txt are read from there instead of the built-in tables.
std::vector<CheckResult> run_golden_checks(const std::filesystem::path& golden_dir = {});

// One "PASS|FAIL name: detail" line per check; returns true if all pass.
bool print_checks(std::ostream& out, const std::vector<CheckResult>& checks);

} // namespace cmi
