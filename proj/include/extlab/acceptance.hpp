#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace extlab::acceptance {

enum class Suite { fast, full };

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
    std::vector<std::string> data_rows;
};

// ids 1..11; throws on unknown id
CriterionResult run_criterion(int id, const std::string& artifact_dir);

// fast = {1, 2, 4, 8}; full = all eleven. Prints one pass/fail line per
// criterion and writes a deterministic data.csv under artifact_dir.
std::vector<CriterionResult> run_suite(Suite suite, std::ostream& log,
                                       const std::string& artifact_dir);

const std::vector<int>& fast_ids();
const std::vector<int>& full_ids();

}  // namespace extlab::acceptance
