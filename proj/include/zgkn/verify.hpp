#pragma once

#include <string>
#include <vector>

namespace zgkn {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// Run the acceptance suite; `quick` trims point counts and ladder lengths
/// but keeps every criterion meaningful.  Prints one line per criterion to
/// stdout as it goes.
std::vector<CriterionResult> run_acceptance(bool quick);

/// True iff every criterion passed.
bool all_passed(const std::vector<CriterionResult>& results);

} // namespace zgkn
