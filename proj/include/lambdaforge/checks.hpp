#pragma once

#include <string>
#include <vector>

namespace lf {

// One verified claim: `pass` iff lhs equals rhs exactly; `difference` renders
// lhs - rhs (or names the first failing instance for quantified checks).
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string lhs;
    std::string rhs;
    std::string difference;
};

inline bool all_pass(const std::vector<CheckResult> &checks) {
    for (const CheckResult &c : checks)
        if (!c.pass)
            return false;
    return true;
}

} // namespace lf
