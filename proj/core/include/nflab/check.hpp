#pragma once

#include <string>
#include <vector>

namespace nflab {

/// One machine-checked condition: what was measured and against which bound.
struct CheckEntry {
    std::string hypothesis;
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
    double tolerance = 0.0;
};

inline bool all_pass(const std::vector<CheckEntry>& entries) {
    for (const auto& e : entries) {
        if (!e.pass) return false;
    }
    return true;
}

}  // namespace nflab
