#pragma once

#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace qlift {

struct AcceptanceOptions {
    /// criteria to run (1..8); empty runs all
    std::set<int> only;
    /// scaled-down run counts for smoke testing
    bool quick = false;
    std::uint64_t seed = 2024;
};

struct CriterionLine {
    std::string id;
    bool pass = false;
    std::string detail;
};

/// Runs the selected criteria, printing one line per result to `out` as it
/// goes. Progress notes go to `log`.
std::vector<CriterionLine> run_acceptance(const AcceptanceOptions& opt, std::ostream& out, std::ostream& log);

}  // namespace qlift
