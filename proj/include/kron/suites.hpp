#pragma once
// Verification batteries shared by the command-line driver and the acceptance run.

#include <string>
#include <utility>
#include <vector>

#include "kron/lattice.hpp"

namespace kron {

struct CheckResult {
    std::string name;
    std::string anchor;  // formula of the identity or definition being checked
    std::string inputs;
    bool applicable = true;
    double defect = 0.0;
    double threshold = 0.0;
    bool passed = false;
    std::string note;
};

struct SuiteReport {
    std::string name;
    std::vector<CheckResult> checks;
    double seconds = 0.0;
    bool passed() const;
};

struct SuiteSettings {
    PrecisionContext ctx;
    std::vector<std::pair<std::string, Lattice>> lattices;  // label, lattice
};

// The default lattices Z + iZ and Z + rho Z.
SuiteSettings default_suite_settings(const PrecisionContext& ctx);

// theta, laurent, overlap, functional-eq, katz, kato-siegel, distribution, padic
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);  // also accepts "all"
SuiteReport run_suite(const std::string& name, const SuiteSettings& settings);

}  // namespace kron
