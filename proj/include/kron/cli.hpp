#pragma once
// Command-line driver. run_cli is the whole program; tools/kronecker.cpp only forwards to it.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kron/lattice.hpp"
#include "kron/precision.hpp"

namespace kron {

// Exit codes.
enum ExitCode : int {
    exit_ok = 0,
    exit_check_failed = 1,
    exit_usage = 2,
    exit_domain = 3,
    exit_pole = 4,
    exit_convergence = 5,  // NotConvergent, PrecisionBudget, ContourTooLarge, DegreeExhausted
    exit_engine = 6,       // any other engine error
};

// key = value lines, '#' comments. Keys:
//   prec, sum_radius, q_terms, tol_rel, guard_bits,
//   tau | omega1 + omega2, format (json|csv|text), suites (comma list), cache
// The original text is kept line by line, so serialize(parse(x)) == x.
class RunConfig {
public:
    PrecisionContext ctx;
    std::string tau, omega1, omega2;  // complex expressions; empty = unset
    std::string format = "json";
    std::vector<std::string> suites;
    std::string cache_dir;

    static RunConfig parse(const std::string& text);
    static RunConfig load(const std::string& path);
    std::string serialize() const;

    // Applies and records a setting, replacing an existing line for the key.
    void set(const std::string& key, const std::string& value);

    bool has_lattice() const { return !tau.empty() || (!omega1.empty() && !omega2.empty()); }

private:
    std::vector<std::string> lines_;
    bool trailing_newline_ = true;
    void apply(const std::string& key, const std::string& value);
};

struct ResultRecord {
    std::string operation;
    std::vector<std::pair<std::string, std::string>> inputs;  // canonical text
    std::vector<std::pair<std::string, Complex>> values;
    std::string est_error;  // decimal, empty if not applicable
    std::string method;
    int prec_bits = 0;
    std::string anchor;
    std::optional<double> wall_seconds;  // only with --timings
};

// "a/N,b/N", "a/N" (b = 0) or "0"; the point a w1/N + b w2/N.
TorsionPoint parse_torsion(const std::string& text);
std::string format_torsion(const TorsionPoint& t);

// Decimal digits written for a given precision.
int output_digits(int prec_bits);

// Lattice from the config, using the invariants cache when one is configured.
// The cache holds only LatticeInvariants, keyed by the exact periods and working precision.
Lattice make_lattice(const RunConfig& cfg);
std::string cache_key(const Complex& omega1, const Complex& omega2, int work_bits);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kron
