// Acceptance run: one PASS/FAIL line per criterion. Thresholds and time limits are pinned here,
// independently of the thresholds carried by the suites themselves.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include "kron/suites.hpp"

#ifndef KRONECKER_BIN
#error "KRONECKER_BIN must point at the kronecker executable"
#endif

using namespace kron;

namespace {

struct Criterion {
    int id;
    std::string title;
    std::string suite;
    std::map<std::string, double> thresholds;  // by check name; "*" for all others
    double time_limit;                         // seconds, 0 = none
};

struct Outcome {
    bool pass;
    std::string detail;
};

Outcome judge(const Criterion& c, const SuiteReport& rep) {
    bool ok = !rep.checks.empty();
    double worst_ratio = 0;
    int applicable = 0;
    std::string first_fail;
    for (const auto& ch : rep.checks) {
        if (!ch.applicable) continue;
        ++applicable;
        auto it = c.thresholds.find(ch.name);
        double thr = it != c.thresholds.end() ? it->second : c.thresholds.at("*");
        bool good = ch.defect >= 0 && ch.defect <= thr;
        if (thr > 0) worst_ratio = std::max(worst_ratio, ch.defect / thr);
        if (!good && first_fail.empty())
            first_fail = ch.name + " [" + ch.inputs + "] defect " + std::to_string(ch.defect) + " " + ch.note;
        ok = ok && good;
    }
    ok = ok && applicable > 0;
    bool in_time = c.time_limit <= 0 || rep.seconds <= c.time_limit;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d checks, worst defect/threshold %.2e, %.1f s%s", applicable, worst_ratio,
                  rep.seconds, c.time_limit > 0 ? (" (limit " + std::to_string(int(c.time_limit)) + " s)").c_str() : "");
    std::string detail = buf;
    if (!first_fail.empty()) detail += "; first failure: " + first_fail;
    if (!in_time) detail += "; over time limit";
    return {ok && in_time, detail};
}

std::string run_capture(const std::string& cmd, int& status) {
    std::string out;
    std::unique_ptr<FILE, int (*)(FILE*)> p(popen(cmd.c_str(), "r"), pclose);
    if (!p) {
        status = -1;
        return out;
    }
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p.get())) > 0) out.append(buf.data(), n);
    status = pclose(p.release());
    return out;
}

}  // namespace

int main() {
    auto settings = default_suite_settings(PrecisionContext::with_bits(256));
    const Criterion criteria[] = {
        {1, "Laurent expansion grid", "laurent", {{"*", 1e-25}}, 60},
        {2, "direct sum vs continuation", "overlap", {{"*", 1e-25}}, 30},
        {3, "functional equation", "functional-eq", {{"*", 1e-25}}, 0},
        {4, "Katz comparison", "katz", {{"*", 1e-20}}, 120},
        {5, "Kato-Siegel battery", "kato-siegel", {{"*", 1e-20}}, 0},
        {6, "distribution suite", "distribution", {{"*", 1e-18}}, 120},
        {7, "theta kernel", "theta", {{"theta_law", 1e-30}, {"legendre", 1e-35}, {"theta_prime_zero", 1e-30}, {"*", 0}}, 0},
        {8, "p-adic suite", "padic", {{"*", 0}}, 30},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = judge(c, run_suite(c.suite, settings));
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << "criterion " << c.id << " " << c.title << ": " << (o.pass ? "PASS" : "FAIL") << "  "
                  << o.detail << std::endl;
    }

    {
        auto t0 = std::chrono::steady_clock::now();
        std::string cmd = std::string("env -u KRONECKER_CACHE_DIR '") + KRONECKER_BIN + "' verify all";
        int s1 = 0, s2 = 0;
        std::string a = run_capture(cmd, s1);
        std::string b = run_capture(cmd, s2);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = !a.empty() && a == b && s1 == 0 && s2 == 0;
        failed += !pass;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%zu bytes per report, identical %s, exit %d/%d, %.1f s", a.size(),
                      a == b ? "yes" : "no", s1, s2, secs);
        std::cout << "criterion 9 determinism of verify all: " << (pass ? "PASS" : "FAIL") << "  " << buf
                  << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
