#include "kron/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "kron/ek.hpp"
#include "kron/errors.hpp"
#include "kron/kronecker_theta.hpp"
#include "kron/padic.hpp"
#include "kron/suites.hpp"

namespace kron {

using ojson = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

int to_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ParseError(key + ": expected an integer, got '" + v + "'");
    }
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ParseError(key + ": expected a number, got '" + v + "'");
    }
}

std::string sci(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits, x);
    return buf;
}

ojson complex_json(const Complex& z, int digits) {
    ojson j;
    j["re"] = z.re.to_decimal(digits);
    j["im"] = z.im.to_decimal(digits);
    return j;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void emit_record(std::ostream& out, const ResultRecord& r, const std::string& format) {
    int digits = output_digits(r.prec_bits);
    if (format == "json") {
        ojson j;
        j["operation"] = r.operation;
        j["inputs"] = ojson::object();
        for (const auto& [k, v] : r.inputs) j["inputs"][k] = v;
        j["values"] = ojson::object();
        for (const auto& [k, v] : r.values) j["values"][k] = complex_json(v, digits);
        if (!r.est_error.empty()) j["est_error"] = r.est_error;
        if (!r.method.empty()) j["method"] = r.method;
        j["prec_bits"] = r.prec_bits;
        j["anchor"] = r.anchor;
        if (r.wall_seconds) j["wall_time_s"] = sci(*r.wall_seconds, 3);
        out << j.dump(2) << "\n";
    } else if (format == "csv") {
        out << "operation,inputs,name,re,im,est_error,method,prec_bits,anchor";
        if (r.wall_seconds) out << ",wall_time_s";
        out << "\n";
        std::string inputs;
        for (const auto& [k, v] : r.inputs) inputs += (inputs.empty() ? "" : " ") + k + "=" + v;
        for (const auto& [k, v] : r.values) {
            out << csv_field(r.operation) << "," << csv_field(inputs) << "," << csv_field(k) << ","
                << v.re.to_decimal(digits) << "," << v.im.to_decimal(digits) << "," << r.est_error << ","
                << r.method << "," << r.prec_bits << "," << csv_field(r.anchor);
            if (r.wall_seconds) out << "," << sci(*r.wall_seconds, 3);
            out << "\n";
        }
    } else {
        out << r.operation;
        for (const auto& [k, v] : r.inputs) out << " " << k << "=" << v;
        out << "\n  anchor: " << r.anchor << "\n";
        if (!r.method.empty()) out << "  method: " << r.method << "\n";
        for (const auto& [k, v] : r.values)
            out << "  " << k << " = " << v.re.to_decimal(digits) << " + " << v.im.to_decimal(digits) << " i\n";
        if (!r.est_error.empty()) out << "  est_error: " << r.est_error << "\n";
        if (r.wall_seconds) out << "  wall_time_s: " << sci(*r.wall_seconds, 3) << "\n";
    }
}

std::string defect_text(const CheckResult& c) {
    if (!c.applicable) return "n/a";
    if (c.defect < 0) return "error";
    return sci(c.defect, 3);
}

void emit_verify(std::ostream& out, const std::vector<SuiteReport>& reps, const RunConfig& cfg,
                 const std::vector<std::string>& labels, bool timings) {
    bool all = true;
    for (const auto& r : reps) all = all && r.passed();
    if (cfg.format == "json") {
        ojson j;
        j["operation"] = "verify";
        j["prec_bits"] = cfg.ctx.prec_bits;
        j["lattices"] = labels;
        j["passed"] = all;
        j["suites"] = ojson::array();
        for (const auto& r : reps) {
            ojson s;
            s["suite"] = r.name;
            s["passed"] = r.passed();
            if (timings) s["wall_time_s"] = sci(r.seconds, 3);
            s["checks"] = ojson::array();
            for (const auto& c : r.checks) {
                ojson cj;
                cj["name"] = c.name;
                cj["anchor"] = c.anchor;
                cj["inputs"] = c.inputs;
                cj["applicable"] = c.applicable;
                cj["defect"] = defect_text(c);
                cj["threshold"] = sci(c.threshold, 0);
                cj["passed"] = c.passed;
                if (!c.note.empty()) cj["note"] = c.note;
                s["checks"].push_back(cj);
            }
            j["suites"].push_back(s);
        }
        out << j.dump(2) << "\n";
    } else if (cfg.format == "csv") {
        out << "suite,check,inputs,applicable,defect,threshold,passed,anchor,note\n";
        for (const auto& r : reps)
            for (const auto& c : r.checks)
                out << r.name << "," << csv_field(c.name) << "," << csv_field(c.inputs) << ","
                    << (c.applicable ? "yes" : "no") << "," << defect_text(c) << "," << sci(c.threshold, 0)
                    << "," << (c.passed ? "pass" : "fail") << "," << csv_field(c.anchor) << ","
                    << csv_field(c.note) << "\n";
    } else {
        for (const auto& r : reps) {
            out << r.name << ": " << (r.passed() ? "PASS" : "FAIL");
            if (timings) out << " (" << sci(r.seconds, 3) << " s)";
            out << "\n";
            for (const auto& c : r.checks) {
                out << "  [" << (c.passed ? "pass" : "FAIL") << "] " << c.name << " " << c.inputs
                    << "  defect " << defect_text(c) << " <= " << sci(c.threshold, 0) << "\n";
                out << "         " << c.anchor << "\n";
                if (!c.note.empty()) out << "         " << c.note << "\n";
            }
        }
        out << (all ? "all checks passed" : "some checks failed") << "\n";
    }
}

TruncatedSeries2 load_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return read_series(in);
}

void write_output(const std::string& path, std::ostream& out, const TruncatedSeries2& f) {
    if (path.empty() || path == "-") {
        write_series(out, f);
        return;
    }
    std::ofstream o(path);
    if (!o) throw ParseError("cannot write '" + path + "'");
    write_series(o, f);
}

TruncatedSeries2 moments_as_series(const MeasureMoments& mm) {
    int K = static_cast<int>(mm.m.size()) - 1;
    int L = K >= 0 ? static_cast<int>(mm.m[0].size()) - 1 : 0;
    TruncatedSeries2 g(PadicRing(mm.p, mm.prec), K, L);
    for (int k = 0; k <= K; ++k)
        for (int l = 0; l <= L; ++l) g.set(k, l, mm.m[k][l]);
    return g;
}

MeasureMoments series_as_moments(const TruncatedSeries2& g) {
    MeasureMoments mm;
    mm.p = g.p();
    mm.prec = g.prec();
    for (int k = 0; k <= g.degS(); ++k) {
        mm.m.emplace_back();
        for (int l = 0; l <= g.degT(); ++l) mm.m.back().push_back(g.coeff(k, l));
    }
    return mm;
}

}  // namespace

// --- RunConfig ---

void RunConfig::apply(const std::string& key, const std::string& v) {
    if (key == "prec") ctx.prec_bits = to_int(key, v);
    else if (key == "sum_radius") ctx.sum_radius = to_int(key, v);
    else if (key == "q_terms") ctx.q_terms = to_int(key, v);
    else if (key == "tol_rel") ctx.tol_rel = to_double(key, v);
    else if (key == "guard_bits") ctx.guard_bits = to_int(key, v);
    else if (key == "tau") tau = v;
    else if (key == "omega1") omega1 = v;
    else if (key == "omega2") omega2 = v;
    else if (key == "format") {
        if (v != "json" && v != "csv" && v != "text") throw ParseError("format must be json, csv or text");
        format = v;
    } else if (key == "suites") {
        suites.clear();
        for (const auto& s : split(v, ','))
            if (!s.empty()) {
                if (!is_suite(s)) throw ParseError("unknown suite '" + s + "'");
                suites.push_back(s);
            }
    } else if (key == "cache") cache_dir = v;
    else throw ParseError("unknown key '" + key + "'");
}

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig c;
    c.trailing_newline_ = !text.empty() && text.back() == '\n';
    std::istringstream is(text);
    std::string line;
    int n = 0;
    while (std::getline(is, line)) {
        ++n;
        c.lines_.push_back(line);
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError("config line " + std::to_string(n) + ": expected key = value");
        try {
            c.apply(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
        } catch (const ParseError& e) {
            throw ParseError("config line " + std::to_string(n) + ": " + e.what());
        }
    }
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string RunConfig::serialize() const {
    std::string s;
    for (size_t i = 0; i < lines_.size(); ++i) {
        s += lines_[i];
        if (i + 1 < lines_.size() || trailing_newline_) s += '\n';
    }
    return s;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    apply(key, value);
    std::string line = key + " = " + value;
    for (auto& l : lines_) {
        std::string t = trim(l);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq != std::string::npos && trim(t.substr(0, eq)) == key) {
            l = line;
            return;
        }
    }
    if (!lines_.empty() && !trailing_newline_) trailing_newline_ = true;
    lines_.push_back(line);
    trailing_newline_ = true;
}

// --- helpers ---

TorsionPoint parse_torsion(const std::string& text) {
    std::string t = trim(text);
    if (t == "0") return TorsionPoint();
    auto parts = split(t, ',');
    if (parts.size() > 2 || parts.empty()) throw ParseError("torsion point '" + text + "': expected a/N,b/N");
    long num[2] = {0, 0}, den[2] = {1, 1};
    for (size_t i = 0; i < parts.size(); ++i) {
        auto slash = parts[i].find('/');
        try {
            size_t pos = 0;
            std::string a = slash == std::string::npos ? parts[i] : parts[i].substr(0, slash);
            num[i] = std::stol(a, &pos);
            if (pos != a.size()) throw std::invalid_argument(a);
            if (slash != std::string::npos) {
                std::string d = parts[i].substr(slash + 1);
                den[i] = std::stol(d, &pos);
                if (pos != d.size()) throw std::invalid_argument(d);
            }
        } catch (const std::exception&) {
            throw ParseError("torsion point '" + text + "': expected a/N,b/N");
        }
        if (den[i] <= 0) throw ParseError("torsion point '" + text + "': denominators must be positive");
    }
    long N = std::lcm(den[0], den[1]);
    return TorsionPoint(num[0] * (N / den[0]), num[1] * (N / den[1]), N);
}

std::string format_torsion(const TorsionPoint& t) {
    if (t.is_zero()) return "0";
    long n = t.denominator();
    return std::to_string(t.a()) + "/" + std::to_string(n) + "," + std::to_string(t.b()) + "/" + std::to_string(n);
}

int output_digits(int prec_bits) { return std::max(17, static_cast<int>(prec_bits * 0.30102999566398120)); }

std::string cache_key(const Complex& omega1, const Complex& omega2, int work_bits) {
    return omega1.re.to_exact_string() + " " + omega1.im.to_exact_string() + " " + omega2.re.to_exact_string() +
           " " + omega2.im.to_exact_string() + " " + std::to_string(work_bits);
}

Lattice make_lattice(const RunConfig& cfg) {
    if (!cfg.has_lattice()) throw ParseError("a lattice is required: --tau or --omega1 with --omega2");
    PrecisionGuard g(cfg.ctx.work_bits() + 64);
    Complex w1, w2;
    if (!cfg.tau.empty()) {
        w1 = parse_complex(cfg.tau);
        w2 = Complex(1);
    } else {
        w1 = parse_complex(cfg.omega1);
        w2 = parse_complex(cfg.omega2);
    }
    if (cfg.cache_dir.empty()) return Lattice::from_periods(w1, w2, cfg.ctx);

    namespace fs = std::filesystem;
    std::string key = cache_key(w1, w2, cfg.ctx.work_bits());
    fs::path file = fs::path(cfg.cache_dir) / ("lattice-" + fnv1a_hex(key) + ".inv");
    {
        std::ifstream in(file);
        std::string first;
        if (in && std::getline(in, first) && first == "# " + key) {
            std::ostringstream rest;
            rest << in.rdbuf();
            LatticeInvariants inv = LatticeInvariants::parse(rest.str());
            return Lattice::from_periods(w1, w2, cfg.ctx, &inv);
        }
    }
    Lattice L = Lattice::from_periods(w1, w2, cfg.ctx);
    std::error_code ec;
    fs::create_directories(cfg.cache_dir, ec);
    fs::path tmp = file;
    tmp += ".tmp";
    {
        std::ofstream o(tmp);
        if (o) o << "# " << key << "\n" << L.invariants().serialize();
    }
    fs::rename(tmp, file, ec);
    return L;
}

// --- driver ---

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Eisenstein-Kronecker numbers, Kronecker theta functions, Kato-Siegel forms and p-adic measures"};
    app.name("kronecker");
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, prec, tau, omega1, omega2, format, cache;
    bool timings = false;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--prec", prec, "working precision in bits (default 256)");
    app.add_option("--tau", tau, "lattice Z tau + Z, e.g. i or (1+i*sqrt(3))/2");
    app.add_option("--omega1", omega1, "first period");
    app.add_option("--omega2", omega2, "second period");
    app.add_option("--format", format, "json, csv or text");
    app.add_option("--cache", cache, "lattice invariants cache directory (env KRONECKER_CACHE_DIR)");
    app.add_flag("--timings", timings, "include wall times in the output");

    auto* ek = app.add_subcommand("eval-ek", "evaluate e*_{k,r}(s,t), or e~_{k,r+1}(s,t) with --normalized");
    int k = 0, r = 0;
    std::string s_text = "0", t_text = "0", method = "auto";
    bool normalized = false;
    ek->add_option("--k", k)->required();
    ek->add_option("--r", r)->required();
    ek->add_option("--s", s_text, "a/N,b/N or 0");
    ek->add_option("--t", t_text, "a/N,b/N or 0");
    ek->add_option("--method", method, "auto, direct, lerch or theta_taylor");
    ek->add_flag("--normalized", normalized);

    auto* tay = app.add_subcommand("taylor", "Taylor coefficients of Theta_{s,t}(z,w)");
    int max_a = 4, max_b = 4;
    tay->add_option("--s", s_text)->required();
    tay->add_option("--t", t_text)->required();
    tay->add_option("--max-a", max_a);
    tay->add_option("--max-b", max_b);

    auto* ver = app.add_subcommand("verify", "run a verification suite");
    std::string suite;
    ver->add_option("suite", suite, "theta, laurent, overlap, functional-eq, katz, kato-siegel, distribution, padic or all")
        ->required();

    auto* pad = app.add_subcommand("padic", "operations on series files");
    pad->require_subcommand(1);
    std::string file, out_path;
    int K = 4, Lm = 4, max_degree = 4096;
    bool grid = false;
    auto* pm = pad->add_subcommand("moments", "moment grid m[k][l], written in the series format");
    pm->add_option("file", file)->required();
    pm->add_option("--K", K);
    pm->add_option("--L", Lm);
    pm->add_option("-o,--output", out_path);
    auto* pr = pad->add_subcommand("restrict", "restriction to Z_p^x in the first variable");
    pr->add_option("file", file)->required();
    pr->add_option("-o,--output", out_path);
    auto* pp = pad->add_subcommand("pushforward", "pushforward along x -> p x in the first variable");
    pp->add_option("file", file)->required();
    pp->add_option("-o,--output", out_path);
    pp->add_option("--max-degree", max_degree);
    auto* pk = pad->add_subcommand("kummer", "Mahler integrality and Kummer congruences of the moments");
    pk->add_option("file", file)->required();
    int kK = 12, kL = 0;
    pk->add_option("--K", kK);
    pk->add_option("--L", kL);
    pk->add_flag("--grid", grid, "the file already holds a moment grid");

    auto* cfgc = app.add_subcommand("config", "configuration tools");
    cfgc->require_subcommand(1);
    auto* echo = cfgc->add_subcommand("echo", "print the effective configuration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig() : RunConfig::load(config_path);
        if (const char* env = std::getenv("KRONECKER_CACHE_DIR"); env && *env) cfg.cache_dir = env;
        if (!prec.empty()) cfg.set("prec", prec);
        if (!tau.empty()) cfg.set("tau", tau);
        if (!omega1.empty()) cfg.set("omega1", omega1);
        if (!omega2.empty()) cfg.set("omega2", omega2);
        if (!format.empty()) cfg.set("format", format);
        if (!cache.empty()) cfg.set("cache", cache);
        cfg.ctx.validate();

        auto t0 = std::chrono::steady_clock::now();
        auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

        if (*echo) {
            out << cfg.serialize();
            return exit_ok;
        }

        if (*ek) {
            if (!cfg.has_lattice()) throw ParseError("eval-ek needs --tau (or --omega1 and --omega2)");
            TorsionPoint s = parse_torsion(s_text), t = parse_torsion(t_text);
            EKMethod m = parse_method(method);
            Lattice L = make_lattice(cfg);
            EKValue v = normalized ? ek_normalized(k, r, s, t, L, cfg.ctx, m) : ek_star(k, r, s, t, L, cfg.ctx, m);
            ResultRecord rec;
            rec.operation = normalized ? "ek_normalized" : "ek_star";
            rec.inputs = {{"k", std::to_string(k)}, {"r", std::to_string(r)}, {"s", format_torsion(s)},
                          {"t", format_torsion(t)}};
            if (!cfg.tau.empty()) rec.inputs.emplace_back("tau", cfg.tau);
            else {
                rec.inputs.emplace_back("omega1", cfg.omega1);
                rec.inputs.emplace_back("omega2", cfg.omega2);
            }
            rec.values = {{normalized ? "e_tilde" : "e_star", v.value}};
            rec.est_error = sci(v.est_error.to_double(), 3);
            rec.method = to_string(v.method);
            rec.prec_bits = cfg.ctx.prec_bits;
            rec.anchor = normalized
                             ? "e~_{k,r+1}(s,t) = (-1)^{k+r} r! A^{-k} e*_{k,r+1}(s,t)"
                             : "e*_{k,r}(s,t) = sum'_{g} conj(s+g)^k (s+g)^{-r} <g,t> = K*_{k+r}(s,t,r)";
            if (timings) rec.wall_seconds = elapsed();
            emit_record(out, rec, cfg.format);
            return exit_ok;
        }

        if (*tay) {
            if (!cfg.has_lattice()) throw ParseError("taylor needs --tau (or --omega1 and --omega2)");
            if (max_a < 0 || max_b < 0) throw ParseError("--max-a and --max-b must be nonnegative");
            TorsionPoint s = parse_torsion(s_text), t = parse_torsion(t_text);
            Lattice L = make_lattice(cfg);
            TaylorGrid g = taylor_coeffs(ThetaTranslate::from_torsion(s, t, L), max_a, max_b, cfg.ctx);
            ResultRecord rec;
            rec.operation = "taylor";
            rec.inputs = {{"s", format_torsion(s)}, {"t", format_torsion(t)}, {"max_a", std::to_string(max_a)},
                          {"max_b", std::to_string(max_b)}};
            if (!cfg.tau.empty()) rec.inputs.emplace_back("tau", cfg.tau);
            else {
                rec.inputs.emplace_back("omega1", cfg.omega1);
                rec.inputs.emplace_back("omega2", cfg.omega2);
            }
            PrecisionGuard pg(cfg.ctx.prec_bits);
            for (int a = 0; a <= max_a; ++a)
                for (int b = 0; b <= max_b; ++b)
                    rec.values.emplace_back("a=" + std::to_string(a) + ",b=" + std::to_string(b), g.c[a][b] * Real(1));
            rec.est_error = sci(g.est_error.to_double(), 3);
            rec.method = "cauchy_trapezoid";
            rec.prec_bits = cfg.ctx.prec_bits;
            rec.anchor = "Theta_{s,t}(z,w) = sum_{a,b} c_{a,b} z^b w^a, c_{a,b} = e~_{a,b+1}(s,t) / (a! b!)";
            if (timings) rec.wall_seconds = elapsed();
            emit_record(out, rec, cfg.format);
            return exit_ok;
        }

        if (*ver) {
            if (!is_suite(suite)) {
                err << "unknown suite '" << suite << "'\n";
                return exit_usage;
            }
            SuiteSettings st;
            std::vector<std::string> labels;
            if (cfg.has_lattice()) {
                st.ctx = cfg.ctx;
                std::string label = !cfg.tau.empty() ? cfg.tau : cfg.omega1 + ";" + cfg.omega2;
                st.lattices.emplace_back(label, make_lattice(cfg));
            } else {
                st = default_suite_settings(cfg.ctx);
            }
            for (const auto& l : st.lattices) labels.push_back(l.first);
            std::vector<std::string> names;
            if (suite == "all") names = cfg.suites.empty() ? suite_names() : cfg.suites;
            else names = {suite};
            std::vector<SuiteReport> reps;
            for (const auto& n : names) {
                if (n == "all") {
                    for (const auto& m : suite_names()) reps.push_back(run_suite(m, st));
                } else reps.push_back(run_suite(n, st));
            }
            emit_verify(out, reps, cfg, labels, timings);
            for (const auto& rp : reps)
                if (!rp.passed()) return exit_check_failed;
            return exit_ok;
        }

        if (*pm) {
            auto f = load_series(file);
            if (K < 0 || Lm < 0) throw ParseError("--K and --L must be nonnegative");
            write_output(out_path, out, moments_as_series(moments(f, K, Lm)));
            return exit_ok;
        }
        if (*pr) {
            write_output(out_path, out, restrict_unit_S(load_series(file)));
            return exit_ok;
        }
        if (*pp) {
            write_output(out_path, out, pushforward_p(load_series(file), max_degree));
            return exit_ok;
        }
        if (*pk) {
            auto f = load_series(file);
            MeasureMoments mm = grid ? series_as_moments(f) : moments(f, kK, kL);
            KummerReport rep = kummer_check(mm);
            if (cfg.format == "json") {
                ojson j;
                j["operation"] = "kummer";
                j["inputs"] = {{"file", file}, {"p", mm.p}, {"M", mm.prec}};
                j["anchor"] =
                    "sum_k s(n,k) m_k = 0 mod p^{v_p(n!)}; m_k = m_k' mod p^{v+1} for k = k' mod (p-1)p^v";
                j["ok"] = rep.ok;
                j["checked"] = rep.checked;
                j["violations"] = ojson::array();
                for (const auto& v : rep.violations)
                    j["violations"].push_back({{"kind", v.kind}, {"l", v.l}, {"k", v.k}, {"k2", v.k2}, {"v", v.v}});
                out << j.dump(2) << "\n";
            } else if (cfg.format == "csv") {
                out << "kind,l,k,k2,v\n";
                for (const auto& v : rep.violations)
                    out << v.kind << "," << v.l << "," << v.k << "," << v.k2 << "," << v.v << "\n";
            } else {
                out << "kummer: " << (rep.ok ? "ok" : "violations") << " (" << rep.checked << " checked)\n";
                for (const auto& v : rep.violations)
                    out << "  " << v.kind << " l=" << v.l << " k=" << v.k << " k'=" << v.k2 << " mod p^" << v.v << "\n";
            }
            return rep.ok ? exit_ok : exit_check_failed;
        }
        return exit_usage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return exit_domain;
    } catch (const PoleError& e) {
        err << "pole: " << e.what() << "\n";
        return exit_pole;
    } catch (const NotConvergent& e) {
        err << "not convergent: " << e.what() << "\n";
        return exit_convergence;
    } catch (const PrecisionBudget& e) {
        err << "precision budget: " << e.what() << "\n";
        return exit_convergence;
    } catch (const ContourTooLarge& e) {
        err << "contour: " << e.what() << "\n";
        return exit_convergence;
    } catch (const DegreeExhausted& e) {
        err << "degree: " << e.what() << "\n";
        return exit_convergence;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_engine;
    }
}

}  // namespace kron
