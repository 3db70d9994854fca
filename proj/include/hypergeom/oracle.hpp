#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "frobenius.hpp"

namespace hypergeom {

// Externally produced Euler factor used as a cross-check target.
struct Fixture {
    std::vector<Rat> alpha, beta;
    Rat t;
    long p = 0;
    std::vector<Int> coeffs; // c_0 = 1, ..., c_n
    std::string source;
};

// Line-delimited JSON records with fields alpha, beta, t, p, coeffs
// (rationals as "a/b" strings, integers as strings), optional source.
inline std::vector<Fixture> load_fixtures(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("load_fixtures: cannot open " + path);
    std::vector<Fixture> out;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& ex) {
            throw validation_error("fixture line " + std::to_string(lineno) + ": bad JSON (" + ex.what() + ")");
        }
        auto need = [&](const char* field) {
            if (!j.contains(field))
                throw validation_error("fixture line " + std::to_string(lineno) + ": missing field '" + field + "'");
        };
        need("alpha");
        need("beta");
        need("t");
        need("p");
        need("coeffs");
        Fixture f;
        for (const auto& s : j["alpha"]) f.alpha.push_back(parse_rational(s.get<std::string>()));
        for (const auto& s : j["beta"]) f.beta.push_back(parse_rational(s.get<std::string>()));
        f.t = parse_rational(j["t"].is_string() ? j["t"].get<std::string>() : std::to_string(j["t"].get<long>()));
        f.p = j["p"].get<long>();
        for (const auto& s : j["coeffs"]) f.coeffs.push_back(Int(s.get<std::string>()));
        if (j.contains("source")) f.source = j["source"].get<std::string>();

        // validation with line/field diagnostics
        HGData d;
        try {
            d = build_hgdata(f.alpha, f.beta);
        } catch (const validation_error& ex) {
            throw validation_error("fixture line " + std::to_string(lineno) + ": " + ex.what());
        }
        if (static_cast<long>(f.coeffs.size()) != d.n() + 1)
            throw validation_error("fixture line " + std::to_string(lineno) + ": coeffs degree mismatch (expected " +
                                   std::to_string(d.n() + 1) + " coefficients)");
        if (f.coeffs[0] != 1)
            throw validation_error("fixture line " + std::to_string(lineno) + ": c_0 must be 1");
        if (!is_good(d, f.t, f.p))
            throw validation_error("fixture line " + std::to_string(lineno) + ": p=" + std::to_string(f.p) +
                                   " is not tame/good for t=" + to_string(f.t));
        out.push_back(std::move(f));
    }
    return out;
}

struct CompareConfig {
    int precision = 20;
    int guard = 8;
    F0Variant variant = F0Variant::motivic;
    bool allow_calibration = true; // one documented constant per (alpha, beta) datum
};

struct CompareResult {
    Fixture fixture;
    std::vector<Int> computed;
    bool pass = false;
    Rat calibration = Rat(1);
    std::string note;
    Certificate cert;
};

struct CompareReport {
    std::vector<CompareResult> results;
    long passed = 0;
    long failed = 0;
    std::map<std::string, Rat> calibrations; // datum key -> constant used

    bool all_pass() const { return failed == 0; }
};

namespace detail {
inline std::string datum_key(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    std::ostringstream os;
    for (const auto& x : a) os << to_string(x) << ",";
    os << ";";
    for (const auto& x : b) os << to_string(x) << ",";
    return os.str();
}
} // namespace detail

// Per-fixture exact integer comparison of computed motivic Euler factors,
// with at most one global calibration constant per datum. Failures carry the
// full precision certificate so fixture errors are distinguishable from
// precision shortfalls.
inline CompareReport run_comparisons(const std::vector<Fixture>& fixtures, const CompareConfig& cfg = {}) {
    CompareReport rep;
    std::map<std::pair<std::string, long>, FrobeniusMatrix> cache;

    auto compute = [&](const Fixture& f, const Rat& calib) -> std::pair<std::vector<Int>, Certificate> {
        HGData d = build_hgdata(f.alpha, f.beta);
        PadicContext ctx(f.p, cfg.precision, cfg.guard);
        auto key = std::make_pair(detail::datum_key(f.alpha, f.beta), f.p);
        auto it = cache.find(key);
        if (it == cache.end()) {
            AssembleOptions opts;
            opts.variant = cfg.variant;
            it = cache.emplace(key, assemble_auto(d, ctx, opts)).first;
        }
        Int tnum = f.t.get_num(), tden = f.t.get_den();
        Int pz(f.p), t0z;
        Int deninv;
        mpz_invert(deninv.get_mpz_t(), tden.get_mpz_t(), pz.get_mpz_t());
        mpz_fdiv_r(t0z.get_mpz_t(), Int(tnum * deninv).get_mpz_t(), pz.get_mpz_t());
        long t0 = t0z.get_si();
        EulerFactor ef =
            euler_factor(specialize(it->second, t0, ctx), d, ctx, t0, cfg.variant, calib, it->second.cert);
        return {ef.coeffs, ef.cert};
    };

    for (const auto& f : fixtures) {
        std::string key = detail::datum_key(f.alpha, f.beta);
        Rat calib = rep.calibrations.count(key) ? rep.calibrations[key] : Rat(1);
        CompareResult r;
        r.fixture = f;
        try {
            auto [coeffs, cert] = compute(f, calib);
            r.computed = coeffs;
            r.cert = cert;
            r.calibration = calib;
            r.pass = (coeffs == f.coeffs);
            if (!r.pass && cfg.allow_calibration && !rep.calibrations.count(key)) {
                // derive the datum's constant from the first mismatch: s with s^i c_i = expected_i
                if (coeffs.size() > 1 && coeffs[1] != 0 && f.coeffs[1] != 0) {
                    Rat s(f.coeffs[1], coeffs[1]);
                    s.canonicalize();
                    auto [again, cert2] = compute(f, s);
                    if (again == f.coeffs) {
                        r.computed = again;
                        r.cert = cert2;
                        r.calibration = s;
                        r.pass = true;
                        r.note = "calibrated by " + to_string(s);
                        rep.calibrations[key] = s;
                    }
                }
            }
            if (r.pass && !rep.calibrations.count(key)) rep.calibrations[key] = calib;
        } catch (const std::exception& ex) {
            r.pass = false;
            r.note = ex.what();
        }
        (r.pass ? rep.passed : rep.failed)++;
        rep.results.push_back(std::move(r));
    }
    return rep;
}

} // namespace hypergeom
