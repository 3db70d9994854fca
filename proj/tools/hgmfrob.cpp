// hgmfrob: p-adic Frobenius structures on hypergeometric equations and
// integer Euler factors of hypergeometric motives, from the command line.

#include <CLI11.hpp>
#include <json.hpp>

#include <hypergeom/oracle.hpp>

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <random>
#include <thread>

using namespace hypergeom;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitPrecision = 2;
constexpr int kExitMismatch = 3;

json cert_json(const Certificate& c) {
    return json{{"M", c.M},
                {"e", c.e},
                {"escalations", c.escalations},
                {"commutation_valuation", c.commutation_valuation},
                {"tail_valuation", c.tail_valuation},
                {"lowest_exponent", c.lowest_exponent},
                {"coefficient_floor", c.coefficient_floor},
                {"precision", c.precision}};
}

json euler_json(const HGData& d, const EulerFactor& ef, const Rat& t) {
    json coeffs = json::array();
    for (const auto& c : ef.coeffs) coeffs.push_back(c.get_str());
    json alpha = json::array(), beta = json::array();
    for (const auto& a : d.alpha) alpha.push_back(to_string(a));
    for (const auto& b : d.beta) beta.push_back(to_string(b));
    return json{{"type", "euler"},
                {"alpha", alpha},
                {"beta", beta},
                {"p", ef.p},
                {"t", to_string(t)},
                {"t0", ef.t0},
                {"weight", ef.weight},
                {"variant", to_string(ef.variant)},
                {"coeffs", coeffs},
                {"fe_sign", ef.fe_sign},
                {"weil_ok", ef.weil_ok},
                {"certificate", cert_json(ef.cert)}};
}

std::string euler_table(const EulerFactor& ef) {
    std::string s = "p=" + std::to_string(ef.p) + " t0=" + std::to_string(ef.t0) + "  P(T) = ";
    for (std::size_t i = 0; i < ef.coeffs.size(); i++) {
        if (i) s += " + ";
        s += ef.coeffs[i].get_str();
        if (i == 1) s += "*T";
        if (i > 1) s += "*T^" + std::to_string(i);
    }
    s += "   [sign " + std::string(ef.fe_sign > 0 ? "+" : (ef.fe_sign < 0 ? "-" : "?")) + ", commut v>=" +
         std::to_string(ef.cert.commutation_valuation) + ", tail v>=" + std::to_string(ef.cert.tail_valuation) + "]";
    return s;
}

long residue_of(const Rat& t, long p) {
    Int deninv, pz(p), r;
    if (mpz_invert(deninv.get_mpz_t(), Int(t.get_den()).get_mpz_t(), pz.get_mpz_t()) == 0)
        throw validation_error("t has p in its denominator");
    mpz_fdiv_r(r.get_mpz_t(), Int(Int(t.get_num()) * deninv).get_mpz_t(), pz.get_mpz_t());
    return r.get_si();
}

struct EulerRun {
    HGData d;
    Rat t;
    int prec;
    int guard;
    F0Variant variant;
    std::optional<long> M, e;
    bool stability = false;
};

EulerFactor one_euler(const EulerRun& run, long p, std::vector<std::string>* log = nullptr) {
    PadicContext ctx(p, run.prec, run.guard);
    AssembleOptions opts;
    opts.variant = run.variant;
    FrobeniusMatrix fm = assemble_auto(run.d, ctx, opts, run.M, run.e, 8, log);
    long t0 = residue_of(run.t, p);
    EulerFactor ef = euler_factor(specialize(fm, t0, ctx), run.d, ctx, t0, run.variant, Rat(1), fm.cert);
    if (run.stability) {
        PadicContext ctx2(p, run.prec + 4, run.guard);
        FrobeniusMatrix fm2 = assemble_auto(run.d, ctx2, opts, run.M ? std::optional<long>(*run.M * 2) : std::nullopt,
                                            run.e, 8, log);
        EulerFactor ef2 = euler_factor(specialize(fm2, t0, ctx2), run.d, ctx2, t0, run.variant, Rat(1), fm2.cert);
        if (ef2.coeffs != ef.coeffs)
            throw precision_error("stability check failed: N -> N+4 changed the Euler factor");
    }
    return ef;
}

int default_jobs() {
    if (const char* env = std::getenv("HGMFROB_JOBS")) {
        int j = std::atoi(env);
        if (j > 0) return j;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 2;
}

int run_selfcheck(bool verbose) {
    // compact invariant suite: gamma identities, teichmuller, rank-1 pipeline
    for (long p : {3L, 7L}) {
        PadicContext ctx(p, 8, 4);
        std::mt19937_64 rng(17);
        std::uniform_int_distribution<long> num(-40, 40), den(1, 24);
        for (int i = 0; i < 40; i++) {
            long dd = den(rng);
            while (dd % p == 0) dd = den(rng);
            Rat x(num(rng), dd);
            PadicNumber lhs = morita_gamma(ctx, x + 1);
            PadicNumber gx = morita_gamma(ctx, x);
            bool unit = (x != 0) && p_valuation(x, p) == 0;
            PadicNumber want = unit ? gx * PadicNumber::from_rational(ctx, -x) : -gx;
            if (!equals(lhs, want, 8)) throw precision_error("gamma functional equation failed");
        }
        for (long a = 1; a < p; a++)
            if (!equals(teichmuller(ctx, a).pow(p - 1), PadicNumber::from_long(ctx, 1), 8))
                throw precision_error("teichmuller power identity failed");
    }
    {
        HGData d = build_hgdata("1/2", "0");
        PadicContext ctx(7, 8, 4);
        FrobeniusMatrix fm = assemble_auto(d, ctx, {});
        if (!fm.cert.pass()) throw precision_error("rank-1 certificates failed");
        for (long t0 = 2; t0 <= 6; t0++) {
            Matrix<PadicNumber> sp = specialize(fm, t0, ctx);
            PadicNumber u = sp.at(0, 0);
            if (!equals(u * u, PadicNumber::from_long(ctx, 1), 8))
                throw precision_error("rank-1 unit square identity failed");
        }
    }
    if (verbose) std::cerr << "selfcheck: all invariant suites passed\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frobenius structures on hypergeometric equations / Euler factors of hypergeometric motives"};
    app.require_subcommand(1);

    std::string alpha_s, beta_s, t_s = "2", x_s, fixtures_path, format = "jsonl", variant_s = "motivic";
    long p_arg = 0, bound = 0;
    int prec = 20, guard = 8, jobs = default_jobs();
    std::optional<long> M_opt, e_opt;
    long M_arg = 0, e_arg = 0;
    bool stability = false, verbose = false;

    auto add_common = [&](CLI::App* cmd, bool needs_params) {
        if (needs_params) {
            cmd->add_option("--alpha", alpha_s, "comma-separated rationals, e.g. 1/3,2/3")->required();
            cmd->add_option("--beta", beta_s, "comma-separated rationals, e.g. 1/4,3/4")->required();
        }
        cmd->add_option("--prec", prec, "p-adic precision N (significant digits)");
        cmd->add_option("--guard", guard, "internal guard digits");
        cmd->add_option("--format", format, "jsonl | table");
        cmd->add_flag("--verbose", verbose, "escalation log on stderr");
    };

    CLI::App* cmd_data = app.add_subcommand("data", "inspect parameter data: zigzag, weight, wild primes, exponents");
    add_common(cmd_data, true);
    cmd_data->add_option("--t", t_s, "specialization point (rational)");
    cmd_data->add_option("--bound", bound, "list good primes up to this bound");

    CLI::App* cmd_gamma = app.add_subcommand("gamma", "evaluate the Morita p-adic gamma function");
    cmd_gamma->add_option("--p", p_arg, "odd prime")->required();
    cmd_gamma->add_option("--x", x_s, "rational argument in Z_(p)")->required();
    add_common(cmd_gamma, false);

    CLI::App* cmd_euler = app.add_subcommand("euler", "compute one Euler factor");
    add_common(cmd_euler, true);
    cmd_euler->add_option("--t", t_s, "specialization point (rational)")->required();
    cmd_euler->add_option("--p", p_arg, "odd prime")->required();
    cmd_euler->add_option("--M", M_arg, "t-adic truncation override");
    cmd_euler->add_option("--e", e_arg, "(t-1)-clearing exponent override");
    cmd_euler->add_option("--variant", variant_s, "motivic | dwork");
    cmd_euler->add_flag("--verify-stability", stability, "recompute at N+4 and require identical output");

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "Euler factors at all good primes up to a bound");
    add_common(cmd_sweep, true);
    cmd_sweep->add_option("--t", t_s, "specialization point (rational)")->required();
    cmd_sweep->add_option("--bound", bound, "prime bound X")->required();
    cmd_sweep->add_option("--variant", variant_s, "motivic | dwork");
    cmd_sweep->add_option("--jobs", jobs, "parallel workers (default HGMFROB_JOBS or hardware)");

    CLI::App* cmd_self = app.add_subcommand("selfcheck", "run the built-in invariant suites");
    add_common(cmd_self, false);

    CLI::App* cmd_compare = app.add_subcommand("compare", "compare against fixture Euler factors");
    cmd_compare->add_option("--fixtures", fixtures_path, "JSONL fixture file")->required();
    add_common(cmd_compare, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (M_arg > 0) M_opt = M_arg;
        if (e_arg > 0) e_opt = e_arg;
        F0Variant variant = variant_s == "dwork" ? F0Variant::dwork : F0Variant::motivic;
        bool table = format == "table";

        if (app.got_subcommand(cmd_data)) {
            HGData d = build_hgdata(alpha_s, beta_s);
            ZigzagProfile prof = zigzag_profile(d);
            LocalExponents le;
            if (d.m() == d.n()) le = local_exponents(d);
            json breaks = json::array(), values = json::array();
            for (const auto& b : prof.breaks) breaks.push_back(to_string(b));
            for (int v : prof.values) values.push_back(v);
            json wild = json::array();
            for (long w : wild_primes(d)) wild.push_back(w);
            auto rats = [](const std::vector<Rat>& v) {
                json a = json::array();
                for (const auto& x : v) a.push_back(to_string(x));
                return a;
            };
            json out{{"type", "data"},
                     {"alpha", rats(d.alpha)},
                     {"beta", rats(d.beta)},
                     {"zigzag_breaks", breaks},
                     {"zigzag_values", values},
                     {"zigzag_max", prof.zmax},
                     {"zigzag_min", prof.zmin},
                     {"weight", prof.weight},
                     {"galois_stable", is_galois_stable(d)},
                     {"wild_primes", wild},
                     {"exponents_at_0", rats(le.at0)},
                     {"exponents_at_1", rats(le.at1)},
                     {"exponents_at_infinity", rats(le.atinf)}};
            if (bound > 0) {
                json good = json::array();
                for (long p : good_primes(d, parse_rational(t_s), bound)) good.push_back(p);
                out["good_primes"] = good;
            }
            if (table) {
                std::cout << "weight " << prof.weight << ", zigzag range [" << prof.zmin << ", " << prof.zmax
                          << "], galois-stable " << (is_galois_stable(d) ? "yes" : "no") << "\nwild primes:";
                for (long w : wild_primes(d)) std::cout << " " << w;
                std::cout << "\n";
            } else {
                std::cout << out.dump() << "\n";
            }
        } else if (app.got_subcommand(cmd_gamma)) {
            PadicContext ctx(p_arg, prec, guard);
            Rat x = parse_rational(x_s);
            PadicNumber g = morita_gamma(ctx, x);
            json out{{"type", "gamma"}, {"p", p_arg}, {"x", to_string(x)}, {"prec", prec}};
            out["valuation"] = g.is_zero() ? json(nullptr) : json(g.valuation());
            out["unit"] = g.is_zero() ? "0" : g.unit_residue(g.precision()).get_str();
            if (table)
                std::cout << "Gamma_" << p_arg << "(" << to_string(x) << ") = " << g.str() << "\n";
            else
                std::cout << out.dump() << "\n";
        } else if (app.got_subcommand(cmd_euler)) {
            HGData d = build_hgdata(alpha_s, beta_s);
            EulerRun run{d, parse_rational(t_s), prec, guard, variant, M_opt, e_opt, stability};
            std::vector<std::string> log;
            EulerFactor ef = one_euler(run, p_arg, verbose ? &log : nullptr);
            for (const auto& l : log) std::cerr << l << "\n";
            std::cout << (table ? euler_table(ef) : euler_json(d, ef, run.t).dump()) << "\n";
        } else if (app.got_subcommand(cmd_sweep)) {
            HGData d = build_hgdata(alpha_s, beta_s);
            Rat t = parse_rational(t_s);
            EulerRun run{d, t, prec, guard, variant, M_opt, e_opt, false};
            std::vector<long> primes = good_primes(d, t, bound);
            std::atomic<std::size_t> next{0};
            std::vector<EulerFactor> results(primes.size());
            std::vector<std::thread> pool;
            std::mutex err_mu;
            std::vector<std::string> errors;
            int nworkers = std::max(1, std::min<int>(jobs, static_cast<int>(primes.size())));
            for (int w = 0; w < nworkers; w++)
                pool.emplace_back([&]() {
                    for (std::size_t i = next.fetch_add(1); i < primes.size(); i = next.fetch_add(1)) {
                        try {
                            results[i] = one_euler(run, primes[i]);
                        } catch (const std::exception& ex) {
                            std::lock_guard<std::mutex> lk(err_mu);
                            errors.push_back("p=" + std::to_string(primes[i]) + ": " + ex.what());
                        }
                    }
                });
            for (auto& th : pool) th.join();
            if (!errors.empty()) {
                for (const auto& e : errors) std::cerr << e << "\n";
                throw precision_error("sweep: some primes failed");
            }
            for (std::size_t i = 0; i < primes.size(); i++)
                std::cout << (table ? euler_table(results[i]) : euler_json(d, results[i], t).dump()) << "\n";
        } else if (app.got_subcommand(cmd_self)) {
            return run_selfcheck(verbose);
        } else if (app.got_subcommand(cmd_compare)) {
            std::vector<Fixture> fixtures = load_fixtures(fixtures_path);
            CompareConfig cfg;
            cfg.precision = prec;
            cfg.guard = guard;
            CompareReport rep = run_comparisons(fixtures, cfg);
            for (const auto& r : rep.results) {
                json computed = json::array(), expected = json::array();
                for (const auto& c : r.computed) computed.push_back(c.get_str());
                for (const auto& c : r.fixture.coeffs) expected.push_back(c.get_str());
                json out{{"type", "compare"},
                         {"p", r.fixture.p},
                         {"t", to_string(r.fixture.t)},
                         {"pass", r.pass},
                         {"computed", computed},
                         {"expected", expected},
                         {"calibration", to_string(r.calibration)},
                         {"certificate", cert_json(r.cert)}};
                if (!r.note.empty()) out["note"] = r.note;
                std::cout << (table ? ("p=" + std::to_string(r.fixture.p) + " t=" + to_string(r.fixture.t) +
                                       (r.pass ? "  ok" : "  MISMATCH"))
                                    : out.dump())
                          << "\n";
            }
            std::cerr << "compare: " << rep.passed << " passed, " << rep.failed << " failed\n";
            if (!rep.all_pass()) return kExitMismatch;
        }
        return kExitOk;
    } catch (const validation_error& ex) {
        std::cerr << "validation error: " << ex.what() << "\n";
        return kExitValidation;
    } catch (const precision_error& ex) {
        std::cerr << "precision error: " << ex.what() << "\n";
        return kExitPrecision;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitValidation;
    }
}
