#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gamma.hpp"
#include "hgseries.hpp"

namespace hypergeom {

enum class F0Variant { dwork, motivic };

// The t-power / index placement is taken verbatim from the specialization
// formula; the alternates exist as negative controls and are rejected by the
// commutation check.
enum class F0Convention { as_printed, transposed, exponent_flipped };

inline const char* to_string(F0Variant v) { return v == F0Variant::dwork ? "dwork" : "motivic"; }

// Monomial matrix F0: exactly one nonzero entry per row and column, supported
// on pairs (i, j) with beta_i = {p beta_j}; entry = scalar * t^tpow.
struct F0Matrix {
    long n = 0;
    F0Variant variant = F0Variant::motivic;
    std::vector<long> col_of_row;
    std::vector<PadicNumber> scalar; // indexed by row
    std::vector<long> tpow;          // indexed by row
};

inline F0Matrix f0_matrix(const HGData& d, const PadicContext& ctx, F0Variant variant,
                          F0Convention conv = F0Convention::as_printed) {
    if (d.m() != d.n()) throw validation_error("f0_matrix: requires m == n");
    if (d.n() == 0) throw validation_error("f0_matrix: empty data");
    BlockStructure bs = beta_blocks(d);
    for (long mu : bs.mult)
        if (mu != 1) throw validation_error("f0_matrix: beta values must be pairwise distinct");
    long p = ctx.p();
    if (!is_tame(d, p)) throw validation_error("f0_matrix: p is wild for this data");
    if (variant == F0Variant::motivic && !is_galois_stable(d))
        throw validation_error("f0_matrix: motivic variant requires Galois-stable data");
    PrimeShift ps = prime_shift(d, p);
    if (!ps.beta_permuted)
        throw validation_error("f0_matrix: {p beta_j} is not a permutation of beta");

    long n = d.n();
    std::vector<int> zb(static_cast<std::size_t>(n));
    int minzb = 0;
    for (long j = 0; j < n; j++) {
        zb[static_cast<std::size_t>(j)] = zigzag_at(d, d.beta[static_cast<std::size_t>(j)]);
        minzb = (j == 0) ? zb[0] : std::min(minzb, zb[static_cast<std::size_t>(j)]);
    }

    // row-independent motivic normalizer prod Gamma_p(beta_l) / prod Gamma_p(alpha_l)
    PadicNumber norm = PadicNumber::from_long(ctx, 1);
    if (variant == F0Variant::motivic) {
        for (const auto& b : d.beta) norm = norm * morita_gamma(ctx, b);
        for (const auto& a : d.alpha) norm = norm * morita_gamma(ctx, a).inv();
    }

    auto gamma_ratio = [&](const Rat& bref) {
        PadicNumber g = PadicNumber::from_long(ctx, 1);
        for (const auto& a : d.alpha) g = g * morita_gamma(ctx, frac_part(a - bref));
        for (const auto& b : d.beta) g = g * morita_gamma(ctx, frac_part(b - bref)).inv();
        return g;
    };

    F0Matrix f0;
    f0.n = n;
    f0.variant = variant;
    f0.col_of_row.assign(static_cast<std::size_t>(n), -1);
    f0.scalar.assign(static_cast<std::size_t>(n), PadicNumber::zero(ctx));
    f0.tpow.assign(static_cast<std::size_t>(n), 0);
    for (long j = 0; j < n; j++) {
        long i = ps.beta_row_of[static_cast<std::size_t>(j)]; // beta_i = {p beta_j}
        if (f0.col_of_row[static_cast<std::size_t>(i)] != -1)
            throw validation_error("f0_matrix: support is not a permutation");
        f0.col_of_row[static_cast<std::size_t>(i)] = j;

        long sign_idx = (conv == F0Convention::transposed) ? j : i;
        long pow_idx = (conv == F0Convention::transposed) ? i : j;
        long texp_idx = (conv == F0Convention::transposed) ? i : j;
        const Rat& bref = d.beta[static_cast<std::size_t>(sign_idx)];

        long ppow = zb[static_cast<std::size_t>(pow_idx)] - (variant == F0Variant::motivic ? minzb : 0);
        PadicNumber s = gamma_ratio(bref) * PadicNumber::from_long(ctx, p).pow(ppow);
        if (zb[static_cast<std::size_t>(sign_idx)] % 2 != 0) s = -s;
        if (variant == F0Variant::motivic) s = s * norm;
        f0.scalar[static_cast<std::size_t>(i)] = s;

        long fl = static_cast<long>(floor_rat(p * d.beta[static_cast<std::size_t>(texp_idx)]).get_si());
        long e = 1 - p + fl;
        if (conv == F0Convention::exponent_flipped) e = -e;
        f0.tpow[static_cast<std::size_t>(i)] = e;
    }
    return f0;
}

// (t-1) * companion matrix, as an exact degree-1 matrix polynomial.
template <class K>
MatrixSeries<K> companion_cleared(const HGData& d, const K& proto) {
    if (d.m() != d.n()) throw validation_error("companion_cleared: requires m == n");
    long n = d.n();
    HGOperator op = hg_operator(d.alpha, d.beta);
    MatrixSeries<K> P(n, proto, 0, 2, 't', /*exact=*/true);
    for (long i = 0; i + 1 < n; i++) {
        P.coef(0).at(i, i + 1) = k_one(proto);
        P.coef(1).at(i, i + 1) = k_from_long(-1, proto);
    }
    for (long k = 0; k < n; k++) {
        P.coef(0).at(n - 1, k) = k_from_rat(op.one_part[static_cast<std::size_t>(k)], proto); // -B_k
        P.coef(1).at(n - 1, k) = k_from_rat(op.z_part[static_cast<std::size_t>(k)], proto);   // A_k
    }
    return P;
}

// Minimum v_p over the residual (t-1)(t^p-1)[N' F - p F sigma(N) + D(F)],
// computed with exact polynomial multiples of the companion matrix so every
// stored coefficient of the residual is certified.
inline long commutation_residual_valuation(const HGData& d_primed, const MatrixSeries<PadicNumber>& F,
                                           const PadicContext& ctx) {
    PadicNumber proto = PadicNumber::zero(ctx);
    long p = ctx.p();
    MatrixSeries<PadicNumber> PN = companion_cleared(d_primed, proto);
    MatrixSeries<PadicNumber> sPN = PN.frobenius_substitute(p);

    auto times_tp_minus_1 = [&](const MatrixSeries<PadicNumber>& x) { return x.shifted(p) - x; };
    auto times_t_minus_1 = [&](const MatrixSeries<PadicNumber>& x) { return x.shifted(1) - x; };

    MatrixSeries<PadicNumber> r = times_tp_minus_1(PN * F);
    MatrixSeries<PadicNumber> t2 = times_t_minus_1(F * sPN) * PadicNumber::from_long(ctx, p);
    MatrixSeries<PadicNumber> t3 = times_t_minus_1(times_tp_minus_1(F.derivation()));
    r = r - t2 + t3;

    long best = kExactPrec;
    for (long k = 0; k < r.size(); k++)
        for (long i = 0; i < r.n(); i++)
            for (long j = 0; j < r.n(); j++) best = std::min(best, r.coef(k).at(i, j).val_lower_bound());
    return best;
}

struct Certificate {
    long M = 0;
    long e = 0;
    int escalations = 0;
    long commutation_valuation = 0;
    long tail_valuation = 0;
    bool commutation_ok = false;
    bool tail_ok = false;
    long lowest_exponent = 0;   // lowest t-exponent carrying a nonzero coefficient mod p^N
    long coefficient_floor = 0; // min v_p over all coefficients of (t-1)^e F
    int precision = 0;          // worst absolute precision across the window, capped at N

    bool pass() const { return commutation_ok && tail_ok; }
};

// (t-1)^e * U * F0 * sigma(U^{-1}), truncated at t^M, with its certificate.
struct FrobeniusMatrix {
    HGData data;
    long p = 0;
    F0Variant variant = F0Variant::motivic;
    MatrixSeries<PadicNumber> cleared;
    long M = 0;
    long e = 0;
    Certificate cert;
};

struct AssembleOptions {
    F0Variant variant = F0Variant::motivic;
    F0Convention convention = F0Convention::as_printed;
    int commutation_guard = 2;
    std::optional<long> perturb_row; // negative control: scale that F0 row by (1+p)
    long tail_window = 0;            // 0 = default max(p+1, 8)
};

inline FrobeniusMatrix assemble(const HGData& d, const PadicContext& ctx, long M, long e,
                                const AssembleOptions& opts = {}) {
    if (M < 8) throw validation_error("assemble: truncation order too small");
    if (e < 0) throw validation_error("assemble: negative clearing exponent");
    PadicNumber proto = PadicNumber::zero(ctx);
    long p = ctx.p();
    long n = d.n();

    F0Matrix f0 = f0_matrix(d, ctx, opts.variant, opts.convention);
    if (opts.perturb_row) {
        long r = *opts.perturb_row;
        f0.scalar[static_cast<std::size_t>(r)] =
            f0.scalar[static_cast<std::size_t>(r)] * PadicNumber::from_long(ctx, 1 + p);
    }

    long M1 = M + p + 4;
    SolutionMatrix<PadicNumber> sol = formal_solution_matrix(d, M1, /*rescaled=*/true, proto);
    long Tinv = (M1 + p - 1) / p + 2;
    MatrixSeries<PadicNumber> V = solution_matrix_inverse(d, sol.U, Tinv);
    MatrixSeries<PadicNumber> sV = V.frobenius_substitute(p);

    // W = F0 * sigma(U^{-1}): row i is scalar_i t^{tpow_i} times row col_of_row[i]
    std::vector<Series<PadicNumber>> entries;
    entries.reserve(static_cast<std::size_t>(n * n));
    for (long i = 0; i < n; i++)
        for (long b = 0; b < n; b++) {
            Series<PadicNumber> s = sV.entry(f0.col_of_row[static_cast<std::size_t>(i)], b);
            entries.push_back((s * f0.scalar[static_cast<std::size_t>(i)]).shifted(f0.tpow[static_cast<std::size_t>(i)]));
        }
    MatrixSeries<PadicNumber> Fraw = sol.U * MatrixSeries<PadicNumber>::from_entries(entries, n);

    PrimeShift ps = prime_shift(d, p);
    HGData primed = build_hgdata(ps.alpha_shift, ps.beta_shift);
    long commut = commutation_residual_valuation(primed, Fraw, ctx);

    MatrixSeries<PadicNumber> cleared = Fraw.times_tminus1_pow(e).truncated(M);

    Certificate cert;
    cert.M = M;
    cert.e = e;
    cert.commutation_valuation = commut;
    cert.commutation_ok = commut >= ctx.prec() - opts.commutation_guard;

    long W = opts.tail_window > 0 ? opts.tail_window : std::max<long>(p + 1, 8);
    long tail_from = std::max(cleared.low(), M - W);
    long tailv = kExactPrec;
    long lowest_nonzero = M;
    long floorv = kExactPrec;
    int prec = ctx.prec();
    for (long k = 0; k < cleared.size(); k++) {
        long expo = cleared.low() + k;
        for (long i = 0; i < n; i++)
            for (long j = 0; j < n; j++) {
                const PadicNumber& c = cleared.coef(k).at(i, j);
                long vl = c.val_lower_bound();
                floorv = std::min(floorv, vl);
                if (expo >= tail_from) tailv = std::min(tailv, vl);
                if (vl < ctx.prec() && expo < lowest_nonzero) lowest_nonzero = expo;
                prec = static_cast<int>(std::min<long>(prec, c.abs_known()));
            }
    }
    cert.tail_valuation = tailv;
    cert.tail_ok = tailv >= ctx.prec();
    cert.lowest_exponent = lowest_nonzero;
    cert.coefficient_floor = floorv;
    cert.precision = prec;

    return FrobeniusMatrix{d, p, opts.variant, std::move(cleared), M, e, std::move(cert)};
}

// Heuristic starting truncations; assemble_auto escalates from here.
inline std::pair<long, long> choose_truncations(const HGData& d, const PadicContext& ctx) {
    long N = ctx.prec(), g = ctx.guard(), n = d.n(), p = ctx.p();
    long e = n * (N + 2);
    long M = (N + g) * (p + 1) + n * e;
    return {M, e};
}

inline FrobeniusMatrix assemble_auto(const HGData& d, const PadicContext& ctx, const AssembleOptions& opts = {},
                                     std::optional<long> M_override = std::nullopt,
                                     std::optional<long> e_override = std::nullopt, int max_escalations = 8,
                                     std::vector<std::string>* log = nullptr) {
    auto [M, e] = choose_truncations(d, ctx);
    if (e_override) e = *e_override;
    if (M_override) M = *M_override;
    for (int attempt = 0;; attempt++) {
        FrobeniusMatrix fm = assemble(d, ctx, M, e, opts);
        fm.cert.escalations = attempt;
        if (fm.cert.pass()) return fm;
        if (log)
            log->push_back("escalation " + std::to_string(attempt) + ": M=" + std::to_string(M) +
                           " e=" + std::to_string(e) + " commut=" + std::to_string(fm.cert.commutation_valuation) +
                           " tail=" + std::to_string(fm.cert.tail_valuation));
        if (attempt >= max_escalations)
            throw precision_error("assemble_auto: escalation cap reached (last tail valuation " +
                                  std::to_string(fm.cert.tail_valuation) + ", commutation " +
                                  std::to_string(fm.cert.commutation_valuation) + ")");
        e *= 2;
        if (!M_override) {
            long N = ctx.prec(), g = ctx.guard();
            M = (N + g) * (ctx.p() + 1) + d.n() * e;
        } else {
            M *= 2;
        }
    }
}

// Evaluate (t-1)^e F at the Teichmueller lift of t0 and divide by (that-1)^e.
inline Matrix<PadicNumber> specialize(const FrobeniusMatrix& fm, long t0, const PadicContext& ctx) {
    long r = ((t0 % fm.p) + fm.p) % fm.p;
    if (r == 0 || r == 1) throw validation_error("specialize: t0 must avoid 0 and 1 mod p");
    PadicNumber that = teichmuller(ctx, r);
    Matrix<PadicNumber> val = fm.cleared.evaluate(that);
    PadicNumber denom = (that - PadicNumber::from_long(ctx, 1)).pow(fm.e);
    return val * denom.inv();
}

// T^n p^(nw/2) P(1/(p^w T)) = sign * P(T); returns the sign, or nullopt.
inline std::optional<int> weil_symmetry_check(const std::vector<Int>& c, long p, int w, long n) {
    if (static_cast<long>(c.size()) != n + 1) return std::nullopt;
    int sign = 0;
    for (long j = 0; 2 * j <= n; j++) {
        long dpow = w * (n - 2 * j);
        const Int& lhs = c[static_cast<std::size_t>(n - j)];
        const Int& rhs = c[static_cast<std::size_t>(j)];
        if (dpow % 2 != 0) {
            if (lhs != 0 || rhs != 0) return std::nullopt;
            continue;
        }
        Int scale = pow_int(Int(p), static_cast<unsigned long>(dpow / 2));
        Int want = rhs * scale;
        if (lhs == want && lhs == 0) continue;
        int s;
        if (lhs == want)
            s = 1;
        else if (lhs == -want)
            s = -1;
        else
            return std::nullopt;
        if (sign == 0) sign = s;
        if (sign != s) return std::nullopt;
    }
    return sign == 0 ? 1 : sign;
}

// Degree-n integer local factor det(1 - Fspec T) with its bookkeeping.
struct EulerFactor {
    std::vector<Int> coeffs; // c_0 = 1, ..., c_n
    long p = 0;
    long t0 = 0;
    int weight = 0;
    F0Variant variant = F0Variant::motivic;
    int fe_sign = 0; // functional-equation sign; 0 when the check failed
    bool weil_ok = false;
    Certificate cert;
};

inline EulerFactor euler_factor(const Matrix<PadicNumber>& fspec, const HGData& d, const PadicContext& ctx, long t0,
                                F0Variant variant, const Rat& calibration = Rat(1), const Certificate& cert = {}) {
    long n = d.n();
    int w = weight(d);
    Matrix<PadicNumber> A = fspec;
    if (calibration != 1) A = A * PadicNumber::from_rational(ctx, calibration);
    std::vector<PadicNumber> rc = rev_charpoly(A);

    EulerFactor ef;
    ef.p = ctx.p();
    ef.t0 = t0;
    ef.weight = w;
    ef.variant = variant;
    ef.cert = cert;
    ef.coeffs.assign(static_cast<std::size_t>(n + 1), 0);
    ef.coeffs[0] = 1;
    bool bounds_ok = true;
    for (long i = 1; i <= n; i++) {
        const PadicNumber& ci = rc[static_cast<std::size_t>(i)];
        if (!ci.is_zero() && ci.valuation() < 0)
            throw precision_error("euler_factor: non-integral coefficient (valuation " +
                                  std::to_string(ci.valuation()) + " at degree " + std::to_string(i) + ")");
        long abs_known = ci.is_zero() ? ci.val_lower_bound() : ci.valuation() + ci.rel_prec();
        int K = static_cast<int>(std::min<long>(ctx.prec(), abs_known));
        // unambiguous Weil window: p^K > 2 binom(n,i) p^(iw/2)
        Int b2 = binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(i));
        b2 = b2 * b2 * pow_int(Int(ctx.p()), static_cast<unsigned long>(i * w));
        Int pk = pow_int(Int(ctx.p()), static_cast<unsigned long>(K));
        if (pk * pk <= 4 * b2)
            throw precision_error("euler_factor: rounding window ambiguous at degree " + std::to_string(i));
        Int v = ci.lift_centered(K);
        if (v * v > b2) bounds_ok = false; // flagged, not silently fixed
        ef.coeffs[static_cast<std::size_t>(i)] = v;
    }
    std::optional<int> sign = weil_symmetry_check(ef.coeffs, ctx.p(), w, n);
    ef.weil_ok = bounds_ok && sign.has_value();
    ef.fe_sign = sign.value_or(0);
    return ef;
}

} // namespace hypergeom
