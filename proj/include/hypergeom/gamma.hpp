#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "padic.hpp"

namespace hypergeom {

// Element pi^k * c of Q_p(pi) with pi^(p-1) = -p, k folded into [0, p-2] by
// absorbing pi^(p-1) into the coefficient. Addition is only defined between
// equal pi-exponents (distinct graded pieces never mix in our formulas).
struct PiElement {
    int exp = 0;
    PadicNumber coeff;

    static PiElement from(const PadicNumber& x) { return {0, x}; }
    static PiElement one(const PadicContext& ctx) { return {0, PadicNumber::from_long(ctx, 1)}; }

    const PadicContext& context() const { return coeff.context(); }

    // v_p scaled by (p-1) so it stays integral: (p-1)*v_p(pi^e c) = (p-1)*v(c) + e
    long scaled_valuation() const { return coeff.valuation() * (context().p() - 1) + exp; }
};

inline PiElement pi_power(const PadicContext& ctx, long k) {
    long pm1 = ctx.p() - 1;
    long e = ((k % pm1) + pm1) % pm1;
    long q = (k - e) / pm1;
    return {static_cast<int>(e), PadicNumber::from_long(ctx, -ctx.p()).pow(q)};
}

inline PiElement pi_mul(const PiElement& a, const PiElement& b) {
    long pm1 = a.context().p() - 1;
    long e = a.exp + b.exp;
    PadicNumber c = a.coeff * b.coeff;
    while (e >= pm1) {
        e -= pm1;
        c = c * PadicNumber::from_long(a.context(), -a.context().p());
    }
    return {static_cast<int>(e), c};
}

inline PiElement pi_scale(const PiElement& a, const PadicNumber& s) { return {a.exp, a.coeff * s}; }

inline PiElement pi_add(const PiElement& a, const PiElement& b) {
    if (a.exp != b.exp) throw validation_error("PiElement add: mixed pi-exponents");
    return {a.exp, a.coeff + b.coeff};
}

inline PiElement pi_inv(const PiElement& a) {
    // 1/(pi^e c) = pi^(p-1-e) c^{-1} / (-p)   (for e>0)
    if (a.exp == 0) return {0, a.coeff.inv()};
    long pm1 = a.context().p() - 1;
    PadicNumber c = a.coeff.inv() * PadicNumber::from_long(a.context(), -a.context().p()).inv();
    return {static_cast<int>(pm1 - a.exp), c};
}

namespace detail {

// Coefficients c_0..c_J of exp(pi(t - t^p)), from the ODE recurrence
// (j+1) c_{j+1} = pi c_j - p pi c_{j+1-p}. Each coefficient is checked
// against the radius-of-convergence valuation bound v_p(c_j) >= j(p-1)/p^2.
inline std::vector<PiElement> dwork_exp_coeffs_impl(const PadicContext& ctx, long J) {
    std::vector<PiElement> c;
    c.reserve(static_cast<std::size_t>(J + 1));
    c.push_back(PiElement::one(ctx));
    PadicNumber minus_p = PadicNumber::from_long(ctx, -ctx.p());
    long p = ctx.p(), pm1 = p - 1;
    for (long j = 0; j < J; j++) {
        // pi * c_j
        PiElement t1 = c.back();
        t1.exp += 1;
        if (t1.exp >= pm1) {
            t1.exp -= static_cast<int>(pm1);
            t1.coeff = t1.coeff * minus_p;
        }
        if (j + 1 - p >= 0) {
            PiElement t2 = c[static_cast<std::size_t>(j + 1 - p)];
            t2.exp += 1;
            if (t2.exp >= pm1) {
                t2.exp -= static_cast<int>(pm1);
                t2.coeff = t2.coeff * minus_p;
            }
            t1 = pi_add(t1, pi_scale(t2, minus_p));
        }
        PiElement next = pi_scale(t1, PadicNumber::from_long(ctx, j + 1).inv());
        // (p-1)*v_p(c_{j+1}) >= (j+1)(p-1)^2/p^2
        if (!next.coeff.is_zero() && next.scaled_valuation() * p * p < (j + 1) * pm1 * pm1)
            throw precision_error("dwork_exp_coeffs: valuation bound violated");
        c.push_back(std::move(next));
    }
    return c;
}

inline std::shared_ptr<const std::vector<PiElement>> dwork_exp_coeffs_cached(const PadicContext& ctx, long J) {
    static std::mutex mu;
    static std::map<std::tuple<long, int, int>, std::shared_ptr<const std::vector<PiElement>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(ctx.p(), ctx.prec(), ctx.guard());
    auto it = cache.find(key);
    if (it != cache.end() && static_cast<long>(it->second->size()) > J) return it->second;
    auto fresh = std::make_shared<const std::vector<PiElement>>(dwork_exp_coeffs_impl(ctx, J));
    cache[key] = fresh;
    return fresh;
}

} // namespace detail

inline std::vector<PiElement> dwork_exp_coeffs(const PadicContext& ctx, long J) {
    if (J < 0) throw validation_error("dwork_exp_coeffs: negative degree bound");
    auto table = detail::dwork_exp_coeffs_cached(ctx, J);
    return std::vector<PiElement>(table->begin(), table->begin() + J + 1);
}

namespace detail {

// Number of series terms after which the tail of
// sum_i c_{pi+mu} (b)_i / (-pi)^i sinks below p^digits.
inline long gamma_series_terms(const PadicContext& ctx, long digits) {
    long p = ctx.p();
    // term valuation >= i (p^2 - 3p + 1) / (p(p-1)); positive slope for p >= 3
    Rat slope(p * p - 3 * p + 1, p * (p - 1));
    Rat need = Rat(digits + 1) / slope;
    return static_cast<long>(floor_rat(need).get_si()) + 2;
}

// Guard headroom for a series whose recurrence divides by indices up to J.
inline int index_guard(long p, long J) {
    int g = 2;
    for (long q = p; q <= J; q *= p) g++;
    return g;
}

// Gamma_p(p*delta) for delta in Z_(p), via gamma_p(p b, b) = Gamma_p(p b)
// (the mu = 0 case of the pi^mu Gamma_p factorization). Computed with extra
// internal guard digits to absorb the recurrence's index divisions.
inline PadicNumber morita_gamma_at_p_multiple(const PadicContext& outer, const Rat& delta) {
    long p = outer.p(), pm1 = p - 1;
    long I0 = gamma_series_terms(outer, outer.wprec());
    PadicContext ctx(p, outer.prec(), outer.guard() + index_guard(p, p * I0 + p));
    long I = gamma_series_terms(outer, outer.wprec()); // tail must clear the *outer* modulus
    auto table = detail::dwork_exp_coeffs_cached(ctx, p * I);
    PadicNumber sum = PadicNumber::zero(ctx);
    PadicNumber poch = PadicNumber::from_long(ctx, 1); // (delta)_i
    for (long i = 0; i <= I; i++) {
        const PiElement& cpi = (*table)[static_cast<std::size_t>(p * i)];
        if (!cpi.coeff.is_zero()) {
            // c_{pi} / (-pi)^i ; folded exponent pi - i is divisible by p-1
            long efold = cpi.exp - i;
            if (((efold % pm1) + pm1) % pm1 != 0) throw precision_error("gamma series: grading mismatch");
            long q = efold / pm1; // exact division
            PadicNumber term = cpi.coeff * PadicNumber::from_long(ctx, -p).pow(q);
            if (i % 2 != 0) term = -term;
            sum = sum + term * poch;
        }
        poch = poch * PadicNumber::from_rational(ctx, delta + i);
    }
    return recontext(outer, sum);
}

} // namespace detail

// Morita p-adic gamma function on Z_(p), to the context's working precision.
// Uses the functional-equation walk to the nearest multiple of p plus the
// Dwork-exponential series at p*delta; the O(M)-multiplication product
// formula below is the reference implementation the tests compare against.
inline PadicNumber morita_gamma(const PadicContext& ctx, const Rat& x) {
    if (mpz_divisible_ui_p(x.get_den_mpz_t(), static_cast<unsigned long>(ctx.p())))
        throw validation_error("morita_gamma: p divides denominator");
    long p = ctx.p();
    // j = x mod p in [0, p)
    Int num;
    mpz_fdiv_r(num.get_mpz_t(), x.get_num_mpz_t(), Int(p).get_mpz_t());
    Int deninv, den = x.get_den();
    mpz_invert(deninv.get_mpz_t(), den.get_mpz_t(), Int(p).get_mpz_t());
    Int jz;
    mpz_fdiv_r(jz.get_mpz_t(), Int(num * deninv).get_mpz_t(), Int(p).get_mpz_t());
    long j = jz.get_si();
    Rat delta = (x - j) / p;
    PadicNumber g = detail::morita_gamma_at_p_multiple(ctx, delta);
    if (j == 0) return g;
    // Gamma_p(p delta + j) = Gamma_p(p delta) * (-1)^j * prod_{i=1}^{j-1} (p delta + i)
    for (long i = 1; i < j; i++) g = g * PadicNumber::from_rational(ctx, p * delta + i);
    if (j % 2 != 0) g = -g;
    return g;
}

// Reference product formula: Gamma_p(x) ~ (-1)^M prod_{0<j<M, p∤j} j mod p^W
// for M = x mod p^W (continuity gives |Gamma_p(x) - Gamma_p(M)| <= |x - M|).
// Only usable when the integer surrogate is small; the cap keeps it an oracle.
inline PadicNumber morita_gamma_product(const PadicContext& ctx, const Rat& x, long max_surrogate = (1L << 24)) {
    if (mpz_divisible_ui_p(x.get_den_mpz_t(), static_cast<unsigned long>(ctx.p())))
        throw validation_error("morita_gamma_product: p divides denominator");
    Int deninv;
    mpz_invert(deninv.get_mpz_t(), Int(x.get_den()).get_mpz_t(), ctx.modulus().get_mpz_t());
    Int M;
    mpz_fdiv_r(M.get_mpz_t(), Int(x.get_num() * deninv).get_mpz_t(), ctx.modulus().get_mpz_t());
    if (M > max_surrogate) throw precision_error("morita_gamma_product: surrogate too large for product formula");
    long m = M.get_si();
    Int acc = 1;
    for (long j = 1; j < m; j++) {
        if (j % ctx.p() == 0) continue;
        acc *= j;
        mpz_fdiv_r(acc.get_mpz_t(), acc.get_mpz_t(), ctx.modulus().get_mpz_t());
    }
    if (m % 2 != 0) acc = ctx.modulus() - acc;
    return PadicNumber::from_unit(ctx, 0, acc, ctx.wprec());
}

// Dwork's gamma_p(a, b) for a,b in Z_(p) with pb - a in Z, via the
// pi^mu Gamma_p(a) factorization plus the functional equation
// gamma(a+s, b+t) = gamma(a,b) (-pi)^(t-s) (a)_s / (b)_t.
inline PiElement dwork_gamma(const PadicContext& ctx, const Rat& a, const Rat& b) {
    unsigned long pu = static_cast<unsigned long>(ctx.p());
    if (mpz_divisible_ui_p(a.get_den_mpz_t(), pu) || mpz_divisible_ui_p(b.get_den_mpz_t(), pu))
        throw validation_error("dwork_gamma: p divides a denominator");
    Rat mu_q = ctx.p() * b - a;
    if (!is_integer(mu_q)) throw validation_error("dwork_gamma: p*b - a is not an integer");
    long mu = static_cast<long>(floor_rat(mu_q).get_si());
    long p = ctx.p();

    auto direct = [&](const Rat& a0, long mu0) {
        PiElement r = pi_power(ctx, mu0);
        return pi_scale(r, morita_gamma(ctx, a0));
    };
    if (mu >= 0 && mu <= p - 1) return direct(a, mu);

    long mu0 = ((mu % p) + p) % p;
    // shift a: a = a0 + s with s = mu0 - mu, gamma(a,b) = gamma(a0,b) (-pi)^(-s) (a0)_s
    {
        long s = mu0 - mu;
        Rat a0 = a - s;
        bool ok = true;
        Rat poch;
        try {
            poch = pochhammer(a0, s);
        } catch (const validation_error&) {
            ok = false;
        }
        if (ok && poch != 0) {
            PiElement r = pi_mul(direct(a0, mu0), pi_power(ctx, -s));
            if (s % 2 != 0) r.coeff = -r.coeff; // (-pi)^(-s) = (-1)^s pi^(-s)
            return pi_scale(r, PadicNumber::from_rational(ctx, poch));
        }
    }
    // shift b: b = b0 + t with t = (mu - mu0)/p, gamma(a,b) = gamma(a,b0) (-pi)^t / (b0)_t
    {
        long t = (mu - mu0) / p;
        Rat b0 = b - t;
        Rat poch;
        try {
            poch = pochhammer(b0, t);
        } catch (const validation_error&) {
            throw validation_error("dwork_gamma: lattice-degenerate arguments");
        }
        if (poch == 0) throw validation_error("dwork_gamma: zero Pochhammer factor in denominator");
        PiElement r = pi_mul(direct(a, mu0), pi_power(ctx, t));
        if (t % 2 != 0) r.coeff = -r.coeff;
        return pi_scale(r, PadicNumber::from_rational(ctx, poch).inv());
    }
}

struct GammaSeriesResult {
    PiElement value;
    long certified_digits; // the two gamma_p routes agree mod p^certified (on the coefficient)
};

// Independent cross-check of dwork_gamma straight from the series definition
// gamma_p(a,b) = sum_i c_{pi+mu} (b)_i / (-pi)^i, mu = pb - a in {0,...,p-1}.
inline GammaSeriesResult dwork_gamma_series_check(const PadicContext& outer, const Rat& a, const Rat& b, long terms) {
    long p = outer.p(), pm1 = p - 1;
    Rat mu_q = outer.p() * b - a;
    if (!is_integer(mu_q)) throw validation_error("series check: p*b - a not integral");
    long mu = static_cast<long>(floor_rat(mu_q).get_si());
    if (mu < 0 || mu > p - 1) throw validation_error("series check requires mu in {0,...,p-1}");
    if (terms < 1) throw validation_error("series check: need at least one term");

    PadicContext ctx(p, outer.prec(), outer.guard() + detail::index_guard(p, p * terms + mu));
    auto table = detail::dwork_exp_coeffs_cached(ctx, p * (terms - 1) + mu);
    int efold = static_cast<int>(mu % pm1);
    PiElement sum{efold, PadicNumber::zero(ctx)};
    PadicNumber poch = PadicNumber::from_long(ctx, 1); // (b)_i
    for (long i = 0; i < terms; i++) {
        const PiElement& c = (*table)[static_cast<std::size_t>(p * i + mu)];
        if (!c.coeff.is_zero()) {
            long e = c.exp - i; // fold down to efold
            if ((((e - efold) % pm1) + pm1) % pm1 != 0) throw precision_error("series check: grading mismatch");
            long q = (e - efold) / pm1; // exact division
            PadicNumber term = c.coeff * PadicNumber::from_long(ctx, -p).pow(q) * poch;
            if (i % 2 != 0) term = -term;
            sum = pi_add(sum, {efold, term});
        }
        poch = poch * PadicNumber::from_rational(ctx, b + i);
    }
    // tail bound at i = terms: v_p >= (p*terms+mu)(p-1)/p^2 - terms/(p-1), minus
    // the folded exponent's fractional p-power; tail terms live in pi^efold Q_p,
    // so their p-valuations are integers and the bound may be rounded up
    Rat bound = Rat((p * terms + mu) * (p - 1), p * p) - Rat(terms, p - 1) - Rat(efold, p - 1);
    long certified = static_cast<long>(floor_rat(bound).get_si());
    if (!is_integer(bound)) certified += 1;
    if (certified < 1)
        throw precision_error("dwork_gamma_series_check: insufficient terms for requested precision");
    return {{sum.exp, recontext(outer, sum.coeff)}, std::min<long>(certified, outer.wprec())};
}

} // namespace hypergeom
