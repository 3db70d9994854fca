#pragma once

#include <gmpxx.h>

#include <limits>
#include <memory>
#include <string>
#include <utility>

#include "errors.hpp"
#include "rational.hpp"

namespace hypergeom {

// Absolute-precision sentinel for exact zeros.
inline constexpr long kExactPrec = std::numeric_limits<long>::max() / 4;

inline long sat_add(long a, long b) {
    if (a >= kExactPrec || b >= kExactPrec) return kExactPrec;
    long s = a + b;
    return s >= kExactPrec ? kExactPrec : s;
}

// Working precision data shared by all values of one computation:
// an odd prime p, the public precision N (significant p-adic digits), and a
// guard-digit count absorbing division/cancellation losses. Internally all
// units live modulo p^(N+guard).
class PadicContext {
    struct Data {
        long p;
        int prec;
        int guard;
        Int modulus; // p^(prec+guard)
    };
    std::shared_ptr<const Data> d_;

  public:
    PadicContext() = default;
    PadicContext(long p, int prec, int guard = 6) {
        if (p < 3 || (p % 2) == 0 || !is_prime(p))
            throw validation_error("PadicContext: p must be an odd prime (got " + std::to_string(p) + ")");
        if (prec < 1) throw validation_error("PadicContext: precision must be >= 1");
        if (guard < 0) throw validation_error("PadicContext: guard must be >= 0");
        Data d;
        d.p = p;
        d.prec = prec;
        d.guard = guard;
        d.modulus = pow_int(Int(p), static_cast<unsigned long>(prec + guard));
        d_ = std::make_shared<const Data>(std::move(d));
    }

    bool valid() const { return static_cast<bool>(d_); }
    long p() const { return d_->p; }
    int prec() const { return d_->prec; }
    int guard() const { return d_->guard; }
    int wprec() const { return d_->prec + d_->guard; }
    const Int& modulus() const { return d_->modulus; }

    Int pow_p(long k) const {
        if (k < 0) throw validation_error("pow_p: negative exponent");
        return pow_int(Int(d_->p), static_cast<unsigned long>(k));
    }

    bool same(const PadicContext& o) const {
        if (d_ == o.d_) return true;
        return d_ && o.d_ && d_->p == o.d_->p && d_->prec == o.d_->prec && d_->guard == o.d_->guard;
    }
};

// Element of Q_p known to finite precision: value = p^v * unit with the unit
// known modulo p^prec (prec <= wprec), or an explicit marker "indistinguishable
// from zero modulo p^absprec". Values are immutable; all operations are pure.
class PadicNumber {
    PadicContext ctx_;
    bool zero_ = true;
    long v_ = kExactPrec; // valuation; for zero markers: absolute precision exponent
    Int u_ = 0;           // unit in [1, p^prec), p does not divide u_
    int prec_ = 0;        // meaningful digits of u_

    PadicNumber(PadicContext ctx, bool zero, long v, Int u, int prec)
        : ctx_(std::move(ctx)), zero_(zero), v_(v), u_(std::move(u)), prec_(prec) {}

    static Int mod_pow_p(const PadicContext& c, const Int& x, int k) {
        Int m = (k >= c.wprec()) ? c.modulus() : c.pow_p(k);
        Int r;
        mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
        return r;
    }

  public:
    PadicNumber() = default;

    static PadicNumber zero(const PadicContext& ctx, long absprec = kExactPrec) {
        return PadicNumber(ctx, true, absprec, 0, 0);
    }

    static PadicNumber from_unit(const PadicContext& ctx, long v, Int unit, int prec) {
        if (prec <= 0) return zero(ctx, v);
        if (prec > ctx.wprec()) prec = ctx.wprec();
        unit = mod_pow_p(ctx, unit, prec);
        if (unit == 0) return zero(ctx, v + prec);
        long s = p_valuation(unit, ctx.p());
        if (s > 0) {
            mpz_class q;
            mpz_divexact(q.get_mpz_t(), unit.get_mpz_t(), ctx.pow_p(s).get_mpz_t());
            unit = q;
        }
        if (prec - s <= 0) return zero(ctx, v + prec);
        return PadicNumber(ctx, false, v + s, std::move(unit), static_cast<int>(prec - s));
    }

    static PadicNumber from_integer(const PadicContext& ctx, const Int& n) {
        if (n == 0) return zero(ctx);
        return from_unit(ctx, 0, n, ctx.wprec());
    }

    static PadicNumber from_long(const PadicContext& ctx, long n) { return from_integer(ctx, Int(n)); }

    // Embeds a rational; p dividing the denominator yields negative valuation.
    static PadicNumber from_rational(const PadicContext& ctx, const Rat& r) {
        if (r == 0) return zero(ctx);
        Int num = r.get_num(), den = r.get_den();
        long vn = p_valuation(num, ctx.p()), vd = p_valuation(den, ctx.p());
        if (vn > 0) mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), ctx.pow_p(vn).get_mpz_t());
        if (vd > 0) mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), ctx.pow_p(vd).get_mpz_t());
        Int deninv;
        if (mpz_invert(deninv.get_mpz_t(), den.get_mpz_t(), ctx.modulus().get_mpz_t()) == 0)
            throw validation_error("from_rational: denominator not invertible"); // unreachable for p∤den
        return from_unit(ctx, vn - vd, num * deninv, ctx.wprec());
    }

    const PadicContext& context() const { return ctx_; }
    bool is_zero() const { return zero_; }

    long valuation() const {
        if (zero_) throw precision_error("valuation of a value indistinguishable from zero");
        return v_;
    }

    // Lower bound for the valuation (= absolute precision for zero markers).
    long val_lower_bound() const { return v_; }

    // Meaningful unit digits. Public results should be read through
    // precision() = min(rel_prec, N).
    int rel_prec() const { return zero_ ? 0 : prec_; }
    int precision() const { return zero_ ? ctx_.prec() : std::min(prec_, ctx_.prec()); }
    const Int& unit() const { return u_; }

    // The unit residue mod p^k (k <= known digits).
    Int unit_residue(int k) const {
        if (zero_) throw precision_error("unit_residue of zero marker");
        if (k > prec_) throw precision_error("unit_residue: requested digits exceed known precision");
        return mod_pow_p(ctx_, u_, k);
    }

    friend PadicNumber operator-(const PadicNumber& a) {
        if (a.zero_) return a;
        Int m = a.ctx_.pow_p(a.prec_);
        return PadicNumber(a.ctx_, false, a.v_, m - a.u_, a.prec_);
    }

    friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
        if (!a.ctx_.same(b.ctx_)) throw validation_error("PadicNumber: context mismatch");
        if (a.zero_ && b.zero_) return zero(a.ctx_, std::min(a.v_, b.v_));
        if (a.zero_ || b.zero_) {
            const PadicNumber& z = a.zero_ ? a : b;
            const PadicNumber& x = a.zero_ ? b : a;
            long absp = z.v_; // z ≡ 0 mod p^absp
            if (x.v_ >= absp) return zero(x.ctx_, absp);
            long newprec = std::min<long>(x.prec_, absp - x.v_);
            return PadicNumber(x.ctx_, false, x.v_, mod_pow_p(x.ctx_, x.u_, static_cast<int>(newprec)),
                               static_cast<int>(newprec));
        }
        long vmin = std::min(a.v_, b.v_);
        long K = std::min(a.v_ + a.prec_, b.v_ + b.prec_) - vmin; // absolute window
        if (K > a.ctx_.wprec()) K = a.ctx_.wprec();
        Int s = a.u_ * a.ctx_.pow_p(a.v_ - vmin) + b.u_ * b.ctx_.pow_p(b.v_ - vmin);
        return from_unit(a.ctx_, vmin, std::move(s), static_cast<int>(K));
    }

    friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

    friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
        if (!a.ctx_.same(b.ctx_)) throw validation_error("PadicNumber: context mismatch");
        if (a.zero_ || b.zero_) return zero(a.ctx_, sat_add(a.val_lower_bound(), b.val_lower_bound()));
        int prec = std::min(a.prec_, b.prec_);
        return from_unit(a.ctx_, a.v_ + b.v_, mod_pow_p(a.ctx_, a.u_ * b.u_, prec), prec);
    }

    PadicNumber inv() const {
        if (zero_) throw precision_error("inversion of a value indistinguishable from zero");
        Int m = ctx_.pow_p(prec_);
        Int r;
        mpz_invert(r.get_mpz_t(), u_.get_mpz_t(), m.get_mpz_t());
        return PadicNumber(ctx_, false, -v_, std::move(r), prec_);
    }

    friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) { return a * b.inv(); }

    PadicNumber pow(long e) const {
        if (e < 0) return inv().pow(-e);
        PadicNumber r = from_long(ctx_, 1), base = *this;
        while (e) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    // Absolute precision exponent: the value is known modulo p^abs_known().
    long abs_known() const { return zero_ ? v_ : sat_add(v_, prec_); }

    // Certified equality to `digits` significant digits after alignment
    // (default: the context's public precision): the difference vanishes
    // modulo p^(min valuation + digits), or modulo everything both sides
    // are known to when that window is narrower.
    friend bool equals(const PadicNumber& a, const PadicNumber& b, int digits = -1) {
        if (digits < 0) digits = a.ctx_.prec();
        PadicNumber d = a - b;
        long vref = std::min(a.val_lower_bound(), b.val_lower_bound());
        long window = std::min(a.abs_known(), b.abs_known());
        return d.val_lower_bound() >= std::min(sat_add(vref, digits), window);
    }

    // Centered integer lift of the value mod p^k; requires v >= 0 (integral value).
    Int lift_centered(int k) const {
        Int m = ctx_.pow_p(k);
        Int r = 0;
        if (!zero_) {
            if (v_ < 0) throw precision_error("lift_centered: negative valuation");
            if (v_ + prec_ < k) throw precision_error("lift_centered: insufficient precision");
            if (v_ < k) {
                r = u_ * ctx_.pow_p(v_);
                mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
            }
        } else if (v_ < k) {
            throw precision_error("lift_centered: zero marker below requested modulus");
        }
        if (r * 2 > m) r -= m;
        return r;
    }

    std::string str() const {
        if (zero_) return v_ >= kExactPrec ? "0" : "O(p^" + std::to_string(v_) + ")";
        std::string s = unit_residue(precision()).get_str();
        if (v_ != 0) s += "*p^" + std::to_string(v_);
        s += " + O(p^" + std::to_string(v_ + precision()) + ")";
        return s;
    }
};

// Carries a value into another context over the same p (used to shed
// internal guard digits added for intermediate computations).
inline PadicNumber recontext(const PadicContext& to, const PadicNumber& x) {
    if (to.p() != x.context().p()) throw validation_error("recontext: different primes");
    if (x.is_zero()) return PadicNumber::zero(to, x.val_lower_bound());
    return PadicNumber::from_unit(to, x.valuation(), x.unit(), std::min<int>(x.rel_prec(), to.wprec()));
}

// The unique (p-1)-st root of unity congruent to a mod p, computed by
// iterating x <- x^p until stable mod p^(N+guard).
inline PadicNumber teichmuller(const PadicContext& ctx, const Int& a) {
    Int x;
    mpz_fdiv_r(x.get_mpz_t(), a.get_mpz_t(), ctx.modulus().get_mpz_t());
    if (mpz_divisible_ui_p(x.get_mpz_t(), static_cast<unsigned long>(ctx.p())))
        throw validation_error("teichmuller: residue divisible by p");
    for (int i = 0; i <= ctx.wprec() + 1; i++) {
        Int y;
        mpz_powm_ui(y.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(ctx.p()), ctx.modulus().get_mpz_t());
        if (y == x) return PadicNumber::from_unit(ctx, 0, x, ctx.wprec());
        x = y;
    }
    throw precision_error("teichmuller: iteration failed to stabilize"); // unreachable
}

inline PadicNumber teichmuller(const PadicContext& ctx, long a) { return teichmuller(ctx, Int(a)); }

} // namespace hypergeom
