#pragma once

#include <optional>
#include <vector>

#include "ring.hpp"

namespace hypergeom {

inline constexpr long kInfOrd = kExactPrec;

// Truncated Laurent series over a coefficient ring K: a dense coefficient
// window for exponents [low, low+len), known modulo t^known_order(). Exact
// polynomials (everything outside the window literally zero) are flagged so
// that truncation bookkeeping stays tight through products. Finitely many
// negative exponents are allowed. Immutable in spirit: every operation
// returns a fresh value.
template <class K>
class Series {
    std::vector<K> c_;
    long low_ = 0;
    bool exact_ = false;
    char var_ = 't';

  public:
    Series() = default;
    Series(const K& proto, long low, long len, char var = 't', bool exact = false)
        : c_(static_cast<std::size_t>(len), k_zero(proto)), low_(low), exact_(exact), var_(var) {
        if (len < 1) throw validation_error("Series: empty coefficient window");
    }

    static Series zero(const K& proto, long len, char var = 't') { return Series(proto, 0, len, var); }
    static Series constant(const K& value, long len, char var = 't') {
        Series r(value, 0, len, var);
        r.c_[0] = value;
        return r;
    }
    static Series monomial(const K& value, long e, long len, char var = 't', bool exact = false) {
        Series r(value, e, len, var, exact);
        r.c_[0] = value;
        return r;
    }
    // Exact polynomial with coefficients coeffs[i] on t^(low+i).
    static Series polynomial(std::vector<K> coeffs, long low, char var = 't') {
        Series r;
        r.c_ = std::move(coeffs);
        r.low_ = low;
        r.exact_ = true;
        r.var_ = var;
        if (r.c_.empty()) throw validation_error("Series::polynomial: empty");
        return r;
    }

    long low() const { return low_; }
    long size() const { return static_cast<long>(c_.size()); }
    long end() const { return low_ + size(); } // one past the top stored exponent
    bool exact() const { return exact_; }
    char var() const { return var_; }
    long known_order() const { return exact_ ? kInfOrd : end(); }
    const K& proto() const { return c_[0]; }

    const K& operator[](long i) const { return c_[static_cast<std::size_t>(i)]; } // raw index
    K coeff(long e) const {
        if (e < low_) return k_zero(proto());
        if (e >= end()) {
            if (exact_) return k_zero(proto());
            throw precision_error("Series::coeff beyond truncation");
        }
        return c_[static_cast<std::size_t>(e - low_)];
    }
    void set_coeff(long e, const K& v) {
        if (e < low_ || e >= end()) throw validation_error("Series::set_coeff outside window");
        c_[static_cast<std::size_t>(e - low_)] = v;
    }

    Series truncated(long order) const {
        if (order >= known_order()) return *this;
        if (order <= low_) throw precision_error("Series::truncated: nothing left");
        Series r = *this;
        r.exact_ = false;
        r.c_.resize(static_cast<std::size_t>(order - low_), k_zero(proto()));
        return r;
    }

    // Strips known-zero lowest coefficients (used before inversion).
    Series normalized() const {
        Series r = *this;
        std::size_t k = 0;
        while (k + 1 < r.c_.size() && k_is_zero(r.c_[k])) k++;
        if (k > 0) {
            r.c_.erase(r.c_.begin(), r.c_.begin() + static_cast<long>(k));
            r.low_ += static_cast<long>(k);
        }
        return r;
    }

    friend Series operator-(const Series& a) {
        Series r = a;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend Series operator+(const Series& a, const Series& b) {
        if (a.var_ != b.var_) throw validation_error("Series: variable mismatch");
        long known = std::min(a.known_order(), b.known_order());
        long low = std::min(a.low_, b.low_);
        long top = (known >= kInfOrd) ? std::max(a.end(), b.end()) : known;
        if (top <= low) throw precision_error("Series add: truncation exhausted");
        Series r(a.proto(), low, top - low, a.var_, known >= kInfOrd);
        for (long e = low; e < top; e++) {
            K x = (e < a.end() && e >= a.low_) ? a.c_[static_cast<std::size_t>(e - a.low_)] : k_zero(a.proto());
            K y = (e < b.end() && e >= b.low_) ? b.c_[static_cast<std::size_t>(e - b.low_)] : k_zero(a.proto());
            r.c_[static_cast<std::size_t>(e - low)] = x + y;
        }
        return r;
    }
    friend Series operator-(const Series& a, const Series& b) { return a + (-b); }

    friend Series operator*(const Series& a, const Series& b) {
        if (a.var_ != b.var_) throw validation_error("Series: variable mismatch");
        long low = a.low_ + b.low_;
        long known = std::min(sat_add(a.known_order(), b.low_), sat_add(b.known_order(), a.low_));
        bool exact = known >= kInfOrd;
        long top = exact ? (a.end() + b.end() - 1) : known;
        if (top <= low) throw precision_error("Series mul: truncation exhausted");
        Series r(a.proto(), low, top - low, a.var_, exact);
        for (long i = 0; i < a.size(); i++) {
            if (k_is_zero(a.c_[static_cast<std::size_t>(i)])) continue;
            long jmax = std::min(b.size(), top - (a.low_ + i) - b.low_);
            for (long j = 0; j < jmax; j++) {
                std::size_t k = static_cast<std::size_t>(i + j);
                r.c_[k] = r.c_[k] + a.c_[static_cast<std::size_t>(i)] * b.c_[static_cast<std::size_t>(j)];
            }
        }
        return r;
    }

    friend Series operator*(const Series& a, const K& s) {
        Series r = a;
        for (auto& x : r.c_) x = x * s;
        return r;
    }

    // D = t d/dt
    Series derivation() const {
        Series r = *this;
        for (long i = 0; i < size(); i++)
            r.c_[static_cast<std::size_t>(i)] = r.c_[static_cast<std::size_t>(i)] * k_from_long(low_ + i, proto());
        return r;
    }

    // t -> t^p
    Series frobenius_substitute(long p) const {
        long known = exact_ ? kInfOrd : sat_add(p * (known_order() - 1), 1);
        long low = p * low_;
        long top = exact_ ? (p * (end() - 1) + 1) : known;
        Series r(proto(), low, top - low, var_, exact_);
        for (long i = 0; i < size(); i++) r.c_[static_cast<std::size_t>(p * i)] = c_[static_cast<std::size_t>(i)];
        return r;
    }

    Series shifted(long k) const { // multiply by t^k
        Series r = *this;
        r.low_ += k;
        return r;
    }

    // Multiply by (t-1)^e.
    Series times_tminus1_pow(long e) const {
        if (e < 0) throw validation_error("times_tminus1_pow: negative exponent");
        Series r = *this;
        for (long pass = 0; pass < e; pass++) {
            if (r.exact_) r.c_.push_back(k_zero(proto()));
            K prev = k_zero(proto());
            for (auto& x : r.c_) {
                K cur = x;
                x = prev - x;
                prev = cur;
            }
        }
        return r;
    }

    // Multiplicative inverse; the (declared) lowest coefficient must be a unit.
    Series inverse(std::optional<long> out_len = std::nullopt) const {
        long L = out_len.value_or(exact_ ? size() : known_order() - low_);
        if (!exact_ && L > known_order() - low_)
            throw precision_error("Series::inverse: requested length exceeds known order");
        if (!k_is_unit(c_[0]))
            throw precision_error("Series::inverse: lowest coefficient not invertible");
        Series r(proto(), -low_, L, var_);
        K c0 = k_inv(c_[0]);
        r.c_[0] = c0;
        for (long k = 1; k < L; k++) {
            K acc = k_zero(proto());
            long imax = std::min<long>(k, size() - 1);
            for (long i = 1; i <= imax; i++)
                acc = acc + c_[static_cast<std::size_t>(i)] * r.c_[static_cast<std::size_t>(k - i)];
            r.c_[static_cast<std::size_t>(k)] = -(c0 * acc);
        }
        return r;
    }

    // Evaluate the stored window at x (negative exponents need x invertible).
    K evaluate(const K& x) const {
        K acc = k_zero(proto());
        for (long i = size() - 1; i >= 0; i--) acc = acc * x + c_[static_cast<std::size_t>(i)];
        if (low_ == 0) return acc;
        K xl = low_ > 0 ? k_one(proto()) : k_inv(x);
        K base = low_ > 0 ? x : xl;
        long e = low_ > 0 ? low_ : -low_;
        K pw = k_one(proto());
        while (e) {
            if (e & 1) pw = pw * base;
            base = base * base;
            e >>= 1;
        }
        return acc * pw;
    }
};

} // namespace hypergeom
