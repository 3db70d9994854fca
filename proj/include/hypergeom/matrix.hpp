#pragma once

#include <optional>
#include <vector>

#include "series.hpp"

namespace hypergeom {

// Dense square matrix over a coefficient ring K.
template <class K>
class Matrix {
    long n_ = 0;
    std::vector<K> a_;

  public:
    Matrix() = default;
    Matrix(long n, const K& proto) : n_(n), a_(static_cast<std::size_t>(n * n), k_zero(proto)) {
        if (n < 1) throw validation_error("Matrix: dimension must be >= 1");
    }
    static Matrix identity(long n, const K& proto) {
        Matrix r(n, proto);
        for (long i = 0; i < n; i++) r.at(i, i) = k_one(proto);
        return r;
    }

    long n() const { return n_; }
    const K& proto() const { return a_[0]; }
    K& at(long i, long j) { return a_[static_cast<std::size_t>(i * n_ + j)]; }
    const K& at(long i, long j) const { return a_[static_cast<std::size_t>(i * n_ + j)]; }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        Matrix r = a;
        for (std::size_t k = 0; k < r.a_.size(); k++) r.a_[k] = r.a_[k] + b.a_[k];
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        Matrix r = a;
        for (std::size_t k = 0; k < r.a_.size(); k++) r.a_[k] = r.a_[k] - b.a_[k];
        return r;
    }
    friend Matrix operator-(const Matrix& a) {
        Matrix r = a;
        for (auto& x : r.a_) x = -x;
        return r;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        Matrix r(a.n_, a.proto());
        for (long i = 0; i < a.n_; i++)
            for (long k = 0; k < a.n_; k++) {
                if (k_is_zero(a.at(i, k))) continue;
                for (long j = 0; j < a.n_; j++) r.at(i, j) = r.at(i, j) + a.at(i, k) * b.at(k, j);
            }
        return r;
    }
    friend Matrix operator*(const Matrix& a, const K& s) {
        Matrix r = a;
        for (auto& x : r.a_) x = x * s;
        return r;
    }

    // accumulate: this += A*B
    void addmul(const Matrix& A, const Matrix& B) {
        for (long i = 0; i < n_; i++)
            for (long k = 0; k < n_; k++) {
                if (k_is_zero(A.at(i, k))) continue;
                for (long j = 0; j < n_; j++) at(i, j) = at(i, j) + A.at(i, k) * B.at(k, j);
            }
    }

    // Gauss-Jordan inverse with best-pivot selection (lowest valuation for
    // p-adic entries). Throws precision_error on a non-invertible matrix.
    Matrix inverse() const {
        Matrix m = *this;
        Matrix r = identity(n_, proto());
        for (long col = 0; col < n_; col++) {
            long piv = -1;
            for (long i = col; i < n_; i++) {
                if (!k_is_unit(m.at(i, col))) continue;
                if (piv < 0 || k_better_pivot(m.at(i, col), m.at(piv, col))) piv = i;
            }
            if (piv < 0) throw precision_error("Matrix::inverse: singular to working precision");
            if (piv != col)
                for (long j = 0; j < n_; j++) {
                    std::swap(m.at(piv, j), m.at(col, j));
                    std::swap(r.at(piv, j), r.at(col, j));
                }
            K d = k_inv(m.at(col, col));
            for (long j = 0; j < n_; j++) {
                m.at(col, j) = m.at(col, j) * d;
                r.at(col, j) = r.at(col, j) * d;
            }
            for (long i = 0; i < n_; i++) {
                if (i == col || k_is_zero(m.at(i, col))) continue;
                K f = m.at(i, col);
                for (long j = 0; j < n_; j++) {
                    m.at(i, j) = m.at(i, j) - f * m.at(col, j);
                    r.at(i, j) = r.at(i, j) - f * r.at(col, j);
                }
            }
        }
        return r;
    }

    K trace() const {
        K t = k_zero(proto());
        for (long i = 0; i < n_; i++) t = t + at(i, i);
        return t;
    }
};

// Dense polynomial helper for characteristic polynomials.
template <class K>
struct Poly {
    std::vector<K> c; // c[i] * T^i

    static Poly constant(const K& v) { return Poly{{v}}; }
    const K& proto() const { return c[0]; }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r = a.c.size() >= b.c.size() ? a : b;
        const Poly& s = a.c.size() >= b.c.size() ? b : a;
        for (std::size_t i = 0; i < s.c.size(); i++) r.c[i] = r.c[i] + s.c[i];
        return r;
    }
    friend Poly operator-(const Poly& a) {
        Poly r = a;
        for (auto& x : r.c) x = -x;
        return r;
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        r.c.assign(a.c.size() + b.c.size() - 1, k_zero(a.proto()));
        for (std::size_t i = 0; i < a.c.size(); i++) {
            if (k_is_zero(a.c[i])) continue;
            for (std::size_t j = 0; j < b.c.size(); j++) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
        }
        return r;
    }
};

namespace detail {
template <class K>
Poly<K> poly_det(const std::vector<Poly<K>>& m, long n) {
    if (n == 1) return m[0];
    Poly<K> acc;
    acc.c.assign(1, k_zero(m[0].proto()));
    std::vector<Poly<K>> minor(static_cast<std::size_t>((n - 1) * (n - 1)), acc);
    for (long i = 0; i < n; i++) {
        for (long r = 0, rr = 0; r < n; r++) {
            if (r == i) continue;
            for (long c = 1; c < n; c++) minor[static_cast<std::size_t>(rr * (n - 1) + c - 1)] = m[static_cast<std::size_t>(r * n + c)];
            rr++;
        }
        Poly<K> term = m[static_cast<std::size_t>(i * n)] * poly_det(minor, n - 1);
        acc = (i % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}
} // namespace detail

// Coefficients of det(T*I - A), degree n, leading coefficient 1
// (division-free cofactor expansion; fine at the dimensions used here).
template <class K>
std::vector<K> charpoly(const Matrix<K>& A) {
    long n = A.n();
    std::vector<Poly<K>> m;
    m.reserve(static_cast<std::size_t>(n * n));
    for (long i = 0; i < n; i++)
        for (long j = 0; j < n; j++) {
            Poly<K> e;
            if (i == j)
                e.c = {-A.at(i, j), k_one(A.proto())};
            else
                e.c = {-A.at(i, j)};
            m.push_back(e);
        }
    Poly<K> d = detail::poly_det(m, n);
    std::vector<K> out(static_cast<std::size_t>(n + 1), k_zero(A.proto()));
    for (std::size_t i = 0; i < d.c.size(); i++) out[i] = d.c[i];
    return out;
}

// Reverse characteristic polynomial det(I - A*T) = sum_i (-1)^i e_i(A) T^i.
template <class K>
std::vector<K> rev_charpoly(const Matrix<K>& A) {
    std::vector<K> cp = charpoly(A); // cp[k] T^k, cp[n]=1; det(I-AT) = T^n cp(1/T)|sign
    long n = A.n();
    std::vector<K> out(static_cast<std::size_t>(n + 1), k_zero(A.proto()));
    // det(I - AT) = sum_k cp[k] * T^(n-k) * (-1)^n ... derive by substitution:
    // det(I - AT) = (-T)^n det((1/(-T))I - ... ) ; cleanest: det(I-AT) = sum_k cp[n-k] (-1)^? —
    // use e_i: cp[n-i] = (-1)^i e_i  =>  det(I-AT) coefficient of T^i is (-1)^i e_i = cp[n-i].
    for (long i = 0; i <= n; i++) out[static_cast<std::size_t>(i)] = cp[static_cast<std::size_t>(n - i)];
    return out;
}

// Matrix-valued truncated Laurent series: coefficient matrices on exponents
// [low, low+len), known modulo t^known_order().
template <class K>
class MatrixSeries {
    long n_ = 0;
    long low_ = 0;
    bool exact_ = false;
    char var_ = 't';
    std::vector<Matrix<K>> c_;

  public:
    MatrixSeries() = default;
    MatrixSeries(long n, const K& proto, long low, long len, char var = 't', bool exact = false)
        : n_(n), low_(low), exact_(exact), var_(var), c_(static_cast<std::size_t>(len), Matrix<K>(n, proto)) {
        if (len < 1) throw validation_error("MatrixSeries: empty window");
    }
    static MatrixSeries constant(const Matrix<K>& m, long len, char var = 't', bool exact = false) {
        MatrixSeries r(m.n(), m.proto(), 0, len, var, exact);
        r.c_[0] = m;
        return r;
    }

    long n() const { return n_; }
    long low() const { return low_; }
    long size() const { return static_cast<long>(c_.size()); }
    long end() const { return low_ + size(); }
    bool exact() const { return exact_; }
    char var() const { return var_; }
    long known_order() const { return exact_ ? kInfOrd : end(); }
    const K& proto() const { return c_[0].proto(); }

    Matrix<K>& coef(long i) { return c_[static_cast<std::size_t>(i)]; } // raw index
    const Matrix<K>& coef(long i) const { return c_[static_cast<std::size_t>(i)]; }
    Matrix<K> coeff_at(long e) const {
        if (e < low_ || e >= end()) {
            if (e >= end() && !exact_) throw precision_error("MatrixSeries::coeff_at beyond truncation");
            return Matrix<K>(n_, proto());
        }
        return c_[static_cast<std::size_t>(e - low_)];
    }

    Series<K> entry(long i, long j) const {
        Series<K> s(proto(), low_, size(), var_, exact_);
        for (long k = 0; k < size(); k++) s.set_coeff(low_ + k, c_[static_cast<std::size_t>(k)].at(i, j));
        return s;
    }

    static MatrixSeries from_entries(const std::vector<Series<K>>& es, long n) {
        long low = es[0].low(), known = es[0].known_order();
        bool exact = true;
        long top = 0;
        for (const auto& e : es) {
            low = std::min(low, e.low());
            known = std::min(known, e.known_order());
            exact = exact && e.exact();
            top = std::max(top, e.end());
        }
        if (!exact) top = known;
        MatrixSeries r(n, es[0].proto(), low, top - low, es[0].var(), exact);
        for (long i = 0; i < n; i++)
            for (long j = 0; j < n; j++) {
                const Series<K>& s = es[static_cast<std::size_t>(i * n + j)];
                for (long e = s.low(); e < std::min(s.end(), top); e++)
                    r.c_[static_cast<std::size_t>(e - low)].at(i, j) = s.coeff(e);
            }
        return r;
    }

    MatrixSeries truncated(long order) const {
        if (order >= known_order()) return *this;
        if (order <= low_) throw precision_error("MatrixSeries::truncated: nothing left");
        MatrixSeries r = *this;
        r.exact_ = false;
        r.c_.resize(static_cast<std::size_t>(order - low_), Matrix<K>(n_, proto()));
        return r;
    }

    friend MatrixSeries operator+(const MatrixSeries& a, const MatrixSeries& b) {
        long known = std::min(a.known_order(), b.known_order());
        long low = std::min(a.low_, b.low_);
        bool exact = known >= kInfOrd;
        long top = exact ? std::max(a.end(), b.end()) : known;
        if (top <= low) throw precision_error("MatrixSeries add: truncation exhausted");
        MatrixSeries r(a.n_, a.proto(), low, top - low, a.var_, exact);
        for (long e = low; e < top; e++) {
            Matrix<K>& dst = r.c_[static_cast<std::size_t>(e - low)];
            if (e >= a.low_ && e < a.end()) dst = dst + a.c_[static_cast<std::size_t>(e - a.low_)];
            if (e >= b.low_ && e < b.end()) dst = dst + b.c_[static_cast<std::size_t>(e - b.low_)];
        }
        return r;
    }
    friend MatrixSeries operator-(const MatrixSeries& a) {
        MatrixSeries r = a;
        for (auto& m : r.c_) m = -m;
        return r;
    }
    friend MatrixSeries operator-(const MatrixSeries& a, const MatrixSeries& b) { return a + (-b); }

    friend MatrixSeries operator*(const MatrixSeries& a, const MatrixSeries& b) {
        long low = a.low_ + b.low_;
        long known = std::min(sat_add(a.known_order(), b.low_), sat_add(b.known_order(), a.low_));
        bool exact = known >= kInfOrd;
        long top = exact ? (a.end() + b.end() - 1) : known;
        if (top <= low) throw precision_error("MatrixSeries mul: truncation exhausted");
        MatrixSeries r(a.n_, a.proto(), low, top - low, a.var_, exact);
        for (long i = 0; i < a.size(); i++) {
            long jmax = std::min(b.size(), top - (a.low_ + i) - b.low_);
            for (long j = 0; j < jmax; j++)
                r.c_[static_cast<std::size_t>(i + j)].addmul(a.c_[static_cast<std::size_t>(i)],
                                                             b.c_[static_cast<std::size_t>(j)]);
        }
        return r;
    }

    friend MatrixSeries operator*(const MatrixSeries& a, const K& s) {
        MatrixSeries r = a;
        for (auto& m : r.c_) m = m * s;
        return r;
    }

    MatrixSeries derivation() const { // t d/dt
        MatrixSeries r = *this;
        for (long i = 0; i < size(); i++) {
            K f = k_from_long(low_ + i, proto());
            r.c_[static_cast<std::size_t>(i)] = r.c_[static_cast<std::size_t>(i)] * f;
        }
        return r;
    }

    MatrixSeries frobenius_substitute(long p) const {
        long known = exact_ ? kInfOrd : sat_add(p * (known_order() - 1), 1);
        long low = p * low_;
        long top = exact_ ? (p * (end() - 1) + 1) : known;
        MatrixSeries r(n_, proto(), low, top - low, var_, exact_);
        for (long i = 0; i < size(); i++) r.c_[static_cast<std::size_t>(p * i)] = c_[static_cast<std::size_t>(i)];
        return r;
    }

    MatrixSeries shifted(long k) const {
        MatrixSeries r = *this;
        r.low_ += k;
        return r;
    }

    MatrixSeries times_tminus1_pow(long e) const {
        MatrixSeries r = *this;
        Matrix<K> z(n_, proto());
        for (long pass = 0; pass < e; pass++) {
            if (r.exact_) r.c_.push_back(z);
            Matrix<K> prev = z;
            for (auto& m : r.c_) {
                Matrix<K> cur = m;
                m = prev - m;
                prev = cur;
            }
        }
        return r;
    }

    // Inverse of a series with invertible lowest coefficient matrix.
    MatrixSeries inverse(std::optional<long> out_len = std::nullopt) const {
        long L = out_len.value_or(exact_ ? size() : known_order() - low_);
        if (!exact_ && L > known_order() - low_)
            throw precision_error("MatrixSeries::inverse: requested length exceeds known order");
        Matrix<K> inv0 = c_[0].inverse();
        MatrixSeries r(n_, proto(), -low_, L, var_);
        r.c_[0] = inv0;
        for (long k = 1; k < L; k++) {
            Matrix<K> acc(n_, proto());
            long imax = std::min<long>(k, size() - 1);
            for (long i = 1; i <= imax; i++)
                acc.addmul(c_[static_cast<std::size_t>(i)], r.c_[static_cast<std::size_t>(k - i)]);
            r.c_[static_cast<std::size_t>(k)] = -(inv0 * acc);
        }
        return r;
    }

    Matrix<K> evaluate(const K& x) const {
        Matrix<K> acc(n_, proto());
        for (long i = size() - 1; i >= 0; i--) acc = acc * x + c_[static_cast<std::size_t>(i)];
        if (low_ != 0) {
            K base = low_ > 0 ? x : k_inv(x);
            long e = low_ > 0 ? low_ : -low_;
            K pw = k_one(proto());
            while (e) {
                if (e & 1) pw = pw * base;
                base = base * base;
                e >>= 1;
            }
            acc = acc * pw;
        }
        return acc;
    }
};

} // namespace hypergeom
