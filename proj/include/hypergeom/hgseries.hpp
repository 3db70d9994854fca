#pragma once

#include "eps.hpp"
#include "hgdata.hpp"
#include "matrix.hpp"

namespace hypergeom {

// Coefficients of prod_i (x + r_i), ascending in x.
inline std::vector<Rat> poly_from_shifted_roots(const std::vector<Rat>& roots) {
    std::vector<Rat> c{Rat(1)};
    for (const auto& r : roots) {
        std::vector<Rat> nc(c.size() + 1, Rat(0));
        for (std::size_t k = 0; k < c.size(); k++) {
            nc[k + 1] += c[k];
            nc[k] += r * c[k];
        }
        c = std::move(nc);
    }
    return c;
}

// The hypergeometric operator z prod(D + alpha_i) - prod(D + beta_j - 1),
// expanded as sum_k (z * z_part[k] + one_part[k]) D^k.
struct HGOperator {
    std::vector<Rat> z_part;
    std::vector<Rat> one_part;
    long m = 0, n = 0;

    long degree() const { return static_cast<long>(z_part.size()) - 1; }
};

inline HGOperator hg_operator(const std::vector<Rat>& alphas, const std::vector<Rat>& betas) {
    if (alphas.empty() && betas.empty()) throw validation_error("hg_operator: empty parameters");
    std::vector<Rat> A = poly_from_shifted_roots(alphas);
    std::vector<Rat> bm1 = betas;
    for (auto& b : bm1) b -= 1;
    std::vector<Rat> B = poly_from_shifted_roots(bm1);
    HGOperator op;
    op.m = static_cast<long>(alphas.size());
    op.n = static_cast<long>(betas.size());
    std::size_t deg = std::max(alphas.size(), betas.size());
    op.z_part.assign(deg + 1, Rat(0));
    op.one_part.assign(deg + 1, Rat(0));
    for (std::size_t k = 0; k < A.size(); k++) op.z_part[k] = A[k];
    for (std::size_t k = 0; k < B.size(); k++) op.one_part[k] = -B[k];
    return op;
}

// P(f) truncated mod t^M.
template <class K>
Series<K> apply_operator(const HGOperator& op, const Series<K>& f, long M) {
    const K& proto = f.proto();
    Series<K> acc(proto, f.low(), std::min(f.known_order(), M) - f.low(), f.var());
    Series<K> dk = f; // D^k f
    for (long k = 0; k <= op.degree(); k++) {
        if (op.one_part[static_cast<std::size_t>(k)] != 0)
            acc = acc + dk * k_from_rat(op.one_part[static_cast<std::size_t>(k)], proto);
        if (op.z_part[static_cast<std::size_t>(k)] != 0)
            acc = acc + (dk * k_from_rat(op.z_part[static_cast<std::size_t>(k)], proto)).shifted(1);
        if (k < op.degree()) dk = dk.derivation();
    }
    return acc.truncated(M);
}

// Clausen-Thomae coefficients with lower parameters `betas_lower` (the k! is
// implicit): A_0 = 1, A_{k+1} = A_k prod(alpha_i+k) / (prod(beta_j+k) (k+1)).
template <class K>
std::vector<K> clausen_thomae_coeffs(const std::vector<Rat>& alphas, const std::vector<Rat>& betas_lower, long M,
                                     const K& proto) {
    for (const auto& b : betas_lower)
        if (is_integer(b) && b <= 0)
            throw validation_error("clausen_thomae: lower parameter is a nonpositive integer");
    std::vector<K> A;
    A.reserve(static_cast<std::size_t>(M));
    A.push_back(k_one(proto));
    for (long k = 0; k + 1 < M; k++) {
        Rat num(1), den(k + 1);
        for (const auto& a : alphas) num *= a + k;
        for (const auto& b : betas_lower) den *= b + k;
        if (den == 0) throw validation_error("clausen_thomae: beta_j + k vanished");
        A.push_back(A.back() * k_from_rat(num / den, proto));
    }
    return A;
}

// Companion matrix of the normalized equation (divide P by its leading
// (z-1) D^n coefficient), with 1/(z-1) expanded geometrically at 0.
template <class K>
MatrixSeries<K> companion_matrix(const HGData& d, long M, const K& proto) {
    if (d.m() != d.n()) throw validation_error("companion_matrix: requires m == n");
    long n = d.n();
    HGOperator op = hg_operator(d.alpha, d.beta);
    MatrixSeries<K> N(n, proto, 0, M, 't');
    for (long i = 0; i + 1 < n; i++) N.coef(0).at(i, i + 1) = k_from_long(-1, proto);
    for (long k = 0; k < n; k++) {
        Rat Ak = op.z_part[static_cast<std::size_t>(k)];
        Rat Bk = -op.one_part[static_cast<std::size_t>(k)];
        // a_k = (z Ak - Bk)/(z-1) = Bk + (Bk - Ak) z + (Bk - Ak) z^2 + ...
        N.coef(0).at(n - 1, k) = k_from_rat(Bk, proto);
        if (Bk != Ak) {
            K v = k_from_rat(Bk - Ak, proto);
            for (long i = 1; i < M; i++) N.coef(i).at(n - 1, k) = v;
        }
    }
    return N;
}

struct BlockStructure {
    std::vector<Rat> values; // distinct beta values, ascending
    std::vector<long> start; // 0-based first column of each block
    std::vector<long> mult;

    long blocks() const { return static_cast<long>(values.size()); }
};

inline BlockStructure beta_blocks(const HGData& d) {
    BlockStructure bs;
    for (long j = 0; j < d.n(); j++) {
        const Rat& b = d.beta[static_cast<std::size_t>(j)];
        if (bs.values.empty() || bs.values.back() != b) {
            bs.values.push_back(b);
            bs.start.push_back(j);
            bs.mult.push_back(1);
        } else {
            bs.mult.back()++;
        }
    }
    return bs;
}

// The gauge-normal-form target: block diagonal beta_h - 1 with nilpotent
// superdiagonal entries -1, -2, ..., -(mu_h - 1).
template <class K>
Matrix<K> block_normal_form(const HGData& d, const K& proto) {
    Matrix<K> N(d.n(), proto);
    BlockStructure bs = beta_blocks(d);
    for (long h = 0; h < bs.blocks(); h++) {
        long s = bs.start[static_cast<std::size_t>(h)], mu = bs.mult[static_cast<std::size_t>(h)];
        K diag = k_from_rat(bs.values[static_cast<std::size_t>(h)] - 1, proto);
        for (long i = 0; i < mu; i++) {
            N.at(s + i, s + i) = diag;
            if (i + 1 < mu) N.at(s + i, s + i + 1) = k_from_long(-(i + 1), proto);
        }
    }
    return N;
}

// The rescale factor prod_i (alpha_i - b)_+ / prod_j (beta_j - b)_+ with
// (x)_+ = x for x > 0 and 1 otherwise.
inline Rat rescale_factor(const HGData& d, const Rat& b) {
    Rat r(1);
    for (const auto& a : d.alpha)
        if (a > b) r *= a - b;
    for (const auto& bj : d.beta)
        if (bj > b) r /= bj - b;
    return r;
}

template <class K>
struct SolutionMatrix {
    MatrixSeries<K> U;
    BlockStructure blocks;
    bool rescaled = false;
};

// The formal solution matrix at 0: columns are the block series
// f_{i_h+j} = (1/j!) [eps^j] of the Pochhammer-ratio series, combined through
// powers of (D + 1 - beta_h). For pairwise-distinct beta this degenerates to
// U_{ik} = (D + 1 - beta_k)^{i-1}(f_k).
template <class K>
SolutionMatrix<K> formal_solution_matrix(const HGData& d, long M, bool rescaled, const K& proto) {
    long n = d.n();
    BlockStructure bs = beta_blocks(d);
    std::vector<Series<K>> entries(static_cast<std::size_t>(n * n), Series<K>::zero(proto, M));

    for (long h = 0; h < bs.blocks(); h++) {
        const Rat bh = bs.values[static_cast<std::size_t>(h)];
        long s = bs.start[static_cast<std::size_t>(h)];
        int mu = static_cast<int>(bs.mult[static_cast<std::size_t>(h)]);

        // ratio(k, eps) = prod_i (alpha_i - bh + 1 + eps)_k / prod_j (beta_j - bh + 1 + eps)_k
        EpsPoly<K> one = EpsPoly<K>::constant(k_one(proto), mu);
        std::vector<EpsPoly<K>> ratio;
        ratio.reserve(static_cast<std::size_t>(M));
        ratio.push_back(one);
        for (long k = 0; k + 1 < M; k++) {
            EpsPoly<K> r = ratio.back();
            for (const auto& a : d.alpha) {
                EpsPoly<K> lin = EpsPoly<K>::constant(k_from_rat(a - bh + 1 + k, proto), mu);
                if (mu > 1) lin[1] = k_one(proto);
                r = r * lin;
            }
            for (const auto& b : d.beta) {
                EpsPoly<K> lin = EpsPoly<K>::constant(k_from_rat(b - bh + 1 + k, proto), mu);
                if (mu > 1) lin[1] = k_one(proto);
                if (!k_is_unit(lin[0]))
                    throw validation_error("formal_solution_matrix: vanishing denominator Pochhammer");
                r = r * lin.inv();
            }
            ratio.push_back(r);
        }

        // f_{s+j}, then the (D + 1 - bh)-power ladder. The j! here (rather
        // than 1/j!) is what makes the column formula below gauge to the
        // stated block normal form; the normal-form test pins this reading.
        std::vector<std::vector<Series<K>>> dpow(static_cast<std::size_t>(mu)); // dpow[j][r]
        for (int j = 0; j < mu; j++) {
            Series<K> f(proto, 0, M, 't');
            K fact = k_from_rat(pochhammer(Rat(1), j), proto); // j!
            for (long k = 0; k < M; k++) f.set_coeff(k, ratio[static_cast<std::size_t>(k)][j] * fact);
            dpow[static_cast<std::size_t>(j)].push_back(f);
            K shift = k_from_rat(1 - bh, proto);
            for (long r = 1; r < n; r++) {
                const Series<K>& prev = dpow[static_cast<std::size_t>(j)].back();
                dpow[static_cast<std::size_t>(j)].push_back(prev.derivation() + prev * shift);
            }
        }

        K resc = rescaled ? k_from_rat(rescale_factor(d, bh), proto) : k_one(proto);
        for (long i = 1; i <= n; i++) {
            for (int j = 0; j < mu; j++) {
                Series<K> col = Series<K>::zero(proto, M);
                for (long k = std::max<long>(0, j - i + 1); k <= j; k++) {
                    // j! (i-1)! / (k! (j-k)! (i-1-j+k)!)
                    Rat num = pochhammer(Rat(1), j) * pochhammer(Rat(1), i - 1);
                    Rat den = pochhammer(Rat(1), k) * pochhammer(Rat(1), j - k) * pochhammer(Rat(1), i - 1 - j + k);
                    col = col + dpow[static_cast<std::size_t>(k)][static_cast<std::size_t>(i - 1 - j + k)] *
                                    k_from_rat(num / den, proto);
                }
                entries[static_cast<std::size_t>((i - 1) * n + (s + j))] = col * resc;
            }
        }
    }
    SolutionMatrix<K> sm{MatrixSeries<K>::from_entries(entries, n), bs, rescaled};
    return sm;
}

// N_U = U^{-1} N U + U^{-1} D(U)
template <class K>
MatrixSeries<K> gauge_transform(const MatrixSeries<K>& N, const MatrixSeries<K>& U) {
    MatrixSeries<K> Uinv = U.inverse();
    return Uinv * N * U + Uinv * U.derivation();
}

// (1 - z)^expo as a truncated series, by the multiplicative ratio chain
// (no additions, so no precision erosion in valuation-tracked mode).
template <class K>
Series<K> binomial_series(const Rat& expo, long len, const K& proto) {
    Series<K> s(proto, 0, len, 't');
    K c = k_one(proto);
    s.set_coeff(0, c);
    for (long k = 0; k + 1 < len; k++) {
        c = c * k_from_rat(Rat(k) - expo, proto) * k_inv(k_from_long(k + 1, proto));
        s.set_coeff(k + 1, c);
    }
    return s;
}

template <class K>
Series<K> series_det(std::vector<Series<K>> m, long n) {
    if (n == 1) return m[0];
    std::optional<Series<K>> acc;
    for (long i = 0; i < n; i++) {
        std::vector<Series<K>> minor;
        minor.reserve(static_cast<std::size_t>((n - 1) * (n - 1)));
        for (long r = 0; r < n; r++) {
            if (r == i) continue;
            for (long c = 1; c < n; c++) minor.push_back(m[static_cast<std::size_t>(r * n + c)]);
        }
        Series<K> term = m[static_cast<std::size_t>(i * n)] * series_det(std::move(minor), n - 1);
        if (i % 2 != 0) term = -term;
        acc = acc ? (*acc + term) : term;
    }
    return *acc;
}

template <class K>
K constant_det(const Matrix<K>& m) {
    long n = m.n();
    if (n == 1) return m.at(0, 0);
    K acc = k_zero(m.proto());
    for (long i = 0; i < n; i++) {
        Matrix<K> minor(std::max<long>(n - 1, 1), m.proto());
        for (long r = 0, rr = 0; r < n; r++) {
            if (r == i) continue;
            for (long c = 1; c < n; c++) minor.at(rr, c - 1) = m.at(r, c);
            rr++;
        }
        K term = m.at(i, 0) * constant_det(minor);
        acc = (i % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

// Inverse of the formal solution matrix through the adjugate and the
// Wronskian closed form det U = det U(0) (1-z)^(-(n - gamma)),
// gamma = sum beta - sum alpha. Unlike the generic coefficient recurrence
// this loses no p-adic digits along the expansion.
template <class K>
MatrixSeries<K> solution_matrix_inverse(const HGData& d, const MatrixSeries<K>& U, long out_len) {
    long n = U.n();
    const K proto = k_zero(U.proto());
    MatrixSeries<K> Ut = U.truncated(std::min(U.known_order(), out_len));
    std::vector<Series<K>> adj(static_cast<std::size_t>(n * n), Series<K>::zero(proto, out_len));
    if (n == 1) {
        adj[0] = Series<K>::constant(k_one(proto), out_len);
    } else {
        for (long i = 0; i < n; i++)
            for (long j = 0; j < n; j++) {
                std::vector<Series<K>> minor;
                minor.reserve(static_cast<std::size_t>((n - 1) * (n - 1)));
                for (long r = 0; r < n; r++) {
                    if (r == i) continue;
                    for (long c = 0; c < n; c++) {
                        if (c == j) continue;
                        minor.push_back(Ut.entry(r, c));
                    }
                }
                Series<K> cof = series_det(std::move(minor), n - 1);
                if ((i + j) % 2 != 0) cof = -cof;
                adj[static_cast<std::size_t>(j * n + i)] = cof; // adjugate transposes
            }
    }
    Rat gamma(0);
    for (const auto& b : d.beta) gamma += b;
    for (const auto& a : d.alpha) gamma -= a;
    Series<K> binom = binomial_series(Rat(n) - gamma, out_len, proto);
    K det0inv = k_inv(constant_det(Ut.coeff_at(0)));
    std::vector<Series<K>> entries;
    entries.reserve(adj.size());
    for (auto& a : adj) entries.push_back((a * binom).truncated(out_len) * det0inv);
    return MatrixSeries<K>::from_entries(entries, n);
}

} // namespace hypergeom
