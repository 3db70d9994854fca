#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "rational.hpp"

namespace hypergeom {

// Validated hypergeometric parameter pair (alpha; beta): entries reduced into
// [0,1), sorted ascending, with the disjointness hypothesis
// alpha_i - beta_j notin Z enforced at construction.
struct HGData {
    std::vector<Rat> alpha;
    std::vector<Rat> beta;

    long m() const { return static_cast<long>(alpha.size()); }
    long n() const { return static_cast<long>(beta.size()); }
};

inline HGData build_hgdata(std::vector<Rat> alpha_raw, std::vector<Rat> beta_raw) {
    if (alpha_raw.empty() || beta_raw.empty()) throw validation_error("hgdata: parameter lists must be nonempty");
    for (auto& a : alpha_raw) a = frac_part(a);
    for (auto& b : beta_raw) b = frac_part(b);
    std::sort(alpha_raw.begin(), alpha_raw.end());
    std::sort(beta_raw.begin(), beta_raw.end());
    if (alpha_raw.size() > beta_raw.size()) throw validation_error("hgdata: m <= n required");
    for (const auto& a : alpha_raw)
        for (const auto& b : beta_raw)
            if (a == b)
                throw validation_error("hgdata: alpha_i == beta_j mod Z (offending value " + to_string(a) + ")");
    return HGData{std::move(alpha_raw), std::move(beta_raw)};
}

inline HGData build_hgdata(const std::string& alpha_csv, const std::string& beta_csv) {
    return build_hgdata(parse_rational_list(alpha_csv), parse_rational_list(beta_csv));
}

// Z(x) = #{alpha_i < x} - #{beta_j < x}
inline int zigzag_at(const HGData& d, const Rat& x) {
    int z = 0;
    for (const auto& a : d.alpha)
        if (a < x) z++;
    for (const auto& b : d.beta)
        if (b < x) z--;
    return z;
}

// Piecewise-constant profile of Z on [0,1]: `values[k]` is the value on the
// interval ending at `breaks[k]`, plus a trailing value on (last break, 1].
struct ZigzagProfile {
    std::vector<Rat> breaks; // sorted distinct union of alpha and beta
    std::vector<int> values; // size breaks.size() + 1
    int zmax = 0;
    int zmin = 0;
    int weight = 0;
};

inline ZigzagProfile zigzag_profile(const HGData& d) {
    ZigzagProfile prof;
    std::vector<Rat> all = d.alpha;
    all.insert(all.end(), d.beta.begin(), d.beta.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    prof.breaks = all;
    for (const auto& b : all) prof.values.push_back(zigzag_at(d, b));
    prof.values.push_back(zigzag_at(d, Rat(1)));
    prof.zmax = *std::max_element(prof.values.begin(), prof.values.end());
    prof.zmin = *std::min_element(prof.values.begin(), prof.values.end());
    prof.weight = prof.zmax - prof.zmin - 1;
    return prof;
}

inline int weight(const HGData& d) { return zigzag_profile(d).weight; }

// Equal-denominator reduced fractions must occur with equal multiplicity,
// separately within alpha and within beta.
inline bool is_galois_stable(const HGData& d) {
    auto stable = [](const std::vector<Rat>& v) {
        std::map<Int, std::map<Int, long>> counts; // denominator -> numerator -> count
        for (const auto& x : v) counts[Int(x.get_den())][Int(x.get_num())]++;
        for (const auto& [den, nums] : counts) {
            long mult = nums.begin()->second;
            long distinct = 0;
            for (const auto& [num, c] : nums) {
                (void)num;
                if (c != mult) return false;
                distinct++;
            }
            // every residue coprime to den must be present
            Int phi = 0;
            for (Int a = 0; a < den; a++)
                if (gcd(a, den) == 1) phi++;
            if (phi != distinct) return false;
        }
        return true;
    };
    return stable(d.alpha) && stable(d.beta);
}

inline std::vector<long> wild_primes(const HGData& d) {
    std::vector<long> out;
    auto add = [&](const std::vector<Rat>& v) {
        for (const auto& x : v) {
            Int den = x.get_den();
            for (long p = 2; den > 1; p = (p == 2 ? 3 : p + 2)) {
                if (!is_prime(p)) continue;
                bool divides = false;
                while (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(p))) {
                    mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(p));
                    divides = true;
                }
                if (divides && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
            }
        }
    };
    add(d.alpha);
    add(d.beta);
    std::sort(out.begin(), out.end());
    return out;
}

inline bool is_tame(const HGData& d, long p) {
    for (const auto& x : d.alpha)
        if (mpz_divisible_ui_p(x.get_den_mpz_t(), static_cast<unsigned long>(p))) return false;
    for (const auto& x : d.beta)
        if (mpz_divisible_ui_p(x.get_den_mpz_t(), static_cast<unsigned long>(p))) return false;
    return true;
}

// Good for (p, t): p odd and tame, v_p(t) = 0, and t != 1 mod p.
// (The printed good-reduction condition is a set of nonnegative-valuation
// requirements on t, 1/t, t-1; for an honest prime of Q that reading forces
// the unit conditions implemented here, flagged in the docs.)
inline bool is_good(const HGData& d, const Rat& t, long p) {
    if (p < 3 || !is_prime(p) || !is_tame(d, p)) return false;
    if (t == 0 || t == 1) return false;
    if (p_valuation(t, p) != 0) return false;
    return p_valuation(t - 1, p) == 0; // t != 1 mod p
}

inline std::vector<long> good_primes(const HGData& d, const Rat& t, long bound) {
    std::vector<long> out;
    for (long p : odd_primes_up_to(bound))
        if (is_good(d, t, p)) out.push_back(p);
    return out;
}

// Exchanges alpha and beta; callers must also invert t.
inline HGData swapped(const HGData& d) {
    if (d.m() != d.n()) throw validation_error("swap: requires m == n");
    return HGData{d.beta, d.alpha};
}

struct PrimeShift {
    std::vector<Rat> alpha_shift; // {p*alpha_i}, aligned with d.alpha
    std::vector<Rat> beta_shift;  // {p*beta_j}, aligned with d.beta
    bool alpha_permuted = false;  // multiset{alpha_shift} == multiset{alpha}
    bool beta_permuted = false;
    // when beta_permuted: row_of[j] = index i with beta[i] == beta_shift[j]
    std::vector<long> beta_row_of;
};

inline PrimeShift prime_shift(const HGData& d, long p) {
    if (!is_tame(d, p)) throw validation_error("prime_shift: p is wild");
    PrimeShift r;
    for (const auto& a : d.alpha) r.alpha_shift.push_back(frac_part(p * a));
    for (const auto& b : d.beta) r.beta_shift.push_back(frac_part(p * b));
    auto sorted_eq = [](std::vector<Rat> a, const std::vector<Rat>& b) {
        std::sort(a.begin(), a.end());
        return a == b; // b already sorted
    };
    r.alpha_permuted = sorted_eq(r.alpha_shift, d.alpha);
    r.beta_permuted = sorted_eq(r.beta_shift, d.beta);
    if (r.beta_permuted) {
        std::vector<bool> used(d.beta.size(), false);
        for (const auto& bs : r.beta_shift) {
            long found = -1;
            for (long i = 0; i < d.n(); i++)
                if (!used[static_cast<std::size_t>(i)] && d.beta[static_cast<std::size_t>(i)] == bs) {
                    found = i;
                    break;
                }
            used[static_cast<std::size_t>(found)] = true;
            r.beta_row_of.push_back(found);
        }
    }
    return r;
}

struct LocalExponents {
    std::vector<Rat> at0;   // 1 - beta_j
    std::vector<Rat> at1;   // 0, ..., n-2, gamma
    std::vector<Rat> atinf; // alpha_i
};

inline LocalExponents local_exponents(const HGData& d) {
    if (d.m() != d.n()) throw validation_error("local_exponents: requires m == n");
    LocalExponents le;
    for (const auto& b : d.beta) le.at0.push_back(1 - b);
    Rat gamma(0);
    for (const auto& b : d.beta) gamma += b;
    for (const auto& a : d.alpha) gamma -= a;
    for (long k = 0; k <= d.n() - 2; k++) le.at1.push_back(Rat(k));
    le.at1.push_back(gamma);
    le.atinf = d.alpha;
    return le;
}

} // namespace hypergeom
