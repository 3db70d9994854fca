#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "errors.hpp"

namespace hypergeom {

using Int = mpz_class;
using Rat = mpq_class;

// Parses "a/b" or "a" (arbitrary precision, optional sign).
inline Rat parse_rational(const std::string& s) {
    if (s.empty()) throw validation_error("empty rational literal");
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw validation_error("bad rational literal: '" + s + "'");
    if (q.get_den() == 0) throw validation_error("zero denominator: '" + s + "'");
    q.canonicalize();
    return q;
}

inline std::vector<Rat> parse_rational_list(const std::string& s) {
    std::vector<Rat> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        out.push_back(parse_rational(s.substr(pos, comma - pos)));
        pos = comma + 1;
        if (comma == s.size()) break;
    }
    return out;
}

inline std::string to_string(const Rat& q) { return q.get_str(); }

inline Int floor_rat(const Rat& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f;
}

// x - floor(x), in [0,1)
inline Rat frac_part(const Rat& q) { return q - Rat(floor_rat(q)); }

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

// Rising Pochhammer (x)_k. Negative k uses (x)_{-k} := 1/((x-1)(x-2)...(x-k)),
// the unique extension compatible with (x)_{j+1} = (x)_j (x+j).
// Throws when a denominator factor vanishes.
inline Rat pochhammer(const Rat& x, long k) {
    Rat r(1);
    if (k >= 0) {
        for (long i = 0; i < k; i++) r *= x + i;
        return r;
    }
    Rat d(1);
    for (long i = 1; i <= -k; i++) d *= x - i;
    if (d == 0) throw validation_error("pochhammer: zero factor in negative-index denominator");
    return 1 / d;
}

// v_p of a nonzero integer.
inline long p_valuation(Int n, long p) {
    if (n == 0) throw validation_error("p_valuation of zero");
    long v = 0;
    mpz_class q, r;
    while (true) {
        mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(p));
        if (r != 0) break;
        n = q;
        v++;
    }
    return v;
}

inline long p_valuation(const Rat& q, long p) {
    if (q == 0) throw validation_error("p_valuation of zero");
    return p_valuation(Int(q.get_num()), p) - p_valuation(Int(q.get_den()), p);
}

inline bool is_prime(long n) {
    if (n < 2) return false;
    mpz_class z(static_cast<long>(n));
    return mpz_probab_prime_p(z.get_mpz_t(), 32) != 0;
}

inline std::vector<long> odd_primes_up_to(long bound) {
    std::vector<long> out;
    for (long p = 3; p <= bound; p += 2)
        if (is_prime(p)) out.push_back(p);
    return out;
}

inline Int binomial(unsigned long n, unsigned long k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

inline Int pow_int(const Int& base, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

} // namespace hypergeom
