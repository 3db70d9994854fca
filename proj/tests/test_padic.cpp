#include <doctest.h>

#include <hypergeom/matrix.hpp>
#include <hypergeom/padic.hpp>
#include <hypergeom/series.hpp>

#include <random>

using namespace hypergeom;

namespace {

Rat random_rational(std::mt19937_64& rng, long p, bool allow_p_denominator = true) {
    std::uniform_int_distribution<long> num(-60, 60);
    std::uniform_int_distribution<long> den(1, 40);
    long n = num(rng);
    long d = den(rng);
    if (!allow_p_denominator)
        while (d % p == 0) d = den(rng);
    if (n == 0) n = 1;
    return Rat(n, d);
}

} // namespace

TEST_CASE("embed_rational basics") {
    PadicContext ctx(7, 3, 0);
    CHECK(PadicNumber::from_rational(ctx, Rat(0)).is_zero());

    PadicNumber seven = PadicNumber::from_rational(ctx, Rat(7));
    CHECK(seven.valuation() == 1);
    CHECK(seven.unit_residue(3) == 1);

    PadicNumber half = PadicNumber::from_rational(ctx, Rat(1, 2));
    CHECK(half.valuation() == 0);
    CHECK(half.unit_residue(3) == 172); // inverse of 2 mod 343

    PadicNumber p_in_den = PadicNumber::from_rational(ctx, Rat(3, 49));
    CHECK(p_in_den.valuation() == -2);
}

TEST_CASE("arithmetic basics") {
    PadicContext ctx(7, 3, 0);
    PadicNumber half = PadicNumber::from_rational(ctx, Rat(1, 2));
    PadicNumber two = PadicNumber::from_long(ctx, 2);
    CHECK(equals(half * two, PadicNumber::from_long(ctx, 1)));

    PadicNumber x = PadicNumber::from_rational(ctx, Rat(15, 4));
    CHECK((x + (-x)).is_zero());

    PadicContext ctx2(7, 2, 0);
    PadicNumber inv3 = PadicNumber::from_long(ctx2, 3).inv();
    CHECK(inv3.unit_residue(2) == 33); // 3*33 = 99 = 1 mod 49

    CHECK_THROWS_AS(PadicNumber::zero(ctx).inv(), precision_error);
}

TEST_CASE("ring axioms on random triples") {
    for (long p : {3L, 13L}) {
        PadicContext ctx(p, 12, 2);
        std::mt19937_64 rng(20240 + static_cast<unsigned long>(p));
        for (int iter = 0; iter < 200; iter++) {
            PadicNumber a = PadicNumber::from_rational(ctx, random_rational(rng, p));
            PadicNumber b = PadicNumber::from_rational(ctx, random_rational(rng, p));
            PadicNumber c = PadicNumber::from_rational(ctx, random_rational(rng, p));
            CHECK(equals((a + b) + c, a + (b + c)));
            CHECK(equals((a * b) * c, a * (b * c)));
            CHECK(equals(a * (b + c), a * b + a * c));
        }
    }
}

TEST_CASE("teichmuller lifts") {
    PadicContext ctx(7, 3, 0);
    CHECK(equals(teichmuller(ctx, 1), PadicNumber::from_long(ctx, 1)));
    CHECK(teichmuller(ctx, 6).unit_residue(3) == 342); // the value -1

    PadicNumber t2 = teichmuller(ctx, 2);
    Int u = t2.unit_residue(3);
    CHECK(u % 7 == 2);
    Int m = ctx.modulus();
    Int pw;
    mpz_powm_ui(pw.get_mpz_t(), u.get_mpz_t(), 6, m.get_mpz_t());
    CHECK(pw == 1);

    CHECK_THROWS_AS(teichmuller(ctx, 7), validation_error);

    for (long p : {3L, 5L, 7L, 13L}) {
        for (int N : {1, 5, 20}) {
            PadicContext c(p, N, 0);
            for (long a = 1; a < p; a++) {
                PadicNumber t = teichmuller(c, a);
                CHECK(equals(t.pow(p - 1), PadicNumber::from_long(c, 1), N));
            }
        }
    }
}

TEST_CASE("series operations") {
    PadicContext ctx(5, 8, 2);
    PadicNumber proto = PadicNumber::zero(ctx);
    using S = Series<PadicNumber>;

    // D(z^3) = 3 z^3
    S z3 = S::monomial(PadicNumber::from_long(ctx, 1), 3, 6, 'z');
    S dz3 = z3.derivation();
    CHECK(equals(dz3.coeff(3), PadicNumber::from_long(ctx, 3)));

    // substitute_frobenius(1 + z, p=5) = 1 + z^5
    S onez(proto, 0, 2, 'z');
    onez.set_coeff(0, PadicNumber::from_long(ctx, 1));
    onez.set_coeff(1, PadicNumber::from_long(ctx, 1));
    S sub = onez.frobenius_substitute(5);
    CHECK(equals(sub.coeff(0), PadicNumber::from_long(ctx, 1)));
    CHECK(equals(sub.coeff(5), PadicNumber::from_long(ctx, 1)));
    CHECK(sub.coeff(3).is_zero());

    // series_inv(1 - z) = geometric series
    S oneminus(proto, 0, 12, 'z');
    oneminus.set_coeff(0, PadicNumber::from_long(ctx, 1));
    oneminus.set_coeff(1, PadicNumber::from_long(ctx, -1));
    S geo = oneminus.inverse();
    for (long k = 0; k < 12; k++) CHECK(equals(geo.coeff(k), PadicNumber::from_long(ctx, 1)));

    std::mt19937_64 rng(77);
    auto random_series = [&](long len, long low) {
        S s(proto, low, len, 'z');
        std::uniform_int_distribution<long> coeff(-20, 20);
        for (long k = 0; k < len; k++) s.set_coeff(low + k, PadicNumber::from_long(ctx, coeff(rng)));
        return s;
    };

    SUBCASE("inverse is an involution up to truncation") {
        for (int iter = 0; iter < 20; iter++) {
            S f = random_series(15, 0);
            if (f.coeff(0).is_zero()) f.set_coeff(0, PadicNumber::from_long(ctx, 1 + iter));
            S finv = f.inverse();
            S back = finv.inverse();
            for (long k = 0; k < 15; k++) CHECK(equals(back.coeff(k), f.coeff(k)));
        }
    }

    SUBCASE("Leibniz rule") {
        for (int iter = 0; iter < 20; iter++) {
            S f = random_series(10, -2), g = random_series(10, 1);
            S lhs = (f * g).derivation();
            S rhs = f.derivation() * g + f * g.derivation();
            for (long k = lhs.low(); k < lhs.known_order(); k++) CHECK(equals(lhs.coeff(k), rhs.coeff(k)));
        }
    }

    SUBCASE("frobenius substitution is a ring homomorphism") {
        for (int iter = 0; iter < 20; iter++) {
            S f = random_series(6, 0), g = random_series(6, 0);
            S lhs = (f * g).frobenius_substitute(5);
            S rhs = f.frobenius_substitute(5) * g.frobenius_substitute(5);
            long top = std::min(lhs.known_order(), rhs.known_order());
            for (long k = lhs.low(); k < top; k++) CHECK(equals(lhs.coeff(k), rhs.coeff(k)));
        }
    }

    SUBCASE("(t-1)^e multiplication and evaluation") {
        std::vector<PadicNumber> cs;
        for (long k = 0; k < 10; k++) cs.push_back(PadicNumber::from_long(ctx, k * k - 3));
        S f = S::polynomial(cs, -3, 't');
        S g = f.times_tminus1_pow(3);
        CHECK(g.exact());
        PadicNumber x = PadicNumber::from_long(ctx, 2);
        PadicNumber tm1 = (x - PadicNumber::from_long(ctx, 1)).pow(3);
        CHECK(equals(g.evaluate(x), f.evaluate(x) * tm1));
    }
}

TEST_CASE("matrix operations") {
    PadicContext ctx(7, 6, 2);
    PadicNumber proto = PadicNumber::zero(ctx);

    SUBCASE("inverse of identity") {
        Matrix<PadicNumber> id = Matrix<PadicNumber>::identity(3, proto);
        Matrix<PadicNumber> inv = id.inverse();
        for (long i = 0; i < 3; i++)
            for (long j = 0; j < 3; j++) CHECK(equals(inv.at(i, j), id.at(i, j)));
    }

    SUBCASE("charpoly of diag(a, b)") {
        Matrix<PadicNumber> m(2, proto);
        PadicNumber a = PadicNumber::from_rational(ctx, Rat(3, 2)), b = PadicNumber::from_long(ctx, -5);
        m.at(0, 0) = a;
        m.at(1, 1) = b;
        auto cp = charpoly(m); // T^2 - (a+b) T + ab
        CHECK(equals(cp[2], PadicNumber::from_long(ctx, 1)));
        CHECK(equals(cp[1], -(a + b)));
        CHECK(equals(cp[0], a * b));
    }

    SUBCASE("unipotent series matrix inverse negates the off-diagonal entry") {
        using MS = MatrixSeries<PadicNumber>;
        MS U(2, proto, 0, 10, 't');
        U.coef(0).at(0, 0) = PadicNumber::from_long(ctx, 1);
        U.coef(0).at(1, 1) = PadicNumber::from_long(ctx, 1);
        for (long k = 1; k < 10; k++) U.coef(k).at(0, 1) = PadicNumber::from_long(ctx, 2 * k + 1);
        MS V = U.inverse();
        MS prod = U * V;
        for (long k = 0; k < prod.size(); k++)
            for (long i = 0; i < 2; i++)
                for (long j = 0; j < 2; j++) {
                    PadicNumber want = (k == 0 && i == j) ? PadicNumber::from_long(ctx, 1) : PadicNumber::zero(ctx);
                    CHECK(equals(prod.coef(k).at(i, j), want));
                }
        for (long k = 1; k < V.size(); k++) CHECK(equals(V.coef(k).at(0, 1), -U.coef(k).at(0, 1)));
    }
}
