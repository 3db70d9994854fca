#include <doctest.h>

#include <hypergeom/gamma.hpp>

#include <random>

using namespace hypergeom;

namespace {

Rat random_unit_rational(std::mt19937_64& rng, long p) {
    std::uniform_int_distribution<long> num(-80, 80);
    std::uniform_int_distribution<long> den(1, 48);
    long d = den(rng);
    while (d % p == 0) d = den(rng);
    return Rat(num(rng), d);
}

} // namespace

TEST_CASE("morita gamma characterizing values") {
    for (long p : {3L, 5L, 7L, 13L}) {
        PadicContext ctx(p, 10, 4);
        PadicNumber one = PadicNumber::from_long(ctx, 1);
        CHECK(equals(morita_gamma(ctx, Rat(0)), one));
        CHECK(equals(morita_gamma(ctx, Rat(1)), -one));
        CHECK_THROWS_AS(morita_gamma(ctx, Rat(1, p)), validation_error);
    }
}

TEST_CASE("fast gamma agrees with the product-formula reference") {
    for (long p : {3L, 7L}) {
        PadicContext ctx(p, 4, 2); // small modulus so integer surrogates stay loopable
        std::mt19937_64 rng(91 + static_cast<unsigned long>(p));
        for (int iter = 0; iter < 25; iter++) {
            Rat x = random_unit_rational(rng, p);
            PadicNumber fast = morita_gamma(ctx, x);
            PadicNumber ref = morita_gamma_product(ctx, x);
            CHECK(equals(fast, ref, 4));
        }
        // and on small integers where the product is immediate
        for (long m = 0; m <= 12; m++)
            CHECK(equals(morita_gamma(ctx, Rat(m)), morita_gamma_product(ctx, Rat(m)), 4));
    }
}

TEST_CASE("gamma functional equation and reflection") {
    for (long p : {5L, 13L}) {
        PadicContext ctx(p, 14, 4);
        std::mt19937_64 rng(5000 + static_cast<unsigned long>(p));
        for (int iter = 0; iter < 60; iter++) {
            Rat x = random_unit_rational(rng, p);
            PadicNumber lhs = morita_gamma(ctx, x + 1);
            PadicNumber gx = morita_gamma(ctx, x);
            if (p_valuation(x, p) == 0 && x != 0) {
                CHECK(equals(lhs, gx * PadicNumber::from_rational(ctx, -x), ctx.prec()));
            } else {
                CHECK(equals(lhs, -gx, ctx.prec()));
            }

            // Gamma_p(x) Gamma_p(1-x) = (-1)^y, y in {1,...,p}, y = x mod p
            PadicNumber prod = gx * morita_gamma(ctx, 1 - x);
            Int num;
            mpz_fdiv_r(num.get_mpz_t(), Rat(x).get_num_mpz_t(), Int(p).get_mpz_t());
            Int deninv;
            mpz_invert(deninv.get_mpz_t(), Int(Rat(x).get_den()).get_mpz_t(), Int(p).get_mpz_t());
            Int y;
            mpz_fdiv_r(y.get_mpz_t(), Int(num * deninv).get_mpz_t(), Int(p).get_mpz_t());
            long yy = y.get_si() == 0 ? p : y.get_si();
            CHECK(equals(prod, PadicNumber::from_long(ctx, yy % 2 == 0 ? 1 : -1), ctx.prec()));
        }
    }
}

TEST_CASE("gamma at one half squares to (-1)^((p+1)/2)") {
    // (the reflection identity at x = 1/2; pinned against the product oracle)
    for (long p : {3L, 5L, 7L, 13L}) {
        PadicContext ctx(p, 8, 4);
        PadicNumber g = morita_gamma(ctx, Rat(1, 2));
        int sign = ((p + 1) / 2) % 2 == 0 ? 1 : -1;
        CHECK(equals(g * g, PadicNumber::from_long(ctx, sign), ctx.prec()));

        PadicContext small(p, 3, 1); // modulus small enough for the product loop
        PadicNumber ref = morita_gamma_product(small, Rat(1, 2));
        PadicNumber fast = morita_gamma(small, Rat(1, 2));
        CHECK(equals(fast, ref, 3));
    }
}

TEST_CASE("pi element folding") {
    PadicContext ctx(7, 8, 2);
    PiElement pi = pi_power(ctx, 1);
    PiElement x{1, PadicNumber::from_long(ctx, 5)};
    PiElement prod = pi_mul(pi_power(ctx, 5), x); // pi^6 * 5 = -7 * 5
    CHECK(prod.exp == 0);
    CHECK(equals(prod.coeff, PadicNumber::from_long(ctx, -35)));
    PiElement inv = pi_inv(pi);
    CHECK(equals(pi_mul(pi, inv).coeff, PadicNumber::from_long(ctx, 1)));
    CHECK_THROWS_AS(pi_add(pi, pi_power(ctx, 2)), validation_error);
}

TEST_CASE("dwork exponential coefficients") {
    for (long p : {5L, 7L}) {
        PadicContext ctx(p, 10, 4);
        auto c = dwork_exp_coeffs(ctx, 3 * p);
        CHECK(c[0].exp == 0);
        CHECK(equals(c[0].coeff, PadicNumber::from_long(ctx, 1)));
        CHECK(c[1].exp == 1);
        CHECK(equals(c[1].coeff, PadicNumber::from_long(ctx, 1)));
        // below degree p the t^p term cannot contribute: c_j = pi^j / j!
        for (long j = 0; j < p; j++) {
            PadicNumber want = PadicNumber::from_rational(ctx, 1 / pochhammer(Rat(1), j));
            PiElement folded = pi_mul(pi_power(ctx, j), PiElement::from(want));
            CHECK(c[static_cast<std::size_t>(j)].exp == folded.exp);
            CHECK(equals(c[static_cast<std::size_t>(j)].coeff, folded.coeff));
        }
    }
}

TEST_CASE("dwork gamma") {
    PadicContext ctx(7, 10, 4);

    SUBCASE("gamma_p(0,0) = 1") {
        PiElement g = dwork_gamma(ctx, Rat(0), Rat(0));
        CHECK(g.exp == 0);
        CHECK(equals(g.coeff, PadicNumber::from_long(ctx, 1)));
    }

    SUBCASE("direct range equals pi^mu Gamma_p(a)") {
        // a = 1/2, b = 1/2: mu = 3 in {0,...,6}
        PiElement g = dwork_gamma(ctx, Rat(1, 2), Rat(1, 2));
        CHECK(g.exp == 3);
        CHECK(equals(g.coeff, morita_gamma(ctx, Rat(1, 2))));
    }

    SUBCASE("intertwiner scalar gamma(3/2, 3/2) = pi^3 Gamma_7(1/2)") {
        PiElement g = dwork_gamma(ctx, Rat(3, 2), Rat(3, 2));
        CHECK(g.exp == 3);
        CHECK(equals(g.coeff, morita_gamma(ctx, Rat(1, 2)), ctx.prec()));
    }

    SUBCASE("functional-equation reductions stay consistent") {
        // gamma(2,2) = gamma(1,1) (1)_1/(1)_1 = p
        PiElement g11 = dwork_gamma(ctx, Rat(1), Rat(1));
        PiElement g22 = dwork_gamma(ctx, Rat(2), Rat(2));
        CHECK(g11.exp == g22.exp);
        CHECK(equals(g11.coeff, g22.coeff, ctx.prec()));
        CHECK(g11.exp == 0);
        CHECK(equals(g11.coeff, PadicNumber::from_long(ctx, 7), ctx.prec()));
    }

    SUBCASE("pb - a not an integer is rejected") {
        CHECK_THROWS_AS(dwork_gamma(ctx, Rat(1, 3), Rat(1, 2)), validation_error);
    }
}

TEST_CASE("dwork gamma series cross-check") {
    for (long p : {3L, 5L, 7L}) {
        PadicContext ctx(p, 10, 4);
        std::mt19937_64 rng(333 + static_cast<unsigned long>(p));
        for (long mu = 0; mu < p; mu++) {
            for (int iter = 0; iter < 4; iter++) {
                Rat b = random_unit_rational(rng, p);
                Rat a = p * b - mu;
                PiElement via_theorem = dwork_gamma(ctx, a, b);
                GammaSeriesResult via_series = dwork_gamma_series_check(ctx, a, b, 40);
                CHECK(via_series.certified_digits >= 3);
                CHECK(via_theorem.exp == via_series.value.exp);
                CHECK(equals(via_theorem.coeff, via_series.value.coeff,
                             static_cast<int>(via_series.certified_digits)));
            }
        }
        // truncation at a single term for mu=0 matches gamma_p mod p
        PiElement one_term = dwork_gamma_series_check(ctx, Rat(0), Rat(0), 1).value;
        CHECK(equals(one_term.coeff, PadicNumber::from_long(ctx, 1), 1));
    }
}
