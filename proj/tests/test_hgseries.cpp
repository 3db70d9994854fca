#include <doctest.h>

#include <hypergeom/hgseries.hpp>
#include <hypergeom/padic.hpp>

#include <random>

using namespace hypergeom;

namespace {

// random tame parameter data with n <= nmax and small denominators
HGData random_tame_data(std::mt19937_64& rng, long p, long nmax = 4) {
    std::uniform_int_distribution<long> sized(1, nmax);
    std::uniform_int_distribution<long> dens(1, 8);
    std::uniform_int_distribution<long> nums(0, 23);
    long n = sized(rng);
    while (true) {
        std::vector<Rat> a, b;
        for (long i = 0; i < n; i++) {
            long da = dens(rng), db = dens(rng);
            while (da % p == 0) da = dens(rng);
            while (db % p == 0) db = dens(rng);
            a.push_back(frac_part(Rat(nums(rng), da)));
            b.push_back(frac_part(Rat(nums(rng), db)));
        }
        bool disjoint = true;
        for (const auto& x : a)
            for (const auto& y : b)
                if (x == y) disjoint = false;
        if (!disjoint) continue;
        return build_hgdata(a, b);
    }
}

} // namespace

TEST_CASE("pochhammer values") {
    CHECK(pochhammer(Rat(7, 3), 0) == 1);
    CHECK(pochhammer(Rat(1), 5) == 120);
    CHECK(pochhammer(Rat(1, 2), 2) == Rat(3, 4));
    CHECK(pochhammer(Rat(1, 2), -1) == Rat(-2));
    CHECK_THROWS_AS(pochhammer(Rat(1), -1), validation_error); // (1)_{-1} hits a zero factor
}

TEST_CASE("hypergeometric operator expansion") {
    SUBCASE("leading coefficient is z - 1 when m = n") {
        HGOperator op = hg_operator({Rat(1, 3), Rat(2, 3)}, {Rat(1, 4), Rat(3, 4)});
        CHECK(op.z_part.back() == 1);
        CHECK(op.one_part.back() == -1);
    }

    SUBCASE("n = 2 Gauss case matches direct composition on monomials") {
        std::vector<Rat> alphas{Rat(1, 3), Rat(2, 3)}, betas{Rat(1, 4), Rat(3, 4)};
        HGOperator op = hg_operator(alphas, betas);
        for (long k = 0; k < 6; k++) {
            Series<Rat> zk = Series<Rat>::monomial(Rat(1), k, 10, 't', true);
            Series<Rat> lhs = apply_operator(op, zk, 9);
            Rat c1 = (k + alphas[0]) * (k + alphas[1]);
            Rat c2 = (k + betas[0] - 1) * (k + betas[1] - 1);
            CHECK(lhs.coeff(k + 1) == c1);
            CHECK(lhs.coeff(k) == -c2);
        }
    }

    SUBCASE("D(1) = 0 branch: alpha containing 0 still sends constants to z-multiples") {
        HGOperator op = hg_operator({Rat(0)}, {Rat(1, 2)});
        Series<Rat> one = Series<Rat>::monomial(Rat(1), 0, 6, 't', true);
        Series<Rat> out = apply_operator(op, one, 5);
        CHECK(out.coeff(1) == 0);                // z (D+0)(1) = 0
        CHECK(out.coeff(0) == -(Rat(1, 2) - 1)); // -(D + beta - 1)(1)
    }
}

TEST_CASE("clausen-thomae coefficients") {
    Rat proto(0);
    SUBCASE("empty parameters give the exponential series") {
        auto A = clausen_thomae_coeffs<Rat>({}, {}, 8, proto);
        for (long k = 0; k < 8; k++) CHECK(A[static_cast<std::size_t>(k)] == 1 / pochhammer(Rat(1), k));
    }
    SUBCASE("binomial series oracle for alpha = 1/2") {
        // (1-z)^(-1/2) has coefficients 1, 1/2, 3/8, 5/16, ...
        auto A = clausen_thomae_coeffs<Rat>({Rat(1, 2)}, {}, 5, proto);
        CHECK(A[0] == 1);
        CHECK(A[1] == Rat(1, 2));
        CHECK(A[2] == Rat(3, 8));
        CHECK(A[3] == Rat(5, 16));
    }
    SUBCASE("alpha = (1,1), beta = (1): all coefficients 1") {
        auto A = clausen_thomae_coeffs<Rat>({Rat(1), Rat(1)}, {Rat(1)}, 7, proto);
        for (const auto& a : A) CHECK(a == 1);
    }
    SUBCASE("nonpositive integer lower parameter rejected") {
        CHECK_THROWS_AS(clausen_thomae_coeffs<Rat>({Rat(1, 2)}, {Rat(-2)}, 5, proto), validation_error);
    }
}

TEST_CASE("series solutions annihilated by the operator") {
    // with beta_n = 1, the Clausen-Thomae series solves P(alpha; beta)
    std::mt19937_64 rng(424242);
    Rat proto(0);
    for (int iter = 0; iter < 8; iter++) {
        HGData d = random_tame_data(rng, 5, 3);
        std::vector<Rat> lower;
        bool ok = true;
        for (const auto& b : d.beta) {
            Rat bb = (b == 0) ? Rat(1) : b;
            if (bb != 1)
                lower.push_back(bb);
            else if (b != 0 || !ok)
                ok = false; // at most one beta_n = 1 slot
            else
                ok = true;
        }
        std::vector<Rat> full = lower;
        full.push_back(Rat(1));
        if (full.size() != d.beta.size()) continue; // more than one zero beta; skip
        HGOperator op = hg_operator(d.alpha, full);
        auto A = clausen_thomae_coeffs<Rat>(d.alpha, lower, 60, proto);
        Series<Rat> f(proto, 0, 60, 't');
        for (long k = 0; k < 60; k++) f.set_coeff(k, A[static_cast<std::size_t>(k)]);
        Series<Rat> Pf = apply_operator(op, f, 59);
        for (long k = Pf.low(); k < 59; k++) CHECK(Pf.coeff(k) == 0);
    }
}

TEST_CASE("companion matrix") {
    Rat proto(0);
    SUBCASE("rank 1: a_0 = (z alpha - beta + 1)/(z-1), residue root beta - 1") {
        HGData d = build_hgdata("1/2", "0");
        auto N = companion_matrix(d, 6, proto);
        // a_0 = (z/2 + 1)/(z-1) = -(1 + (3/2) z + (3/2) z^2 + ...)
        CHECK(N.coef(0).at(0, 0) == Rat(-1));
        for (long i = 1; i < 6; i++) CHECK(N.coef(i).at(0, 0) == Rat(-3, 2));
    }

    SUBCASE("residue characteristic polynomial has roots beta_j - 1") {
        HGData d = build_hgdata("1/3,2/3", "1/4,3/4");
        auto N = companion_matrix(d, 4, proto);
        auto cp = charpoly(N.coeff_at(0)); // det(T I - N(0)) = prod (T + 1 - beta_j)
        std::vector<Rat> want = poly_from_shifted_roots({Rat(3, 4), Rat(1, 4)});
        for (std::size_t i = 0; i < want.size(); i++) CHECK(cp[i] == want[i]);
    }

    SUBCASE("superdiagonal is -1, rank validation") {
        HGData d = build_hgdata("1/3,2/3", "1/4,3/4");
        auto N = companion_matrix(d, 4, proto);
        CHECK(N.coef(0).at(0, 1) == Rat(-1));
        CHECK(N.coef(1).at(0, 1) == Rat(0));
        CHECK_THROWS_AS(companion_matrix(build_hgdata("1/2", "0,0"), 4, proto), validation_error);
    }
}

TEST_CASE("formal solution matrix: distinct beta") {
    Rat proto(0);
    HGData d = build_hgdata("1/3,2/3", "1/4,3/4");
    long M = 24;

    SUBCASE("rank 1 single block is the 1F0-type series") {
        HGData r1 = build_hgdata("1/2", "0");
        auto s1 = formal_solution_matrix(r1, 8, false, proto);
        auto A = clausen_thomae_coeffs<Rat>({Rat(3, 2)}, {}, 8, proto);
        for (long k = 0; k < 8; k++) CHECK(s1.U.entry(0, 0).coeff(k) == A[static_cast<std::size_t>(k)]);
    }

    SUBCASE("gauge transform reaches the diagonal normal form, rescaled or not") {
        for (bool rescaled : {false, true}) {
            auto sol = formal_solution_matrix(d, M, rescaled, proto);
            auto N = companion_matrix(d, M, proto);
            auto NU = gauge_transform(N, sol.U);
            Matrix<Rat> want = block_normal_form(d, proto);
            for (long k = 0; k < NU.size() && NU.low() + k < M - 2; k++)
                for (long i = 0; i < 2; i++)
                    for (long j = 0; j < 2; j++)
                        CHECK(NU.coef(k).at(i, j) == ((NU.low() + k == 0) ? want.at(i, j) : Rat(0)));
        }
    }
}

TEST_CASE("formal solution matrix: repeated beta (quintic) block form") {
    Rat proto(0);
    HGData d = build_hgdata("1/5,2/5,3/5,4/5", "0,0,0,0");
    long M = 14;
    auto sol = formal_solution_matrix(d, M, false, proto);
    auto N = companion_matrix(d, M, proto);
    auto NU = gauge_transform(N, sol.U);
    Matrix<Rat> want = block_normal_form(d, proto);
    CHECK(want.at(0, 1) == Rat(-1));
    CHECK(want.at(1, 2) == Rat(-2));
    CHECK(want.at(2, 3) == Rat(-3));
    CHECK(want.at(0, 0) == Rat(-1));
    for (long k = 0; k < NU.size() && NU.low() + k < M - 2; k++)
        for (long i = 0; i < 4; i++)
            for (long j = 0; j < 4; j++)
                CHECK(NU.coef(k).at(i, j) == ((NU.low() + k == 0) ? want.at(i, j) : Rat(0)));
}

TEST_CASE("gauge transform trivial cases") {
    Rat proto(0);
    HGData d = build_hgdata("1/3,2/3", "1/4,3/4");
    auto N = companion_matrix(d, 8, proto);

    SUBCASE("U = identity returns N") {
        auto U = MatrixSeries<Rat>::constant(Matrix<Rat>::identity(2, proto), 8, 't');
        auto NU = gauge_transform(N, U);
        for (long k = 0; k < NU.size(); k++)
            for (long i = 0; i < 2; i++)
                for (long j = 0; j < 2; j++) CHECK(NU.coef(k).at(i, j) == N.coef(k).at(i, j));
    }

    SUBCASE("scalar constant U returns N") {
        Matrix<Rat> c = Matrix<Rat>::identity(2, proto) * Rat(7, 5);
        auto U = MatrixSeries<Rat>::constant(c, 8, 't');
        auto NU = gauge_transform(N, U);
        for (long k = 0; k < NU.size(); k++)
            for (long i = 0; i < 2; i++)
                for (long j = 0; j < 2; j++) CHECK(NU.coef(k).at(i, j) == N.coef(k).at(i, j));
    }
}

TEST_CASE("epsilon-extraction degenerates to the distinct-beta formula") {
    Rat proto(0);
    HGData d = build_hgdata("1/3,2/3", "1/4,3/4");
    auto sol = formal_solution_matrix(d, 16, false, proto);
    for (long k = 0; k < 2; k++) {
        auto A = clausen_thomae_coeffs<Rat>(
            {d.alpha[0] - d.beta[static_cast<std::size_t>(k)] + 1,
             d.alpha[1] - d.beta[static_cast<std::size_t>(k)] + 1},
            {d.beta[static_cast<std::size_t>(1 - k)] - d.beta[static_cast<std::size_t>(k)] + 1}, 16, proto);
        Series<Rat> f(proto, 0, 16, 't');
        for (long i = 0; i < 16; i++) f.set_coeff(i, A[static_cast<std::size_t>(i)]);
        Series<Rat> row0 = f;
        Series<Rat> row1 = f.derivation() + f * (1 - d.beta[static_cast<std::size_t>(k)]);
        for (long i = 0; i < 16; i++) {
            CHECK(sol.U.entry(0, k).coeff(i) == row0.coeff(i));
            CHECK(sol.U.entry(1, k).coeff(i) == row1.coeff(i));
        }
    }
}

TEST_CASE("p-adic mode: guard stability and agreement with exact rationals") {
    HGData d = build_hgdata("1/3,2/3", "1/4,3/4");
    long M = 30;
    PadicContext c1(7, 10, 4), c2(7, 10, 8);
    auto s1 = formal_solution_matrix(d, M, true, PadicNumber::zero(c1));
    auto s2 = formal_solution_matrix(d, M, true, PadicNumber::zero(c2));
    auto sr = formal_solution_matrix(d, M, true, Rat(0));
    for (long k = 0; k < M; k++)
        for (long i = 0; i < 2; i++)
            for (long j = 0; j < 2; j++) {
                PadicNumber a = s1.U.coef(k).at(i, j);
                CHECK(equals(a, recontext(c1, s2.U.coef(k).at(i, j)), 10));
                CHECK(equals(a, PadicNumber::from_rational(c1, sr.U.coef(k).at(i, j)), 10));
            }
}
