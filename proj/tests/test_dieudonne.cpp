#include <doctest.h>

#include "gst/dieudonne.hpp"

#include <random>

using namespace gst;

TEST_CASE("validate: catalog passes, broken relations are reported") {
    const UnramRing& R = unram_ring(2, 2, 3);
    CHECK(!validate(d_alpha(R, 1)));
    CHECK(!validate(d_mu(R, 2)));
    CHECK(!validate(d_const(R, 2)));
    CHECK(!validate(d_wittker(R, 2, 2)));
    // (M = k, F = sigma, V = sigma^{-1}): FV = 1 != 0 = p on k
    const UnramRing& k = unram_ring(2, 2, 1);
    FinMod M(k, {1});
    UMat one = UMat::identity(k, 1);
    DieudonneModule bad{M, ModMap(M, M, 1, one), ModMap(M, M, -1, one)};
    auto err = validate(bad);
    REQUIRE(err.has_value());
    CHECK(err->find("FV") != std::string::npos);
}

TEST_CASE("catalog: alpha") {
    const UnramRing& R = unram_ring(2, 1, 2);
    CHECK(d_alpha(R, 0).is_zero());
    DieudonneModule A1 = d_alpha(R, 1);
    CHECK(A1.M.sorted_divisors() == std::vector<int>{1});
    CHECK(map_is_zero(A1.F));
    CHECK(map_is_zero(A1.V));
    DieudonneModule A2 = d_alpha(R, 2);
    CHECK(A2.M.length() == 2); // k-module of rank 2
    CHECK(map_is_zero(A2.V));
    CHECK(!map_is_zero(A2.F));
    CHECK(f_nilpotent(A2));
}

TEST_CASE("catalog: const and mu") {
    const UnramRing& R = unram_ring(3, 2, 3);
    CHECK(d_const(R, 0).is_zero());
    DieudonneModule C1 = d_const(R, 1);
    // etale-unipotent: F bijective, V nilpotent
    CHECK(f_bijective(C1));
    CHECK(v_nilpotent(C1));
    DieudonneModule M1 = d_mu(R, 1);
    CHECK(v_bijective(M1));
    CHECK(f_nilpotent(M1));
    CHECK(v_nilpotent(d_const(R, 2)));
    // cartier_dual(d_mu(1)) is d_const(1)
    CHECK(is_isomorphic(cartier_dual(d_mu(R, 1)), d_const(R, 1)) == Trilean::Yes);
}

TEST_CASE("catalog: witt kernels") {
    const UnramRing& R = unram_ring(2, 1, 3);
    // W_1[F^1] = alpha_p: both are R/(V, F)
    DieudonneModule W11 = d_wittker(R, 1, 1);
    CHECK(W11.M.sorted_divisors() == d_alpha(R, 1).M.sorted_divisors());
    CHECK(map_is_zero(W11.F));
    CHECK(map_is_zero(W11.V));
    // length m*n
    for (int m = 1; m <= 3; ++m)
        for (int n = 1; n <= 3; ++n)
            CHECK(d_wittker(R, m, n).M.length() == static_cast<long>(m) * n);
    // over F_9 as well
    const UnramRing& R9 = unram_ring(3, 2, 3);
    for (int m = 1; m <= 3; ++m)
        for (int n = 1; n <= 3; ++n) CHECK(!validate(d_wittker(R9, m, n)));
}

TEST_CASE("fitting splits") {
    const UnramRing& R = unram_ring(2, 1, 3);
    {
        auto [et, conn] = fitting_split_F(d_alpha(R, 1));
        CHECK(et.is_zero());
        CHECK(conn.M.sorted_divisors() == std::vector<int>{1});
    }
    {
        auto [et, conn] = fitting_split_F(d_const(R, 1));
        CHECK(conn.is_zero());
        CHECK(et.M.sorted_divisors() == std::vector<int>{1});
    }
    {
        auto [mult, uni] = fitting_split_V(d_mu(R, 1));
        CHECK(uni.is_zero());
        CHECK(mult.M.sorted_divisors() == std::vector<int>{1});
    }
    {
        auto [mult, uni] = fitting_split_V(d_const(R, 2));
        CHECK(mult.is_zero());
        CHECK(uni.M.sorted_divisors() == std::vector<int>{2});
    }
    // mixed sums split into the expected summands
    DieudonneModule D = dsum(d_const(R, 1), d_alpha(R, 2));
    auto [et, conn] = fitting_split_F(D);
    CHECK(et.M.sorted_divisors() == std::vector<int>{1});
    CHECK(conn.M.sorted_divisors() == std::vector<int>{1, 1});
    CHECK(f_bijective(et));
    CHECK(f_nilpotent(conn));
    CHECK(is_isomorphic(dsum(et, conn), D) == Trilean::Yes);
    auto [mult, uni] = fitting_split_V(dsum(d_mu(R, 1), D));
    CHECK(mult.M.sorted_divisors() == std::vector<int>{1});
    CHECK(uni.M.sorted_divisors() == std::vector<int>{1, 1, 1});
}

TEST_CASE("star product") {
    const UnramRing& R = unram_ring(2, 1, 3);
    StarModule s1 = star(d_alpha(R, 1), d_alpha(R, 1));
    CHECK(s1.M.sorted_divisors() == std::vector<int>{1});
    CHECK(map_is_zero(s1.F));
    StarModule s2 = star(d_const(R, 1), d_const(R, 1));
    CHECK(s2.M.sorted_divisors() == std::vector<int>{1});
    CHECK(kernel(s2.F).sub.is_zero()); // diagonal F bijective
    StarModule s3 = star(d_const(R, 2), dd_zero(R));
    CHECK(s3.M.is_zero());
    // length rule: len(star(D1,D2)) = sum_{i,j} min(e_i, f_j)
    DieudonneModule D1 = dsum(d_const(R, 2), d_alpha(R, 1));
    DieudonneModule D2 = dsum(d_mu(R, 2), d_alpha(R, 2));
    long expect = 0;
    for (int a : D1.M.e)
        for (int b : D2.M.e) expect += std::min(a, b);
    CHECK(star(D1, D2).M.length() == expect);
}

TEST_CASE("matlis duality") {
    const UnramRing& R = unram_ring(2, 1, 3);
    // alpha_p is self-dual
    DieudonneModule A = d_alpha(R, 1);
    DieudonneModule IA = matlis_dual(A);
    CHECK(map_is_zero(IA.F));
    CHECK(map_is_zero(IA.V));
    // I(d_const(m)) = d_mu(m)
    for (int m = 1; m <= 3; ++m) {
        CHECK(is_isomorphic(matlis_dual(d_const(R, m)), d_mu(R, m)) == Trilean::Yes);
        CHECK(is_isomorphic(matlis_dual(d_mu(R, m)), d_const(R, m)) == Trilean::Yes);
    }
    // double dual is the identity on matrices for every catalog module
    std::vector<DieudonneModule> cat = {d_alpha(R, 1), d_alpha(R, 3), d_const(R, 2),
                                        d_mu(R, 3),    d_wittker(R, 2, 2),
                                        d_wittker(R, 1, 3), dsum(d_const(R, 1), d_alpha(R, 2))};
    for (const auto& D : cat) {
        DieudonneModule DD = matlis_dual(matlis_dual(D));
        CHECK(map_eq(DD.F, D.F));
        CHECK(map_eq(DD.V, D.V));
    }
    // I exchanges the F-Fitting and V-Fitting splittings
    for (const auto& D : cat) {
        auto [et, conn] = fitting_split_F(matlis_dual(D));
        auto [mult, uni] = fitting_split_V(D);
        CHECK(et.M.sorted_divisors() == mult.M.sorted_divisors());
        CHECK(conn.M.sorted_divisors() == uni.M.sorted_divisors());
    }
    // I(D(W_m[F^n])) = D(W_n[F^m]): Cartier duality swaps the kernel indices
    for (int m = 1; m <= 2; ++m)
        for (int n = 1; n <= 2; ++n)
            CHECK(is_isomorphic(matlis_dual(d_wittker(R, m, n)), d_wittker(R, n, m)) ==
                  Trilean::Yes);
    // also over F_4
    const UnramRing& R4 = unram_ring(2, 2, 3);
    CHECK(is_isomorphic(matlis_dual(d_wittker(R4, 2, 1)), d_wittker(R4, 1, 2)) == Trilean::Yes);
}

TEST_CASE("base change") {
    const UnramRing& R = unram_ring(2, 1, 3);
    DieudonneModule D = dsum(d_const(R, 2), d_alpha(R, 2));
    DieudonneModule D3 = base_change(D, 3);
    CHECK(D3.ring().d() == 3);
    CHECK(D3.M.sorted_divisors() == D.M.sorted_divisors());
    CHECK(!validate(D3));
    // F-etale stays etale
    auto [et, conn] = fitting_split_F(D3);
    CHECK(et.M.sorted_divisors() == std::vector<int>{2});
    CHECK(conn.M.sorted_divisors() == std::vector<int>{1, 1});
}

TEST_CASE("isomorphism testing distinguishes catalog modules") {
    const UnramRing& R = unram_ring(2, 1, 3);
    CHECK(is_isomorphic(d_alpha(R, 2), d_wittker(R, 2, 1)) == Trilean::No);
    CHECK(is_isomorphic(d_alpha(R, 2), d_alpha(R, 2)) == Trilean::Yes);
    CHECK(is_isomorphic(d_alpha(R, 2), dsum(d_alpha(R, 1), d_alpha(R, 1))) == Trilean::No);
    CHECK(is_isomorphic(d_const(R, 1), d_mu(R, 1)) == Trilean::No);
    CHECK(is_isomorphic(d_wittker(R, 2, 2), d_wittker(R, 2, 2)) == Trilean::Yes);
    // conjugating by a random automorphism preserves the iso class
    std::mt19937_64 rng(88);
    DieudonneModule D = d_wittker(R, 2, 2);
    int r = D.M.rank();
    for (int rep = 0; rep < 3; ++rep) {
        // random invertible change of basis respecting the divisor filtration
        UMat G(R, r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                UnramElem x = R.zero();
                x.c[0] = rng() % R.pp().mod;
                int need = D.M.e[static_cast<size_t>(i)] - D.M.e[static_cast<size_t>(j)];
                if (need > 0) x = R.mul_pk(x, need);
                G.at(i, j) = i == j ? R.add(R.one(), R.mul_pk(x, 1)) : x;
            }
        ModMap g(D.M, D.M, 0, G);
        SmithResult s = smith(g.A);
        bool inv = true;
        for (int e : s.exps) inv &= (e == 0);
        if (!inv) continue;
        // conjugate: F' = g F g^{-1}: compute g^{-1} via solve
        auto gi = solve(g.A, UMat::identity(R, r));
        REQUIRE(gi.has_value());
        ModMap ginv(D.M, D.M, 0, *gi);
        DieudonneModule D2{D.M, compose(g, compose(D.F, ginv)), compose(g, compose(D.V, ginv))};
        CHECK(!validate(D2));
        CHECK(is_isomorphic(D, D2) == Trilean::Yes);
    }
}
