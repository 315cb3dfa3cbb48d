#include <doctest.h>

#include "gst/matrix.hpp"

#include <random>

using namespace gst;

namespace {

UMat rnd_mat(const UnramRing& R, int r, int c, std::mt19937_64& rng) {
    UMat A(R, r, c);
    for (auto& x : A.a)
        for (auto& v : x.c) v = rng() % R.pp().mod;
    return A;
}

} // namespace

TEST_CASE("smith normal form: spec examples") {
    const UnramRing& R = unram_ring(2, 1, 3); // Z/8
    // A = [[p]] -> D = [[p]]
    {
        UMat A(R, 1, 1);
        A.at(0, 0) = R.from_int(2);
        SmithResult s = smith(A);
        CHECK(s.exps == std::vector<int>{1});
    }
    // A = [[p, 1], [0, p]] -> D = diag(1, p^2)
    {
        UMat A(R, 2, 2);
        A.at(0, 0) = R.from_int(2);
        A.at(0, 1) = R.one();
        A.at(1, 1) = R.from_int(2);
        SmithResult s = smith(A);
        CHECK(s.exps == std::vector<int>{0, 2});
    }
    // zero 2x2 -> diag(p^N, p^N)
    {
        UMat A(R, 2, 2);
        SmithResult s = smith(A);
        CHECK(s.exps == std::vector<int>{3, 3});
    }
}

TEST_CASE("smith factorization verified by multiplication (random)") {
    std::mt19937_64 rng(321);
    for (auto [p, d, N] : {std::tuple<long, int, int>{2, 1, 4}, {2, 2, 3}, {3, 2, 2}, {3, 1, 4}}) {
        const UnramRing& R = unram_ring(p, d, N);
        for (int rep = 0; rep < 12; ++rep) {
            int r = 1 + static_cast<int>(rng() % 6), c = 1 + static_cast<int>(rng() % 6);
            UMat A = rnd_mat(R, r, c, rng);
            SmithResult s = smith(A);
            CHECK(mat_mul(mat_mul(s.U, s.D), s.V) == A);
            CHECK(mat_mul(s.U, s.Uinv) == UMat::identity(R, r));
            CHECK(mat_mul(s.Uinv, s.U) == UMat::identity(R, r));
            CHECK(mat_mul(s.V, s.Vinv) == UMat::identity(R, c));
            // exponents ascend
            for (size_t k = 1; k < s.exps.size(); ++k)
                CHECK(s.exps[k - 1] <= s.exps[k]);
        }
    }
}

TEST_CASE("nullspace and solve") {
    std::mt19937_64 rng(99);
    const UnramRing& R = unram_ring(2, 2, 3);
    for (int rep = 0; rep < 20; ++rep) {
        int r = 1 + static_cast<int>(rng() % 5), c = 1 + static_cast<int>(rng() % 5);
        UMat A = rnd_mat(R, r, c, rng);
        UMat K = nullspace(A);
        CHECK(mat_mul(A, K).is_zero());
        // A x = A y is always solvable and the solution satisfies the system
        UMat y = rnd_mat(R, c, 1, rng);
        UMat b = mat_mul(A, y);
        auto x = solve(A, b);
        REQUIRE(x.has_value());
        CHECK(mat_mul(A, *x) == b);
    }
}

TEST_CASE("howell span: membership and canonicity") {
    std::mt19937_64 rng(4242);
    const UnramRing& R = unram_ring(3, 1, 3);
    for (int rep = 0; rep < 20; ++rep) {
        int dim = 2 + static_cast<int>(rng() % 3);
        std::vector<std::vector<UnramElem>> gens;
        int ng = 1 + static_cast<int>(rng() % 4);
        for (int g = 0; g < ng; ++g) {
            std::vector<UnramElem> v(static_cast<size_t>(dim));
            for (auto& x : v) {
                x = R.zero();
                x.c[0] = rng() % R.pp().mod;
            }
            gens.push_back(v);
        }
        Span S = howell_span(R, dim, gens);
        // every generator is in the span
        for (const auto& g : gens) CHECK(S.contains(g));
        // random W-combinations are in the span
        for (int t = 0; t < 5; ++t) {
            std::vector<UnramElem> v(static_cast<size_t>(dim), R.zero());
            for (const auto& g : gens) {
                u64 cscal = rng() % R.pp().mod;
                for (int i = 0; i < dim; ++i)
                    v[static_cast<size_t>(i)] =
                        R.add(v[static_cast<size_t>(i)], R.mul_scalar(cscal, g[static_cast<size_t>(i)]));
            }
            CHECK(S.contains(v));
        }
        // canonical form is permutation independent
        auto gens2 = gens;
        std::reverse(gens2.begin(), gens2.end());
        CHECK(howell_span(R, dim, gens2) == S);
    }
}

TEST_CASE("span_structure recovers cyclic decompositions") {
    const UnramRing& R = unram_ring(2, 1, 3); // Z/8
    // span of (2, 0) and (0, 4) in (Z/8)^2 is Z/4 + Z/2
    std::vector<std::vector<UnramElem>> gens{{R.from_int(2), R.from_int(0)},
                                             {R.from_int(0), R.from_int(4)}};
    SpanStructure ss = span_structure(R, 2, gens);
    CHECK(ss.divisors == std::vector<int>{2, 1});
}
