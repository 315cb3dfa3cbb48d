#include "gst/zsolve.hpp"

namespace gst {

UMat mult_matrix_z(const UnramRing& R, const UnramElem& w) {
    const UnramRing& Zp = unram_ring(R.p(), 1, R.N());
    int d = R.d();
    UMat M(Zp, d, d);
    UnramElem xp = R.one();
    for (int b = 0; b < d; ++b) {
        if (b > 0) xp = R.mul(xp, R.xi());
        UnramElem col = R.mul(w, xp);
        for (int a = 0; a < d; ++a) M.at(a, b) = Zp.from_int(static_cast<i64>(col.c[static_cast<size_t>(a)]));
    }
    return M;
}

UMat sigma_matrix_z(const UnramRing& R, int t) {
    const UnramRing& Zp = unram_ring(R.p(), 1, R.N());
    int d = R.d();
    UMat M(Zp, d, d);
    UnramElem xp = R.one();
    for (int b = 0; b < d; ++b) {
        if (b > 0) xp = R.mul(xp, R.xi());
        UnramElem col = R.sigma(xp, t);
        for (int a = 0; a < d; ++a) M.at(a, b) = Zp.from_int(static_cast<i64>(col.c[static_cast<size_t>(a)]));
    }
    return M;
}

ZSolutionSpace zsolve(const FinMod& src, const std::vector<ZCondition>& conds) {
    const UnramRing& R = *src.R;
    const UnramRing& Zp = unram_ring(R.p(), 1, R.N());
    int d = R.d();
    int N = R.N();
    int nz = src.rank() * d;

    // count equation rows
    int rows = 0;
    for (const auto& c : conds) rows += c.tgt.rank() * d;

    UMat sys(Zp, std::max(rows, 1), nz);
    int row0 = 0;
    for (const auto& c : conds) {
        for (const auto& term : c.terms) {
            if (term.L.rows != c.tgt.rank() || term.L.cols != src.rank())
                throw std::invalid_argument("zsolve: term shape mismatch");
            UMat S = sigma_matrix_z(R, term.twist);
            for (int i = 0; i < c.tgt.rank(); ++i) {
                int scale = N - c.tgt.e[static_cast<size_t>(i)];
                for (int j = 0; j < src.rank(); ++j) {
                    const UnramElem& w = term.L.at(i, j);
                    if (R.is_zero(w)) continue;
                    // contribution p^{scale} * M_w * S_t acting on the d
                    // coordinates of x_j
                    UMat Mw = mult_matrix_z(R, w);
                    UMat block = mat_mul(Mw, S);
                    for (int a = 0; a < d; ++a)
                        for (int b = 0; b < d; ++b)
                            sys.at(row0 + i * d + a, j * d + b) =
                                Zp.add(sys.at(row0 + i * d + a, j * d + b),
                                       Zp.mul_pk(block.at(a, b), scale));
                }
            }
        }
        row0 += c.tgt.rank() * d;
    }

    UMat K = nullspace(sys);

    // scaled Z-model generators: coordinate block j scaled by p^{N - e_j}
    std::vector<std::vector<UnramElem>> gens;
    for (int c = 0; c < K.cols; ++c) {
        std::vector<UnramElem> v(static_cast<size_t>(nz));
        for (int j = 0; j < src.rank(); ++j)
            for (int b = 0; b < d; ++b)
                v[static_cast<size_t>(j * d + b)] =
                    Zp.mul_pk(K.at(j * d + b, c), N - src.e[static_cast<size_t>(j)]);
        gens.push_back(std::move(v));
    }

    SpanStructure ss = span_structure(Zp, nz, gens);

    ZSolutionSpace out;
    out.src = src;
    out.zp = &Zp;
    out.z_divisors = ss.divisors;
    out.scaled_basis = ss.basis;
    for (const auto& sv : ss.basis) {
        UVec x(static_cast<size_t>(src.rank()), R.zero());
        for (int j = 0; j < src.rank(); ++j) {
            UnramElem w = R.zero();
            for (int b = 0; b < d; ++b) {
                UnramElem coord = Zp.div_pk(sv[static_cast<size_t>(j * d + b)],
                                            N - src.e[static_cast<size_t>(j)]);
                w.c[static_cast<size_t>(b)] = coord.c[0];
            }
            x[static_cast<size_t>(j)] = w;
        }
        out.basis.push_back(reduce_vec(src, x));
    }
    return out;
}

std::vector<std::vector<u64>> express_in_basis(const ZSolutionSpace& S,
                                               const std::vector<UVec>& elts) {
    const UnramRing& R = *S.src.R;
    const UnramRing& Zp = *S.zp;
    int d = R.d();
    int N = R.N();
    int nz = S.src.rank() * d;
    int nb = static_cast<int>(S.scaled_basis.size());
    UMat B(Zp, nz, nb);
    for (int c = 0; c < nb; ++c)
        for (int i = 0; i < nz; ++i) B.at(i, c) = S.scaled_basis[static_cast<size_t>(c)][static_cast<size_t>(i)];
    UMat T(Zp, nz, static_cast<int>(elts.size()));
    for (size_t k = 0; k < elts.size(); ++k) {
        UVec x = reduce_vec(S.src, elts[k]);
        for (int j = 0; j < S.src.rank(); ++j)
            for (int b = 0; b < d; ++b)
                T.at(j * d + b, static_cast<int>(k)) = Zp.mul_pk(
                    Zp.from_int(static_cast<i64>(x[static_cast<size_t>(j)].c[static_cast<size_t>(b)])),
                    N - S.src.e[static_cast<size_t>(j)]);
    }
    auto sol = solve(B, T);
    if (!sol) throw std::domain_error("express_in_basis: element outside the solution group");
    std::vector<std::vector<u64>> out;
    for (size_t k = 0; k < elts.size(); ++k) {
        std::vector<u64> coords;
        for (int c = 0; c < nb; ++c) {
            u64 v = sol->at(c, static_cast<int>(k)).c[0];
            u64 m = pow_u64(static_cast<u64>(R.p()),
                            static_cast<u64>(S.z_divisors[static_cast<size_t>(c)]));
            coords.push_back(v % m);
        }
        out.push_back(std::move(coords));
    }
    return out;
}

} // namespace gst
