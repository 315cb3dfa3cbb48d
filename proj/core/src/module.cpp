#include "gst/module.hpp"

#include <sstream>
#include <stdexcept>

namespace gst {

namespace {

UnramElem shift_exact(const UnramRing& R, const UnramElem& x, int k) {
    return k >= 0 ? R.mul_pk(x, k) : R.div_pk(x, -k);
}

int pos(int x) { return x > 0 ? x : 0; }

} // namespace

UVec reduce_vec(const FinMod& M, UVec v) {
    for (int i = 0; i < M.rank(); ++i)
        v[static_cast<size_t>(i)] = M.R->reduce_mod_pk(v[static_cast<size_t>(i)], M.e[static_cast<size_t>(i)]);
    return v;
}

UVec zero_vec(const FinMod& M) { return UVec(static_cast<size_t>(M.rank()), M.R->zero()); }

UVec basis_vec(const FinMod& M, int i) {
    UVec v = zero_vec(M);
    v[static_cast<size_t>(i)] = M.R->one();
    return v;
}

UVec add_vec(const FinMod& M, const UVec& a, const UVec& b) {
    UVec r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] = M.R->add(r[i], b[i]);
    return reduce_vec(M, std::move(r));
}

UVec sub_vec(const FinMod& M, const UVec& a, const UVec& b) {
    UVec r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] = M.R->sub(r[i], b[i]);
    return reduce_vec(M, std::move(r));
}

UVec scal_vec(const FinMod& M, const UnramElem& c, const UVec& a) {
    UVec r = a;
    for (auto& x : r) x = M.R->mul(c, x);
    return reduce_vec(M, std::move(r));
}

UVec sigma_vec(const FinMod& M, const UVec& a, int t) {
    UVec r = a;
    for (auto& x : r) x = M.R->sigma(x, t);
    return reduce_vec(M, std::move(r));
}

bool is_zero_vec(const FinMod& M, const UVec& a) {
    for (int i = 0; i < M.rank(); ++i)
        if (!M.R->is_zero(M.R->reduce_mod_pk(a[static_cast<size_t>(i)], M.e[static_cast<size_t>(i)])))
            return false;
    return true;
}

ModMap::ModMap(FinMod s, FinMod t, int tw, UMat m)
    : src(std::move(s)), tgt(std::move(t)), twist(tw), A(std::move(m)) {
    if (A.rows != tgt.rank() || A.cols != src.rank())
        throw std::invalid_argument("ModMap: matrix shape mismatch");
    const UnramRing& R = *src.R;
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) {
            A.at(i, j) = R.reduce_mod_pk(A.at(i, j), tgt.e[static_cast<size_t>(i)]);
            int need = tgt.e[static_cast<size_t>(i)] - src.e[static_cast<size_t>(j)];
            if (R.val(A.at(i, j)) < need)
                throw std::invalid_argument("ModMap: entry not well-defined (valuation too small)");
        }
}

UVec ModMap::apply(const UVec& x) const {
    UVec tw(x.size());
    for (size_t j = 0; j < x.size(); ++j) tw[j] = src.R->sigma(x[j], twist);
    UVec y = mat_apply(A, tw);
    return reduce_vec(tgt, std::move(y));
}

ModMap zero_map(const FinMod& src, const FinMod& tgt, int twist) {
    return ModMap(src, tgt, twist, UMat(*src.R, tgt.rank(), src.rank()));
}

ModMap identity_map(const FinMod& M) {
    return ModMap(M, M, 0, UMat::identity(*M.R, M.rank()));
}

ModMap scalar_map(const FinMod& M, const UnramElem& c) {
    UMat A = UMat::identity(*M.R, M.rank());
    for (int i = 0; i < M.rank(); ++i) A.at(i, i) = c;
    return ModMap(M, M, 0, std::move(A));
}

ModMap p_power_map(const FinMod& M, int k) {
    return scalar_map(M, M.R->mul_pk(M.R->one(), k));
}

ModMap compose(const ModMap& f, const ModMap& g) {
    if (!f.src.same_divisors(g.tgt) || f.src.e != g.tgt.e)
        throw std::invalid_argument("compose: middle modules differ");
    return ModMap(g.src, f.tgt, f.twist + g.twist, mat_mul(f.A, sigma_mat(g.A, f.twist)));
}

ModMap map_add(const ModMap& f, const ModMap& g) {
    if (f.twist != g.twist) throw std::invalid_argument("map_add: twist mismatch");
    return ModMap(f.src, f.tgt, f.twist, mat_add(f.A, g.A));
}

ModMap map_sub(const ModMap& f, const ModMap& g) {
    if (f.twist != g.twist) throw std::invalid_argument("map_sub: twist mismatch");
    return ModMap(f.src, f.tgt, f.twist, mat_sub(f.A, g.A));
}

bool map_is_zero(const ModMap& f) {
    for (int i = 0; i < f.A.rows; ++i)
        for (int j = 0; j < f.A.cols; ++j)
            if (!f.src.R->is_zero(f.src.R->reduce_mod_pk(f.A.at(i, j), f.tgt.e[static_cast<size_t>(i)])))
                return false;
    return true;
}

bool map_eq(const ModMap& f, const ModMap& g) {
    if (f.src.e != g.src.e || f.tgt.e != g.tgt.e) return false;
    if (map_is_zero(f) && map_is_zero(g)) return true;
    int d = f.src.R->d();
    if (((f.twist - g.twist) % d + d) % d != 0) return false;
    return map_is_zero(map_sub(f, ModMap(g.src, g.tgt, f.twist, g.A)));
}

UVec to_free(const FinMod& M, const UVec& x) {
    UVec v = x;
    for (int i = 0; i < M.rank(); ++i)
        v[static_cast<size_t>(i)] = M.R->mul_pk(v[static_cast<size_t>(i)], M.R->N() - M.e[static_cast<size_t>(i)]);
    return v;
}

UVec from_free(const FinMod& M, const UVec& v) {
    UVec x = v;
    for (int i = 0; i < M.rank(); ++i)
        x[static_cast<size_t>(i)] = M.R->div_pk(x[static_cast<size_t>(i)], M.R->N() - M.e[static_cast<size_t>(i)]);
    return reduce_vec(M, std::move(x));
}

UMat map_free(const ModMap& f) {
    const UnramRing& R = *f.src.R;
    UMat B(R, f.tgt.rank(), f.src.rank());
    for (int i = 0; i < B.rows; ++i)
        for (int j = 0; j < B.cols; ++j)
            B.at(i, j) = shift_exact(R, f.A.at(i, j),
                                     f.src.e[static_cast<size_t>(j)] - f.tgt.e[static_cast<size_t>(i)]);
    return B;
}

namespace {

// rows of A scaled by p^{N - e_tgt[i]}: the free-model matrix composed with
// the lattice parametrization
UMat row_scaled(const ModMap& f) {
    const UnramRing& R = *f.src.R;
    UMat B(R, f.tgt.rank(), f.src.rank());
    for (int i = 0; i < B.rows; ++i)
        for (int j = 0; j < B.cols; ++j)
            B.at(i, j) = R.mul_pk(f.A.at(i, j), R.N() - f.tgt.e[static_cast<size_t>(i)]);
    return B;
}

SubModule span_to_submodule(const FinMod& M, const std::vector<UVec>& free_gens) {
    SpanStructure ss = span_structure(*M.R, M.rank(), free_gens);
    FinMod sub(*M.R, ss.divisors);
    UMat J(*M.R, M.rank(), sub.rank());
    for (int c = 0; c < sub.rank(); ++c) {
        UVec abs = from_free(M, ss.basis[static_cast<size_t>(c)]);
        for (int i = 0; i < M.rank(); ++i) J.at(i, c) = abs[static_cast<size_t>(i)];
    }
    return SubModule{sub, ModMap(sub, M, 0, std::move(J))};
}

} // namespace

SubModule kernel(const ModMap& f) {
    const UnramRing& R = *f.src.R;
    UMat B = row_scaled(f);
    UMat K = nullspace(B);
    std::vector<UVec> gens;
    for (int c = 0; c < K.cols; ++c) {
        UVec v(static_cast<size_t>(f.src.rank()));
        for (int i = 0; i < f.src.rank(); ++i)
            v[static_cast<size_t>(i)] =
                R.mul_pk(R.sigma(K.at(i, c), -f.twist), R.N() - f.src.e[static_cast<size_t>(i)]);
        gens.push_back(std::move(v));
    }
    return span_to_submodule(f.src, gens);
}

SubModule image(const ModMap& f) {
    UMat B = row_scaled(f);
    std::vector<UVec> gens;
    for (int c = 0; c < B.cols; ++c) {
        UVec v(static_cast<size_t>(f.tgt.rank()));
        for (int i = 0; i < f.tgt.rank(); ++i) v[static_cast<size_t>(i)] = B.at(i, c);
        gens.push_back(std::move(v));
    }
    return span_to_submodule(f.tgt, gens);
}

SubModule submodule(const FinMod& M, const std::vector<UVec>& gens) {
    std::vector<UVec> free_gens;
    for (const auto& g : gens) free_gens.push_back(to_free(M, reduce_vec(M, g)));
    return span_to_submodule(M, free_gens);
}

QuotModule quotient(const FinMod& M, const std::vector<UVec>& rel_gens) {
    const UnramRing& R = *M.R;
    int r = M.rank();
    UMat Rel(R, r, r + static_cast<int>(rel_gens.size()));
    for (int i = 0; i < r; ++i) Rel.at(i, i) = R.mul_pk(R.one(), M.e[static_cast<size_t>(i)]);
    for (size_t c = 0; c < rel_gens.size(); ++c)
        for (int i = 0; i < r; ++i) Rel.at(i, r + static_cast<int>(c)) = rel_gens[c][static_cast<size_t>(i)];
    SmithResult s = smith(Rel);
    int n = std::min(Rel.rows, Rel.cols);
    std::vector<int> divisors;
    std::vector<int> kept;
    for (int i = 0; i < r; ++i) {
        int e = (i < n) ? s.exps[static_cast<size_t>(i)] : R.N();
        if (e == 0) continue;
        divisors.push_back(std::min(e, R.N()));
        kept.push_back(i);
    }
    FinMod Q(R, divisors);
    UMat P(R, Q.rank(), r);
    for (int qi = 0; qi < Q.rank(); ++qi)
        for (int j = 0; j < r; ++j) P.at(qi, j) = s.Uinv.at(kept[static_cast<size_t>(qi)], j);
    return QuotModule{Q, ModMap(M, Q, 0, std::move(P))};
}

QuotModule cokernel(const ModMap& f) {
    std::vector<UVec> gens;
    for (int c = 0; c < f.src.rank(); ++c) {
        UVec v(static_cast<size_t>(f.tgt.rank()));
        for (int i = 0; i < f.tgt.rank(); ++i) v[static_cast<size_t>(i)] = f.A.at(i, c);
        gens.push_back(std::move(v));
    }
    return quotient(f.tgt, gens);
}

UVec preimage(const ModMap& j, const UVec& x) {
    const UnramRing& R = *j.src.R;
    UMat B = row_scaled(j);
    UVec xf = to_free(j.tgt, reduce_vec(j.tgt, x));
    UMat b(R, j.tgt.rank(), 1);
    for (int i = 0; i < j.tgt.rank(); ++i) b.at(i, 0) = xf[static_cast<size_t>(i)];
    auto sol = solve(B, b);
    if (!sol) throw std::domain_error("preimage: element not in image");
    UVec z(static_cast<size_t>(j.src.rank()));
    for (int i = 0; i < j.src.rank(); ++i) z[static_cast<size_t>(i)] = R.sigma(sol->at(i, 0), -j.twist);
    return reduce_vec(j.src, std::move(z));
}

ModMap factor_through(const QuotModule& q, const ModMap& f) {
    // g with g o proj = f; columns g(e_c) = f(y_c) for any preimage y_c
    const UnramRing& R = *f.src.R;
    UMat G(R, f.tgt.rank(), q.quot.rank());
    for (int c = 0; c < q.quot.rank(); ++c) {
        UVec y = preimage(ModMap(q.proj.src, q.proj.tgt, 0, q.proj.A), basis_vec(q.quot, c));
        UVec fy = f.apply(y);
        for (int i = 0; i < f.tgt.rank(); ++i) G.at(i, c) = fy[static_cast<size_t>(i)];
    }
    ModMap g(q.quot, f.tgt, f.twist, std::move(G));
    return g;
}

ModMap restrict_map(const ModMap& f, const SubModule& s) {
    const UnramRing& R = *f.src.R;
    UMat G(R, s.sub.rank(), s.sub.rank());
    for (int c = 0; c < s.sub.rank(); ++c) {
        UVec x = s.incl.apply(basis_vec(s.sub, c));
        UVec fx = f.apply(x);
        UVec z = preimage(s.incl, fx); // throws if f does not preserve s
        for (int i = 0; i < s.sub.rank(); ++i) G.at(i, c) = z[static_cast<size_t>(i)];
    }
    return ModMap(s.sub, s.sub, f.twist, std::move(G));
}

FinMod direct_sum(const FinMod& A, const FinMod& B) {
    std::vector<int> e = A.e;
    e.insert(e.end(), B.e.begin(), B.e.end());
    return FinMod(*A.R, std::move(e));
}

ModMap inclusion_left(const FinMod& A, const FinMod& B) {
    FinMod S = direct_sum(A, B);
    UMat J(*A.R, S.rank(), A.rank());
    for (int i = 0; i < A.rank(); ++i) J.at(i, i) = A.R->one();
    return ModMap(A, S, 0, std::move(J));
}

ModMap inclusion_right(const FinMod& A, const FinMod& B) {
    FinMod S = direct_sum(A, B);
    UMat J(*A.R, S.rank(), B.rank());
    for (int i = 0; i < B.rank(); ++i) J.at(A.rank() + i, i) = A.R->one();
    return ModMap(B, S, 0, std::move(J));
}

ModMap sum_map(const ModMap& f, const ModMap& g) {
    if (f.twist != g.twist) throw std::invalid_argument("sum_map: twist mismatch");
    FinMod S = direct_sum(f.src, g.src);
    FinMod T = direct_sum(f.tgt, g.tgt);
    UMat A(*f.src.R, T.rank(), S.rank());
    for (int i = 0; i < f.tgt.rank(); ++i)
        for (int j = 0; j < f.src.rank(); ++j) A.at(i, j) = f.A.at(i, j);
    for (int i = 0; i < g.tgt.rank(); ++i)
        for (int j = 0; j < g.src.rank(); ++j)
            A.at(f.tgt.rank() + i, f.src.rank() + j) = g.A.at(i, j);
    return ModMap(S, T, f.twist, std::move(A));
}

// -- bifunctors ---------------------------------------------------------------

FinMod tensor_mod(const FinMod& M, const FinMod& L) {
    std::vector<int> e;
    for (int i = 0; i < M.rank(); ++i)
        for (int j = 0; j < L.rank(); ++j)
            e.push_back(std::min(M.e[static_cast<size_t>(i)], L.e[static_cast<size_t>(j)]));
    return FinMod(*M.R, std::move(e));
}

ModMap tensor_map(const ModMap& f, const ModMap& g) {
    if (f.twist != g.twist) throw std::invalid_argument("tensor_map: twist mismatch");
    const UnramRing& R = *f.src.R;
    FinMod S = tensor_mod(f.src, g.src);
    FinMod T = tensor_mod(f.tgt, g.tgt);
    UMat A(R, T.rank(), S.rank());
    int rLs = g.src.rank(), rLt = g.tgt.rank();
    for (int i = 0; i < f.src.rank(); ++i)
        for (int j = 0; j < rLs; ++j)
            for (int i2 = 0; i2 < f.tgt.rank(); ++i2)
                for (int j2 = 0; j2 < rLt; ++j2)
                    A.at(i2 * rLt + j2, i * rLs + j) = R.mul(f.A.at(i2, i), g.A.at(j2, j));
    return ModMap(S, T, f.twist, std::move(A));
}

FinMod tor_mod(const FinMod& M, const FinMod& L) { return tensor_mod(M, L); }

UMat resolution_lift(const ModMap& f) {
    const UnramRing& R = *f.src.R;
    UMat B(R, f.tgt.rank(), f.src.rank());
    for (int i = 0; i < B.rows; ++i)
        for (int j = 0; j < B.cols; ++j)
            B.at(i, j) = shift_exact(R, f.A.at(i, j),
                                     f.src.e[static_cast<size_t>(j)] - f.tgt.e[static_cast<size_t>(i)]);
    return B;
}

ModMap tor_embedding(const FinMod& M, const FinMod& L) {
    const UnramRing& R = *M.R;
    FinMod T = tor_mod(M, L);
    std::vector<int> big_div;
    for (int i = 0; i < M.rank(); ++i)
        big_div.insert(big_div.end(), L.e.begin(), L.e.end());
    FinMod big(R, big_div);
    UMat J(R, big.rank(), T.rank());
    int rL = L.rank();
    for (int i = 0; i < M.rank(); ++i)
        for (int j = 0; j < rL; ++j)
            J.at(i * rL + j, i * rL + j) =
                R.mul_pk(R.one(), pos(L.e[static_cast<size_t>(j)] - M.e[static_cast<size_t>(i)]));
    return ModMap(T, big, 0, std::move(J));
}

ModMap tor_map(const ModMap& f, const ModMap& g) {
    if (f.twist != g.twist) throw std::invalid_argument("tor_map: twist mismatch");
    const UnramRing& R = *f.src.R;
    FinMod S = tor_mod(f.src, g.src);
    FinMod T = tor_mod(f.tgt, g.tgt);
    UMat lift = resolution_lift(f);
    UMat A(R, T.rank(), S.rank());
    int rLs = g.src.rank(), rLt = g.tgt.rank();
    for (int i = 0; i < f.src.rank(); ++i)
        for (int j = 0; j < rLs; ++j) {
            int c = i * rLs + j;
            int sc = pos(g.src.e[static_cast<size_t>(j)] - f.src.e[static_cast<size_t>(i)]);
            for (int i2 = 0; i2 < f.tgt.rank(); ++i2)
                for (int k = 0; k < rLt; ++k) {
                    UnramElem val = R.mul(lift.at(i2, i), R.mul_pk(g.A.at(k, j), sc));
                    int down = pos(g.tgt.e[static_cast<size_t>(k)] - f.tgt.e[static_cast<size_t>(i2)]);
                    A.at(i2 * rLt + k, c) = shift_exact(R, val, -down);
                }
        }
    return ModMap(S, T, f.twist, std::move(A));
}

FinMod hom_mod(const FinMod& M, const FinMod& L) { return tensor_mod(M, L); }

ModMap hom_map(const ModMap& alpha, const ModMap& beta) {
    if (alpha.twist != 0 || beta.twist != 0)
        throw std::invalid_argument("hom_map: linear maps expected");
    const UnramRing& R = *alpha.src.R;
    // alpha: M' -> M, beta: L -> L'; result Hom(M, L) -> Hom(M', L')
    const FinMod& M = alpha.tgt;
    const FinMod& Mp = alpha.src;
    const FinMod& L = beta.src;
    const FinMod& Lp = beta.tgt;
    FinMod S = hom_mod(M, L);
    FinMod T = hom_mod(Mp, Lp);
    UMat A(R, T.rank(), S.rank());
    int rL = L.rank(), rLp = Lp.rank();
    for (int i = 0; i < M.rank(); ++i)
        for (int j = 0; j < rL; ++j) {
            int c = i * rL + j;
            int up = pos(L.e[static_cast<size_t>(j)] - M.e[static_cast<size_t>(i)]);
            for (int k = 0; k < Mp.rank(); ++k)
                for (int l = 0; l < rLp; ++l) {
                    UnramElem val = R.mul(alpha.A.at(i, k), R.mul_pk(beta.A.at(l, j), up));
                    int down = pos(Lp.e[static_cast<size_t>(l)] - Mp.e[static_cast<size_t>(k)]);
                    A.at(k * rLp + l, c) = shift_exact(R, val, -down);
                }
        }
    return ModMap(S, T, 0, std::move(A));
}

ModMap hom_element(const FinMod& M, const FinMod& L, const UVec& h) {
    const UnramRing& R = *M.R;
    UMat A(R, L.rank(), M.rank());
    int rL = L.rank();
    for (int i = 0; i < M.rank(); ++i)
        for (int j = 0; j < rL; ++j)
            A.at(j, i) = R.mul_pk(h[static_cast<size_t>(i * rL + j)],
                                  pos(L.e[static_cast<size_t>(j)] - M.e[static_cast<size_t>(i)]));
    return ModMap(M, L, 0, std::move(A));
}

FinMod ext_mod(const FinMod& M, const FinMod& L) { return tensor_mod(M, L); }

ModMap ext_map(const ModMap& alpha, const ModMap& beta) {
    if (alpha.twist != 0 || beta.twist != 0)
        throw std::invalid_argument("ext_map: linear maps expected");
    const UnramRing& R = *alpha.src.R;
    // alpha: M' -> M, beta: L -> L'; result Ext(M, L) -> Ext(M', L')
    const FinMod& M = alpha.tgt;
    const FinMod& Mp = alpha.src;
    const FinMod& L = beta.src;
    const FinMod& Lp = beta.tgt;
    FinMod S = ext_mod(M, L);
    FinMod T = ext_mod(Mp, Lp);
    UMat lift = resolution_lift(alpha);
    UMat A(R, T.rank(), S.rank());
    int rL = L.rank(), rLp = Lp.rank();
    for (int i = 0; i < M.rank(); ++i)
        for (int j = 0; j < rL; ++j) {
            int c = i * rL + j;
            for (int k = 0; k < Mp.rank(); ++k)
                for (int l = 0; l < rLp; ++l)
                    A.at(k * rLp + l, c) = R.mul(lift.at(i, k), beta.A.at(l, j));
        }
    return ModMap(S, T, 0, std::move(A));
}

std::string describe(const FinMod& M) {
    std::ostringstream os;
    if (M.is_zero()) return "0";
    auto d = M.sorted_divisors();
    size_t i = 0;
    bool first = true;
    while (i < d.size()) {
        size_t j = i;
        while (j < d.size() && d[j] == d[i]) ++j;
        if (!first) os << " + ";
        first = false;
        if (j - i > 1) os << (j - i) << "*";
        os << "W/p^" << d[i];
        i = j;
    }
    return os.str();
}

} // namespace gst
