#include "gst/matrix.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace gst {

UMat UMat::identity(const UnramRing& ring, int n) {
    UMat I(ring, n, n);
    for (int i = 0; i < n; ++i) I.at(i, i) = ring.one();
    return I;
}

bool UMat::is_zero() const {
    for (const auto& x : a)
        if (!R->is_zero(x)) return false;
    return true;
}

UMat mat_mul(const UMat& A, const UMat& B) {
    if (A.cols != B.rows) throw std::invalid_argument("mat_mul: shape mismatch");
    UMat C(*A.R, A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            const UnramElem& aik = A.at(i, k);
            if (A.R->is_zero(aik)) continue;
            for (int j = 0; j < B.cols; ++j)
                C.at(i, j) = A.R->add(C.at(i, j), A.R->mul(aik, B.at(k, j)));
        }
    return C;
}

UMat mat_add(const UMat& A, const UMat& B) {
    UMat C = A;
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = A.R->add(C.a[i], B.a[i]);
    return C;
}

UMat mat_sub(const UMat& A, const UMat& B) {
    UMat C = A;
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = A.R->sub(C.a[i], B.a[i]);
    return C;
}

UMat mat_neg(const UMat& A) {
    UMat C = A;
    for (auto& x : C.a) x = A.R->neg(x);
    return C;
}

UMat transpose(const UMat& A) {
    UMat T(*A.R, A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
    return T;
}

UMat sigma_mat(const UMat& A, int t) {
    UMat C = A;
    for (auto& x : C.a) x = A.R->sigma(x, t);
    return C;
}

UMat mat_scalar(const UMat& A, const UnramElem& s) {
    UMat C = A;
    for (auto& x : C.a) x = A.R->mul(x, s);
    return C;
}

UMat hstack(const UMat& A, const UMat& B) {
    if (A.rows != B.rows) throw std::invalid_argument("hstack: row mismatch");
    UMat C(*A.R, A.rows, A.cols + B.cols);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
        for (int j = 0; j < B.cols; ++j) C.at(i, A.cols + j) = B.at(i, j);
    }
    return C;
}

UMat vstack(const UMat& A, const UMat& B) {
    if (A.cols != B.cols) throw std::invalid_argument("vstack: col mismatch");
    UMat C(*A.R, A.rows + B.rows, A.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
    for (int i = 0; i < B.rows; ++i)
        for (int j = 0; j < B.cols; ++j) C.at(A.rows + i, j) = B.at(i, j);
    return C;
}

UMat col(const UMat& A, int j) {
    UMat C(*A.R, A.rows, 1);
    for (int i = 0; i < A.rows; ++i) C.at(i, 0) = A.at(i, j);
    return C;
}

std::vector<UnramElem> mat_apply(const UMat& A, const std::vector<UnramElem>& v) {
    if (static_cast<int>(v.size()) != A.cols) throw std::invalid_argument("mat_apply: shape");
    std::vector<UnramElem> r(static_cast<size_t>(A.rows), A.R->zero());
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j)
            if (!A.R->is_zero(A.at(i, j)))
                r[static_cast<size_t>(i)] =
                    A.R->add(r[static_cast<size_t>(i)], A.R->mul(A.at(i, j), v[static_cast<size_t>(j)]));
    return r;
}

SmithResult smith(const UMat& A) {
    const UnramRing& R = *A.R;
    int N = R.N();
    SmithResult res;
    res.U = UMat::identity(R, A.rows);
    res.Uinv = UMat::identity(R, A.rows);
    res.V = UMat::identity(R, A.cols);
    res.Vinv = UMat::identity(R, A.cols);
    UMat W = A;
    int n = std::min(A.rows, A.cols);
    res.D = UMat(R, A.rows, A.cols);

    auto swap_rows = [&](int i, int j) {
        if (i == j) return;
        for (int c = 0; c < W.cols; ++c) std::swap(W.at(i, c), W.at(j, c));
        for (int c = 0; c < res.U.rows; ++c) std::swap(res.U.at(c, i), res.U.at(c, j));
        for (int c = 0; c < res.Uinv.cols; ++c) std::swap(res.Uinv.at(i, c), res.Uinv.at(j, c));
    };
    auto swap_cols = [&](int i, int j) {
        if (i == j) return;
        for (int r = 0; r < W.rows; ++r) std::swap(W.at(r, i), W.at(r, j));
        for (int r = 0; r < res.V.cols; ++r) std::swap(res.V.at(i, r), res.V.at(j, r));
        for (int r = 0; r < res.Vinv.rows; ++r) std::swap(res.Vinv.at(r, i), res.Vinv.at(r, j));
    };
    auto scale_row = [&](int i, const UnramElem& u) {
        UnramElem uinv = R.inv(u);
        for (int c = 0; c < W.cols; ++c) W.at(i, c) = R.mul(u, W.at(i, c));
        for (int r = 0; r < res.U.rows; ++r) res.U.at(r, i) = R.mul(res.U.at(r, i), uinv);
        for (int c = 0; c < res.Uinv.cols; ++c) res.Uinv.at(i, c) = R.mul(u, res.Uinv.at(i, c));
    };
    auto addmul_row = [&](int dst, int src, const UnramElem& c) {
        for (int j = 0; j < W.cols; ++j)
            W.at(dst, j) = R.add(W.at(dst, j), R.mul(c, W.at(src, j)));
        for (int r = 0; r < res.U.rows; ++r)
            res.U.at(r, src) = R.sub(res.U.at(r, src), R.mul(c, res.U.at(r, dst)));
        for (int j = 0; j < res.Uinv.cols; ++j)
            res.Uinv.at(dst, j) = R.add(res.Uinv.at(dst, j), R.mul(c, res.Uinv.at(src, j)));
    };
    auto addmul_col = [&](int dst, int src, const UnramElem& c) {
        for (int i = 0; i < W.rows; ++i)
            W.at(i, dst) = R.add(W.at(i, dst), R.mul(c, W.at(i, src)));
        for (int jj = 0; jj < res.V.cols; ++jj)
            res.V.at(src, jj) = R.sub(res.V.at(src, jj), R.mul(c, res.V.at(dst, jj)));
        for (int i = 0; i < res.Vinv.rows; ++i)
            res.Vinv.at(i, dst) = R.add(res.Vinv.at(i, dst), R.mul(c, res.Vinv.at(i, src)));
    };

    for (int k = 0; k < n; ++k) {
        int bi = -1, bj = -1, bv = N;
        for (int i = k; i < W.rows; ++i)
            for (int j = k; j < W.cols; ++j) {
                int v = R.val(W.at(i, j));
                if (v < bv) {
                    bv = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) {
            for (int t = k; t < n; ++t) res.exps.push_back(N);
            break;
        }
        swap_rows(k, bi);
        swap_cols(k, bj);
        UnramElem unit = R.div_pk(W.at(k, k), bv);
        scale_row(k, R.inv(unit));
        for (int i = k + 1; i < W.rows; ++i) {
            const UnramElem& e = W.at(i, k);
            if (R.is_zero(e)) continue;
            UnramElem q = R.div_pk(e, bv);
            addmul_row(i, k, R.neg(q));
        }
        for (int j = k + 1; j < W.cols; ++j) {
            const UnramElem& e = W.at(k, j);
            if (R.is_zero(e)) continue;
            UnramElem q = R.div_pk(e, bv);
            addmul_col(j, k, R.neg(q));
        }
        res.exps.push_back(bv);
    }
    for (int k = 0; k < n; ++k)
        if (res.exps[static_cast<size_t>(k)] < N)
            res.D.at(k, k) = R.mul_pk(R.one(), res.exps[static_cast<size_t>(k)]);
    return res;
}

std::optional<UMat> solve(const UMat& A, const UMat& B) {
    if (A.rows != B.rows) throw std::invalid_argument("solve: shape mismatch");
    const UnramRing& R = *A.R;
    int N = R.N();
    SmithResult s = smith(A);
    UMat Y = mat_mul(s.Uinv, B);
    UMat Z(R, A.cols, B.cols);
    int n = std::min(A.rows, A.cols);
    for (int c = 0; c < B.cols; ++c) {
        for (int i = 0; i < A.rows; ++i) {
            const UnramElem& y = Y.at(i, c);
            if (i < n && s.exps[static_cast<size_t>(i)] < N) {
                int e = s.exps[static_cast<size_t>(i)];
                if (R.val(y) < e) return std::nullopt;
                Z.at(i, c) = R.div_pk(y, e);
            } else {
                if (!R.is_zero(y)) return std::nullopt;
            }
        }
    }
    return mat_mul(s.Vinv, Z);
}

UMat nullspace(const UMat& A) {
    const UnramRing& R = *A.R;
    int N = R.N();
    SmithResult s = smith(A);
    std::vector<UMat> gens;
    int n = std::min(A.rows, A.cols);
    for (int k = 0; k < A.cols; ++k) {
        int e = (k < n) ? s.exps[static_cast<size_t>(k)] : N;
        if (e == 0) continue;
        UMat z(R, A.cols, 1);
        z.at(k, 0) = R.mul_pk(R.one(), N - e);
        gens.push_back(mat_mul(s.Vinv, z));
    }
    UMat K(R, A.cols, static_cast<int>(gens.size()));
    for (size_t g = 0; g < gens.size(); ++g)
        for (int i = 0; i < A.cols; ++i) K.at(i, static_cast<int>(g)) = gens[g].at(i, 0);
    return K;
}

Span howell_span(const UnramRing& R, int dim, const std::vector<std::vector<UnramElem>>& gens) {
    int N = R.N();
    Span S;
    S.R = &R;
    S.dim = dim;
    std::vector<std::vector<UnramElem>> work = gens;
    for (int c = 0; c < dim; ++c) {
        int best = -1, bv = N;
        for (size_t i = 0; i < work.size(); ++i) {
            int v = R.val(work[i][static_cast<size_t>(c)]);
            if (v < bv) {
                bv = v;
                best = static_cast<int>(i);
            }
        }
        if (best < 0) continue;
        std::vector<UnramElem> piv = work[static_cast<size_t>(best)];
        work.erase(work.begin() + best);
        UnramElem u = R.div_pk(piv[static_cast<size_t>(c)], bv);
        UnramElem uinv = R.inv(u);
        for (auto& x : piv) x = R.mul(uinv, x);
        for (auto& w : work) {
            const UnramElem& e = w[static_cast<size_t>(c)];
            if (R.is_zero(e)) continue;
            UnramElem q = R.div_pk(e, bv);
            for (size_t j = 0; j < w.size(); ++j)
                w[j] = R.sub(w[j], R.mul(q, piv[j]));
        }
        if (bv > 0 && N - bv > 0) {
            std::vector<UnramElem> tail(piv.size());
            bool nz = false;
            for (size_t j = 0; j < piv.size(); ++j) {
                tail[j] = R.mul_pk(piv[j], N - bv);
                if (!R.is_zero(tail[j])) nz = true;
            }
            if (nz) work.push_back(std::move(tail));
        }
        S.basis.push_back(std::move(piv));
        S.pivot_row.push_back(c);
        S.pivot_val.push_back(bv);
    }
    for (size_t r = 0; r < S.basis.size(); ++r) {
        for (size_t r2 = r + 1; r2 < S.basis.size(); ++r2) {
            int c2 = S.pivot_row[r2];
            int v2 = S.pivot_val[r2];
            const UnramElem& e = S.basis[r][static_cast<size_t>(c2)];
            UnramElem rem = R.reduce_mod_pk(e, v2);
            UnramElem diff = R.sub(e, rem);
            if (!R.is_zero(diff)) {
                UnramElem q = R.div_pk(diff, v2);
                for (size_t j = 0; j < S.basis[r].size(); ++j)
                    S.basis[r][j] = R.sub(S.basis[r][j], R.mul(q, S.basis[r2][j]));
            }
        }
    }
    return S;
}

bool Span::contains(std::vector<UnramElem> v) const {
    const UnramRing& ring = *R;
    for (size_t r = 0; r < basis.size(); ++r) {
        int c = pivot_row[r], pv = pivot_val[r];
        const UnramElem& e = v[static_cast<size_t>(c)];
        if (ring.is_zero(e)) continue;
        if (ring.val(e) < pv) return false;
        UnramElem q = ring.div_pk(e, pv);
        for (size_t j = 0; j < v.size(); ++j)
            v[j] = ring.sub(v[j], ring.mul(q, basis[r][j]));
    }
    for (const auto& x : v)
        if (!ring.is_zero(x)) return false;
    return true;
}

SpanStructure span_structure(const UnramRing& R, int dim,
                             const std::vector<std::vector<UnramElem>>& gens) {
    SpanStructure out;
    if (gens.empty()) return out;
    int g = static_cast<int>(gens.size());
    UMat G(R, dim, g);
    for (int j = 0; j < g; ++j)
        for (int i = 0; i < dim; ++i)
            G.at(i, j) = gens[static_cast<size_t>(j)][static_cast<size_t>(i)];
    UMat K = nullspace(G);
    std::vector<int> divisors;
    std::vector<std::vector<UnramElem>> basis;
    if (K.cols == 0) {
        for (int j = 0; j < g; ++j) {
            divisors.push_back(R.N());
            basis.push_back(gens[static_cast<size_t>(j)]);
        }
    } else {
        SmithResult s = smith(K);
        UMat GU = mat_mul(G, s.U);
        int n = std::min(K.rows, K.cols);
        for (int j = 0; j < g; ++j) {
            int e = (j < n) ? s.exps[static_cast<size_t>(j)] : R.N();
            if (e == 0) continue;
            divisors.push_back(e);
            std::vector<UnramElem> b(static_cast<size_t>(dim));
            for (int i = 0; i < dim; ++i) b[static_cast<size_t>(i)] = GU.at(i, j);
            basis.push_back(std::move(b));
        }
    }
    std::vector<size_t> idx(divisors.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](size_t a, size_t b) { return divisors[a] > divisors[b]; });
    for (size_t i : idx) {
        out.divisors.push_back(divisors[i]);
        out.basis.push_back(basis[i]);
    }
    return out;
}

} // namespace gst
