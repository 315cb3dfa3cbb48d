#ifndef GST_MATRIX_HPP
#define GST_MATRIX_HPP

#include "gst/unram.hpp"

#include <optional>
#include <vector>

namespace gst {

// Dense matrices over a Galois ring W_N(F_q).  W_N(F_q) is a chain ring
// (ideals are (p^k)), so Gaussian elimination with minimal-valuation pivots
// yields Smith and Howell normal forms with invertible transforms.

struct UMat {
    const UnramRing* R = nullptr;
    int rows = 0, cols = 0;
    std::vector<UnramElem> a; // row-major

    UMat() = default;
    UMat(const UnramRing& ring, int r, int c)
        : R(&ring), rows(r), cols(c),
          a(static_cast<size_t>(r) * static_cast<size_t>(c), ring.zero()) {}

    UnramElem& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const UnramElem& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static UMat identity(const UnramRing& ring, int n);
    bool is_zero() const;
    bool operator==(const UMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

UMat mat_mul(const UMat& A, const UMat& B);
UMat mat_add(const UMat& A, const UMat& B);
UMat mat_sub(const UMat& A, const UMat& B);
UMat mat_neg(const UMat& A);
UMat transpose(const UMat& A);
UMat sigma_mat(const UMat& A, int t); // apply sigma^t entrywise
UMat mat_scalar(const UMat& A, const UnramElem& s);
UMat hstack(const UMat& A, const UMat& B);
UMat vstack(const UMat& A, const UMat& B);
UMat col(const UMat& A, int j);
std::vector<UnramElem> mat_apply(const UMat& A, const std::vector<UnramElem>& v);

// Smith normal form A = U * D * V with U, V invertible and D diagonal with
// entries p^{exps[k]} (exps[k] = N encodes the zero entry).  Uinv and Vinv
// are maintained alongside.  Pivots are chosen with minimal p-valuation,
// ties broken row-major.
struct SmithResult {
    UMat U, Uinv, D, V, Vinv;
    std::vector<int> exps; // length min(rows, cols), ascending
};

SmithResult smith(const UMat& A);

// particular solution of A X = B, or nullopt when inconsistent
std::optional<UMat> solve(const UMat& A, const UMat& B);

// columns generate the kernel {x : A x = 0} over (W/p^N)^cols
UMat nullspace(const UMat& A);

// Canonical Howell basis of the column span of G: the unique canonical
// generating set of the submodule of (W/p^N)^rows spanned by the columns.
// Provides membership tests and span equality.
struct Span {
    const UnramRing* R = nullptr;
    int dim = 0;              // ambient rank
    std::vector<std::vector<UnramElem>> basis; // canonical generators
    std::vector<int> pivot_row, pivot_val;

    bool contains(std::vector<UnramElem> v) const;
    bool operator==(const Span& o) const {
        return dim == o.dim && basis == o.basis;
    }
    bool is_zero() const { return basis.empty(); }
};

Span howell_span(const UnramRing& R, int dim, const std::vector<std::vector<UnramElem>>& gens);

// Abstract structure of a span: divisors e_k (descending) together with
// span elements forming a basis realizing S = (+)_k W/p^{e_k}.
struct SpanStructure {
    std::vector<int> divisors;
    std::vector<std::vector<UnramElem>> basis;
};

SpanStructure span_structure(const UnramRing& R, int dim,
                             const std::vector<std::vector<UnramElem>>& gens);

} // namespace gst

#endif
