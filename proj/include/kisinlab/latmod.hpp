#pragma once

#include <array>
#include <compare>
#include <string>
#include <utility>

#include "kisinlab/series.hpp"

namespace kisinlab {

class SingularMatrix : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// 2x2 matrix of series, m[row][col]. Columns are basis vectors.
struct Mat2 {
    std::array<std::array<Series, 2>, 2> m;

    static Mat2 identity(const FieldCtx& ctx);
    static Mat2 diag(const Series& a, const Series& b);
    static Mat2 of(const Series& a, const Series& b, const Series& c, const Series& d)
    {
        Mat2 r;
        r.m = {{{a, b}, {c, d}}};
        return r;
    }
    /// Rows separated by ';', entries by ','.
    static Mat2 parse(const FieldCtx& ctx, const std::string& text);

    const Series& operator()(int i, int j) const { return m[i][j]; }
    Series& operator()(int i, int j) { return m[i][j]; }
    const FieldCtx& ctx() const { return m[0][0].ctx(); }

    Mat2 operator*(const Mat2& o) const;
    bool operator==(const Mat2& o) const { return m == o.m; }
    Series det() const;
    Mat2 phi() const;
    /// Exact inverse via the adjugate; needs a target precision unless det is a monomial.
    Mat2 inverse(int target = kExact) const;
    std::string to_string() const;
};

/// Pair of elementary divisors, a >= b.
struct ElemDiv {
    int a = 0;
    int b = 0;
    int d1() const { return a - b; }
    int d2() const { return a + b; }
    bool operator==(const ElemDiv&) const = default;
};

/// (a1,b1) <= (a2,b2) iff a1 <= a2 and a1+b1 = a2+b2.
bool div_leq(const ElemDiv& x, const ElemDiv& y);

/**
 * @brief Lattice <u^m e1, r e1 + u^n e2> in Hermite form.
 *
 * r is an exact Laurent polynomial with every exponent below m.
 */
struct Lattice {
    int m = 0;
    int n = 0;
    Series r;

    static Lattice standard(const FieldCtx& ctx) { return {0, 0, Series::zero(ctx)}; }
    /// Accepts "lat(m,n,r)".
    static Lattice parse(const FieldCtx& ctx, const std::string& text);

    int x() const { return m - n; }
    int y() const { return m + n; }
    /// Branch locator r u^-n.
    Series q() const { return r.shift(-n); }
    Mat2 basis() const;
    const FieldCtx& ctx() const { return r.ctx(); }

    bool operator==(const Lattice& o) const { return m == o.m && n == o.n && r == o.r; }
    bool operator!=(const Lattice& o) const { return !(*this == o); }
    std::string to_string() const;
};

/// Order by x, then y, then branch locator.
bool operator<(const Lattice& a, const Lattice& b);

struct PhiModule {
    const FieldCtx* ctx = nullptr;
    Mat2 A;
    int prec = kExact;
};

Lattice hermite_form(const Mat2& basis);

/// Divisors of B relative to A: B = A' diag(u^a, u^b) for a basis A' of A.
ElemDiv rel_position(const Lattice& A, const Lattice& B);
ElemDiv rel_position(const Lattice& A, const Mat2& B);

/// Basis matrix of <Phi(L)>, not normalized.
Mat2 phi_image_basis(const PhiModule& phi, const Lattice& L);
/// rel_position(L, <Phi L>), using det <Phi L> = det A * u^(p(m+n)).
ElemDiv phi_divisors(const PhiModule& phi, const Lattice& L);
Lattice phi_image(const PhiModule& phi, const Lattice& L);

std::pair<int, int> d1d2(const Lattice& A, const Lattice& B);
std::pair<int, int> d1d2(const Lattice& A, const Mat2& B);

/// Relative Phi-matrix L^-1 A phi(L) of a lattice.
Mat2 relative_matrix(const PhiModule& phi, const Lattice& L);

/// True iff B is contained in A.
bool contains(const Lattice& A, const Lattice& B);

}  // namespace kisinlab
