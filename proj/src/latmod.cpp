#include "kisinlab/latmod.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace kisinlab {

Mat2 Mat2::identity(const FieldCtx& ctx)
{
    return diag(Series::u_pow(ctx, 0), Series::u_pow(ctx, 0));
}

Mat2 Mat2::diag(const Series& a, const Series& b)
{
    return of(a, Series::zero(a.ctx()), Series::zero(a.ctx()), b);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

Mat2 Mat2::parse(const FieldCtx& ctx, const std::string& text)
{
    auto rows = split(text, ';');
    if (rows.size() != 2) throw FieldError("matrix literal needs two rows: '" + text + "'");
    Mat2 r;
    for (int i = 0; i < 2; ++i) {
        auto cols = split(rows[i], ',');
        if (cols.size() != 2) throw FieldError("matrix literal needs two columns: '" + text + "'");
        for (int j = 0; j < 2; ++j) r.m[i][j] = Series::parse(ctx, cols[j]);
    }
    return r;
}

Mat2 Mat2::operator*(const Mat2& o) const
{
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
    return r;
}

Series Mat2::det() const
{
    return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

Mat2 Mat2::phi() const
{
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j].phi();
    return r;
}

Mat2 Mat2::inverse(int target) const
{
    Series d = det();
    if (d.is_zero()) {
        if (d.exact()) throw SingularMatrix("singular matrix");
        throw InsufficientPrecision("determinant vanishes to precision");
    }
    Series di = d.inv(target);
    return of(m[1][1] * di, -(m[0][1] * di), -(m[1][0] * di), m[0][0] * di);
}

std::string Mat2::to_string() const
{
    return m[0][0].to_string() + ", " + m[0][1].to_string() + "; " + m[1][0].to_string() + ", " +
           m[1][1].to_string();
}

bool div_leq(const ElemDiv& x, const ElemDiv& y)
{
    return x.a <= y.a && x.d2() == y.d2();
}

Mat2 Lattice::basis() const
{
    const FieldCtx& c = ctx();
    return Mat2::of(Series::u_pow(c, m), r, Series::zero(c), Series::u_pow(c, n));
}

std::string Lattice::to_string() const
{
    return "lat(" + std::to_string(m) + "," + std::to_string(n) + "," + r.to_string() + ")";
}

Lattice Lattice::parse(const FieldCtx& ctx, const std::string& text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.rfind("lat(", 0) != 0 || s.back() != ')') throw FieldError("lattice literal must be lat(m,n,r): '" + text + "'");
    auto parts = split(s.substr(4, s.size() - 5), ',');
    if (parts.size() != 3) throw FieldError("lattice literal must be lat(m,n,r): '" + text + "'");
    int m = 0, n = 0;
    try {
        m = std::stoi(parts[0]);
        n = std::stoi(parts[1]);
    } catch (const std::exception&) {
        throw FieldError("bad integers in lattice literal '" + text + "'");
    }
    Series r = Series::parse(ctx, parts[2]);
    const FieldCtx& c = ctx;
    return hermite_form(Mat2::of(Series::u_pow(c, m), r, Series::zero(c), Series::u_pow(c, n)));
}

bool operator<(const Lattice& a, const Lattice& b)
{
    if (a.x() != b.x()) return a.x() < b.x();
    if (a.y() != b.y()) return a.y() < b.y();
    return a.q().compare(b.q()) < 0;
}

Lattice hermite_form(const Mat2& B)
{
    const Series& c0 = B(1, 0);
    const Series& c1 = B(1, 1);
    auto v0 = c0.certified_valuation();
    auto v1 = c1.certified_valuation();
    if (!v0 && !v1) throw SingularMatrix("basis matrix has a zero row");
    int j = (!v0 || (v1 && *v1 <= *v0)) ? 1 : 0;
    int n = j == 1 ? *v1 : *v0;
    Series d = B.det();
    auto vd = d.certified_valuation();
    if (!vd) throw SingularMatrix("singular basis matrix");
    int m = *vd - n;

    const FieldCtx& ctx = B.ctx();
    const Series& top = B(0, j);
    Series r = Series::zero(ctx);
    if (!top.is_zero() && top.ord() < m) {
        Series eps = B(1, j).shift(-n);
        Series ei = eps.inv(m - top.ord());
        r = (top * ei).reduce_mod(m);
    } else if (top.prec() < m) {
        throw InsufficientPrecision("Hermite form needs the pivot column modulo u^" + std::to_string(m));
    }
    return {m, n, r};
}

namespace {

// A^-1 B for A in Hermite form; all entries exact when B is.
Mat2 solve_in(const Lattice& A, const Mat2& B)
{
    Series rmn = A.r.shift(-A.m - A.n);
    Mat2 C;
    for (int j = 0; j < 2; ++j) {
        C(0, j) = B(0, j).shift(-A.m) - rmn * B(1, j);
        C(1, j) = B(1, j).shift(-A.n);
    }
    return C;
}

ElemDiv divisors_of(const Mat2& C)
{
    std::optional<int> b;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            auto v = C(i, j).certified_valuation();
            if (v && (!b || *v < *b)) b = v;
        }
    if (!b) throw SingularMatrix("zero matrix");
    auto vd = C.det().certified_valuation();
    if (!vd) throw SingularMatrix("singular matrix");
    return {*vd - *b, *b};
}

}  // namespace

ElemDiv rel_position(const Lattice& A, const Mat2& B)
{
    return divisors_of(solve_in(A, B));
}

ElemDiv rel_position(const Lattice& A, const Lattice& B)
{
    Mat2 C = solve_in(A, B.basis());
    std::optional<int> b;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            auto v = C(i, j).certified_valuation();
            if (v && (!b || *v < *b)) b = v;
        }
    int sum = B.m + B.n - A.m - A.n;
    return {sum - *b, *b};
}

Mat2 phi_image_basis(const PhiModule& phi, const Lattice& L)
{
    return phi.A * L.basis().phi();
}

ElemDiv phi_divisors(const PhiModule& phi, const Lattice& L)
{
    const int p = phi.ctx->p();
    auto vA = phi.A.det().certified_valuation();
    if (!vA) throw SingularMatrix("singular phi-module matrix");
    // det <Phi L> = det A * u^(p(m+n)), and the smaller divisor is at most half the total
    const int vdet = *vA + (p - 1) * (L.m + L.n);
    const int bound = (vdet >= 0 ? vdet / 2 : -((-vdet + 1) / 2)) + 1;
    if (bound <= 0) return rel_position(L, phi_image_basis(phi, L));
    const Series rmn = L.r.shift(-L.m - L.n);
    // rows of A * phi(basis), only modulo what can reach below the bound
    const int neg = rmn.is_zero() ? 0 : std::max(0, -rmn.ord());
    const Series phr = L.r.phi().truncate(bound + std::max({L.m, L.n, neg}));
    const Series um = Series::u_pow(*phi.ctx, p * L.m), un = Series::u_pow(*phi.ctx, p * L.n);
    int b = bound;
    for (int j = 0; j < 2; ++j) {
        Series lo = j == 0 ? phi.A(1, 0) * um : phi.A(1, 0) * phr + phi.A(1, 1) * un;
        Series hi = j == 0 ? phi.A(0, 0) * um : phi.A(0, 0) * phr + phi.A(0, 1) * un;
        if (auto v = lo.valuation(); v && *v - L.n < b) b = *v - L.n;
        Series top = hi.shift(-L.m).truncate(bound);
        if (!lo.is_zero() && !rmn.is_zero() && lo.ord() + rmn.ord() < bound)
            top = top - (rmn.truncate(bound - lo.ord()) * lo.truncate(bound - rmn.ord())).truncate(bound);
        if (auto v = top.valuation()) b = std::min(b, *v);
    }
    if (b == bound) throw std::logic_error("phi_divisors: no entry below the valuation bound");
    return {vdet - b, b};
}

Lattice phi_image(const PhiModule& phi, const Lattice& L)
{
    return hermite_form(phi_image_basis(phi, L));
}

std::pair<int, int> d1d2(const Lattice& A, const Lattice& B)
{
    ElemDiv d = rel_position(A, B);
    return {d.d1(), d.d2()};
}

std::pair<int, int> d1d2(const Lattice& A, const Mat2& B)
{
    ElemDiv d = rel_position(A, B);
    return {d.d1(), d.d2()};
}

Mat2 relative_matrix(const PhiModule& phi, const Lattice& L)
{
    return solve_in(L, phi_image_basis(phi, L));
}

bool contains(const Lattice& A, const Lattice& B)
{
    return rel_position(A, B).b >= 0;
}

}  // namespace kisinlab
