#pragma once
// Standalone Laurent polynomials over F_p for cross-checking the library.
// Nothing here calls into kisinlab.

#include <algorithm>
#include <climits>
#include <functional>
#include <vector>

namespace oracle {

struct Poly {
    int p = 3;
    int lo = 0;            // exponent of c[0]
    std::vector<int> c;    // coefficients mod p

    static Poly zero(int p) { return {p, 0, {}}; }
    static Poly mono(int p, int coef, int e) { return Poly{p, e, {((coef % p) + p) % p}}.trim(); }

    Poly trim() const
    {
        Poly r = *this;
        std::size_t a = 0, b = r.c.size();
        while (a < b && r.c[a] == 0) ++a;
        while (b > a && r.c[b - 1] == 0) --b;
        r.c = std::vector<int>(r.c.begin() + static_cast<long>(a), r.c.begin() + static_cast<long>(b));
        r.lo += static_cast<int>(a);
        return r;
    }
    bool zero_p() const { return c.empty(); }
    int val() const { return c.empty() ? INT_MAX : lo; }
    int hi() const { return lo + static_cast<int>(c.size()); }

    Poly operator+(const Poly& o) const
    {
        if (c.empty()) return o;
        if (o.c.empty()) return *this;
        Poly r{p, std::min(lo, o.lo), {}};
        r.c.assign(static_cast<std::size_t>(std::max(hi(), o.hi()) - r.lo), 0);
        for (std::size_t i = 0; i < c.size(); ++i) r.c[i + lo - r.lo] += c[i];
        for (std::size_t i = 0; i < o.c.size(); ++i) r.c[i + o.lo - r.lo] += o.c[i];
        for (auto& x : r.c) x %= p;
        return r.trim();
    }
    Poly neg() const
    {
        Poly r = *this;
        for (auto& x : r.c) x = (p - x) % p;
        return r;
    }
    Poly operator-(const Poly& o) const { return *this + o.neg(); }
    Poly operator*(const Poly& o) const
    {
        if (c.empty() || o.c.empty()) return zero(p);
        Poly r{p, lo + o.lo, std::vector<int>(c.size() + o.c.size() - 1, 0)};
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < o.c.size(); ++j) r.c[i + j] = (r.c[i + j] + c[i] * o.c[j]) % p;
        return r.trim();
    }
    Poly frob_u() const
    {
        if (c.empty()) return *this;
        Poly r{p, lo * p, std::vector<int>((c.size() - 1) * p + 1, 0)};
        for (std::size_t i = 0; i < c.size(); ++i) r.c[i * p] = c[i];
        return r;
    }
    Poly shift(int k) const
    {
        Poly r = *this;
        r.lo += k;
        return r;
    }
};

struct M2 {
    Poly a, b, c, d;  // [[a, b], [c, d]]
    M2 operator*(const M2& o) const
    {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Poly det() const { return a * d - b * c; }
};

struct Lat {
    int m, n;
    Poly r;
};

/// Elementary divisors (a, b) of <A phi(L)> relative to L, by explicit inversion of the Hermite basis.
inline std::pair<int, int> phi_divisors(const M2& A, const Lat& L)
{
    const int p = A.a.p;
    M2 basis{Poly::mono(p, 1, L.m), L.r, Poly::zero(p), Poly::mono(p, 1, L.n)};
    M2 img = A * M2{basis.a.frob_u(), basis.b.frob_u(), basis.c, basis.d.frob_u()};
    // basis^-1 = [[u^-m, -r u^-(m+n)], [0, u^-n]]
    M2 inv{Poly::mono(p, 1, -L.m), L.r.shift(-L.m - L.n).neg(), Poly::zero(p), Poly::mono(p, 1, -L.n)};
    M2 C = inv * img;
    int b = std::min({C.a.val(), C.b.val(), C.c.val(), C.d.val()});
    int total = C.det().val();
    return {total - b, b};
}

/// Every lattice with y = Y, |x| <= X and v(q) >= -W, where q = r u^-n.
inline void for_each_lattice(int p, int Y, int X, int W, const std::function<void(const Lat&)>& f)
{
    for (int x = -X; x <= X; ++x) {
        if (((x - Y) % 2 + 2) % 2 != 0) continue;
        const int m = (x + Y) / 2, n = (Y - x) / 2;
        const int lo = n - W;  // exponents lo .. m-1
        const int len = std::max(0, m - lo);
        std::vector<int> digits(static_cast<std::size_t>(len), 0);
        for (;;) {
            f(Lat{m, n, Poly{p, lo, digits}.trim()});
            int i = 0;
            while (i < len && ++digits[static_cast<std::size_t>(i)] == p) digits[static_cast<std::size_t>(i++)] = 0;
            if (i == len) break;
        }
    }
}

}  // namespace oracle
