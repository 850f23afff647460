#include "kisinlab/building.hpp"

#include <algorithm>

namespace kisinlab {

long long floor_rat(const Rat& r)
{
    long long n = r.numerator(), d = r.denominator();
    long long f = n / d;
    if ((n % d != 0) && (n < 0)) --f;
    return f;
}

long long ceil_rat(const Rat& r)
{
    return -floor_rat(-r);
}

bool is_integer(const Rat& r)
{
    return r.denominator() == 1;
}

std::string rat_string(const Rat& r)
{
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

BuildingPoint BuildingPoint::make(const Rat& x, const Rat& y, const Series& q)
{
    BuildingPoint P;
    P.x = x;
    P.y = y;
    int bound = clamp_prec(ceil_rat(x));
    P.q = q.reduce_mod(bound);
    return P;
}

bool BuildingPoint::is_lattice() const
{
    if (!is_integer(x) || !is_integer(y)) return false;
    return ((x.numerator() - y.numerator()) % 2) == 0;
}

std::string BuildingPoint::to_string() const
{
    std::string qs = q.to_string();
    if (qs.find(' ') != std::string::npos) qs = "(" + qs + ")";
    return "[" + rat_string(x) + "," + rat_string(y) + "]_" + qs;
}

BuildingPoint lattice_to_point(const Lattice& L)
{
    return BuildingPoint::make(L.x(), L.y(), L.q());
}

Lattice point_to_lattice(const BuildingPoint& P)
{
    if (!P.is_lattice()) throw NotALattice(P.to_string() + " is not a lattice");
    int x = static_cast<int>(P.x.numerator());
    int y = static_cast<int>(P.y.numerator());
    int m = (x + y) / 2;
    int n = (y - x) / 2;
    return {m, n, P.q.shift(n).reduce_mod(m)};
}

std::optional<int> divergence(const BuildingPoint& P, const BuildingPoint& Q)
{
    return (P.q - Q.q).valuation();
}

Rat tree_d1(const BuildingPoint& P, const BuildingPoint& Q)
{
    auto w = divergence(P, Q);
    Rat m1 = w ? std::min(P.x, Rat(*w)) : P.x;
    Rat m2 = w ? std::min(Q.x, Rat(*w)) : Q.x;
    Rat gap = m1 > m2 ? m1 - m2 : m2 - m1;
    return (P.x - m1) + (Q.x - m2) + gap;
}

Rat tree_d2(const BuildingPoint& P, const BuildingPoint& Q)
{
    return Q.y - P.y;
}

BuildingPoint phi_point(const NormalForm& nf, const BuildingPoint& P)
{
    const int p = nf.p();
    const FieldCtx& ctx = nf.ctx();
    if (nf.kind == Case::Simple) {
        auto k = P.q.valuation();
        Rat y2 = P.y * p + nf.s;
        if (!k || Rat(*k) >= P.x) return BuildingPoint::on_apartment0(ctx, -P.x * p + nf.s, y2);
        Rat x2 = P.x * p - 2 * p * (*k) + nf.s;
        // q' = a u^s / phi(q), needed below exponent x2
        Series fq = P.q.phi();
        int target = clamp_prec(ceil_rat(x2) - nf.s);
        Series q2 = (fq.inv(target) * Series::monomial(nf.a, nf.s));
        return BuildingPoint::make(x2, y2, q2);
    }
    Rat x2 = P.x * p + nf.s - nf.t;
    Rat y2 = P.y * p + nf.s + nf.t;
    Series inner = Series::monomial(nf.a, nf.s) * P.q.phi() + nf.gamma;
    Series q2 = inner * Series::monomial(nf.b.inv(), -nf.t);
    return BuildingPoint::make(x2, y2, q2);
}

BuildingPoint fixed_point(const NormalForm& nf)
{
    const int p = nf.p();
    if (nf.kind == Case::Simple)
        return BuildingPoint::on_apartment0(nf.ctx(), Rat(nf.s, p + 1), Rat(-nf.s, p - 1));
    return BuildingPoint::on_apartment0(nf.ctx(), Rat(nf.t - nf.s, p - 1), Rat(-(nf.t + nf.s), p - 1));
}

BuildingPoint project_to_apartment0(const BuildingPoint& P)
{
    auto w = P.q.valuation();
    Rat x = w ? std::min(P.x, Rat(*w)) : P.x;
    return BuildingPoint::on_apartment0(P.q.ctx(), x, P.y);
}

BuildingPoint project_to_constant_tree(const BuildingPoint& P)
{
    auto w = P.q.valuation();
    if (P.x <= Rat(0) || (w && *w < 0)) return project_to_apartment0(P);
    // every exponent of q is >= 0 here
    Series z = w && *w == 0 ? Series::monomial(P.q.coeff(0), 0) : Series::zero(P.q.ctx());
    auto w2 = (P.q - z).valuation();
    Rat x = w2 ? std::min(P.x, Rat(*w2)) : P.x;
    return BuildingPoint::make(x, P.y, z);
}

std::pair<Rat, Rat> predicted_phi_distances(const NormalForm& nf, const BuildingPoint& Q)
{
    const int p = nf.p();
    BuildingPoint P = fixed_point(nf);
    Rat d2 = (Q.y - P.y) * (p - 1);
    if (nf.kind == Case::Simple) return {tree_d1(Q, P) * (p + 1), d2};
    if (nf.kind == Case::NonSplit) {
        int k = nf.k();
        auto w = Q.q.valuation();
        Rat low = w ? std::min(Q.x, Rat(*w)) : Q.x;
        if (low >= Rat(k - nf.s, p)) return {Q.x * (p + 1) + nf.s + nf.t - 2 * k, d2};
    }
    BuildingPoint Qp = nf.kind == Case::SplitIso ? project_to_constant_tree(Q) : project_to_apartment0(Q);
    return {tree_d1(Q, P) * (p + 1) - tree_d1(Qp, P) * 2, d2};
}

}  // namespace kisinlab
