#include "kisinlab/raynaud.hpp"

#include <algorithm>

namespace kisinlab {

namespace {

int det_valuation(const NormalForm& nf)
{
    return nf.reducible() ? nf.s + nf.t : nf.s;
}

int floor_div(int a, int b)
{
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

int mod_pos(int a, int m)
{
    int r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace

bool is_flat_admissible(const NormalForm& nf, int e, const Lattice& L)
{
    ElemDiv d = phi_divisors(nf.module(), L);
    return d.b >= 0 && d.a <= e;
}

Lattice lattice_sum(const Lattice& A, const Lattice& B)
{
    // both second basis vectors are (r, u^n); keep the one with smaller n
    const Lattice& lo = A.n <= B.n ? A : B;
    const Lattice& hi = A.n <= B.n ? B : A;
    Series rest = hi.r - lo.r.shift(hi.n - lo.n);
    int m = std::min(A.m, B.m);
    if (auto v = rest.valuation()) m = std::min(m, *v);
    return {m, lo.n, lo.r.reduce_mod(m)};
}

Lattice lattice_dual(const Lattice& L)
{
    Mat2 inv = L.basis().inverse();
    return hermite_form(Mat2::of(inv(0, 0), inv(1, 0), inv(0, 1), inv(1, 1)));
}

Lattice lattice_intersection(const Lattice& A, const Lattice& B)
{
    return lattice_dual(lattice_sum(lattice_dual(A), lattice_dual(B)));
}

std::vector<Lattice> enumerate_flat_admissible(const NormalForm& nf, int e, long long budget)
{
    nf.validate();
    if (e < 1) throw UnsupportedCase("e must be positive");
    const int p = nf.p();
    const int vdet = det_valuation(nf);
    const PhiModule phi = nf.module();
    const BuildingPoint P = fixed_point(nf);
    const Rat radius = search_radius(nf, e);
    std::vector<Lattice> out;
    long long used = 0;
    // 0 <= (p-1) y + v(det) <= 2e
    for (int y = -floor_div(vdet, p - 1) - 1; (p - 1) * y + vdet <= 2 * e; ++y) {
        if ((p - 1) * y + vdet < 0) continue;
        used += for_each_lattice_in_ball(
            P, radius, y,
            [&](const Lattice& L) {
                ElemDiv d = phi_divisors(phi, L);
                if (d.b >= 0 && d.a <= e) {
                    BuildingPoint Q = lattice_to_point(L);
                    if (tree_d1(Q, BuildingPoint::make(P.x, Q.y, P.q)) > radius - 1)
                        throw std::logic_error("admissible lattice on the boundary shell of the search ball: " +
                                               L.to_string());
                    out.push_back(L);
                }
            },
            budget - used);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Lattice extremal_step(const Lattice& cur, const Lattice& other, Direction dir)
{
    if (dir == Direction::Max) {
        if (other.y() == cur.y()) return lattice_sum(cur, other);
        ElemDiv d = rel_position(cur, other);
        if (d.a <= 0) return other;  // cur is inside other
        return lattice_sum(cur, {other.m + d.a, other.n + d.a, other.r.shift(d.a)});
    }
    if (other.y() == cur.y()) return lattice_intersection(cur, other);
    ElemDiv d = rel_position(cur, other);
    if (d.b >= 0) return other;  // other is inside cur
    return lattice_intersection(cur, {other.m + d.b, other.n + d.b, other.r.shift(d.b)});
}

Lattice find_extremal(const NormalForm& nf, int e, Direction dir, long long budget)
{
    auto pool = enumerate_flat_admissible(nf, e, budget);
    if (pool.empty()) throw NoAdmissibleLattice("no lattice with u^e M in <Phi M> in M");
    const int sign = dir == Direction::Max ? 1 : -1;
    auto better = [&](const Lattice& a, const Lattice& b) { return sign * a.y() < sign * b.y(); };
    auto check = [&](const Lattice& L, const Lattice& from) {
        if (!is_flat_admissible(nf, e, L)) throw std::logic_error("extremal step left the admissible set");
        if (!better(L, from)) throw std::logic_error("extremal step did not move y");
    };
    Lattice cur = pool.front();
    for (bool moved = true; moved;) {
        moved = false;
        for (const auto& L : pool) {
            if (!better(L, cur)) continue;
            Lattice next = extremal_step(cur, L, dir);
            check(next, cur);
            cur = next;
            moved = true;
            break;
        }
    }
    for (const auto& L : pool) {
        if (L.y() != cur.y() || L == cur) continue;
        check(extremal_step(cur, L, dir), cur);
        throw std::logic_error("two admissible lattices at the extreme y");
    }
    return cur;
}

DivisorPrediction predict_extremal_divisors(const NormalForm& nf, int e, bool literal)
{
    const int p = nf.p();
    DivisorPrediction out;
    if (nf.kind == Case::NonSplit) throw UnsupportedCase("no closed form for the non-split extremes");
    if (nf.kind != Case::Simple) {
        const int s = nf.s, t = nf.t;
        if (t >= s) {
            out.max = {t, s};
            out.max_row = 0;
        } else {
            out.max = {s, t};
            out.max_row = 1;
        }
        const int fs = floor_div(e - s, p - 1), ft = floor_div(e - t, p - 1);
        const int as = (p - 1) * fs + s, at = (p - 1) * ft + t;
        Rat T(t - s, p - 1);
        if (T >= Rat(fs - ft)) {
            out.min = {at, as};
            out.min_row = 0;
        } else {
            out.min = {as, at};
            out.min_row = 1;
        }
        return out;
    }
    const int s = nf.s;
    const int s1 = mod_pos(s, p + 1), s2 = mod_pos(s, p - 1), s2p = mod_pos(2 * e - s, p - 1);
    const int m = (s - s1) / (p + 1), l = (s - s2) / (p - 1), lp = (2 * e - s - s2p) / (p - 1);
    if ((l + m) % 2 == 0) {
        if (s2 >= s1) {
            out.max = {(s1 + s2) / 2, (s2 - s1) / 2};
            out.max_row = 0;
        } else {
            out.max = {(s2 - s1) / 2 + p, (s1 + s2) / 2 - 1};
            out.max_row = 1;
        }
    } else if (s1 + s2 >= p + 1) {
        // as printed the second entry subtracts p - 1, which breaks a + b = s2 mod (p - 1)
        out.max = {(s2 - s1 + p + 1) / 2, (s1 + s2 - (literal ? p - 1 : p + 1)) / 2};
        out.max_row = 2;
    } else {
        out.max = {(s1 + s2 + p - 1) / 2, (s2 - s1 + p - 1) / 2};
        out.max_row = 3;
    }
    const int q2 = literal ? s2 : s2p;  // the second-coordinate s2 of rows 1, 2 and the row 4 test
    if (mod_pos(lp + m, 2) == 0) {
        if (s1 <= s2p) {
            out.min = {e + (s1 - s2p) / 2, e - (s1 + q2) / 2};
            out.min_row = 0;
        } else {
            out.min = {e + 1 - (s1 + q2) / 2, e - p + (s1 - q2) / 2};
            out.min_row = 1;
        }
    } else if (s1 + s2p >= p + 1) {
        out.min = {e + (p + 1 - s1 - s2p) / 2, e + (s1 - s2p - (p + 1)) / 2};
        out.min_row = 2;
    } else if (s1 + q2 < p + 1) {
        out.min = {e + (s1 - s2p - (p - 1)) / 2, e + (-s1 - s2p - (p - 1)) / 2};
        out.min_row = 3;
    } else {
        // the printed table has no row for this case
        out.min_row = -1;
    }
    return out;
}

ExtremalReport extremal_report(const NormalForm& nf, int e, long long budget)
{
    ExtremalReport R;
    R.min = find_extremal(nf, e, Direction::Min, budget);
    R.max = find_extremal(nf, e, Direction::Max, budget);
    const PhiModule phi = nf.module();
    R.min_div = phi_divisors(phi, R.min);
    R.max_div = phi_divisors(phi, R.max);
    R.coincide = R.min == R.max;
    if (nf.kind != Case::NonSplit) {
        R.predicted = predict_extremal_divisors(nf, e);
        R.divisors_agree = R.predicted->min_row >= 0 && R.predicted->min == R.min_div && R.predicted->max == R.max_div;
    }
    return R;
}

bool verify_extremal(const NormalForm& nf, int e, const ExtremalReport& R, long long budget)
{
    if (!contains(R.max, R.min)) return false;
    for (const auto& L : enumerate_flat_admissible(nf, e, budget))
        if (!contains(R.max, L) || !contains(L, R.min)) return false;
    return R.divisors_agree;
}

bool descent_check(const NormalForm& nf, int e, const FieldCtx& ext, long long budget)
{
    NormalForm big = nf.over(ext);
    for (Direction dir : {Direction::Min, Direction::Max}) {
        Lattice L = find_extremal(big, e, dir, budget);
        if (L.r.map_frobenius() != L.r) return false;
    }
    return true;
}

}  // namespace kisinlab
