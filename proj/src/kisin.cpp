#include "kisinlab/kisin.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace kisinlab {

namespace {

long long ipow(long long b, long long e)
{
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

int mod_pos(long long a, long long m)
{
    long long r = a % m;
    return static_cast<int>(r < 0 ? r + m : r);
}

bool even(const Rat& r)
{
    return is_integer(r) && r.numerator() % 2 == 0;
}

// Largest integer <= bound congruent to par mod 2.
long long max_with_parity(const Rat& bound, long long par)
{
    long long f = floor_rat(bound);
    if (mod_pos(f - par, 2) != 0) --f;
    return f;
}

// Smallest integer >= bound congruent to par mod 2.
long long min_with_parity(const Rat& bound, long long par)
{
    long long c = ceil_rat(bound);
    if (mod_pos(c - par, 2) != 0) ++c;
    return c;
}

}  // namespace

bool nonsplit_may_be_nonempty(const NormalForm& nf, const VParams& v)
{
    const int p = nf.p();
    const int spread = v.r1 - v.r2;
    Rat lo(nf.t - nf.s - spread, p - 1);
    Rat mid(nf.k() - nf.s, p);
    Rat hi(spread - nf.s - nf.t + 2 * nf.k(), p + 1);
    return lo <= mid && mid <= hi;
}

namespace {

std::pair<int, int> d1d2_of(const PhiModule& phi, const Lattice& L)
{
    ElemDiv d = phi_divisors(phi, L);
    return {d.d1(), d.d2()};
}

}  // namespace

std::optional<int> m_of_v(const NormalForm& nf, const VParams& v)
{
    const int p = nf.p();
    int num = 2 * v.e - v.dprime() - nf.s - (nf.reducible() ? nf.t : 0);
    if (mod_pos(num, p - 1) != 0) return std::nullopt;
    return num / (p - 1);
}

bool is_v_admissible(const NormalForm& nf, const VParams& v, const Lattice& L)
{
    auto [d1, d2] = d1d2_of(nf.module(), L);
    return d1 <= v.r1 - v.r2 && d2 == 2 * v.e - v.dprime();
}

long long for_each_lattice_in_ball(const BuildingPoint& center, const Rat& radius, int y,
                                   const std::function<void(const Lattice&)>& f, long long budget)
{
    const FieldCtx& F = center.q.ctx();
    const int q = F.q();
    const Series& qc = center.q;
    const Rat& xc = center.x;
    long long visited = 0;

    auto dist = [&](int x, std::optional<int> w) {
        Rat m1 = w ? std::min(Rat(x), Rat(*w)) : Rat(x);
        Rat m2 = w ? std::min(xc, Rat(*w)) : xc;
        Rat gap = m1 > m2 ? m1 - m2 : m2 - m1;
        return (Rat(x) - m1) + (xc - m2) + gap;
    };
    auto emit = [&](int x, int lo, const std::vector<std::uint16_t>& codes) {
        if (++visited > budget) throw BudgetExceeded("ball exceeds the lattice budget");
        int m = (x + y) / 2, n = (y - x) / 2;
        f(Lattice{m, n, Series::from_codes(F, lo + n, codes)});
    };

    long long xlo = ceil_rat(xc - radius), xhi = floor_rat(xc + radius);
    for (long long xl = xlo; xl <= xhi; ++xl) {
        int x = static_cast<int>(xl);
        if (mod_pos(x - y, 2) != 0) continue;
        int qlo = qc.is_zero() ? x : qc.ord();
        // q agrees with qc below x
        {
            Series qt = qc.reduce_mod(x);
            if (dist(x, (qt - qc).valuation()) <= radius) {
                int lo = std::min(qlo, x);
                std::vector<std::uint16_t> codes(static_cast<std::size_t>(x - lo), 0);
                for (int e = lo; e < x; ++e) codes[e - lo] = qt.code_at(e);
                emit(x, lo, codes);
            }
        }
        for (int w = x - 1;; --w) {
            if (dist(x, w) > radius) break;
            int lo = std::min(qlo, w);
            int len = x - lo;
            std::vector<std::uint16_t> codes(static_cast<std::size_t>(len), 0);
            for (int e = lo; e < w; ++e) codes[e - lo] = qc.code_at(e);
            const std::uint16_t cw = qc.code_at(w);
            const int nfree = x - 1 - w;
            long long total = ipow(q, nfree);
            std::vector<int> digit(static_cast<std::size_t>(nfree), 0);
            for (int c = 0; c < q; ++c) {
                if (c == cw) continue;
                codes[w - lo] = static_cast<std::uint16_t>(c);
                std::fill(digit.begin(), digit.end(), 0);
                for (long long it = 0; it < total; ++it) {
                    for (int i = 0; i < nfree; ++i) codes[w + 1 + i - lo] = static_cast<std::uint16_t>(digit[i]);
                    emit(x, lo, codes);
                    for (int i = 0; i < nfree; ++i) {
                        if (++digit[i] < q) break;
                        digit[i] = 0;
                    }
                }
            }
        }
    }
    return visited;
}

std::vector<Lattice> lattices_in_ball(const BuildingPoint& center, const Rat& radius, int y, long long budget)
{
    std::vector<Lattice> out;
    for_each_lattice_in_ball(center, radius, y, [&](const Lattice& L) { out.push_back(L); }, budget);
    std::sort(out.begin(), out.end());
    return out;
}

Rat search_radius(const NormalForm& nf, int spread)
{
    const int p = nf.p();
    if (nf.kind == Case::Simple) return Rat(ceil_rat(Rat(spread, p + 1)) + 1);
    Rat r(ceil_rat(Rat(spread, p - 1)) + 2);
    if (nf.kind == Case::NonSplit) {
        Rat T(nf.t - nf.s, p - 1);
        Rat reach(ceil_rat(T - Rat(nf.k() - nf.s, p)) + 2);
        r = std::max(r, reach);
    }
    return r;
}

AdmissibleSet enumerate_admissible(const NormalForm& nf, const VParams& v, long long budget)
{
    nf.validate();
    v.validate();
    AdmissibleSet S;
    S.params = v;
    S.nf = nf;
    S.m_v = m_of_v(nf, v);
    S.radius = search_radius(nf, v.r1 - v.r2);
    if (!S.m_v) return S;
    BuildingPoint P = fixed_point(nf);
    const PhiModule phi = nf.module();
    const int D = 2 * v.e - v.dprime();
    const int spread = v.r1 - v.r2;
    for_each_lattice_in_ball(
        P, S.radius, *S.m_v,
        [&](const Lattice& L) {
            auto [d1, d2] = d1d2_of(phi, L);
            if (d1 <= spread && d2 == D) {
                if (tree_d1(lattice_to_point(L), P) > S.radius - 1)
                    throw std::logic_error("admissible lattice on the boundary shell of the search ball: " +
                                           L.to_string());
                S.points.push_back(L);
            }
        },
        budget);
    std::sort(S.points.begin(), S.points.end());
    return S;
}

bool stratum_predicted_nonempty(int p, int s, const ElemDiv& d)
{
    const long long P2 = static_cast<long long>(p) * p - 1;
    if (mod_pos(d.a + d.b - s, p - 1) != 0) return false;
    long long v = static_cast<long long>(p) * d.a + d.b;
    return mod_pos(v - s, P2) == 0 || mod_pos(v - static_cast<long long>(p) * s, P2) == 0;
}

std::vector<StratumReport> stratify(const AdmissibleSet& S)
{
    std::map<std::pair<int, int>, StratumReport> by;
    const PhiModule phi = S.nf.module();
    for (const auto& L : S.points) {
        ElemDiv d = phi_divisors(phi, L);
        auto& rep = by[{d.d1(), d.a}];
        rep.divisors = d;
        rep.members.push_back(L);
        ++rep.actual_count;
    }
    if (S.nf.kind == Case::Simple && S.m_v) {
        const int p = S.nf.p();
        const int D = 2 * S.params.e - S.params.dprime();
        for (int delta = mod_pos(D, 2); delta <= S.params.r1 - S.params.r2; delta += 2) {
            ElemDiv d{(D + delta) / 2, (D - delta) / 2};
            auto& rep = by[{d.d1(), d.a}];
            rep.divisors = d;
            rep.predicted_nonempty = stratum_predicted_nonempty(p, S.nf.s, d);
            int n = delta / (p + 1);
            rep.predicted_dim = n;
            rep.predicted_count = rep.predicted_nonempty ? ipow(S.nf.ctx().q(), n) : 0;
        }
    }
    std::vector<StratumReport> out;
    for (auto& [k, r] : by) out.push_back(std::move(r));
    return out;
}

SRank s_rank(const NormalForm& nf, const VParams& v, const Lattice& L)
{
    const PhiModule phi = nf.module();
    const int j = v.e - v.r1;
    const int p = nf.p();
    ElemDiv d = phi_divisors(phi, L);
    PhiModule rel{phi.ctx, relative_matrix(phi, L), kExact};
    SRank out;
    const FieldCtx& F = nf.ctx();
    for (int c = 1; c < F.q(); ++c) {
        FieldElem ce(F, static_cast<std::uint16_t>(c));
        if (stable_line_solver(rel, ce, j, 4)) out.constants.push_back(ce);
    }
    if (d.a == j && d.b == j)
        out.rank = 2;
    else
        out.rank = out.constants.empty() ? 0 : 1;
    bool ma = false, mb = false;
    std::vector<std::string> other;
    for (const auto& c : out.constants) {
        bool hit = false;
        if (c == nf.a && mod_pos(j - nf.s, p - 1) == 0) ma = hit = true;
        if (nf.reducible() && c == nf.b && mod_pos(j - nf.t, p - 1) == 0) {
            if (nf.a == nf.b && nf.s == nf.t)
                ma = true;
            else
                mb = true;
            hit = true;
        }
        if (!hit) other.push_back("X_M(" + c.to_string() + ")");
    }
    if (ma && mb)
        out.label = "X_Ma=X_Mb";
    else if (ma)
        out.label = "X_Ma";
    else if (mb)
        out.label = "X_Mb";
    else if (!other.empty())
        out.label = other.front();
    else
        out.label = "X0";
    return out;
}

const char* shape_name(Shape s)
{
    switch (s) {
    case Shape::Empty: return "empty";
    case Shape::Point: return "point";
    case Shape::P1: return "P1";
    case Shape::Other: return "other";
    }
    return "?";
}

std::vector<ComponentPrediction> predict_components(const NormalForm& nf, const VParams& v)
{
    if (!nf.reducible()) throw UnsupportedCase("component predictions need a reducible normal form");
    std::vector<ComponentPrediction> out;
    auto mv = m_of_v(nf, v);
    const int p = nf.p();
    const FieldCtx& F = nf.ctx();
    const Rat R(v.r1 - v.r2, p - 1);
    const Rat T(nf.t - nf.s, p - 1);
    auto point_at = [&](const Rat& x) {
        return point_to_lattice(BuildingPoint::on_apartment0(F, x, *mv));
    };
    auto point = [&](const std::string& label, bool ok, const Rat& x) {
        ComponentPrediction c;
        c.label = label;
        c.shape = ok ? Shape::Point : Shape::Empty;
        c.count = ok ? 1 : 0;
        if (ok) c.where.push_back(point_at(x));
        out.push_back(c);
    };
    if (!mv) {
        out.push_back({"X_Ma", Shape::Empty, 0, {}});
        if (nf.kind != Case::SplitIso) out.push_back({"X_Mb", Shape::Empty, 0, {}});
        return out;
    }
    if (nf.kind == Case::NonSplit && !nonsplit_may_be_nonempty(nf, v)) {
        out.push_back({"X_Ma", Shape::Empty, 0, {}});
        out.push_back({"X_Mb", Shape::Empty, 0, {}});
        return out;
    }
    const Rat m(*mv);
    if (nf.kind == Case::SplitIso) {
        ComponentPrediction c;
        c.label = "X_Ma";
        if (!even(m + R)) {
            c.shape = Shape::Empty;
        } else if (R == Rat(0)) {
            c.shape = Shape::Point;
            c.count = 1;
            c.where.push_back(point_at(0));
        } else {
            c.shape = Shape::P1;
            c.count = F.q() + 1;
            for (int z = 0; z < F.q(); ++z)
                c.where.push_back(point_to_lattice(
                    BuildingPoint::make(R, m, Series::constant(FieldElem(F, static_cast<std::uint16_t>(z))))));
            c.where.push_back(point_at(-R));
        }
        out.push_back(c);
        return out;
    }
    if (nf.kind == Case::SplitNonIso && R == Rat(0)) {
        point("X_Ma=X_Mb", even(T + m), T);
        return out;
    }
    point("X_Ma", even(T - R + m), T - R);
    if (nf.kind == Case::SplitNonIso)
        point("X_Mb", even(T + R + m), T + R);
    else
        out.push_back({"X_Mb", Shape::Empty, 0, {}});
    return out;
}

ComponentReport components(const AdmissibleSet& S)
{
    ComponentReport rep;
    for (const auto& L : S.points) rep.members[s_rank(S.nf, S.params, L).label].push_back(L);
    rep.predictions = predict_components(S.nf, S.params);
    std::set<std::string> predicted;
    for (const auto& c : rep.predictions) {
        predicted.insert(c.label);
        auto it = rep.members.find(c.label);
        std::vector<Lattice> got = it == rep.members.end() ? std::vector<Lattice>{} : it->second;
        std::vector<Lattice> want = c.where;
        std::sort(want.begin(), want.end());
        if (static_cast<long long>(got.size()) != c.count) {
            rep.mismatches.push_back(c.label + ": predicted " + std::to_string(c.count) + " points, found " +
                                     std::to_string(got.size()));
        } else if (!want.empty() && got != want) {
            rep.mismatches.push_back(c.label + ": points differ from the predicted location");
        }
    }
    int labels = 0;
    for (const auto& [label, pts] : rep.members) {
        if (label == "X0") continue;
        ++labels;
        if (!predicted.count(label)) rep.mismatches.push_back("unexpected label " + label);
    }
    if (labels > 2) rep.mismatches.push_back("more than two ordinary labels");
    rep.agreement = rep.mismatches.empty();
    return rep;
}

bool in_descriptor(const X0Descriptor& d, const Lattice& L)
{
    BuildingPoint P = lattice_to_point(L);
    for (const auto& b : d.balls)
        if (tree_d1(P, b.center) <= b.radius) return true;
    return false;
}

std::vector<Lattice> descriptor_points(const X0Descriptor& d, int y, long long budget)
{
    std::set<Lattice> all;
    for (const auto& b : d.balls)
        for_each_lattice_in_ball(b.center, Rat(b.radius), y, [&](const Lattice& L) { all.insert(L); }, budget);
    return {all.begin(), all.end()};
}

std::vector<X0Descriptor> predict_x0_decomposition(const NormalForm& nf, const VParams& v)
{
    if (!nf.reducible()) throw UnsupportedCase("X0 decomposition needs a reducible normal form");
    std::vector<X0Descriptor> out;
    auto mv = m_of_v(nf, v);
    if (!mv) return out;
    const int p = nf.p();
    const int m = *mv;
    const int spread = v.r1 - v.r2;
    const FieldCtx& F = nf.ctx();
    auto at = [&](const Rat& x) { return BuildingPoint::on_apartment0(F, x, m); };

    auto tubes = [&](const std::string& name, long long l0, int dir, long long rad0) {
        for (int j = 0;; ++j) {
            long long rad = rad0 - static_cast<long long>(p - 1) * j;
            if (rad < 0) break;
            long long x = l0 + dir * static_cast<long long>(p + 1) * j;
            out.push_back({name + "_" + std::to_string(j), {{at(Rat(x)), static_cast<int>(rad)}}, true});
        }
    };

    if (nf.kind == Case::SplitIso) {
        long long n = max_with_parity(Rat(spread + 2, p + 1), m);
        long long l = ceil_rat(Rat((n + 2) * (p + 1) - spread, 2));
        // for n = 0 the Z_0 balls are ordinary centres only and Z stays a component
        if (n >= 0) out.push_back({"Z", {{at(0), static_cast<int>(n)}}, l != 2 || n == 0});
        for (int j = 0;; ++j) {
            long long rad = n + 2 - l - static_cast<long long>(p - 1) * j;
            if (rad < 0) break;
            long long x = l + static_cast<long long>(p + 1) * j;
            X0Descriptor d{"Z_" + std::to_string(j), {}, true};
            for (int z = 0; z < F.q(); ++z)
                d.balls.push_back({BuildingPoint::make(Rat(x), Rat(m),
                                                       Series::constant(FieldElem(F, static_cast<std::uint16_t>(z)))),
                                   static_cast<int>(rad)});
            d.balls.push_back({at(Rat(-x)), static_cast<int>(rad)});
            out.push_back(d);
        }
        return out;
    }
    if (nf.kind == Case::SplitNonIso && nf.s == nf.t) {
        long long n = max_with_parity(Rat(spread, p + 1), m);
        long long l = ceil_rat(Rat((n + 2) * (p + 1) - spread, 2));
        if (n >= 0) out.push_back({"Z", {{at(0), static_cast<int>(n)}}, l != 1});
        tubes("Z+", l, 1, n + 2 - l);
        tubes("Z-", -l, -1, n + 2 - l);
        return out;
    }

    const Rat T(nf.t - nf.s, p - 1);
    long long x0;
    long long np;
    if (nf.kind == Case::SplitNonIso) {
        x0 = floor_rat(T);
        np = max_with_parity(T + Rat(spread, p + 1) + Rat(2, p + 1) * (Rat(x0 + 1) - T), m);
    } else {
        Rat bound(nf.k() - nf.s, p);
        x0 = ceil_rat(bound) - 1;
        np = max_with_parity(Rat(spread - nf.s - nf.t + 2 * nf.k(), p + 1), m);
    }
    long long nm = min_with_parity(T - Rat(spread, p + 1) - Rat(2, p + 1) * (T - Rat(x0)), m);
    long long x1 = (np + nm) / 2, n = (np - nm) / 2;
    // l- is the largest integer with nm - 2 >= T - (spread + 2 (T - l-)) / (p + 1)
    long long lm = floor_rat((Rat(spread) + T * 2 - (T - Rat(nm) + 2) * (p + 1)) / 2);
    std::size_t zpos = out.size();
    if (n >= 0) out.push_back({"Z", {{at(Rat(x1)), static_cast<int>(n)}}, true});
    if (nf.kind == Case::SplitNonIso) {
        long long lp = ceil_rat(((Rat(np) + 2 - T) * (p + 1) - spread + T * 2) / 2);
        tubes("Z+", lp, 1, np + 2 - lp);
    }
    tubes("Z-", lm, -1, lm + 2 - nm);

    if (n >= 0) {
        // Z is redundant iff every lattice of Z lies in Z_0^+ or Z_0^-
        std::vector<const X0Descriptor*> first;
        for (const auto& d : out)
            if (d.name == "Z+_0" || d.name == "Z-_0") first.push_back(&d);
        bool inside = true;
        for (const auto& L : descriptor_points(out[zpos], m)) {
            bool hit = std::any_of(first.begin(), first.end(), [&](const X0Descriptor* d) { return in_descriptor(*d, L); });
            if (!hit) {
                inside = false;
                break;
            }
        }
        out[zpos].component = !inside;
    }
    return out;
}

std::vector<Lattice> predicted_x0_points(const NormalForm& nf, const VParams& v, long long budget)
{
    auto mv = m_of_v(nf, v);
    if (!mv) return {};
    std::set<Lattice> all;
    for (const auto& d : predict_x0_decomposition(nf, v))
        for (const auto& L : descriptor_points(d, *mv, budget)) all.insert(L);
    for (const auto& c : predict_components(nf, v))
        for (const auto& L : c.where) all.erase(L);
    return {all.begin(), all.end()};
}

std::vector<Lattice> p1_family(const SeriesVec& b1, const SeriesVec& b2, P1Mode mode, int n)
{
    const FieldCtx& F = b1[0].ctx();
    auto lat = [&](const SeriesVec& c1, const SeriesVec& c2) {
        return hermite_form(Mat2::of(c1[0], c2[0], c1[1], c2[1]));
    };
    auto sh = [](const SeriesVec& b, int k) { return SeriesVec{b[0].shift(k), b[1].shift(k)}; };
    auto comb = [](const Series& z, const SeriesVec& x, const SeriesVec& y) {
        return SeriesVec{z * x[0] + y[0], z * x[1] + y[1]};
    };
    std::vector<Lattice> out;
    for (int c = 0; c < F.q(); ++c) {
        Series z = Series::constant(FieldElem(F, static_cast<std::uint16_t>(c)));
        switch (mode) {
        case P1Mode::Inner: out.push_back(lat(b1, comb(z, sh(b1, -1), b2))); break;
        case P1Mode::Outer1: out.push_back(lat(sh(b1, n - 1), sh(comb(z, sh(b1, -1), b2), -(n - 1)))); break;
        case P1Mode::Outer2: out.push_back(lat(sh(b1, n), sh(comb(z, b1, b2), -n))); break;
        }
    }
    if (mode == P1Mode::Inner)
        out.push_back(lat(sh(b1, -1), sh(b2, 1)));
    else
        out.push_back(lat(sh(b1, -n), sh(b2, n)));
    return out;
}

bool p1_connected(const std::vector<Lattice>& set)
{
    if (set.empty()) return true;
    std::map<Lattice, int> index;
    for (std::size_t i = 0; i < set.size(); ++i) index.emplace(set[i], static_cast<int>(i));
    std::vector<int> parent(set.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
    const FieldCtx& F = set.front().ctx();
    for (const auto& L : set) {
        Mat2 B = L.basis();
        SeriesVec e1{B(0, 0), B(1, 0)}, e2{B(0, 1), B(1, 1)};
        std::vector<std::pair<SeriesVec, SeriesVec>> bases;
        bases.emplace_back(e1, e2);
        for (int c = 0; c < F.q(); ++c) {
            Series z = Series::constant(FieldElem(F, static_cast<std::uint16_t>(c)));
            bases.emplace_back(SeriesVec{e2[0] + z * e1[0], e2[1] + z * e1[1]}, e1);
        }
        for (const auto& [b1, b2] : bases) {
            auto fam = p1_family(b1, b2, P1Mode::Inner);
            std::vector<int> ids;
            for (const auto& M : fam) {
                auto it = index.find(M);
                if (it == index.end()) break;
                ids.push_back(it->second);
            }
            if (ids.size() != fam.size()) continue;
            for (int id : ids) parent[find(id)] = find(ids.front());
        }
    }
    int root = find(0);
    for (std::size_t i = 0; i < set.size(); ++i)
        if (find(static_cast<int>(i)) != root) return false;
    return true;
}

bool check_prop_2_10(const VParams& v)
{
    return v.r1 == v.e || v.r2 == 0;
}

bool is_relaxed_admissible(const NormalForm& nf, const VParams& v, const Lattice& L)
{
    ElemDiv d = phi_divisors(nf.module(), L);
    const int D = 2 * v.e - v.dprime();
    return d.b >= 0 && d.a <= v.e && d.d2() == D && d.d1() <= std::max(v.dprime(), D);
}

VarietyPrediction predict_variety(const NormalForm& nf, const VParams& v)
{
    VarietyPrediction out;
    auto mv = m_of_v(nf, v);
    if (!mv) {
        out.congruence_ok = false;
        out.empty = true;
        out.singleton = false;
        return out;
    }
    const int p = nf.p();
    const int m = *mv;
    const int spread = v.r1 - v.r2;
    // the lattice nearest to a fixed point at offset xi from the parity vertex
    auto near = [&](const Rat& R, const Rat& xi, bool same_parity) {
        if (same_parity) {
            out.empty = R < xi;
            out.singleton = xi <= R && R < Rat(2) - xi;
        } else {
            out.empty = R < Rat(1) - xi;
            out.singleton = Rat(1) - xi <= R && R < Rat(1) + xi;
        }
    };
    if (nf.kind == Case::Simple) {
        Rat Rp(spread, p + 1);
        Rat sp(nf.s, p + 1);
        long long x0 = floor_rat(sp);
        near(Rp, sp - x0, mod_pos(x0 - m, 2) == 0);
        long long eps = floor_rat(Rp) + x0 + m;
        Rat sig = mod_pos(eps, 2) == 0 ? sp : -sp;
        if (!*out.empty) out.dimension = static_cast<int>(floor_rat(Rp - sig) + floor_rat(sig));
        return out;
    }
    Rat R(spread, p - 1);
    if (nf.kind == Case::SplitIso || (nf.kind == Case::SplitNonIso && nf.s == nf.t)) {
        if (m % 2 == 0) {
            out.empty = false;
            out.singleton = R < Rat(2);
        } else {
            out.empty = R < Rat(1);
            out.singleton = false;
        }
        return out;
    }
    if (nf.kind == Case::SplitNonIso) {
        Rat T(nf.t - nf.s, p - 1);
        long long x0 = floor_rat(T);
        near(R, T - x0, mod_pos(x0 - m, 2) == 0);
    } else if (!nonsplit_may_be_nonempty(nf, v)) {
        out.empty = true;
    }
    return out;
}

}  // namespace kisinlab
