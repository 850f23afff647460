// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kisinlab/raynaud.hpp"

using namespace kisinlab;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool ok = true;
    std::string detail;
    std::vector<std::string> failures;

    void fail(const std::string& what)
    {
        ok = false;
        if (failures.size() < 5) failures.push_back(what);
    }
};

std::string vstr(const VParams& v)
{
    return "e=" + std::to_string(v.e) + ",r=(" + std::to_string(v.r1) + "," + std::to_string(v.r2) + ")";
}

std::vector<NormalForm> simple_forms(const FieldCtx& F)
{
    std::vector<NormalForm> out;
    const int p = F.p();
    for (int s = 0; s < p * p - 1; ++s)
        if (s % (p + 1) != 0) out.push_back(NormalForm::simple(FieldElem::one(F), s));
    return out;
}

// Every split form with a, b in {1, 2} and a maximized non-split form per (s, t) where one exists.
std::vector<NormalForm> reducible_forms(const FieldCtx& F)
{
    std::vector<NormalForm> out;
    const int p = F.p();
    const FieldElem one = FieldElem::one(F), two(F, 2);
    for (int s = 0; s < p - 1; ++s)
        for (int t = 0; t < p - 1; ++t) {
            out.push_back(NormalForm::split(one, s, one, t));
            out.push_back(NormalForm::split(one, s, two, t));
            std::set<int> seen;
            for (int k = -1; k <= t + 1; ++k) {
                PhiModule phi{&F, NormalForm::nonsplit(one, s, one, t, Series::u_pow(F, k)).matrix(), kExact};
                NormalForm nf = maximize_gamma(phi).nf;
                if (nf.kind == Case::NonSplit && seen.insert(nf.k()).second) out.push_back(nf);
            }
        }
    return out;
}

std::vector<VParams> v_sweep(int emax)
{
    std::vector<VParams> out;
    for (int e = 1; e <= emax; ++e)
        for (int r1 = 0; r1 <= e; ++r1)
            for (int r2 = 0; r2 <= r1; ++r2) out.push_back({e, r1, r2});
    return out;
}

Outcome distances()
{
    Outcome o;
    long long lattices = 0;
    for (int p : {3, 5})
        for (int k : {1, 2}) {
            const FieldCtx& F = FieldCtx::get(p, k);
            std::vector<std::string> forms = {"simple:a=1,s=2", "split:a=1,s=1,b=1,t=1", "split:a=1,s=0,b=2,t=1",
                                              "nonsplit:a=1,s=0,b=1,t=1,gamma=u"};
            if (p == 5) {
                forms[2] = "split:a=1,s=1,b=2,t=3";
                forms[3] = "nonsplit:a=1,s=1,b=2,t=3,gamma=u^2";
            }
            for (const auto& text : forms) {
                NormalForm nf = NormalForm::parse(F, text);
                nf.validate();
                const PhiModule phi = nf.module();
                const BuildingPoint P = fixed_point(nf);
                // y = 1 puts the centre off every vertex of its x-line
                lattices += for_each_lattice_in_ball(
                    BuildingPoint::make(P.x, Rat(1), P.q), Rat(6), 1,
                    [&](const Lattice& L) {
                        ElemDiv d = phi_divisors(phi, L);
                        auto [d1, d2] = predicted_phi_distances(nf, lattice_to_point(L));
                        if (d1 != Rat(d.d1()) || d2 != Rat(d.d2()))
                            o.fail(text + " q=" + std::to_string(F.q()) + " " + L.to_string());
                    },
                    100000000);
            }
        }
    o.detail = std::to_string(lattices) + " lattices in 16 radius-6 balls";
    return o;
}

Outcome strata()
{
    Outcome o;
    long long checked = 0, nonempty = 0;
    for (int p : {3, 5})
        for (int k : {1, 2}) {
            const FieldCtx& F = FieldCtx::get(p, k);
            const int emax = k == 1 ? (p == 3 ? 16 : 12) : (p == 3 ? 10 : 8);
            for (const auto& nf : simple_forms(F))
                for (const auto& v : v_sweep(emax)) {
                    AdmissibleSet S = enumerate_admissible(nf, v);
                    for (const auto& st : stratify(S)) {
                        if (!st.predicted_count) {
                            if (st.actual_count) o.fail(nf.to_string() + " " + vstr(v) + " unpredicted stratum");
                            continue;
                        }
                        ++checked;
                        if (st.actual_count) ++nonempty;
                        if (st.predicted_nonempty != (st.actual_count > 0) || *st.predicted_count != st.actual_count)
                            o.fail(nf.to_string() + " q=" + std::to_string(F.q()) + " " + vstr(v) + " (" +
                                   std::to_string(st.divisors.a) + "," + std::to_string(st.divisors.b) +
                                   ") predicted " + std::to_string(*st.predicted_count) + " found " +
                                   std::to_string(st.actual_count));
                    }
                }
        }
    o.detail = std::to_string(checked) + " strata, " + std::to_string(nonempty) + " nonempty";
    return o;
}

Outcome singletons()
{
    Outcome o;
    long long tuples = 0, single = 0, empty = 0;
    for (int p : {3, 5}) {
        const FieldCtx& F = FieldCtx::get(p, 1);
        auto forms = simple_forms(F);
        for (const auto& nf : reducible_forms(F)) forms.push_back(nf);
        for (const auto& nf : forms)
            for (const auto& v : v_sweep(p == 3 ? 12 : 10)) {
                VarietyPrediction pv = predict_variety(nf, v);
                if (!pv.empty && !pv.singleton) continue;
                AdmissibleSet S = enumerate_admissible(nf, v);
                ++tuples;
                const std::size_t n = S.points.size();
                if (pv.singleton && *pv.singleton) ++single;
                if (pv.empty && *pv.empty) ++empty;
                if ((pv.empty && *pv.empty != (n == 0)) || (pv.singleton && *pv.singleton != (n == 1)))
                    o.fail(nf.to_string() + " " + vstr(v) + " found " + std::to_string(n));
            }
    }
    if (tuples < 200) o.fail("only " + std::to_string(tuples) + " tuples");
    o.detail = std::to_string(tuples) + " tuples, " + std::to_string(single) + " singletons, " + std::to_string(empty) +
               " empty";
    return o;
}

Outcome component_shapes()
{
    Outcome o;
    long long tuples = 0;
    std::map<std::string, int> shapes;
    for (int p : {3, 5})
        for (int k : {1, 2}) {
            const FieldCtx& F = FieldCtx::get(p, k);
            for (const auto& nf : reducible_forms(FieldCtx::get(p, 1)))
                for (const auto& v : v_sweep(k == 1 ? 10 : 6)) {
                    AdmissibleSet S = enumerate_admissible(nf.over(F), v);
                    ComponentReport C = components(S);
                    ++tuples;
                    int labels = 0;
                    for (const auto& [label, pts] : C.members)
                        if (label != "X0" && !pts.empty()) ++labels;
                    for (const auto& pr : C.predictions) ++shapes[std::string(case_name(nf.kind)) + " " + shape_name(pr.shape)];
                    if (!C.agreement || labels > 2)
                        o.fail(nf.to_string() + " q=" + std::to_string(F.q()) + " " + vstr(v) +
                               (C.mismatches.empty() ? " too many labels" : " " + C.mismatches.front()));
                }
        }
    o.detail = std::to_string(tuples) + " tuples;";
    for (const auto& [k, n] : shapes) o.detail += " " + k + ":" + std::to_string(n);
    return o;
}

Outcome x0_decomposition()
{
    Outcome o;
    long long tuples = 0, redundant = 0;
    for (int p : {3, 5}) {
        const FieldCtx& F = FieldCtx::get(p, 1);
        for (const auto& nf : reducible_forms(F))
            for (const auto& v : v_sweep(p == 3 ? 12 : 10)) {
                AdmissibleSet S = enumerate_admissible(nf, v);
                if (!S.m_v) continue;
                ComponentReport C = components(S);
                std::vector<Lattice> x0;
                if (auto it = C.members.find("X0"); it != C.members.end()) x0 = it->second;
                ++tuples;
                ReportDiff d = diff_reports(predicted_x0_points(nf, v), x0);
                if (!d.empty())
                    o.fail(nf.to_string() + " " + vstr(v) + " first divergence " + d.first_divergent()->to_string());
                // a member is redundant iff the union of the others covers it
                auto D = predict_x0_decomposition(nf, v);
                std::vector<std::vector<Lattice>> pts;
                for (const auto& desc : D) pts.push_back(descriptor_points(desc, *S.m_v));
                for (std::size_t i = 0; i < D.size(); ++i) {
                    bool covered = true;
                    for (const auto& L : pts[i]) {
                        bool hit = false;
                        for (std::size_t j = 0; j < D.size() && !hit; ++j)
                            hit = j != i && std::binary_search(pts[j].begin(), pts[j].end(), L);
                        if (!hit) {
                            covered = false;
                            break;
                        }
                    }
                    if (covered) ++redundant;
                    if (covered == D[i].component || (covered && D[i].name != "Z"))
                        o.fail(nf.to_string() + " " + vstr(v) + " " + D[i].name + " flagged " +
                               (D[i].component ? "component" : "redundant"));
                }
            }
    }
    o.detail = std::to_string(tuples) + " tuples, " + std::to_string(redundant) + " exceptional Z";
    return o;
}

Outcome raynaud()
{
    Outcome o;
    std::map<std::string, int> rows;
    long long instances = 0, coincide = 0, coincide_large = 0, descents = 0;
    for (int p : {3, 5}) {
        const FieldCtx& F = FieldCtx::get(p, 1);
        auto forms = simple_forms(F);
        for (int s = 0; s < p - 1; ++s)
            for (int t = 0; t < p - 1; ++t) {
                forms.push_back(NormalForm::split(FieldElem::one(F), s, FieldElem::one(F), t));
                forms.push_back(NormalForm::split(FieldElem::one(F), s, FieldElem(F, 2), t));
            }
        for (const auto& nf : forms)
            for (int e = 1; e <= (p == 3 ? 8 : 12); ++e) {
                ExtremalReport R;
                try {
                    R = extremal_report(nf, e);
                } catch (const NoAdmissibleLattice&) {
                    continue;
                }
                ++instances;
                const std::string tag = nf.to_string() + " e=" + std::to_string(e);
                if (!verify_extremal(nf, e, R)) o.fail(tag + " containment or divisors");
                // only e < p - 1 forces min = max; some larger e coincide as well
                if (e < p - 1 && !R.coincide) o.fail(tag + " min and max differ");
                if (R.coincide) ++(e < p - 1 ? coincide : coincide_large);
                const std::string kind = nf.kind == Case::Simple ? "simple" : "split";
                ++rows[kind + " max" + std::to_string(R.predicted->max_row)];
                ++rows[kind + " min" + std::to_string(R.predicted->min_row)];
                if (e <= 4) {
                    ++descents;
                    if (!descent_check(nf, e, FieldCtx::get(p, 2))) o.fail(tag + " not Frobenius-fixed over F_p^2");
                }
            }
    }
    for (const char* kind : {"simple", "split"})
        for (const char* dir : {"max", "min"})
            for (int row = 0; row < (std::string(kind) == "simple" ? 4 : 2); ++row) {
                const std::string key = std::string(kind) + " " + dir + std::to_string(row);
                if (rows[key] < 2) o.fail(key + " exercised " + std::to_string(rows[key]) + " times");
            }
    o.detail = std::to_string(instances) + " instances, " + std::to_string(coincide) + " with e < p-1 and min = max, " +
               std::to_string(coincide_large) + " more with e >= p-1, " +
               std::to_string(descents) + " descent checks; rows";
    for (const auto& [k, n] : rows) o.detail += " " + k + ":" + std::to_string(n);
    return o;
}

Outcome gamma_verdicts()
{
    Outcome o;
    std::mt19937_64 rng(20240607);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    int nonsplit = 0;
    const int trials = 1000;
    for (int i = 0; i < trials; ++i) {
        const int p = pick(0, 1) ? 3 : 5;
        const FieldCtx& F = FieldCtx::get(p, pick(1, 2));
        const int s = pick(0, p - 2), t = pick(0, p - 2);
        FieldElem a(F, static_cast<std::uint16_t>(pick(1, F.q() - 1)));
        FieldElem b(F, static_cast<std::uint16_t>(pick(1, F.q() - 1)));
        Series gamma = Series::zero(F);
        for (int e = pick(-2, 3), n = pick(0, 3); n >= 0; ++e, --n)
            gamma = gamma + Series::monomial(FieldElem(F, static_cast<std::uint16_t>(pick(0, F.q() - 1))), e);
        const Mat2 A = Mat2::of(Series::monomial(a, s), gamma, Series::zero(F), Series::monomial(b, t));
        GammaResult g = maximize_gamma({&F, A, kExact});
        const bool split = g.nf.kind != Case::NonSplit;
        const std::string tag = A.to_string() + " over F_" + std::to_string(F.q());
        if (split != brute_split_verdict(A)) o.fail(tag + " verdicts differ");
        if (!split) {
            ++nonsplit;
            if (static_cast<long long>(g.nf.k()) * (p - 1) > static_cast<long long>(p) * t - s)
                o.fail(tag + " gamma valuation above the bound");
        }
    }
    o.detail = std::to_string(trials) + " modules, " + std::to_string(nonsplit) + " non-split";
    return o;
}

}  // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        Outcome (*run)();
        double limit;  // seconds, 0 for none
    };
    const Criterion all[] = {
        {1, "distance identities", distances, 60},
        {2, "simple strata counts", strata, 300},
        {3, "singleton and emptiness", singletons, 300},
        {4, "reducible component shapes", component_shapes, 0},
        {5, "X0 decompositions", x0_decomposition, 0},
        {6, "Raynaud extremes", raynaud, 600},
        {7, "gamma maximization vs brute force", gamma_verdicts, 0},
    };
    bool ok = true;
    for (const auto& c : all) {
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& ex) {
            o.fail(std::string("exception: ") + ex.what());
        }
        const double dt = since(t0);
        if (c.limit > 0 && dt >= c.limit) o.fail("runtime " + std::to_string(dt) + "s over the limit");
        std::printf("criterion %d %s: %s (%s; %.1fs", c.id, c.name, o.ok ? "PASS" : "FAIL", o.detail.c_str(), dt);
        if (c.limit > 0) std::printf(", limit %.0fs", c.limit);
        std::printf(")\n");
        for (const auto& f : o.failures) std::printf("    %s\n", f.c_str());
        std::fflush(stdout);
        ok = ok && o.ok;
    }
    return ok ? 0 : 1;
}
