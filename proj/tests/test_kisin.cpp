#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "kisinlab/kisin.hpp"
#include "poly_oracle.hpp"

using namespace kisinlab;

namespace {

const FieldCtx& F3() { return FieldCtx::get(3, 1); }

NormalForm nf3(const std::string& s) { return NormalForm::parse(F3(), s); }

std::vector<std::string> points(const std::vector<Lattice>& v)
{
    std::vector<std::string> out;
    for (const auto& L : v) out.push_back(lattice_to_point(L).to_string());
    return out;
}

Lattice at(int x, int y, const std::string& q = "0")
{
    return point_to_lattice(BuildingPoint::make(Rat(x), Rat(y), Series::parse(F3(), q)));
}

}  // namespace

TEST(Admissibility, HeightOfTheVariety)
{
    EXPECT_EQ(m_of_v(nf3("simple:a=1,s=2"), {5, 4, 0}), 2);
    EXPECT_EQ(m_of_v(nf3("simple:a=1,s=2"), {3, 3, 0}), std::nullopt);
    EXPECT_EQ(m_of_v(nf3("split:a=1,s=0,b=1,t=1"), {3, 3, 0}), 1);
}

TEST(Admissibility, SimpleExamples)
{
    NormalForm nf = nf3("simple:a=1,s=2");
    VParams v{5, 4, 0};
    EXPECT_TRUE(is_v_admissible(nf, v, at(0, 2)));
    EXPECT_FALSE(is_v_admissible(nf, v, at(2, 2)));
    EXPECT_FALSE(is_v_admissible(nf, v, at(0, 0)));
    EXPECT_FALSE(is_v_admissible(nf, v, at(1, 3)));
}

TEST(Enumerate, SimpleExamples)
{
    NormalForm nf = nf3("simple:a=1,s=2");
    AdmissibleSet S = enumerate_admissible(nf, {5, 4, 0});
    EXPECT_EQ(points(S.points), std::vector<std::string>{"[0,2]_0"});
    S = enumerate_admissible(nf, {7, 6, 0});
    EXPECT_EQ(points(S.points), (std::vector<std::string>{"[-1,3]_0", "[1,3]_0", "[1,3]_1", "[1,3]_2"}));
    EXPECT_TRUE(enumerate_admissible(nf, {3, 3, 0}).points.empty());
}

TEST(Enumerate, CountsMatchPolynomialOracle)
{
    // frozen from the standalone oracle: e = 5, 7, 9, 11, 13 with r = (e-1, 0)
    const std::map<int, int> frozen = {{5, 1}, {7, 4}, {9, 4}, {11, 13}, {13, 13}};
    const int p = 3;
    oracle::M2 A{oracle::Poly::zero(p), oracle::Poly::mono(p, 1, 2), oracle::Poly::mono(p, 1, 0),
                 oracle::Poly::zero(p)};
    NormalForm nf = nf3("simple:a=1,s=2");
    for (auto [e, count] : frozen) {
        VParams v{e, e - 1, 0};
        const int D = 2 * e - v.dprime();
        int brute = 0;
        oracle::for_each_lattice(p, *m_of_v(nf, v), 5, 3, [&](const oracle::Lat& L) {
            auto [a, b] = oracle::phi_divisors(A, L);
            brute += a + b == D && a - b <= v.r1 - v.r2;
        });
        EXPECT_EQ(brute, count) << "e=" << e;
        EXPECT_EQ(static_cast<int>(enumerate_admissible(nf, v).points.size()), count) << "e=" << e;
    }
}

TEST(Enumerate, EqualWeightsGiveZeroD1)
{
    for (const char* text : {"simple:a=1,s=1", "split:a=1,s=0,b=2,t=1", "split:a=1,s=1,b=1,t=1"}) {
        NormalForm nf = nf3(text);
        for (int e = 1; e <= 6; ++e)
            for (int r = 0; r <= e; ++r)
                for (const auto& L : enumerate_admissible(nf, {e, r, r}).points)
                    EXPECT_EQ(phi_divisors(nf.module(), L).d1(), 0);
    }
}

TEST(Enumerate, BudgetIsEnforced)
{
    NormalForm nf = NormalForm::parse(FieldCtx::get(5, 2), "simple:a=1,s=2");
    EXPECT_THROW(enumerate_admissible(nf, {30, 30, 0}, 1000), BudgetExceeded);
}

TEST(Strata, SimpleExamples)
{
    EXPECT_TRUE(stratum_predicted_nonempty(3, 2, {2, 0}));
    EXPECT_FALSE(stratum_predicted_nonempty(3, 2, {1, 0}));
    AdmissibleSet S = enumerate_admissible(nf3("simple:a=1,s=2"), {5, 4, 0});
    auto st = stratify(S);
    auto it = std::find_if(st.begin(), st.end(), [](const StratumReport& r) { return r.divisors == ElemDiv{4, 2}; });
    ASSERT_NE(it, st.end());
    EXPECT_EQ(it->actual_count, 1);
    EXPECT_EQ(it->predicted_count, 1);
    for (const auto& r : st) {
        EXPECT_EQ(r.divisors.d2(), 6);
        EXPECT_EQ(r.predicted_nonempty, r.actual_count > 0);
    }
}

TEST(Strata, CountsArePowersOfQ)
{
    for (int k : {1, 2}) {
        const auto& F = FieldCtx::get(3, k);
        for (int s : {1, 2, 3, 5, 6, 7})
            for (int e = 1; e <= 9; ++e)
                for (int r1 = 0; r1 <= e; ++r1) {
                    AdmissibleSet S = enumerate_admissible(NormalForm::simple(FieldElem::one(F), s), {e, r1, 0});
                    for (const auto& r : stratify(S)) {
                        ASSERT_TRUE(r.predicted_count);
                        EXPECT_EQ(*r.predicted_count, r.actual_count) << "s=" << s << " e=" << e << " r1=" << r1;
                    }
                }
    }
}

TEST(SRank, Examples)
{
    // split-iso, s = 0: [2, 2]_z carries the line u (z e1 + e2)
    NormalForm iso = nf3("split:a=1,s=0,b=1,t=0");
    VParams v{4, 4, 0};
    for (const char* z : {"0", "1", "2"}) {
        SRank r = s_rank(iso, v, at(2, 2, z));
        EXPECT_EQ(r.label, "X_Ma") << z;
        EXPECT_EQ(r.rank, 1);
    }
    EXPECT_EQ(s_rank(iso, v, at(0, 2)).label, "X0");

    NormalForm simple = nf3("simple:a=1,s=2");
    for (const auto& L : enumerate_admissible(simple, {11, 10, 0}).points) EXPECT_EQ(s_rank(simple, {11, 10, 0}, L).rank, 0);

    // split-noniso: M_- = [(t - s - (r1 - r2)) / (p - 1), m]_0 with e1 stable
    NormalForm non = nf3("split:a=1,s=0,b=1,t=1");
    EXPECT_EQ(s_rank(non, {4, 2, 1}, at(0, 2)).label, "X_Ma");
}

TEST(Components, Examples)
{
    AdmissibleSet S = enumerate_admissible(nf3("split:a=1,s=0,b=1,t=0"), {4, 4, 0});
    ComponentReport C = components(S);
    EXPECT_TRUE(C.agreement);
    EXPECT_EQ(C.members["X_Ma"].size(), 4u);
    for (const auto& pr : C.predictions)
        if (pr.label == "X_Ma") EXPECT_EQ(pr.shape, Shape::P1);

    // m + (r1 - r2)/(p - 1) odd
    C = components(enumerate_admissible(nf3("split:a=1,s=0,b=1,t=0"), {5, 4, 0}));
    EXPECT_TRUE(C.agreement);
    EXPECT_TRUE(C.members["X_Ma"].empty());
    EXPECT_EQ(C.members["X0"].size(), 4u);

    NormalForm ns = nf3("nonsplit:a=1,s=0,b=1,t=1,gamma=u");
    for (int e = 1; e <= 8; ++e)
        for (int r1 = 0; r1 <= e; ++r1)
            for (int r2 = 0; r2 <= r1; ++r2) {
                C = components(enumerate_admissible(ns, {e, r1, r2}));
                EXPECT_TRUE(C.agreement);
                EXPECT_TRUE(C.members["X_Mb"].empty());
            }
}

TEST(X0, ExceptionalZ)
{
    NormalForm iso = nf3("split:a=1,s=0,b=1,t=0");
    // l = 2, n = 2: Z lies inside the Z_0 balls
    auto D = predict_x0_decomposition(iso, {14, 12, 0});
    ASSERT_FALSE(D.empty());
    EXPECT_EQ(D.front().name, "Z");
    EXPECT_FALSE(D.front().component);
    // l = 2, n = 0: the Z_0 balls are ordinary points and Z is all of X0
    D = predict_x0_decomposition(iso, {4, 4, 0});
    EXPECT_TRUE(D.front().component);
    ComponentReport C = components(enumerate_admissible(iso, {4, 4, 0}));
    EXPECT_EQ(points(C.members["X0"]), std::vector<std::string>{"[0,2]_0"});
    EXPECT_EQ(points(predicted_x0_points(iso, {4, 4, 0})), std::vector<std::string>{"[0,2]_0"});
}

TEST(X0, ConnectedByP1Chains)
{
    for (const char* text : {"split:a=1,s=0,b=1,t=0", "split:a=1,s=0,b=2,t=1", "nonsplit:a=1,s=0,b=1,t=1,gamma=u"}) {
        NormalForm nf = nf3(text);
        for (int e = 1; e <= 9; ++e)
            for (int r1 = 0; r1 <= e; ++r1)
                for (int r2 = 0; r2 <= r1; ++r2) {
                    ComponentReport C = components(enumerate_admissible(nf, {e, r1, r2}));
                    EXPECT_TRUE(p1_connected(C.members["X0"])) << text << " e=" << e << " r=" << r1 << "," << r2;
                }
    }
}

TEST(X0, TubesTerminate)
{
    NormalForm non = nf3("split:a=1,s=0,b=2,t=1");
    for (const auto& d : predict_x0_decomposition(non, {9, 9, 0}))
        for (const auto& b : d.balls) EXPECT_GE(b.radius, 0);
}

TEST(P1Family, InnerStar)
{
    const auto& F = F3();
    SeriesVec e1{Series::u_pow(F, 0), Series::zero(F)}, e2{Series::zero(F), Series::u_pow(F, 0)};
    auto fam = p1_family(e1, e2, P1Mode::Inner);
    std::vector<std::string> s;
    for (const auto& L : fam) s.push_back(L.to_string());
    EXPECT_EQ(s, (std::vector<std::string>{"lat(0,0,0)", "lat(0,0,u^-1)", "lat(0,0,2*u^-1)", "lat(-1,1,0)"}));
    for (const auto& L : fam) EXPECT_EQ(L.y(), 0);
    for (auto mode : {P1Mode::Outer1, P1Mode::Outer2}) EXPECT_EQ(p1_family(e1, e2, mode, 2).size(), 4u);
    EXPECT_TRUE(p1_connected(fam));
}

TEST(Prop210, RelaxedAdmissibility)
{
    EXPECT_TRUE(check_prop_2_10({5, 5, 0}));
    EXPECT_TRUE(check_prop_2_10({5, 3, 0}));
    EXPECT_FALSE(check_prop_2_10({5, 4, 1}));
    for (const char* text : {"simple:a=1,s=2", "split:a=1,s=0,b=2,t=1"}) {
        NormalForm nf = nf3(text);
        for (int e = 1; e <= 7; ++e)
            for (int r1 = 0; r1 <= e; ++r1)
                for (int r2 = 0; r2 <= r1; ++r2) {
                    VParams v{e, r1, r2};
                    auto m = m_of_v(nf, v);
                    if (!check_prop_2_10(v) || !m) continue;
                    for (const auto& L : lattices_in_ball(fixed_point(nf), Rat(e + 2), *m))
                        EXPECT_EQ(is_v_admissible(nf, v, L), is_relaxed_admissible(nf, v, L)) << text << L.to_string();
                }
    }
}

TEST(Variety, Predictions)
{
    NormalForm nf = nf3("simple:a=1,s=2");
    VarietyPrediction p = predict_variety(nf, {5, 4, 0});
    EXPECT_EQ(p.singleton, true);
    p = predict_variety(nf, {7, 6, 0});
    EXPECT_EQ(p.singleton, false);
    EXPECT_EQ(p.dimension, 1);
    p = predict_variety(nf, {3, 3, 0});
    EXPECT_FALSE(p.congruence_ok);
    EXPECT_EQ(p.empty, true);
}
