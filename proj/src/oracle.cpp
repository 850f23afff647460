#include "kisinlab/oracle.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace kisinlab {

namespace {

Lattice scale_u(const Lattice& L, int k)
{
    return {L.m + k, L.n + k, L.r.shift(k)};
}

Lattice to_band(Lattice L, int Y)
{
    while (L.y() > Y + 1) L = scale_u(L, -1);
    while (L.y() < Y) L = scale_u(L, 1);
    return L;
}

std::vector<Lattice> sublattices(const Lattice& L)
{
    const FieldCtx& F = L.ctx();
    Mat2 B = L.basis();
    Series zero = Series::zero(F), one = Series::u_pow(F, 0), u = Series::u_pow(F, 1);
    std::vector<Lattice> out;
    for (int c = 0; c < F.q(); ++c) {
        Series cc = Series::constant(FieldElem(F, static_cast<std::uint16_t>(c)));
        out.push_back(hermite_form(B * Mat2::of(u, cc, zero, one)));
    }
    out.push_back(hermite_form(B * Mat2::of(one, zero, zero, u)));
    return out;
}

}  // namespace

std::vector<Lattice> ball_enumerate(const Lattice& center, int radius, std::optional<int> y_fixed, long long budget)
{
    if (radius < 0) throw std::invalid_argument("negative radius");
    const int Y = y_fixed ? *y_fixed : center.y();
    std::set<Lattice> seen;
    std::deque<std::pair<Lattice, int>> queue;
    Lattice start = to_band(center, Y);
    seen.insert(start);
    queue.emplace_back(start, 0);
    while (!queue.empty()) {
        auto [L, d] = queue.front();
        queue.pop_front();
        if (d == radius) continue;
        for (const Lattice& N : sublattices(L)) {
            Lattice V = to_band(N, Y);
            if (seen.insert(V).second) {
                if (static_cast<long long>(seen.size()) > budget) throw BudgetExceeded("ball exceeds the lattice budget");
                queue.emplace_back(V, d + 1);
            }
        }
    }
    std::vector<Lattice> out;
    for (const auto& L : seen)
        if (L.y() == Y) out.push_back(L);
    return out;
}

long long ball_count_formula(int q, int radius)
{
    long long total = 1;
    long long qp = q;  // q^(2j-1)
    for (int j = 1; 2 * j <= radius; ++j) {
        total += (q + 1) * qp;
        qp *= static_cast<long long>(q) * q;
    }
    return total;
}

namespace {

using Row = std::vector<std::uint16_t>;

// Row reduce in place; returns pivot columns.
std::vector<int> reduce(const FieldCtx& F, std::vector<Row>& rows, int n)
{
    std::vector<int> piv;
    std::size_t r = 0;
    for (int col = 0; col < n && r < rows.size(); ++col) {
        std::size_t sel = r;
        while (sel < rows.size() && rows[sel][col] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        std::uint16_t inv = F.inv(rows[r][col]);
        for (auto& x : rows[r]) x = F.mul(x, inv);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r) continue;
            std::uint16_t f = rows[i][col];
            if (!f) continue;
            std::uint16_t nf = F.neg(f);
            for (int k = col; k < n; ++k) rows[i][k] = F.add(rows[i][k], F.mul(nf, rows[r][k]));
        }
        piv.push_back(col);
        ++r;
    }
    return piv;
}

std::vector<Row> kernel(const FieldCtx& F, std::vector<Row> rows, int n)
{
    auto piv = reduce(F, rows, n);
    std::vector<char> isp(n, 0);
    for (int c : piv) isp[c] = 1;
    std::vector<Row> out;
    for (int f = 0; f < n; ++f) {
        if (isp[f]) continue;
        Row v(n, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = F.neg(rows[i][f]);
        out.push_back(std::move(v));
    }
    return out;
}

int min_ord(const Mat2& A)
{
    int nu = kExact;
    for (int i = 0; i < 2; ++i)
        for (int l = 0; l < 2; ++l)
            if (!A(i, l).is_zero()) nu = std::min(nu, A(i, l).ord());
    return nu;
}

// Kernel of A phi(w) - c u^j w on coefficient vectors (w1_0..w1_{N-1}, w2_0..w2_{N-1}).
std::vector<Row> line_kernel(const Mat2& A, std::uint16_t c, int j, int N)
{
    const FieldCtx& F = A.ctx();
    const int p = F.p();
    const int nu = min_ord(A);
    std::vector<Row> rows;
    for (int d = std::min(nu, j); d <= N + j - 1; ++d) {
        for (int i = 0; i < 2; ++i) {
            Row row(2 * N, 0);
            for (int l = 0; l < 2; ++l) {
                const Series& e = A(i, l);
                for (int n = 0; n < N; ++n) {
                    int ell = d - p * n;
                    if (ell < e.ord() || ell >= e.top()) continue;
                    std::uint16_t a = e.code_at(ell);
                    row[l * N + n] = F.add(row[l * N + n], a);
                }
            }
            if (d - j >= 0 && d - j < N) row[i * N + d - j] = F.add(row[i * N + d - j], F.neg(c));
            if (std::any_of(row.begin(), row.end(), [](std::uint16_t x) { return x != 0; })) rows.push_back(row);
        }
    }
    return kernel(F, rows, 2 * N);
}

int safe_size(const Mat2& A, int j, int N)
{
    const int p = A.ctx().p();
    int need = (j - min_ord(A)) / (p - 1) + 3;
    // every unknown referenced by the equations must lie below N
    while ((N + j - 1 - min_ord(A)) / p >= N) ++N;
    return std::max({N, need, 2});
}

}  // namespace

std::optional<std::pair<FieldElem, BruteWitness>> brute_stable_line(const Mat2& A, int j, int N)
{
    const FieldCtx& F = A.ctx();
    N = safe_size(A, j, N);
    for (int c = 1; c < F.q(); ++c) {
        auto ker = line_kernel(A, static_cast<std::uint16_t>(c), j, N);
        for (const auto& v : ker) {
            if (v[0] == 0 && v[N] == 0) continue;
            BruteWitness w;
            w.w1.assign(v.begin(), v.begin() + N);
            w.w2.assign(v.begin() + N, v.end());
            return std::make_pair(FieldElem(F, static_cast<std::uint16_t>(c)), w);
        }
    }
    return std::nullopt;
}

bool brute_split_verdict(const Mat2& A)
{
    const FieldCtx& F = A.ctx();
    const int p = F.p();
    const int t = A(1, 1).ord();
    int vg = A(0, 1).is_zero() ? t : A(0, 1).ord();
    int K = std::max(0, t - vg) + 1;
    for (int k = 0; k <= K; ++k) {
        int j = t + (p - 1) * k;
        int N = safe_size(A, j, 4);
        for (int c = 1; c < F.q(); ++c) {
            auto ker = line_kernel(A, static_cast<std::uint16_t>(c), j, N);
            bool unit = false, second = false;
            for (const auto& v : ker) {
                if (v[0] || v[N]) unit = true;
                if (std::any_of(v.begin() + N, v.end(), [](std::uint16_t x) { return x != 0; })) second = true;
            }
            if (unit && second) return true;
        }
    }
    return false;
}

std::optional<Lattice> ReportDiff::first_divergent() const
{
    std::optional<Lattice> best;
    for (const auto* v : {&only_predicted, &only_observed})
        for (const auto& L : *v)
            if (!best || L < *best) best = L;
    return best;
}

ReportDiff diff_reports(std::vector<Lattice> predicted, std::vector<Lattice> observed)
{
    std::sort(predicted.begin(), predicted.end());
    std::sort(observed.begin(), observed.end());
    ReportDiff d;
    std::set_difference(predicted.begin(), predicted.end(), observed.begin(), observed.end(),
                        std::back_inserter(d.only_predicted));
    std::set_difference(observed.begin(), observed.end(), predicted.begin(), predicted.end(),
                        std::back_inserter(d.only_observed));
    return d;
}

void add_count_check(ReportDiff& d, const std::string& what, long long predicted, long long observed)
{
    if (predicted != observed)
        d.count_mismatches.push_back(what + ": predicted " + std::to_string(predicted) + ", observed " +
                                     std::to_string(observed));
}

}  // namespace kisinlab
