#include "kisinlab/phimod.hpp"

#include <algorithm>
#include <map>

namespace kisinlab {

void VParams::validate() const
{
    if (e < 1) throw UnsupportedCase("e must be positive");
    if (!(0 <= r2 && r2 <= r1 && r1 <= e)) throw UnsupportedCase("need 0 <= r2 <= r1 <= e");
}

PhiModule transform(const PhiModule& phi, const Mat2& C)
{
    PhiModule out = phi;
    out.A = C.inverse(phi.prec) * phi.A * C.phi();
    return out;
}

namespace {

bool is_monomial(const Series& s)
{
    return s.exact() && s.codes().size() == 1;
}

int floor_div(int a, int b)
{
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

GammaResult maximize_gamma(const PhiModule& phi)
{
    const FieldCtx& ctx = *phi.ctx;
    const int p = ctx.p();
    const Mat2& A = phi.A;
    if (!A(1, 0).is_zero() || !A(1, 0).exact()) throw UnrecognizedShape("matrix is not upper triangular");
    if (!is_monomial(A(0, 0)) || !is_monomial(A(1, 1))) throw UnrecognizedShape("diagonal entries must be monomials");
    const int s = A(0, 0).ord();
    const int t = A(1, 1).ord();
    if (s < 0 || s >= p - 1 || t < 0 || t >= p - 1) throw UnrecognizedShape("diagonal exponents must lie in [0, p-1)");
    const FieldElem a = A(0, 0).coeff(s);
    const FieldElem b = A(1, 1).coeff(t);

    Series gamma = A(0, 1);
    Series q = Series::zero(ctx);
    GammaResult res;
    const long long bound = static_cast<long long>(p) * t - s;  // split once m (p-1) > bound
    for (;;) {
        if (gamma.is_zero()) {
            if (!gamma.exact()) throw InsufficientPrecision("gamma vanishes to precision");
            break;
        }
        const int m = gamma.ord();
        const long long lhs = static_cast<long long>(m) * (p - 1);
        if (lhs > bound) {
            // q = c u^(m-t) cancels u^m and every later leading term stays in this branch
            gamma = Series::zero(ctx);
            break;
        }
        const FieldElem gm = gamma.coeff(m);
        Series step;
        if (lhs < bound && (m - s) % p == 0) {
            int kappa = (m - s) / p;
            step = Series::monomial(-(gm / a), kappa);
        } else if (lhs == bound && a != b) {
            step = Series::monomial(-(gm / (a - b)), m - t);
        } else {
            break;
        }
        gamma = gamma + Series::monomial(a, s) * step.phi() - Series::monomial(b, t) * step;
        q = q + step;
        ++res.steps;
    }
    res.C = Mat2::of(Series::u_pow(ctx, 0), q, Series::zero(ctx), Series::u_pow(ctx, 0));
    if (gamma.is_zero())
        res.nf = NormalForm::split(a, s, b, t);
    else
        res.nf = NormalForm::nonsplit(a, s, b, t, gamma);
    return res;
}

namespace {

// Linear forms in the free coefficients, over F as codes.
using Form = std::vector<std::uint16_t>;

struct LineSystem {
    const FieldCtx& F;
    const Mat2& A;
    std::uint16_t cinv;
    int j;
    int free_n;  // coefficients 0..free_n of each coordinate are parameters
    int nvars;
    std::map<std::pair<int, int>, Form> memo;

    Form add_scaled(Form acc, const Form& f, std::uint16_t c) const
    {
        for (int i = 0; i < nvars; ++i)
            if (f[i]) acc[i] = F.add(acc[i], F.mul(c, f[i]));
        return acc;
    }

    // sum over l, n of A_il[d - p n] w_{l,n}
    Form lhs(int i, int d)
    {
        Form acc(nvars, 0);
        const int p = F.p();
        for (int l = 0; l < 2; ++l) {
            const Series& e = A(i, l);
            for (int k = 0; k < static_cast<int>(e.codes().size()); ++k) {
                std::uint16_t c = e.codes()[k];
                if (!c) continue;
                int rest = d - (e.ord() + k);
                if (rest < 0 || rest % p != 0) continue;
                acc = add_scaled(acc, coef(l, rest / p), c);
            }
        }
        return acc;
    }

    const Form& coef(int l, int n)
    {
        auto key = std::make_pair(l, n);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        Form f(nvars, 0);
        if (n <= free_n) {
            f[l * (free_n + 1) + n] = 1;
        } else {
            // c w_{l,n} = lhs at degree n + j; only lower coefficients appear
            Form rhs = lhs(l, n + j);
            for (auto& x : rhs) x = F.mul(x, cinv);
            f = rhs;
        }
        return memo.emplace(key, std::move(f)).first->second;
    }
};

// Basis of the nullspace of rows (each of width n).
std::vector<Form> nullspace(const FieldCtx& F, std::vector<Form> rows, int n)
{
    std::vector<int> pivcol;
    int r = 0;
    for (int col = 0; col < n && r < static_cast<int>(rows.size()); ++col) {
        int piv = -1;
        for (int i = r; i < static_cast<int>(rows.size()); ++i)
            if (rows[i][col]) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[r], rows[piv]);
        std::uint16_t inv = F.inv(rows[r][col]);
        for (auto& x : rows[r]) x = F.mul(x, inv);
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i == r || !rows[i][col]) continue;
            std::uint16_t f = F.neg(rows[i][col]);
            for (int k = 0; k < n; ++k)
                if (rows[r][k]) rows[i][k] = F.add(rows[i][k], F.mul(f, rows[r][k]));
        }
        pivcol.push_back(col);
        ++r;
    }
    std::vector<bool> is_piv(n, false);
    for (int c : pivcol) is_piv[c] = true;
    std::vector<Form> basis;
    for (int fcol = 0; fcol < n; ++fcol) {
        if (is_piv[fcol]) continue;
        Form v(n, 0);
        v[fcol] = 1;
        for (int i = 0; i < static_cast<int>(pivcol.size()); ++i) v[pivcol[i]] = F.neg(rows[i][fcol]);
        basis.push_back(v);
    }
    return basis;
}

}  // namespace

std::optional<SeriesVec> stable_line_solver(const PhiModule& phi, const FieldElem& c, int j, int prec)
{
    const FieldCtx& F = *phi.ctx;
    if (c.is_zero()) throw FieldError("stable line eigenvalue must be nonzero");
    const int p = F.p();
    std::optional<int> nu;
    for (int i = 0; i < 2; ++i)
        for (int l = 0; l < 2; ++l) {
            const Series& e = phi.A(i, l);
            if (!e.exact()) throw InsufficientPrecision("stable line solver needs an exact matrix");
            if (!e.is_zero()) nu = nu ? std::min(*nu, e.ord()) : e.ord();
        }
    if (!nu) throw SingularMatrix("zero matrix");
    const int n0 = floor_div(j - *nu, p - 1);
    const int free_n = std::max(n0, 0);
    LineSystem sys{F, phi.A, F.inv(c.code()), j, free_n, 2 * (free_n + 1), {}};

    std::vector<Form> rows;
    const int dlo = std::min(*nu, j);
    for (int d = dlo; d <= free_n + j; ++d) {
        for (int i = 0; i < 2; ++i) {
            Form f = sys.lhs(i, d);
            if (d - j >= 0) f = sys.add_scaled(f, sys.coef(i, d - j), F.neg(c.code()));
            bool nz = std::any_of(f.begin(), f.end(), [](std::uint16_t x) { return x != 0; });
            if (nz) rows.push_back(std::move(f));
        }
    }
    auto basis = nullspace(F, rows, sys.nvars);
    const int i0 = 0, i1 = free_n + 1;
    for (const auto& v : basis) {
        if (!v[i0] && !v[i1]) continue;
        SeriesVec w;
        for (int l = 0; l < 2; ++l) {
            std::vector<std::uint16_t> codes;
            for (int n = 0; n < prec; ++n) {
                const Form& f = sys.coef(l, n);
                std::uint16_t acc = 0;
                for (int k = 0; k < sys.nvars; ++k)
                    if (f[k] && v[k]) acc = F.add(acc, F.mul(f[k], v[k]));
                codes.push_back(acc);
            }
            w[l] = Series::from_codes(F, 0, codes, prec);
        }
        return w;
    }
    return std::nullopt;
}

NormalForm classify(const PhiModule& phi)
{
    const FieldCtx& ctx = *phi.ctx;
    const int p = ctx.p();
    const Mat2& A = phi.A;
    for (int i = 0; i < 2; ++i)
        for (int l = 0; l < 2; ++l)
            if (!A(i, l).exact()) throw UnrecognizedShape("classify needs exact entries");

    if (A(0, 0).is_zero() && A(1, 1).is_zero() && is_monomial(A(0, 1)) && is_monomial(A(1, 0))) {
        // [[0, alpha u^sigma], [beta u^tau, 0]] -> [[0, alpha beta u^(sigma + p tau)], [1, 0]]
        int sigma = A(0, 1).ord(), tau = A(1, 0).ord();
        FieldElem prod = A(0, 1).coeff(sigma) * A(1, 0).coeff(tau);
        int s = sigma + p * tau;
        int mod = p * p - 1;
        s = ((s % mod) + mod) % mod;
        if (s % (p + 1) == 0) throw UnsupportedCase("anti-diagonal form with s divisible by p+1 is not absolutely simple");
        return NormalForm::simple(prod, s);
    }
    if (A(1, 0).is_zero() && is_monomial(A(0, 0)) && is_monomial(A(1, 1))) {
        // bring both diagonal exponents into [0, p-1) with diag(u^i, u^l)
        int i = -floor_div(A(0, 0).ord(), p - 1);
        int l = -floor_div(A(1, 1).ord(), p - 1);
        Mat2 C = Mat2::diag(Series::u_pow(ctx, i), Series::u_pow(ctx, l));
        PhiModule norm = (i == 0 && l == 0) ? phi : transform(phi, C);
        return maximize_gamma(norm).nf;
    }
    throw UnrecognizedShape("matrix is neither anti-diagonal nor upper triangular with monomial diagonal");
}

}  // namespace kisinlab
