#include "kisinlab/normal_form.hpp"

#include <cctype>
#include <map>

namespace kisinlab {

const char* case_name(Case c)
{
    switch (c) {
    case Case::Simple: return "simple";
    case Case::SplitIso: return "split-iso";
    case Case::SplitNonIso: return "split-noniso";
    case Case::NonSplit: return "nonsplit";
    }
    return "?";
}

NormalForm NormalForm::simple(const FieldElem& a, int s)
{
    NormalForm nf;
    nf.kind = Case::Simple;
    nf.a = a;
    nf.b = a;
    nf.s = s;
    nf.gamma = Series::zero(a.ctx());
    return nf;
}

NormalForm NormalForm::split(const FieldElem& a, int s, const FieldElem& b, int t)
{
    NormalForm nf;
    nf.kind = (a == b && s == t) ? Case::SplitIso : Case::SplitNonIso;
    nf.a = a;
    nf.b = b;
    nf.s = s;
    nf.t = t;
    nf.gamma = Series::zero(a.ctx());
    return nf;
}

NormalForm NormalForm::nonsplit(const FieldElem& a, int s, const FieldElem& b, int t, const Series& gamma)
{
    NormalForm nf = split(a, s, b, t);
    nf.kind = Case::NonSplit;
    nf.gamma = gamma;
    return nf;
}

int NormalForm::k() const
{
    auto v = gamma.valuation();
    if (!v) throw UnsupportedCase("non-split form with gamma = 0");
    return *v;
}

void NormalForm::validate() const
{
    const int p = this->p();
    if (a.is_zero() || b.is_zero()) throw UnsupportedCase("diagonal coefficients must be units");
    if (kind == Case::Simple) {
        if (s < 0 || s >= p * p - 1 || s % (p + 1) == 0)
            throw UnsupportedCase("simple form needs 0 <= s < p^2-1 and s not divisible by p+1");
        return;
    }
    if (s < 0 || s >= p - 1 || t < 0 || t >= p - 1) throw UnsupportedCase("split exponents need 0 <= s,t < p-1");
    if (kind == Case::SplitIso && (a != b || s != t)) throw UnsupportedCase("split-iso needs (a,s) = (b,t)");
    if (kind == Case::SplitNonIso && a == b && s == t) throw UnsupportedCase("split-noniso needs (a,s) != (b,t)");
    if (kind == Case::NonSplit) {
        if (!gamma.exact()) throw UnsupportedCase("gamma must be a Laurent polynomial");
        // (p-1) k <= p t - s
        if (static_cast<long long>(k()) * (p - 1) > static_cast<long long>(p) * t - s)
            throw UnsupportedCase("gamma valuation exceeds the non-split bound; the extension splits");
        const long long lhs = static_cast<long long>(k()) * (p - 1), bound = static_cast<long long>(p) * t - s;
        if ((lhs < bound && (k() - s) % p == 0) || (lhs == bound && a != b))
            throw UnsupportedCase("leading term of gamma can be cancelled; run maximize_gamma first");
    }
}

Mat2 NormalForm::matrix() const
{
    const FieldCtx& c = ctx();
    if (kind == Case::Simple)
        return Mat2::of(Series::zero(c), Series::monomial(a, s), Series::u_pow(c, 0), Series::zero(c));
    return Mat2::of(Series::monomial(a, s), gamma, Series::zero(c), Series::monomial(b, t));
}

PhiModule NormalForm::module() const
{
    return {&ctx(), matrix(), kExact};
}

namespace {

FieldElem lift(const FieldElem& x, const FieldCtx& to)
{
    if (&x.ctx() == &to) return x;
    if (x.ctx().p() != to.p()) throw FieldError("characteristic mismatch");
    if (x.code() >= x.ctx().p()) throw FieldError("coefficient " + x.to_string() + " is not in the prime field");
    return {to, x.code()};
}

}  // namespace

NormalForm NormalForm::over(const FieldCtx& to) const
{
    NormalForm nf = *this;
    nf.a = lift(a, to);
    nf.b = lift(b, to);
    Series g = Series::zero(to, gamma.prec());
    if (!gamma.is_zero()) {
        std::vector<std::uint16_t> codes;
        for (auto c : gamma.codes()) codes.push_back(lift(FieldElem(ctx(), c), to).code());
        g = Series::from_codes(to, gamma.ord(), codes, gamma.prec());
    }
    nf.gamma = g;
    return nf;
}

std::string NormalForm::to_string() const
{
    std::string out = kind == Case::Simple ? "simple" : (kind == Case::NonSplit ? "nonsplit" : "split");
    out += ":a=" + a.to_string() + ",s=" + std::to_string(s);
    if (kind != Case::Simple) out += ",b=" + b.to_string() + ",t=" + std::to_string(t);
    if (kind == Case::NonSplit) out += ",gamma=" + gamma.to_string();
    return out;
}

NormalForm NormalForm::parse(const FieldCtx& ctx, const std::string& text)
{
    auto colon = text.find(':');
    if (colon == std::string::npos) throw FieldError("normal form literal needs 'kind:key=value,...'");
    std::string kind = text.substr(0, colon);
    std::map<std::string, std::string> kv;
    std::string rest = text.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
        auto next = rest.find(',', pos);
        // gamma is last and may not contain commas, but keep everything after it
        std::string item = rest.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        auto eq = item.find('=');
        if (eq == std::string::npos) throw FieldError("bad normal form item '" + item + "'");
        std::string key = item.substr(0, eq);
        if (key == "gamma") {
            kv[key] = rest.substr(pos + eq + 1);
            break;
        }
        kv[key] = item.substr(eq + 1);
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    auto need = [&](const std::string& k) -> const std::string& {
        auto it = kv.find(k);
        if (it == kv.end()) throw FieldError("normal form literal is missing '" + k + "'");
        return it->second;
    };
    auto as_int = [&](const std::string& k) {
        try {
            return std::stoi(need(k));
        } catch (const std::invalid_argument&) {
            throw FieldError("normal form field '" + k + "' is not an integer");
        }
    };
    NormalForm nf;
    if (kind == "simple") {
        nf = simple(FieldElem::parse(ctx, need("a")), as_int("s"));
    } else if (kind == "split") {
        nf = split(FieldElem::parse(ctx, need("a")), as_int("s"), FieldElem::parse(ctx, need("b")), as_int("t"));
    } else if (kind == "nonsplit") {
        nf = nonsplit(FieldElem::parse(ctx, need("a")), as_int("s"), FieldElem::parse(ctx, need("b")), as_int("t"),
                      Series::parse(ctx, need("gamma")));
    } else {
        throw FieldError("unknown normal form kind '" + kind + "'");
    }
    return nf;
}

}  // namespace kisinlab
