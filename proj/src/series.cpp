#include "kisinlab/series.hpp"

#include <algorithm>
#include <cctype>

namespace kisinlab {

int clamp_prec(long long p)
{
    if (p >= kExact) return kExact;
    if (p <= -kExact) return -kExact + 1;
    return static_cast<int>(p);
}

Series Series::monomial(const FieldElem& c, int e, int prec)
{
    Series s(c.ctx(), prec);
    if (!c.is_zero() && e < prec) {
        s.ord_ = e;
        s.c_.push_back(c.code());
    }
    return s;
}

Series Series::from_codes(const FieldCtx& ctx, int ord, const std::vector<std::uint16_t>& codes, int prec)
{
    Series s(ctx, prec);
    s.ord_ = ord;
    for (std::size_t i = 0; i < codes.size() && ord + static_cast<int>(i) < prec; ++i) s.c_.push_back(codes[i]);
    s.normalize();
    return s;
}

void Series::normalize()
{
    std::size_t lead = 0;
    while (lead < c_.size() && c_[lead] == 0) ++lead;
    if (lead == c_.size()) {
        c_.clear();
        ord_ = prec_;
        return;
    }
    if (lead > 0) {
        c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
        ord_ += static_cast<int>(lead);
    }
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
    // drop anything at or beyond the precision
    if (top() > prec_) c_.resize(static_cast<std::size_t>(std::max(0, prec_ - ord_)));
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
    if (c_.empty()) ord_ = prec_;
}

void Series::check(const Series& o) const
{
    if (ctx_ != o.ctx_ || ctx_ == nullptr) throw FieldError("series context mismatch");
}

std::optional<int> Series::valuation() const
{
    if (c_.empty()) return std::nullopt;
    return ord_;
}

std::optional<int> Series::certified_valuation() const
{
    if (c_.empty()) {
        if (exact()) return std::nullopt;
        throw InsufficientPrecision("valuation of a series that vanishes modulo u^" + std::to_string(prec_));
    }
    return ord_;
}

std::uint16_t Series::code_at(int e) const
{
    if (e >= prec_) throw InsufficientPrecision("coefficient of u^" + std::to_string(e) + " beyond precision");
    if (e < ord_ || e >= top()) return 0;
    return c_[static_cast<std::size_t>(e - ord_)];
}

Series Series::combine(const Series& o, bool sub) const
{
    check(o);
    int prec = std::min(prec_, o.prec_);
    Series r(*ctx_, prec);
    if (c_.empty() && o.c_.empty()) return r;
    int lo = std::min(c_.empty() ? o.ord_ : ord_, o.c_.empty() ? ord_ : o.ord_);
    int hi = std::min(prec, std::max(c_.empty() ? lo : top(), o.c_.empty() ? lo : o.top()));
    if (hi <= lo) return r;
    r.ord_ = lo;
    r.c_.assign(static_cast<std::size_t>(hi - lo), 0);
    for (int e = std::max(ord_, lo); e < std::min(top(), hi); ++e) r.c_[e - lo] = c_[e - ord_];
    for (int e = std::max(o.ord_, lo); e < std::min(o.top(), hi); ++e)
        r.c_[e - lo] = sub ? ctx_->sub(r.c_[e - lo], o.c_[e - o.ord_]) : ctx_->add(r.c_[e - lo], o.c_[e - o.ord_]);
    r.normalize();
    return r;
}

Series Series::operator+(const Series& o) const
{
    return combine(o, false);
}

Series Series::operator-() const
{
    Series r = *this;
    for (auto& c : r.c_) c = ctx_->neg(c);
    return r;
}

Series Series::operator-(const Series& o) const
{
    return combine(o, true);
}

Series Series::operator*(const Series& o) const
{
    check(o);
    long long va = c_.empty() ? prec_ : ord_;
    long long vb = o.c_.empty() ? o.prec_ : o.ord_;
    long long pa = prec_ >= kExact ? static_cast<long long>(kExact) * 4 : prec_;
    long long pb = o.prec_ >= kExact ? static_cast<long long>(kExact) * 4 : o.prec_;
    int prec = clamp_prec(std::min(pa + vb, pb + va));
    Series r(*ctx_, prec);
    if (c_.empty() || o.c_.empty()) return r;
    int lo = ord_ + o.ord_;
    int hi = std::min(prec, top() + o.top() - 1);
    if (hi <= lo) return r;
    r.ord_ = lo;
    r.c_.assign(static_cast<std::size_t>(hi - lo), 0);
    const int n = static_cast<int>(c_.size());
    const int m = static_cast<int>(o.c_.size());
    for (int i = 0; i < n; ++i) {
        std::uint16_t a = c_[i];
        if (a == 0) continue;
        int jmax = std::min(m, hi - lo - i);
        for (int j = 0; j < jmax; ++j) {
            std::uint16_t b = o.c_[j];
            if (b == 0) continue;
            r.c_[i + j] = ctx_->add(r.c_[i + j], ctx_->mul(a, b));
        }
    }
    r.normalize();
    return r;
}

Series Series::scale(const FieldElem& c) const
{
    if (c.ctx_ptr() != ctx_) throw FieldError("series context mismatch");
    return scale_code(c.code());
}

Series Series::scale_code(std::uint16_t c) const
{
    Series r = *this;
    if (c == 0) {
        // 0 times a series known mod u^prec is known mod u^prec only
        r.c_.clear();
        r.ord_ = r.prec_;
        return r;
    }
    for (auto& x : r.c_) x = ctx_->mul(x, c);
    return r;
}

Series Series::shift(int k) const
{
    Series r = *this;
    r.prec_ = clamp_prec(static_cast<long long>(prec_) + (exact() ? 0 : k));
    if (r.c_.empty()) r.ord_ = r.prec_;
    else r.ord_ = ord_ + k;
    return r;
}

Series Series::truncate(int p) const
{
    if (p >= prec_) return *this;
    Series r = *this;
    r.prec_ = p;
    r.normalize();
    return r;
}

Series Series::reduce_mod(int e) const
{
    if (prec_ < e) throw InsufficientPrecision("need series modulo u^" + std::to_string(e));
    Series r = truncate(e);
    r.prec_ = kExact;
    if (r.c_.empty()) r.ord_ = kExact;
    return r;
}

Series Series::phi() const
{
    const int p = ctx_->p();
    Series r(*ctx_, clamp_prec(exact() ? kExact : static_cast<long long>(prec_) * p));
    if (c_.empty()) return r;
    r.ord_ = ord_ * p;
    r.c_.assign((c_.size() - 1) * p + 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i * p] = c_[i];
    return r;
}

Series Series::inv(int target) const
{
    if (c_.empty()) throw InsufficientPrecision("inverting a series that vanishes to precision");
    const int v = ord_;
    if (c_.size() == 1 && exact()) {
        return monomial(FieldElem(*ctx_, ctx_->inv(c_[0])), -v, target >= kExact ? kExact : target);
    }
    long long natural = exact() ? static_cast<long long>(kExact) : static_cast<long long>(prec_) - 2LL * v;
    int out = clamp_prec(std::min<long long>(natural, target));
    if (out >= kExact) throw InsufficientPrecision("inverse of a non-monomial series needs a target precision");
    Series r(*ctx_, out);
    int n = out + v;  // number of coefficients from u^-v
    if (n <= 0) return r;
    std::uint16_t a0inv = ctx_->inv(c_[0]);
    std::vector<std::uint16_t> b(static_cast<std::size_t>(n), 0);
    b[0] = a0inv;
    const int na = static_cast<int>(c_.size());
    for (int i = 1; i < n; ++i) {
        std::uint16_t acc = 0;
        for (int j = 1; j <= std::min(i, na - 1); ++j) acc = ctx_->add(acc, ctx_->mul(c_[j], b[i - j]));
        b[i] = ctx_->neg(ctx_->mul(a0inv, acc));
    }
    r.ord_ = -v;
    r.c_.assign(b.begin(), b.end());
    r.normalize();
    return r;
}

Series Series::map_frobenius() const
{
    Series r = *this;
    for (auto& c : r.c_) c = ctx_->frob(c);
    return r;
}

bool Series::operator==(const Series& o) const
{
    return ctx_ == o.ctx_ && prec_ == o.prec_ && ord_ == o.ord_ && c_ == o.c_;
}

int Series::compare(const Series& o) const
{
    // zero first, then by valuation descending (closer to zero), then coefficients
    if (c_.empty() != o.c_.empty()) return c_.empty() ? -1 : 1;
    if (!c_.empty() && ord_ != o.ord_) return ord_ > o.ord_ ? -1 : 1;
    std::size_t n = std::max(c_.size(), o.c_.size());
    for (std::size_t i = 0; i < n; ++i) {
        std::uint16_t a = i < c_.size() ? c_[i] : 0;
        std::uint16_t b = i < o.c_.size() ? o.c_[i] : 0;
        if (a != b) return a < b ? -1 : 1;
    }
    if (prec_ != o.prec_) return prec_ < o.prec_ ? -1 : 1;
    return 0;
}

std::string Series::to_string() const
{
    std::string out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        int e = ord_ + static_cast<int>(i);
        std::string c = ctx_->format(c_[i]);
        if (c.find('+') != std::string::npos) c = "(" + c + ")";
        std::string term;
        if (e == 0) {
            term = c;
        } else {
            if (c != "1") term = c + "*";
            term += "u";
            if (e != 1) term += "^" + std::to_string(e);
        }
        if (!out.empty()) out += " + ";
        out += term;
    }
    if (!exact()) {
        if (!out.empty()) out += " + ";
        out += "O(u^" + std::to_string(prec_) + ")";
    }
    return out.empty() ? "0" : out;
}

namespace {

int parse_int(const std::string& s, const std::string& whole)
{
    std::string t = s;
    if (!t.empty() && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
    if (t.empty()) throw FieldError("bad exponent in series literal '" + whole + "'");
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(t, &pos);
    } catch (const std::exception&) {
        throw FieldError("bad exponent in series literal '" + whole + "'");
    }
    if (pos != t.size()) throw FieldError("bad exponent in series literal '" + whole + "'");
    return v;
}

}  // namespace

Series Series::parse(const FieldCtx& ctx, const std::string& text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw FieldError("empty series literal");

    // split into signed terms at top-level + and - (not directly after '^')
    std::vector<std::pair<int, std::string>> terms;
    int depth = 0;
    int sign = 1;
    std::string cur;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        bool sep = depth == 0 && (c == '+' || c == '-') && !(i > 0 && s[i - 1] == '^');
        if (sep) {
            if (!cur.empty()) terms.emplace_back(sign, cur);
            cur.clear();
            sign = c == '-' ? -1 : 1;
            // collapse runs like "+-"
            while (i + 1 < s.size() && (s[i + 1] == '+' || s[i + 1] == '-')) {
                if (s[++i] == '-') sign = -sign;
            }
            continue;
        }
        cur += c;
    }
    if (depth != 0) throw FieldError("unbalanced parentheses in series literal '" + text + "'");
    if (!cur.empty()) terms.emplace_back(sign, cur);

    int prec = kExact;
    std::vector<std::pair<int, std::uint16_t>> mono;
    for (auto& [sg, t] : terms) {
        if (t.size() > 2 && t[0] == 'O' && t[1] == '(') {
            if (t.back() != ')' || t.find('u') == std::string::npos)
                throw FieldError("bad O-term in series literal '" + text + "'");
            std::string inner = t.substr(2, t.size() - 3);
            std::size_t up = inner.find('u');
            int e = 1;
            if (up + 1 < inner.size()) {
                if (inner[up + 1] != '^') throw FieldError("bad O-term in series literal '" + text + "'");
                e = parse_int(inner.substr(up + 2), text);
            }
            prec = std::min(prec, e);
            continue;
        }
        std::size_t up = t.find('u');
        std::string coef = up == std::string::npos ? t : t.substr(0, up);
        int e = 0;
        if (up != std::string::npos) {
            if (!coef.empty() && coef.back() == '*') coef.pop_back();
            std::string rest = t.substr(up + 1);
            if (rest.empty()) {
                e = 1;
            } else {
                if (rest[0] != '^') throw FieldError("bad term '" + t + "' in series literal");
                e = parse_int(rest.substr(1), text);
            }
        }
        std::uint16_t c = coef.empty() ? 1 : ctx.parse(coef);
        if (sg < 0) c = ctx.neg(c);
        mono.emplace_back(e, c);
    }
    Series r(ctx, prec);
    for (auto& [e, c] : mono) r = r + Series::monomial(FieldElem(ctx, c), e, prec);
    return r;
}

Series s_arith(const Series& a, const Series& b, char op)
{
    switch (op) {
    case '+': return a + b;
    case '-': return a - b;
    case '*': return a * b;
    default: throw FieldError(std::string("unknown series operation ") + op);
    }
}

std::optional<int> s_valuation(const Series& a) { return a.valuation(); }
Series s_inv(const Series& a, int target) { return a.inv(target); }
Series s_phi(const Series& a) { return a.phi(); }

}  // namespace kisinlab
