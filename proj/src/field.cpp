#include "kisinlab/field.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <mutex>

namespace kisinlab {

namespace {

bool is_prime(int p)
{
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

int mod(long long a, int p)
{
    long long r = a % p;
    return static_cast<int>(r < 0 ? r + p : r);
}

// remainder of a modulo monic b over F_p, coefficients low degree first
std::vector<int> poly_rem(std::vector<int> a, const std::vector<int>& b, int p)
{
    int db = static_cast<int>(b.size()) - 1;
    for (int i = static_cast<int>(a.size()) - 1; i >= db; --i) {
        int c = a[i];
        if (c == 0) continue;
        for (int j = 0; j <= db; ++j)
            a[i - db + j] = mod(a[i - db + j] - static_cast<long long>(c) * b[j], p);
    }
    a.resize(db > 0 ? db : 0);
    return a;
}

}  // namespace

bool is_irreducible_mod_p(int p, const std::vector<int>& poly)
{
    int k = static_cast<int>(poly.size()) - 1;
    if (k < 1 || poly.back() != 1) return false;
    if (k == 1) return true;
    // trial division by every monic polynomial of degree 1..k/2
    for (int d = 1; d <= k / 2; ++d) {
        long long count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (long long c = 0; c < count; ++c) {
            std::vector<int> f(d + 1, 0);
            long long t = c;
            for (int i = 0; i < d; ++i) {
                f[i] = static_cast<int>(t % p);
                t /= p;
            }
            f[d] = 1;
            auto r = poly_rem(poly, f, p);
            bool zero = true;
            for (int x : r)
                if (x != 0) zero = false;
            if (zero) return false;
        }
    }
    return true;
}

struct FieldRegistry {
    std::mutex mu;
    std::map<std::pair<int, std::vector<int>>, std::unique_ptr<FieldCtx>> by_modulus;
    std::map<std::pair<int, int>, const FieldCtx*> by_degree;

    static FieldRegistry& instance()
    {
        static FieldRegistry r;
        return r;
    }

    const FieldCtx& intern(int p, const std::vector<int>& modulus)
    {
        auto key = std::make_pair(p, modulus);
        auto it = by_modulus.find(key);
        if (it != by_modulus.end()) return *it->second;
        std::unique_ptr<FieldCtx> ctx(new FieldCtx(p, modulus));
        const FieldCtx& ref = *ctx;
        by_modulus.emplace(key, std::move(ctx));
        return ref;
    }
};

static void check_range(int p, int k)
{
    if (!is_prime(p) || p > FieldCtx::kMaxP)
        throw FieldError("unsupported characteristic " + std::to_string(p));
    if (k < 1 || k > FieldCtx::kMaxK)
        throw FieldError("unsupported extension degree " + std::to_string(k));
}

const FieldCtx& FieldCtx::get(int p, int k)
{
    check_range(p, k);
    auto& reg = FieldRegistry::instance();
    std::lock_guard<std::mutex> lock(reg.mu);
    auto it = reg.by_degree.find({p, k});
    if (it != reg.by_degree.end()) return *it->second;
    long long count = 1;
    for (int i = 0; i < k; ++i) count *= p;
    for (long long c = 0; c < count; ++c) {
        std::vector<int> f(k + 1, 0);
        long long t = c;
        for (int i = 0; i < k; ++i) {
            f[i] = static_cast<int>(t % p);
            t /= p;
        }
        f[k] = 1;
        if (k > 1 && f[0] == 0) continue;
        if (is_irreducible_mod_p(p, f)) {
            const FieldCtx& ctx = reg.intern(p, f);
            reg.by_degree[{p, k}] = &ctx;
            return ctx;
        }
    }
    throw FieldError("no irreducible polynomial found");
}

const FieldCtx& FieldCtx::get(int p, const std::vector<int>& modulus)
{
    int k = static_cast<int>(modulus.size()) - 1;
    check_range(p, k);
    for (int c : modulus)
        if (c < 0 || c >= p) throw FieldError("modulus coefficient out of range");
    if (!is_irreducible_mod_p(p, modulus)) throw FieldError("modulus is not irreducible");
    auto& reg = FieldRegistry::instance();
    std::lock_guard<std::mutex> lock(reg.mu);
    return reg.intern(p, modulus);
}

FieldCtx::FieldCtx(int p, std::vector<int> modulus)
    : p_(p), k_(static_cast<int>(modulus.size()) - 1), q_(1), modulus_(std::move(modulus))
{
    for (int i = 0; i < k_; ++i) q_ *= p_;
    pw_.resize(k_ + 1);
    pw_[0] = 1;
    for (int i = 1; i <= k_; ++i) pw_[i] = static_cast<std::uint16_t>(pw_[i - 1] * p_);

    neg_.resize(q_);
    for (int a = 0; a < q_; ++a) {
        auto d = digits(static_cast<std::uint16_t>(a));
        for (auto& c : d) c = mod(-c, p_);
        neg_[a] = from_digits(d);
    }
    if (k_ > 1 && q_ <= 729) {
        add_.resize(static_cast<std::size_t>(q_) * q_);
        for (int a = 0; a < q_; ++a)
            for (int b = 0; b < q_; ++b) {
                auto da = digits(static_cast<std::uint16_t>(a));
                auto db = digits(static_cast<std::uint16_t>(b));
                for (int i = 0; i < k_; ++i) da[i] = (da[i] + db[i]) % p_;
                add_[static_cast<std::size_t>(a) * q_ + b] = from_digits(da);
            }
    }

    // multiplication by g on digit vectors, reducing with the modulus
    auto mul_slow = [&](std::uint16_t a, std::uint16_t b) {
        auto da = digits(a), db = digits(b);
        std::vector<int> prod(2 * k_, 0);
        for (int i = 0; i < k_; ++i)
            for (int j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
        auto r = poly_rem(prod, modulus_, p_);
        r.resize(k_, 0);
        return from_digits(r);
    };

    log_.assign(q_, -1);
    exp_.assign(2 * (q_ - 1), 0);
    for (int g = 2; g <= q_; ++g) {
        std::uint16_t gen = static_cast<std::uint16_t>(g == q_ ? 1 : g);
        if (q_ == 2) gen = 1;
        std::vector<int> seen(q_, -1);
        std::uint16_t x = 1;
        int order = 0;
        do {
            seen[x] = order;
            x = mul_slow(x, gen);
            ++order;
        } while (x != 1 && order < q_);
        if (order == q_ - 1) {
            x = 1;
            for (int i = 0; i < q_ - 1; ++i) {
                exp_[i] = x;
                exp_[i + q_ - 1] = x;
                log_[x] = i;
                x = mul_slow(x, gen);
            }
            break;
        }
    }

    frob_.resize(q_);
    for (int a = 0; a < q_; ++a) frob_[a] = pow(static_cast<std::uint16_t>(a), p_);
}

std::uint16_t FieldCtx::add_digits(std::uint16_t a, std::uint16_t b) const
{
    std::uint16_t r = 0;
    for (int i = 0; i < k_; ++i) {
        int s = (a % p_ + b % p_) % p_;
        r = static_cast<std::uint16_t>(r + s * pw_[i]);
        a = static_cast<std::uint16_t>(a / p_);
        b = static_cast<std::uint16_t>(b / p_);
    }
    return r;
}

std::uint16_t FieldCtx::inv(std::uint16_t a) const
{
    if (a == 0) throw FieldError("division by zero");
    int l = log_[a];
    return exp_[l == 0 ? 0 : (q_ - 1) - l];
}

std::uint16_t FieldCtx::pow(std::uint16_t a, long long e) const
{
    if (a == 0) {
        if (e == 0) return 1;
        if (e < 0) throw FieldError("division by zero");
        return 0;
    }
    long long m = q_ - 1;
    long long l = (static_cast<long long>(log_[a]) * (e % m)) % m;
    if (l < 0) l += m;
    return exp_[l];
}

std::vector<int> FieldCtx::digits(std::uint16_t a) const
{
    std::vector<int> d(k_);
    for (int i = 0; i < k_; ++i) {
        d[i] = a % p_;
        a = static_cast<std::uint16_t>(a / p_);
    }
    return d;
}

std::uint16_t FieldCtx::from_digits(const std::vector<int>& d) const
{
    int r = 0;
    for (int i = k_ - 1; i >= 0; --i) r = r * p_ + mod(i < static_cast<int>(d.size()) ? d[i] : 0, p_);
    return static_cast<std::uint16_t>(r);
}

std::uint16_t FieldCtx::from_int(long long n) const
{
    return static_cast<std::uint16_t>(mod(n, p_));
}

std::string FieldCtx::format(std::uint16_t a) const
{
    auto d = digits(a);
    if (k_ == 1) return std::to_string(d[0]);
    std::string out;
    for (int i = 0; i < k_; ++i) {
        if (d[i] == 0) continue;
        if (!out.empty()) out += "+";
        if (i == 0) {
            out += std::to_string(d[i]);
            continue;
        }
        if (d[i] != 1) out += std::to_string(d[i]);
        out += "g";
        if (i > 1) out += "^" + std::to_string(i);
    }
    return out.empty() ? "0" : out;
}

std::uint16_t FieldCtx::parse(const std::string& text) const
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw FieldError("empty field literal");
    if (s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    std::vector<int> acc(k_, 0);
    std::size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-') sign = -sign;
            ++i;
        }
        long long coef = 1;
        bool have_num = false;
        if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            coef = 0;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) coef = coef * 10 + (s[i++] - '0');
            have_num = true;
        }
        if (i < s.size() && s[i] == '*') ++i;
        int deg = 0;
        if (i < s.size() && s[i] == 'g') {
            ++i;
            deg = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
                    throw FieldError("bad exponent in field literal '" + text + "'");
                deg = 0;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) deg = deg * 10 + (s[i++] - '0');
            }
        } else if (!have_num) {
            throw FieldError("bad field literal '" + text + "'");
        }
        if (deg >= k_) {
            // reduce g^deg through the tables
            std::uint16_t g = from_digits({0, 1});
            std::uint16_t term = mul(pow(g, deg), from_int(sign * coef));
            auto d = digits(term);
            for (int j = 0; j < k_; ++j) acc[j] = mod(acc[j] + d[j], p_);
        } else {
            acc[deg] = mod(acc[deg] + sign * coef, p_);
        }
        if (i < s.size() && s[i] != '+' && s[i] != '-') throw FieldError("bad field literal '" + text + "'");
    }
    return from_digits(acc);
}

std::string FieldCtx::name() const
{
    return "F_" + std::to_string(q_);
}

void FieldElem::check(const FieldElem& o) const
{
    if (ctx_ != o.ctx_) throw FieldError("field context mismatch");
}

FieldElem FieldElem::operator+(const FieldElem& o) const
{
    check(o);
    return {*ctx_, ctx_->add(code_, o.code_)};
}

FieldElem FieldElem::operator-(const FieldElem& o) const
{
    check(o);
    return {*ctx_, ctx_->sub(code_, o.code_)};
}

FieldElem FieldElem::operator*(const FieldElem& o) const
{
    check(o);
    return {*ctx_, ctx_->mul(code_, o.code_)};
}

FieldElem FieldElem::inv() const
{
    return {*ctx_, ctx_->inv(code_)};
}

FieldElem ff_arith(const FieldElem& a, const FieldElem& b, char op)
{
    switch (op) {
    case '+': return a + b;
    case '-': return a - b;
    case '*': return a * b;
    default: throw FieldError(std::string("unknown field operation ") + op);
    }
}

FieldElem ff_inv(const FieldElem& a) { return a.inv(); }
FieldElem ff_frobenius(const FieldElem& a) { return a.frobenius(); }

std::vector<FieldElem> ff_enumerate(const FieldCtx& ctx)
{
    std::vector<FieldElem> out;
    out.reserve(ctx.q());
    for (int c = 0; c < ctx.q(); ++c) out.emplace_back(ctx, static_cast<std::uint16_t>(c));
    return out;
}

}  // namespace kisinlab
