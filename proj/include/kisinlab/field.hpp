#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kisinlab {

class FieldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * @brief Defining data of F_{p^k} together with lookup tables.
 *
 * Elements are encoded as integers code = sum c_i p^i where c_i is the
 * coefficient of g^i. Contexts are interned: get() returns the same
 * object for the same (p, modulus), so pointer equality is context equality.
 */
class FieldCtx {
public:
    static constexpr int kMaxP = 13;
    static constexpr int kMaxK = 4;

    /// Smallest monic irreducible modulus of degree k (lexicographic on codes).
    static const FieldCtx& get(int p, int k);
    /// User supplied modulus, low degree first, monic of degree k.
    static const FieldCtx& get(int p, const std::vector<int>& modulus);

    int p() const { return p_; }
    int k() const { return k_; }
    int q() const { return q_; }
    const std::vector<int>& modulus() const { return modulus_; }

    std::uint16_t add(std::uint16_t a, std::uint16_t b) const
    {
        if (k_ == 1) {
            int s = a + b;
            return static_cast<std::uint16_t>(s >= p_ ? s - p_ : s);
        }
        if (!add_.empty()) return add_[static_cast<std::size_t>(a) * q_ + b];
        return add_digits(a, b);
    }
    std::uint16_t sub(std::uint16_t a, std::uint16_t b) const { return add(a, neg_[b]); }
    std::uint16_t neg(std::uint16_t a) const { return neg_[a]; }
    std::uint16_t mul(std::uint16_t a, std::uint16_t b) const
    {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    std::uint16_t inv(std::uint16_t a) const;
    std::uint16_t frob(std::uint16_t a) const { return frob_[a]; }
    std::uint16_t pow(std::uint16_t a, long long e) const;

    std::vector<int> digits(std::uint16_t a) const;
    std::uint16_t from_digits(const std::vector<int>& d) const;
    /// Image of the integer n under Z -> F_p -> F_{p^k}.
    std::uint16_t from_int(long long n) const;

    std::string format(std::uint16_t a) const;
    /// Accepts "2", "g", "1+2g", "2g^2+g+1", "-1".
    std::uint16_t parse(const std::string& s) const;

    std::string name() const;

    FieldCtx(const FieldCtx&) = delete;
    FieldCtx& operator=(const FieldCtx&) = delete;

private:
    FieldCtx(int p, std::vector<int> modulus);
    friend struct FieldRegistry;

    int p_, k_, q_;
    std::vector<int> modulus_;
    std::vector<std::uint16_t> exp_;   // 2(q-1) entries
    std::vector<int> log_;
    std::uint16_t add_digits(std::uint16_t a, std::uint16_t b) const;

    std::vector<std::uint16_t> neg_, frob_;
    std::vector<std::uint16_t> add_;   // q*q table when small, else empty
    std::vector<std::uint16_t> pw_;    // powers of p
};

bool is_irreducible_mod_p(int p, const std::vector<int>& poly);

class FieldElem {
public:
    FieldElem() = default;
    FieldElem(const FieldCtx& ctx, std::uint16_t code) : ctx_(&ctx), code_(code) {}
    static FieldElem zero(const FieldCtx& ctx) { return {ctx, 0}; }
    static FieldElem one(const FieldCtx& ctx) { return {ctx, 1}; }
    static FieldElem parse(const FieldCtx& ctx, const std::string& s) { return {ctx, ctx.parse(s)}; }

    const FieldCtx& ctx() const { return *ctx_; }
    const FieldCtx* ctx_ptr() const { return ctx_; }
    std::uint16_t code() const { return code_; }
    bool is_zero() const { return code_ == 0; }
    std::vector<int> coeffs() const { return ctx_->digits(code_); }

    FieldElem operator+(const FieldElem& o) const;
    FieldElem operator-(const FieldElem& o) const;
    FieldElem operator*(const FieldElem& o) const;
    FieldElem operator/(const FieldElem& o) const { return *this * o.inv(); }
    FieldElem operator-() const { return {*ctx_, ctx_->neg(code_)}; }
    FieldElem inv() const;
    FieldElem frobenius() const { return {*ctx_, ctx_->frob(code_)}; }

    bool operator==(const FieldElem& o) const { return ctx_ == o.ctx_ && code_ == o.code_; }
    bool operator!=(const FieldElem& o) const { return !(*this == o); }
    bool operator<(const FieldElem& o) const { return code_ < o.code_; }

    std::string to_string() const { return ctx_->format(code_); }

private:
    void check(const FieldElem& o) const;
    const FieldCtx* ctx_ = nullptr;
    std::uint16_t code_ = 0;
};

FieldElem ff_arith(const FieldElem& a, const FieldElem& b, char op);
FieldElem ff_inv(const FieldElem& a);
FieldElem ff_frobenius(const FieldElem& a);
std::vector<FieldElem> ff_enumerate(const FieldCtx& ctx);

}  // namespace kisinlab
