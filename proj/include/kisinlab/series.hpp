#pragma once

#include <boost/container/small_vector.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kisinlab/field.hpp"

namespace kisinlab {

class InsufficientPrecision : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precision value meaning "known exactly" (a Laurent polynomial).
constexpr int kExact = 1 << 28;

int clamp_prec(long long p);

/**
 * @brief Laurent series over F_{p^k} known modulo u^prec.
 *
 * Coefficients are stored densely for exponents ord() .. top()-1. The
 * first and last stored coefficients are nonzero; a series with no stored
 * coefficient is zero to precision.
 */
class Series {
public:
    using Coeffs = boost::container::small_vector<std::uint16_t, 12>;

    Series() = default;
    explicit Series(const FieldCtx& ctx, int prec = kExact) : ctx_(&ctx), ord_(prec), prec_(prec) {}

    static Series zero(const FieldCtx& ctx, int prec = kExact) { return Series(ctx, prec); }
    static Series constant(const FieldElem& c, int prec = kExact) { return monomial(c, 0, prec); }
    static Series monomial(const FieldElem& c, int e, int prec = kExact);
    static Series u_pow(const FieldCtx& ctx, int e) { return monomial(FieldElem::one(ctx), e); }
    /// codes[i] is the coefficient of u^(ord+i).
    static Series from_codes(const FieldCtx& ctx, int ord, const std::vector<std::uint16_t>& codes,
                             int prec = kExact);
    /// Grammar: terms joined by + or -, each term c, c*u^n, u^n, u, or O(u^n).
    static Series parse(const FieldCtx& ctx, const std::string& text);

    const FieldCtx& ctx() const { return *ctx_; }
    const FieldCtx* ctx_ptr() const { return ctx_; }
    int prec() const { return prec_; }
    bool exact() const { return prec_ >= kExact; }
    bool is_zero() const { return c_.empty(); }
    /// Lowest stored exponent; equals prec() when zero to precision.
    int ord() const { return ord_; }
    /// One past the highest stored exponent.
    int top() const { return ord_ + static_cast<int>(c_.size()); }
    const Coeffs& codes() const { return c_; }

    /// Valuation, or nullopt for the +infinity marker (zero to precision).
    std::optional<int> valuation() const;
    /// Like valuation(), but a zero-to-precision series that is not exact throws.
    std::optional<int> certified_valuation() const;

    std::uint16_t code_at(int e) const;
    FieldElem coeff(int e) const { return {*ctx_, code_at(e)}; }

    Series operator+(const Series& o) const;
    Series operator-(const Series& o) const;
    Series operator*(const Series& o) const;
    Series operator-() const;
    Series scale(const FieldElem& c) const;
    Series scale_code(std::uint16_t c) const;
    Series shift(int k) const;
    /// Forget everything at exponent >= p.
    Series truncate(int p) const;
    /// Exact representative of this series modulo u^e; needs prec() >= e.
    Series reduce_mod(int e) const;
    /// u -> u^p, coefficients fixed.
    Series phi() const;
    /// Inverse known modulo u^min(natural, target).
    Series inv(int target = kExact) const;
    /// Frobenius applied to every coefficient (not part of phi).
    Series map_frobenius() const;

    bool operator==(const Series& o) const;
    bool operator!=(const Series& o) const { return !(*this == o); }
    /// Total order used for deterministic output.
    int compare(const Series& o) const;

    std::string to_string() const;

private:
    void check(const Series& o) const;
    Series combine(const Series& o, bool sub) const;
    void normalize();

    const FieldCtx* ctx_ = nullptr;
    int ord_ = kExact;
    int prec_ = kExact;
    Coeffs c_;
};

Series s_arith(const Series& a, const Series& b, char op);
std::optional<int> s_valuation(const Series& a);
Series s_inv(const Series& a, int target = kExact);
Series s_phi(const Series& a);

}  // namespace kisinlab
