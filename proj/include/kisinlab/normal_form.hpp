#pragma once

#include <string>

#include "kisinlab/latmod.hpp"

namespace kisinlab {

class UnsupportedCase : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Case { Simple, SplitIso, SplitNonIso, NonSplit };

const char* case_name(Case c);

/**
 * @brief Normal form of a rank 2 phi-module.
 *
 * Simple: [[0, a u^s], [1, 0]]. Triangular cases: [[a u^s, gamma], [0, b u^t]]
 * with gamma = 0 for the split ones.
 */
struct NormalForm {
    Case kind = Case::Simple;
    FieldElem a, b;
    int s = 0;
    int t = 0;
    Series gamma;

    static NormalForm simple(const FieldElem& a, int s);
    /// SplitIso when (a,s) == (b,t), else SplitNonIso.
    static NormalForm split(const FieldElem& a, int s, const FieldElem& b, int t);
    static NormalForm nonsplit(const FieldElem& a, int s, const FieldElem& b, int t, const Series& gamma);
    /// "simple:a=1,s=2", "split:a=1,s=0,b=1,t=1", "nonsplit:a=1,s=0,b=1,t=1,gamma=u".
    static NormalForm parse(const FieldCtx& ctx, const std::string& text);

    const FieldCtx& ctx() const { return a.ctx(); }
    int p() const { return a.ctx().p(); }
    bool reducible() const { return kind != Case::Simple; }
    /// v_u(gamma) for NonSplit.
    int k() const;
    /// Throws UnsupportedCase when the normalization constraints fail.
    void validate() const;
    Mat2 matrix() const;
    PhiModule module() const;
    /// Same form over another context containing the coefficients' prime field.
    NormalForm over(const FieldCtx& ctx) const;
    std::string to_string() const;
};

}  // namespace kisinlab
