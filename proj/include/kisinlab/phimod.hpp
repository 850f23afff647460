#pragma once

#include <array>
#include <optional>

#include "kisinlab/latmod.hpp"
#include "kisinlab/normal_form.hpp"

namespace kisinlab {

class UnrecognizedShape : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// e, r1 >= r2, d' = r1 + r2.
struct VParams {
    int e = 1;
    int r1 = 0;
    int r2 = 0;
    int dprime() const { return r1 + r2; }
    void validate() const;
};

/// Ambient matrix C^-1 A phi(C).
PhiModule transform(const PhiModule& phi, const Mat2& C);

struct GammaResult {
    NormalForm nf;
    /// Basis change [[1, q], [0, 1]] applied to the input.
    Mat2 C;
    /// Number of cancellation steps taken.
    int steps = 0;
};

/**
 * Cancels leading terms of the upper right entry of a triangular module.
 * Requires A = [[a u^s, gamma], [0, b u^t]] with 0 <= s,t < p-1.
 */
GammaResult maximize_gamma(const PhiModule& phi);

/// Vector w in F[[u]]^2, known modulo u^prec.
using SeriesVec = std::array<Series, 2>;

/**
 * Decides whether some w in F[[u]]^2 with w mod u != 0 satisfies
 * A phi(w) = c u^j w, and returns one known modulo u^prec.
 */
std::optional<SeriesVec> stable_line_solver(const PhiModule& phi, const FieldElem& c, int j, int prec = 16);

/// Shape must be [[0, a u^s], [1, 0]] or upper triangular.
NormalForm classify(const PhiModule& phi);

}  // namespace kisinlab
