#pragma once

#include <optional>
#include <vector>

#include "kisinlab/kisin.hpp"

namespace kisinlab {

class NoAdmissibleLattice : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Direction { Min, Max };

/// u^e M in <Phi M> in M, i.e. 0 <= b <= a <= e.
bool is_flat_admissible(const NormalForm& nf, int e, const Lattice& L);

Lattice lattice_sum(const Lattice& A, const Lattice& B);
Lattice lattice_dual(const Lattice& L);
Lattice lattice_intersection(const Lattice& A, const Lattice& B);

/// Every lattice with 0 <= b <= a <= e, over all y, sorted.
std::vector<Lattice> enumerate_flat_admissible(const NormalForm& nf, int e, long long budget = kDefaultBudget);

/// One inclusion step: merge at equal y, or move past a lattice with smaller (max) or larger (min) y.
Lattice extremal_step(const Lattice& cur, const Lattice& other, Direction dir);

Lattice find_extremal(const NormalForm& nf, int e, Direction dir, long long budget = kDefaultBudget);

struct DivisorPrediction {
    ElemDiv min, max;
    int min_row = 0;
    int max_row = 0;
};

/**
 * Case-table values for the extremes. For the simple case, literal = true
 * uses both tables exactly as printed. Otherwise s2 is read as s2' in
 * every min row and the third max row subtracts p + 1 in its second entry.
 */
DivisorPrediction predict_extremal_divisors(const NormalForm& nf, int e, bool literal = false);

struct ExtremalReport {
    Lattice min, max;
    ElemDiv min_div, max_div;
    bool coincide = false;
    bool descent_ok = true;
    std::optional<DivisorPrediction> predicted;
    bool divisors_agree = true;
};

ExtremalReport extremal_report(const NormalForm& nf, int e, long long budget = kDefaultBudget);

/// min in L in max for every admissible L, and divisors against the tables.
bool verify_extremal(const NormalForm& nf, int e, const ExtremalReport& R, long long budget = kDefaultBudget);

/// Extremes over ext (degree > 1) have Frobenius-fixed r; nf must have prime-field coefficients.
bool descent_check(const NormalForm& nf, int e, const FieldCtx& ext, long long budget = kDefaultBudget);

}  // namespace kisinlab
