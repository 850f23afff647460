#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kisinlab/latmod.hpp"

namespace kisinlab {

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr long long kDefaultBudget = 1000000;

/**
 * All lattices with the given y at tree distance <= radius from center,
 * found by breadth-first search over index-one sublattices.
 */
std::vector<Lattice> ball_enumerate(const Lattice& center, int radius, std::optional<int> y_fixed,
                                    long long budget = kDefaultBudget);

/// 1 + sum_{j=1..R} (q+1) q^(2j-1), the size of a fixed-y ball of radius 2R.
long long ball_count_formula(int q, int radius);

/// Coefficient vector of w modulo u^N, as codes.
struct BruteWitness {
    std::vector<std::uint16_t> w1, w2;
};

/**
 * Solves A phi(w) = c u^j w modulo u^N by dense elimination over
 * every c in F^x and returns a solution with w mod u != 0.
 * A is the relative matrix of the lattice of interest.
 */
std::optional<std::pair<FieldElem, BruteWitness>> brute_stable_line(const Mat2& A, int j, int N);

/**
 * Split test for [[a u^s, gamma], [0, b u^t]]: looks for a stable line
 * with a nonzero second coordinate, sweeping j = t + (p-1) k.
 */
bool brute_split_verdict(const Mat2& A);

struct ReportDiff {
    std::vector<Lattice> only_predicted;
    std::vector<Lattice> only_observed;
    std::vector<std::string> count_mismatches;
    bool empty() const { return only_predicted.empty() && only_observed.empty() && count_mismatches.empty(); }
    std::optional<Lattice> first_divergent() const;
};

ReportDiff diff_reports(std::vector<Lattice> predicted, std::vector<Lattice> observed);
void add_count_check(ReportDiff& d, const std::string& what, long long predicted, long long observed);

}  // namespace kisinlab
