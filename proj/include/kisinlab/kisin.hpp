#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kisinlab/building.hpp"
#include "kisinlab/oracle.hpp"
#include "kisinlab/phimod.hpp"

namespace kisinlab {

/// Common y coordinate of all v-admissible lattices, or nullopt if the congruence fails.
std::optional<int> m_of_v(const NormalForm& nf, const VParams& v);

/// Necessary condition T - R <= (k-s)/p <= (r1-r2-s-t+2k)/(p+1) for a non-empty non-split variety.
bool nonsplit_may_be_nonempty(const NormalForm& nf, const VParams& v);

/// d1(M, <Phi M>) <= r1 - r2 and d2 = 2e - d', computed from matrices.
bool is_v_admissible(const NormalForm& nf, const VParams& v, const Lattice& L);

/**
 * Calls f on every lattice with the given y at tree distance <= radius
 * from center. Returns the number of lattices visited.
 */
long long for_each_lattice_in_ball(const BuildingPoint& center, const Rat& radius, int y,
                                   const std::function<void(const Lattice&)>& f, long long budget = kDefaultBudget);

std::vector<Lattice> lattices_in_ball(const BuildingPoint& center, const Rat& radius, int y,
                                      long long budget = kDefaultBudget);

struct AdmissibleSet {
    VParams params;
    NormalForm nf;
    std::optional<int> m_v;
    Rat radius;
    std::vector<Lattice> points;
};

/// Search radius around the fixed point used by enumerate_admissible.
Rat search_radius(const NormalForm& nf, int spread);

AdmissibleSet enumerate_admissible(const NormalForm& nf, const VParams& v, long long budget = kDefaultBudget);

struct StratumReport {
    ElemDiv divisors;
    bool predicted_nonempty = true;
    std::optional<int> predicted_dim;
    std::optional<long long> predicted_count;
    long long actual_count = 0;
    std::vector<Lattice> members;
};

/// Simple case: G(a,b) is nonempty iff the congruences hold.
bool stratum_predicted_nonempty(int p, int s, const ElemDiv& d);

std::vector<StratumReport> stratify(const AdmissibleSet& S);

struct SRank {
    int rank = 0;
    std::vector<FieldElem> constants;
    std::string label;  // "X0", "X_Ma", "X_Mb", "X_Ma=X_Mb"
};

SRank s_rank(const NormalForm& nf, const VParams& v, const Lattice& L);

enum class Shape { Empty, Point, P1, Other };
const char* shape_name(Shape s);

struct ComponentPrediction {
    std::string label;
    Shape shape = Shape::Empty;
    long long count = 0;
    std::vector<Lattice> where;
};

std::vector<ComponentPrediction> predict_components(const NormalForm& nf, const VParams& v);

struct ComponentReport {
    std::map<std::string, std::vector<Lattice>> members;
    std::vector<ComponentPrediction> predictions;
    bool agreement = true;
    std::vector<std::string> mismatches;
};

ComponentReport components(const AdmissibleSet& S);

struct SchubertBall {
    BuildingPoint center;
    int radius = 0;
};

struct X0Descriptor {
    std::string name;
    std::vector<SchubertBall> balls;
    bool component = true;
};

bool in_descriptor(const X0Descriptor& d, const Lattice& L);
std::vector<Lattice> descriptor_points(const X0Descriptor& d, int y, long long budget = kDefaultBudget);

/// Balls whose union is X0; Z is marked non-component in the exceptional cases.
std::vector<X0Descriptor> predict_x0_decomposition(const NormalForm& nf, const VParams& v);

/// Union of the balls without the predicted ordinary lattices.
std::vector<Lattice> predicted_x0_points(const NormalForm& nf, const VParams& v, long long budget = kDefaultBudget);

enum class P1Mode { Inner, Outer1, Outer2 };

/// The q+1 lattices of a closed P^1 family.
std::vector<Lattice> p1_family(const SeriesVec& b1, const SeriesVec& b2, P1Mode mode, int n = 1);

/// Chains of P^1 families inside the set link every member to the first one.
bool p1_connected(const std::vector<Lattice>& set);

/// True iff r1 = e or r2 = 0.
bool check_prop_2_10(const VParams& v);
/// 0 <= b <= a <= e, a + b = 2e - d', a - b <= max(d', 2e - d').
bool is_relaxed_admissible(const NormalForm& nf, const VParams& v, const Lattice& L);

struct VarietyPrediction {
    bool congruence_ok = true;
    std::optional<bool> empty;
    std::optional<bool> singleton;
    std::optional<int> dimension;
};

VarietyPrediction predict_variety(const NormalForm& nf, const VParams& v);

}  // namespace kisinlab
