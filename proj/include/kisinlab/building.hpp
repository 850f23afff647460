#pragma once

#include <boost/rational.hpp>

#include <optional>
#include <string>

#include "kisinlab/latmod.hpp"
#include "kisinlab/normal_form.hpp"

namespace kisinlab {

using Rat = boost::rational<long long>;

long long floor_rat(const Rat& r);
long long ceil_rat(const Rat& r);
bool is_integer(const Rat& r);
std::string rat_string(const Rat& r);

class NotALattice : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * @brief Point [x,y]_q of the building.
 *
 * q is kept exact with every exponent below x; higher terms do not change
 * the point.
 */
struct BuildingPoint {
    Rat x, y;
    Series q;

    static BuildingPoint make(const Rat& x, const Rat& y, const Series& q);
    static BuildingPoint on_apartment0(const FieldCtx& ctx, const Rat& x, const Rat& y)
    {
        return make(x, y, Series::zero(ctx));
    }

    bool is_lattice() const;
    bool operator==(const BuildingPoint& o) const { return x == o.x && y == o.y && q == o.q; }
    std::string to_string() const;
};

BuildingPoint lattice_to_point(const Lattice& L);
Lattice point_to_lattice(const BuildingPoint& P);

/// v_u(q - q'), nullopt when the branch locators agree.
std::optional<int> divergence(const BuildingPoint& P, const BuildingPoint& Q);
Rat tree_d1(const BuildingPoint& P, const BuildingPoint& Q);
Rat tree_d2(const BuildingPoint& P, const BuildingPoint& Q);

/// Image of a point under Phi for a normal form.
BuildingPoint phi_point(const NormalForm& nf, const BuildingPoint& P);

/// P_irred in the simple case, P_red otherwise.
BuildingPoint fixed_point(const NormalForm& nf);

/// Nearest point of the standard apartment at the same height.
BuildingPoint project_to_apartment0(const BuildingPoint& P);
/// Nearest point of the union of the apartments A_z, z constant.
BuildingPoint project_to_constant_tree(const BuildingPoint& P);

/// d1 and d2 of (Q, Phi(Q)) from the closed-form distance identities.
std::pair<Rat, Rat> predicted_phi_distances(const NormalForm& nf, const BuildingPoint& Q);

}  // namespace kisinlab
