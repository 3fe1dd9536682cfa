#ifndef MSFORGE_FAMILIES_HPP
#define MSFORGE_FAMILIES_HPP

#include "msforge/curve.hpp"
#include "msforge/geometry.hpp"
#include "msforge/integrator.hpp"

#include <string>
#include <vector>

namespace msforge::families {

using curve::Complex;
using curve::SuperellipticCurve;
using curve::XComplex;
using integrator::Cycle;
using integrator::WeierstrassData;

// Everything the verification / meshing pipeline needs about one surface:
// the curve, the Weierstrass data with the numeric constants baked in, a
// generator-cycle registry, the symmetry generators, and the basepoint and
// branch conventions.
struct FamilyBundle {
    std::string name;            // "genus" | "even" | "catenoid" | "weber"
    SuperellipticCurve curve;
    WeierstrassData data;
    std::vector<XComplex> puncture_z;
    std::vector<Cycle> generators;
    std::vector<geometry::SymmetryOp> symmetries;
    Complex basepoint_z{};
    Complex basepoint_w{};
    int expected_group_order = 0;
    int genus = 0;
};

// w^(gamma+1) = z (z^2-1)^gamma, g = c w, eta = i dz/(z^2 w).
FamilyBundle make_genus_family(int gamma, double c);

// w^(k+1) = z^2 ((z-1)/(z-a))^k (k even), g = c w with c = a^((k-2)/(2k+2)),
// eta = dz/(z w).
FamilyBundle make_even_family(int k, double a);

// Trivial one-sheet cover, g = z, eta = dz/z^2: the catenoid test oracle.
FamilyBundle make_catenoid();

// w^2 = z * prod(z-a_odd) / prod(z-a_even), g = c w/(z+1),
// eta = (z+1)^2 dz/(z w); a = (a_2, ..., a_{2 gamma}), a_1 = 1 implied.
FamilyBundle make_weber_family(int gamma, double c, const std::vector<double>& a);

} // namespace msforge::families

#endif
