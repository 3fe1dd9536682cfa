#ifndef MSFORGE_GEOMETRY_HPP
#define MSFORGE_GEOMETRY_HPP

#include "msforge/curve.hpp"
#include "msforge/integrator.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <string>
#include <vector>

namespace msforge::families { struct FamilyBundle; }

namespace msforge::geometry {

using curve::Complex;
using curve::ExprSum;
using curve::SuperellipticCurve;
using curve::XComplex;
using integrator::PhiTriple;
using integrator::WeierstrassData;

// A symmetry of the surface: a conformal (or anticonformal) automorphism of
// the domain curve of the shape z -> zc*z^zpow, w -> wc*w^wpow (after an
// optional conjugation), realized in the ambient space by an orthogonal
// matrix O and translation v:  f(kappa p) = O f(p) + v.
struct SymmetryOp {
    std::string name;
    bool conjugate = false;
    Complex zc{1.0, 0.0};
    int zpow = 1;
    Complex wc{1.0, 0.0};
    int wpow = 1;
    Eigen::Matrix3d O = Eigen::Matrix3d::Identity();
    Eigen::Vector3d v = Eigen::Vector3d::Zero();

    std::pair<Complex, Complex> apply(Complex z, Complex w) const;
    // d z' / d z along the map (after conjugation, as a function of the
    // conjugated variable); used for the pullback identity.
    Complex dz_map(Complex z) const;
};

// Checks that kappa maps the curve to itself: (w')^N / F(z') reduces to 1
// against w^N = F(z).  Exact exponent bookkeeping on the factored form.
bool is_automorphism(const SymmetryOp& op, const SuperellipticCurve& c,
                     double tol = 1e-9);

struct SurfaceMesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 3>> faces;
    std::vector<Eigen::Vector3d> gauss_map;       // unit normals
    std::vector<double> conformal_factor;         // (1+|g|^2)|eta/dz|
    struct DomainTag { Complex z; Complex w; };
    std::vector<DomainTag> domain_tag;

    bool empty() const { return vertices.empty(); }
};

struct MeshGrid {
    int radial = 48;
    int angular = 48;
    // Cutoffs in the local coordinate at each puncture, |u| in [e^-inner_log,
    // ...]; converted to z-plane radii per family.
    double inner_log = 4.0;
    double outer_log = 4.0;
};

struct EndData {
    XComplex z0;
    int d = 0;                    // multiplicity, >= 1
    std::string type;             // "embedded-planar" | "embedded-catenoidal" | "higher"
    Eigen::Vector3d limit_normal = Eigen::Vector3d::Zero();
};

struct EndReport {
    std::vector<EndData> ends;
    std::vector<int> d_profile_sorted() const;
};

struct JorgeMeeksReport {
    long lhs = 0;                // chi(M_bar) - sum (d_i + 1)
    long rhs = 0;                // -2 deg g
    bool equality = false;       // lhs == rhs
    bool embedded_equality = false;  // attains chi(M) - n (all ends embedded)
};

// ---- operations -------------------------------------------------------------

SurfaceMesh build_mesh(const families::FamilyBundle& fam, const MeshGrid& grid,
                       double period_tol = 1e-6);

double gauss_curvature(Complex z, Complex w, const WeierstrassData& data,
                       const SuperellipticCurve& c);

struct TotalCurvatureResult {
    double tau = 0.0;               // Richardson-extrapolated numeric integral
    double coarse = 0.0, fine = 0.0;
    long deg_g = 0;                 // combinatorial degree from the divisor
    double tau_over_4pi = 0.0;
};
TotalCurvatureResult total_curvature(const WeierstrassData& data,
                                     const SuperellipticCurve& c,
                                     int base_resolution = 160,
                                     double cutoff_log = 4.0);

EndReport end_orders(const WeierstrassData& data, const SuperellipticCurve& c);

JorgeMeeksReport jorge_meeks_check(int genus, const EndReport& ends, long deg_g);

// Max over sample points of || f(kappa p) - (O f(p) + v) || with the
// translation v fitted, plus the numeric pullback defect of kappa*Phi.
struct SymmetryCheckResult {
    double deviation = 0.0;        // worst f-level deviation after fitting v
    double pullback_defect = 0.0;  // worst |kappa*Phi - O Phi| at samples
    Eigen::Vector3d fitted_v = Eigen::Vector3d::Zero();
};
SymmetryCheckResult symmetry_check(const families::FamilyBundle& fam,
                                   const SymmetryOp& op, int samples,
                                   unsigned seed = 12345);

// Order of the group generated by the ambient parts (matrix + conjugation
// parity) of the given operations.  Throws NumericError if the closure
// exceeds the budget.
int symmetry_group_order(const std::vector<SymmetryOp>& generators,
                         int budget = 4096);

// Composite symmetry: apply `before`, then `after` (domain map and ambient
// matrix both composed; translations are left for fitting).
SymmetryOp compose(const SymmetryOp& after, const SymmetryOp& before);

// Full closure of the generated group with composed domain maps.
std::vector<SymmetryOp> close_group_ops(const std::vector<SymmetryOp>& generators,
                                        int budget = 256);

struct BjorlingResult {
    double x3_deviation = 0.0;    // max |x3 - mean| along the traced curve
    double closure_gap = 0.0;     // |f(end) - f(start)| of the full trace
    std::vector<Eigen::Vector3d> trace;
};
BjorlingResult bjorling_geodesic_check(const families::FamilyBundle& fam,
                                       int samples_per_turn = 512);

void export_obj(const SurfaceMesh& mesh, const std::string& path);

// Discrete mean curvature magnitudes at interior vertices (cotangent
// Laplacian); used by the refinement property test.
std::vector<double> discrete_mean_curvature(const SurfaceMesh& mesh);

} // namespace msforge::geometry

#endif
