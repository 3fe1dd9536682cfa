#ifndef MSFORGE_INTEGRATOR_HPP
#define MSFORGE_INTEGRATOR_HPP

#include "msforge/curve.hpp"

#include <Eigen/Core>

#include <array>
#include <span>
#include <vector>

namespace msforge::integrator {

using curve::Complex;
using curve::ExprSum;
using curve::SuperellipticCurve;
using curve::XComplex;

// One arc of a z-plane trajectory, parameter s in [0,1].  Arcs may span
// several turns (|ang1 - ang0| > 2*pi) for multi-loop cycles.
struct PathSegment {
    enum class Kind { line, arc };
    Kind kind = Kind::line;
    Complex a{}, b{};                        // line endpoints
    Complex center{};                        // arc data
    double radius = 0.0, ang0 = 0.0, ang1 = 0.0;

    static PathSegment line(Complex from, Complex to);
    static PathSegment arc(Complex center, double radius, double ang0, double ang1);

    Complex z_at(double s) const;
    Complex dz_at(double s) const;           // d z / d s
    double length_estimate() const;
};

// A chain of segments with a chosen branch of w at the start.  Endpoints of
// consecutive segments must match; `closed()` additionally requires the
// trajectory to return to its starting z.
struct Path {
    std::vector<PathSegment> segments;
    Complex start_w{};

    Complex start_z() const;
    Complex end_z() const;
    bool closed(double tol = 1e-9) const;
};
using Cycle = Path;

struct PhiTriple {
    std::array<ExprSum, 3> comp;
};

// Phi = ((1-g^2) eta, i (1+g^2) eta, 2 g eta).
PhiTriple phi_from_data(const ExprSum& g, const ExprSum& eta);

// Default clearance radius: 1e-3 times the minimum pairwise distance of the
// finite special points (or 1e-3 when fewer than two).
double clearance_radius(const SuperellipticCurve& c);

// Throws NumericError if the trajectory comes closer than `clearance` to a
// special point of the curve.
void check_clearance(const Path& p, const SuperellipticCurve& c, double clearance);

struct ContinuationOptions {
    double max_phase_step = 0.25;  // bound on |dz|*|dlogF|/N per substep
    int max_halvings = 40;
    double ambiguity_margin = 0.2; // predictor must beat other roots by this factor
};

// Analytic continuation of w along a segment / path.  start_w must satisfy
// the curve equation at the initial point within 1e-8 relative.
Complex continue_w(const SuperellipticCurve& c, const PathSegment& seg, Complex w0,
                   const ContinuationOptions& opts = {});
Complex continue_w(const SuperellipticCurve& c, const Path& path, Complex w0,
                   const ContinuationOptions& opts = {});

// Adaptive Gauss-Legendre integration of several expressions along a path,
// sharing one branch continuation.  Differentials and plain functions are
// both accepted; differentials integrate phi dz, functions integrate f dz.
std::vector<Complex> integrate_many(std::span<const ExprSum> exprs, const Path& path,
                                    const SuperellipticCurve& c, double tol = 1e-11);
Complex integrate_over(const ExprSum& expr, const Path& path,
                       const SuperellipticCurve& c, double tol = 1e-11);

// Residue of a differential at the fiber over z0 (finite or infinity):
// (1/2 pi i) times the integral over a small positively oriented loop on
// the full fiber (m z-plane turns).
Complex residue_at(const ExprSum& expr, const XComplex& z0, const SuperellipticCurve& c);

struct CycleReport {
    Complex eta_period{};
    Complex g2eta_period{};
    Complex geta_period{};
    double residual_period1 = 0.0;  // |P_eta - conj(P_g2eta)|
    double residual_period2 = 0.0;  // |Re P_geta|
};

struct PunctureReport {
    XComplex z0;
    Complex eta_residue{};
    Complex g2eta_residue{};
    double phi_residue_imag = 0.0;  // max_j |Im residue(Phi_j)|
};

struct PeriodReport {
    std::vector<CycleReport> cycles;
    std::vector<PunctureReport> punctures;
    double worst_cycle_residual = 0.0;
    double worst_residue_imag = 0.0;
    bool pass(double tol) const {
        return worst_cycle_residual < tol && worst_residue_imag < tol;
    }
};

struct WeierstrassData {
    ExprSum g, eta;
};

PeriodReport verify_periods(const WeierstrassData& data, const SuperellipticCurve& c,
                            const std::vector<Cycle>& generators,
                            const std::vector<XComplex>& punctures,
                            double tol = 1e-11);

// f(end of path) - f(start of path) = Re int_path Phi.
Eigen::Vector3d evaluate_f(const PhiTriple& phi, const Path& path,
                           const SuperellipticCurve& c, double tol = 1e-11);

// An oval cycle with margin r around the segment [p,q] of the z-plane,
// starting on the sheet whose w at the start point is fiber_w[sheet].
Cycle oval_cycle(const SuperellipticCurve& c, Complex p, Complex q, double margin,
                 int sheet);

// Closed composite cycle: n0 turns around z0 (radius r0), a bridge along
// the line toward z1, n1 turns around z1 (radius r1), bridge back.  The
// caller is responsible for choosing n0, n1 so the monodromy closes.
Cycle two_point_cycle(const SuperellipticCurve& c, Complex z0, double r0, int n0,
                      Complex z1, double r1, int n1, int sheet);

} // namespace msforge::integrator

#endif
