#include "msforge/families.hpp"
#include "msforge/errors.hpp"

#include <cmath>

namespace msforge::families {

namespace {

constexpr double kPi = 3.14159265358979323846;
using curve::CurvePoint;
using curve::ExprSum;
using curve::Factor;
using curve::MonomialExpr;
using geometry::SymmetryOp;
using integrator::PathSegment;

MonomialExpr mono() { return MonomialExpr{}; }

Eigen::Matrix3d rot_z(double th) {
    Eigen::Matrix3d m;
    m << std::cos(th), -std::sin(th), 0.0,
         std::sin(th),  std::cos(th), 0.0,
         0.0, 0.0, 1.0;
    return m;
}

Eigen::Matrix3d diag3(double a, double b, double c) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    m(0, 0) = a; m(1, 1) = b; m(2, 2) = c;
    return m;
}

CurvePoint puncture(curve::XComplex z, curve::XComplex w) {
    CurvePoint p;
    p.z = z;
    p.w = w;
    p.is_puncture = true;
    return p;
}

} // namespace

FamilyBundle make_genus_family(int gamma, double c) {
    if (gamma < 1) throw ValidationError("genus family: gamma must be >= 1");
    if (!(c > 0.0)) throw ValidationError("genus family: c must be positive");
    const int N = gamma + 1;

    SuperellipticCurve cur(N,
                           {Factor{Complex{0.0, 0.0}, 1},
                            Factor{Complex{1.0, 0.0}, gamma},
                            Factor{Complex{-1.0, 0.0}, gamma}},
                           {puncture(curve::XComplex::at({0.0, 0.0}),
                                     curve::XComplex::at({0.0, 0.0})),
                            puncture(curve::XComplex::inf(), curve::XComplex::inf())});

    FamilyBundle fam{.name = "genus", .curve = cur, .data = {}, .puncture_z = {},
                     .generators = {}, .symmetries = {}, .basepoint_z = {},
                     .basepoint_w = {}, .expected_group_order = 4 * (gamma + 1),
                     .genus = gamma};

    fam.data.g = {mono().mul_coeff(c).mul_w(1)};
    fam.data.eta = {mono().mul_coeff(Complex{0.0, 1.0}).mul_factor(0.0, -2).mul_w(-1).mul_dz()};
    fam.puncture_z = {curve::XComplex::at({0.0, 0.0}), curve::XComplex::inf()};

    for (int s = 0; s < N; ++s) {
        fam.generators.push_back(integrator::oval_cycle(cur, 0.0, 1.0, 0.3, s));
        fam.generators.push_back(integrator::oval_cycle(cur, -1.0, 0.0, 0.3, s));
    }

    const double th = kPi / (gamma + 1);
    SymmetryOp k1{.name = "kappa1", .conjugate = true, .zc = 1.0, .zpow = 1,
                  .wc = 1.0, .wpow = 1, .O = diag3(-1, 1, -1), .v = {}};
    Eigen::Matrix3d O2;
    O2 << -std::cos(th),  std::sin(th), 0.0,
          -std::sin(th), -std::cos(th), 0.0,
           0.0, 0.0, -1.0;
    SymmetryOp k2{.name = "kappa2", .conjugate = false,
                  .zc = -1.0, .zpow = 1,
                  .wc = std::polar(1.0, kPi / (gamma + 1)), .wpow = 1,
                  .O = O2, .v = {}};
    fam.symmetries = {k1, k2};

    // Basepoint on the second branch of the paper's explicit cycle:
    // z = 1/2, w = (t(1-t^2)^gamma)^(1/(gamma+1)) * exp(-gamma pi i/(gamma+1)).
    const double t = 0.5;
    const double rho = std::pow(t * std::pow(1.0 - t * t, gamma), 1.0 / N);
    fam.basepoint_z = Complex{t, 0.0};
    fam.basepoint_w = std::polar(rho, -gamma * kPi / N);
    return fam;
}

FamilyBundle make_even_family(int k, double a) {
    if (k < 2 || k % 2 != 0)
        throw ValidationError("even family: k must be even and >= 2");
    if (!(a > 1.0)) throw ValidationError("even family: a must lie in (1, infinity)");
    const int N = k + 1;
    const double c = std::pow(a, (k - 2.0) / (2.0 * k + 2.0));

    SuperellipticCurve cur(N,
                           {Factor{Complex{0.0, 0.0}, 2},
                            Factor{Complex{1.0, 0.0}, k},
                            Factor{Complex{a, 0.0}, -k}},
                           {puncture(curve::XComplex::at({0.0, 0.0}),
                                     curve::XComplex::at({0.0, 0.0})),
                            puncture(curve::XComplex::inf(), curve::XComplex::inf())});

    FamilyBundle fam{.name = "even", .curve = cur, .data = {}, .puncture_z = {},
                     .generators = {}, .symmetries = {}, .basepoint_z = {},
                     .basepoint_w = {}, .expected_group_order = 4 * (k + 1),
                     .genus = k};

    fam.data.g = {mono().mul_coeff(c).mul_w(1)};
    fam.data.eta = {mono().mul_factor(0.0, -1).mul_w(-1).mul_dz()};
    fam.puncture_z = {curve::XComplex::at({0.0, 0.0}), curve::XComplex::inf()};

    const double m2 = 0.25 * std::min(1.0, a - 1.0);
    for (int s = 0; s < N; ++s) {
        // the ell_2 loop around [1,a]
        fam.generators.push_back(integrator::oval_cycle(cur, 1.0, a, m2, s));
        // ell_1'-type composite: (k+2)/2 turns around 0, one turn around 1
        fam.generators.push_back(integrator::two_point_cycle(
            cur, 0.0, 0.3, (k + 2) / 2, 1.0, 0.3 * std::min(1.0, a - 1.0), 1, s));
    }

    SymmetryOp k1{.name = "kappa1", .conjugate = true, .zc = 1.0, .zpow = 1,
                  .wc = 1.0, .wpow = 1, .O = diag3(1, -1, 1), .v = {}};
    SymmetryOp k2{.name = "kappa2", .conjugate = false, .zc = 1.0, .zpow = 1,
                  .wc = std::polar(1.0, 2.0 * kPi / N), .wpow = 1,
                  .O = rot_z(2.0 * kPi / N), .v = {}};
    SymmetryOp k3{.name = "kappa3", .conjugate = false, .zc = a, .zpow = -1,
                  .wc = 1.0 / (c * c), .wpow = -1, .O = diag3(1, -1, -1), .v = {}};
    fam.symmetries = {k1, k2, k3};

    // Basepoint on the closed geodesic: z = sqrt(a), w real positive.
    fam.basepoint_z = Complex{std::sqrt(a), 0.0};
    fam.basepoint_w = Complex{std::pow(a, (2.0 - k) / (2.0 * N)), 0.0};
    return fam;
}

FamilyBundle make_catenoid() {
    SuperellipticCurve cur(1, {Factor{Complex{0.0, 0.0}, 1}},
                           {puncture(curve::XComplex::at({0.0, 0.0}),
                                     curve::XComplex::at({0.0, 0.0})),
                            puncture(curve::XComplex::inf(), curve::XComplex::inf())});

    FamilyBundle fam{.name = "catenoid", .curve = cur, .data = {}, .puncture_z = {},
                     .generators = {}, .symmetries = {}, .basepoint_z = {},
                     .basepoint_w = {}, .expected_group_order = 4, .genus = 0};

    fam.data.g = {mono().mul_factor(0.0, 1)};
    fam.data.eta = {mono().mul_factor(0.0, -2).mul_dz()};
    fam.puncture_z = {curve::XComplex::at({0.0, 0.0}), curve::XComplex::inf()};

    integrator::Cycle loop;
    loop.segments.push_back(PathSegment::arc(0.0, 1.0, 0.0, 2.0 * kPi));
    loop.start_w = cur.fiber_w(loop.start_z())[0];
    fam.generators = {loop};

    SymmetryOp k1{.name = "conj", .conjugate = true, .zc = 1.0, .zpow = 1,
                  .wc = 1.0, .wpow = 1, .O = diag3(1, -1, 1), .v = {}};
    SymmetryOp k2{.name = "half-turn", .conjugate = false, .zc = -1.0, .zpow = 1,
                  .wc = -1.0, .wpow = 1, .O = diag3(-1, -1, 1), .v = {}};
    fam.symmetries = {k1, k2};

    fam.basepoint_z = Complex{1.0, 0.0};
    fam.basepoint_w = Complex{1.0, 0.0};
    return fam;
}

FamilyBundle make_weber_family(int gamma, double c, const std::vector<double>& a) {
    if (gamma < 1) throw ValidationError("weber family: gamma must be >= 1");
    if (!(c > 0.0)) throw ValidationError("weber family: c must be positive");
    if (a.size() != size_t(2 * gamma - 1))
        throw ValidationError("weber family: expected a_2..a_{2 gamma}");
    double prev = 1.0;
    for (double ai : a) {
        if (!(ai > prev))
            throw ValidationError("weber family: need 1 = a_1 < a_2 < ... < a_{2 gamma}");
        prev = ai;
    }

    std::vector<Factor> factors{Factor{Complex{0.0, 0.0}, 1},
                                Factor{Complex{1.0, 0.0}, 1}};
    for (size_t i = 0; i < a.size(); ++i)
        factors.push_back(Factor{Complex{a[i], 0.0}, (i % 2 == 0) ? -1 : 1});

    SuperellipticCurve cur(2, std::move(factors),
                           {puncture(curve::XComplex::at({0.0, 0.0}),
                                     curve::XComplex::at({0.0, 0.0})),
                            puncture(curve::XComplex::inf(), curve::XComplex::inf())});

    FamilyBundle fam{.name = "weber", .curve = cur, .data = {}, .puncture_z = {},
                     .generators = {}, .symmetries = {}, .basepoint_z = {},
                     .basepoint_w = {}, .expected_group_order = 4, .genus = gamma};

    fam.data.g = {mono().mul_coeff(c).mul_w(1).mul_factor(-1.0, -1)};
    fam.data.eta = {mono().mul_factor(-1.0, 2).mul_factor(0.0, -1).mul_w(-1).mul_dz()};
    fam.puncture_z = {curve::XComplex::at({0.0, 0.0}), curve::XComplex::inf()};

    // Ovals around consecutive branch segments [0,1],[1,a2],...,[a_{2g-1},a_{2g}].
    std::vector<double> pts{0.0, 1.0};
    pts.insert(pts.end(), a.begin(), a.end());
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        double gap = pts[i + 1] - pts[i];
        if (i > 0) gap = std::min(gap, pts[i] - pts[i - 1]);
        if (i + 2 < pts.size()) gap = std::min(gap, pts[i + 2] - pts[i + 1]);
        fam.generators.push_back(
            integrator::oval_cycle(cur, pts[i], pts[i + 1], 0.3 * gap, 0));
    }

    SymmetryOp k1{.name = "conj", .conjugate = true, .zc = 1.0, .zpow = 1,
                  .wc = 1.0, .wpow = 1, .O = diag3(1, -1, 1), .v = {}};
    SymmetryOp deck{.name = "deck", .conjugate = false, .zc = 1.0, .zpow = 1,
                    .wc = -1.0, .wpow = 1, .O = diag3(-1, -1, 1), .v = {}};
    fam.symmetries = {k1, deck};

    fam.basepoint_z = Complex{0.5, 0.0};
    fam.basepoint_w = cur.fiber_w(fam.basepoint_z)[0];
    if (std::abs(fam.basepoint_w.imag()) > 1e-9) {
        // take the real positive square root branch
        for (const Complex& r : cur.fiber_w(fam.basepoint_z))
            if (r.real() > 0.0 && std::abs(r.imag()) < std::abs(r.real()) * 1e-6)
                fam.basepoint_w = r;
    }
    return fam;
}

} // namespace msforge::families
