#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "msforge/errors.hpp"
#include "msforge/families.hpp"
#include "msforge/integrator.hpp"

#include <cmath>
#include <random>

using msforge::NumericError;
using msforge::ValidationError;
using namespace msforge;
using namespace msforge::integrator;
using curve::ExprSum;
using curve::MonomialExpr;

namespace {
constexpr double kPi = 3.14159265358979323846;

// frozen solved constants (independent multiprecision computation)
constexpr double kC1 = 0.60393702972336399022;   // genus family, gamma = 1
constexpr double kA2 = 1.779676919199820851809729;  // even family, k = 2
constexpr double kEll2I1 = 1.9832315223409668369;   // int_1^a ..., k=2, a=2

MonomialExpr mono() { return MonomialExpr{}; }
} // namespace

TEST_CASE("branch continuation around branch points") {
    const auto fam = families::make_genus_family(1, kC1);
    const auto& c = fam.curve;   // w^2 = z(z^2-1)

    // a loop around nothing returns the starting branch
    Path semi;
    semi.segments.push_back(PathSegment::arc({0.5, 1.5}, 0.4, 0.0, 2.0 * kPi));
    const curve::Complex w0 = c.fiber_w(semi.start_z())[0];
    CHECK(std::abs(continue_w(c, semi, w0) - w0) < 1e-10);

    // one turn around the simple branch point z=1 flips the sheet,
    // two turns restore it (deck transformation of order 2)
    Path once, twice;
    once.segments.push_back(PathSegment::arc(1.0, 0.3, 0.0, 2.0 * kPi));
    twice.segments.push_back(PathSegment::arc(1.0, 0.3, 0.0, 4.0 * kPi));
    const curve::Complex w1 = c.fiber_w(once.start_z())[0];
    CHECK(std::abs(continue_w(c, once, w1) + w1) < 1e-10 * (1.0 + std::abs(w1)));
    CHECK(std::abs(continue_w(c, twice, w1) - w1) < 1e-10 * (1.0 + std::abs(w1)));
}

TEST_CASE("continuation phase around the origin matches the cyclic convention") {
    // w^(gamma+1) = z(z^2-1)^gamma: a positive turn around z=0 multiplies w
    // by exp(2 pi i/(gamma+1))
    for (int gamma : {1, 2, 3}) {
        const auto fam = families::make_genus_family(gamma, 0.7);
        Path loop;
        loop.segments.push_back(PathSegment::arc(0.0, 0.4, 0.0, 2.0 * kPi));
        const curve::Complex w0 = fam.curve.fiber_w(loop.start_z())[0];
        const curve::Complex w1 = continue_w(fam.curve, loop, w0);
        const curve::Complex expect = w0 * std::polar(1.0, 2.0 * kPi / (gamma + 1));
        CHECK(std::abs(w1 - expect) < 1e-9 * (1.0 + std::abs(w0)));
    }
}

TEST_CASE("phi assembly") {
    const auto cat = families::make_catenoid();
    const PhiTriple phi = phi_from_data(cat.data.g, cat.data.eta);
    // catenoid: Phi = ((1-z^2)/z^2, i(1+z^2)/z^2, 2/z) dz
    const curve::Complex z{0.7, 0.4};
    const curve::Complex w = z;
    CHECK(std::abs(curve::eval(phi.comp[0], z, w) - (1.0 - z * z) / (z * z)) < 1e-13);
    CHECK(std::abs(curve::eval(phi.comp[1], z, w) -
                   curve::Complex{0, 1} * (1.0 + z * z) / (z * z)) < 1e-13);
    CHECK(std::abs(curve::eval(phi.comp[2], z, w) - 2.0 / z) < 1e-13);

    // g = 0, eta = dz  ->  (dz, i dz, 0)
    const ExprSum zero{mono().mul_coeff(0.0)};
    const ExprSum dz{mono().mul_dz()};
    const PhiTriple p2 = phi_from_data(zero, dz);
    CHECK(std::abs(curve::eval(p2.comp[0], z, w) - 1.0) < 1e-15);
    CHECK(std::abs(curve::eval(p2.comp[1], z, w) - curve::Complex{0, 1}) < 1e-15);
    CHECK(std::abs(curve::eval(p2.comp[2], z, w)) < 1e-15);

    // genus family: Phi_3 = 2 i c dz / z^2
    const auto fam = families::make_genus_family(1, kC1);
    const PhiTriple p3 = phi_from_data(fam.data.g, fam.data.eta);
    const curve::Complex wc = fam.curve.fiber_w(z)[0];
    CHECK(std::abs(curve::eval(p3.comp[2], z, wc) -
                   2.0 * curve::Complex{0, 1} * kC1 / (z * z)) < 1e-13);
}

TEST_CASE("cycle integrals: catenoid residue loop") {
    const auto cat = families::make_catenoid();
    const ExprSum geta = cat.data.g * cat.data.eta;   // dz/z
    const auto val = integrate_over(geta, cat.generators.front(), cat.curve);
    CHECK(std::abs(val - curve::Complex{0.0, 2.0 * kPi}) < 1e-11);
}

TEST_CASE("solved genus family closes the oval period") {
    const auto fam = families::make_genus_family(1, kC1);
    const ExprSum g2eta = fam.data.g * (fam.data.g * fam.data.eta);
    const auto& cyc = fam.generators.front();
    const auto pe = integrate_over(fam.data.eta, cyc, fam.curve);
    const auto pg = integrate_over(g2eta, cyc, fam.curve);
    CHECK(std::abs(pe - std::conj(pg)) < 1e-8);
    // the eta period itself has the closed form -2 sin(pi/2) A_1 (up to
    // cycle orientation)
    CHECK(std::abs(pe.imag()) < 1e-10);
    CHECK(std::abs(std::abs(pe.real()) - 2.0 * 0.87401918476403994) < 1e-9);
}

TEST_CASE("even family ell2 period matches the closed form") {
    const auto fam = families::make_even_family(2, 2.0);
    const auto& ell2 = fam.generators.front();  // oval around [1,a], sheet 0
    const auto pe = integrate_over(fam.data.eta, ell2, fam.curve);
    const double expect = 2.0 * std::sin(2.0 * kPi / 3.0) * kEll2I1;
    CHECK(std::abs(pe.real()) < 1e-9);
    CHECK(std::abs(pe.imag()) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("residues") {
    const auto cat = families::make_catenoid();
    const PhiTriple phi = phi_from_data(cat.data.g, cat.data.eta);
    // Phi_3 = 2 dz/z: residue 2 at the origin
    const auto r = residue_at(phi.comp[2], curve::XComplex::at({0.0, 0.0}), cat.curve);
    CHECK(std::abs(r - curve::Complex{2.0, 0.0}) < 1e-11);

    const auto fam = families::make_genus_family(1, kC1);
    const ExprSum g2eta = fam.data.g * (fam.data.g * fam.data.eta);
    CHECK(std::abs(residue_at(fam.data.eta, curve::XComplex::at({0.0, 0.0}),
                              fam.curve)) < 1e-10);
    CHECK(std::abs(residue_at(g2eta, curve::XComplex::inf(), fam.curve)) < 1e-10);
    // cross-check against the series coefficient
    const auto s = curve::puncture_series(fam.data.eta,
                                          curve::XComplex::at({0.0, 0.0}),
                                          fam.curve, 2);
    CHECK(std::abs(s.residue - residue_at(fam.data.eta,
                                          curve::XComplex::at({0.0, 0.0}),
                                          fam.curve)) < 1e-9);
}

TEST_CASE("verify_periods pass and controlled failure") {
    const auto cat = families::make_catenoid();
    const auto repc = verify_periods(cat.data, cat.curve, cat.generators,
                                     cat.puncture_z);
    CHECK(repc.pass(1e-10));

    const auto fam = families::make_genus_family(1, kC1);
    const auto rep = verify_periods(fam.data, fam.curve, fam.generators,
                                    fam.puncture_z);
    CHECK(rep.pass(1e-8));
    CHECK(rep.cycles.size() == 4);

    // doubled c: residual 2 sin(pi/2) |A - 4 c^2 B| = 6 sin(pi/2) A
    const auto bad = families::make_genus_family(1, 2.0 * kC1);
    const auto repb = verify_periods(bad.data, bad.curve, bad.generators,
                                     bad.puncture_z);
    CHECK_FALSE(repb.pass(1e-8));
    const double expected = 6.0 * 0.87401918476403994;
    CHECK(repb.cycles.front().residual_period1 ==
          doctest::Approx(expected).epsilon(1e-6));
    // eq:period2 still holds (g eta stays exact)
    CHECK(repb.cycles.front().residual_period2 < 1e-10);
}

TEST_CASE("f is path independent once periods close") {
    const auto fam = families::make_genus_family(1, kC1);
    const PhiTriple phi = phi_from_data(fam.data.g, fam.data.eta);
    const curve::Complex target{0.4, 0.9};

    Path p1;
    p1.start_w = fam.basepoint_w;
    p1.segments.push_back(PathSegment::line(fam.basepoint_z, target));

    // homotopic deformation through a waypoint
    Path p2;
    p2.start_w = fam.basepoint_w;
    p2.segments.push_back(PathSegment::line(fam.basepoint_z, {0.55, 0.5}));
    p2.segments.push_back(PathSegment::line({0.55, 0.5}, target));

    // non-homotopic: prepend a generator cycle
    Path p3;
    p3.start_w = fam.basepoint_w;
    const auto cyc = oval_cycle(fam.curve, 0.0, 1.0, 0.3, 0);
    p3.segments.push_back(PathSegment::line(fam.basepoint_z, cyc.start_z()));
    for (const auto& s : cyc.segments) p3.segments.push_back(s);
    p3.segments.push_back(PathSegment::line(cyc.start_z(), fam.basepoint_z));
    p3.segments.push_back(PathSegment::line(fam.basepoint_z, target));

    const auto f1 = evaluate_f(phi, p1, fam.curve);
    const auto f2 = evaluate_f(phi, p2, fam.curve);
    const auto f3 = evaluate_f(phi, p3, fam.curve);
    CHECK((f1 - f2).norm() < 1e-8);   // same homotopy class
    CHECK((f1 - f3).norm() < 1e-7);   // differs by a closed period

    // f at the basepoint itself (empty path) is the origin
    Path empty;
    empty.start_w = fam.basepoint_w;
    CHECK(evaluate_f(phi, empty, fam.curve).norm() == 0.0);
}

TEST_CASE("conformality at random curve points") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (const auto& fam : {families::make_genus_family(1, kC1),
                            families::make_even_family(2, kA2),
                            families::make_catenoid()}) {
        const PhiTriple phi = phi_from_data(fam.data.g, fam.data.eta);
        int checked = 0;
        for (int trial = 0; trial < 4000 && checked < 1000; ++trial) {
            const curve::Complex z{2.0 * U(rng), 2.0 * U(rng)};
            bool clear = std::abs(z) > 0.05;
            for (const auto& s : fam.curve.finite_special_points())
                if (std::abs(z - s) < 0.05) clear = false;
            if (!clear) continue;
            for (const auto& w : fam.curve.fiber_w(z)) {
                curve::Complex q{0.0, 0.0};
                double scale = 0.0;
                for (int j = 0; j < 3; ++j) {
                    const auto v = curve::eval(phi.comp[j], z, w);
                    q += v * v;
                    scale = std::max(scale, std::norm(v));
                }
                CHECK(std::abs(q) < 1e-12 * std::max(1.0, scale));
            }
            ++checked;
        }
        CHECK(checked == 1000);
    }
}

TEST_CASE("metric positivity away from punctures") {
    const auto fam = families::make_even_family(2, kA2);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    for (int trial = 0; trial < 200; ++trial) {
        const curve::Complex z{U(rng) + 1.6, U(rng)};
        bool clear = true;
        for (const auto& s : fam.curve.finite_special_points())
            if (std::abs(z - s) < 0.1) clear = false;
        if (!clear) continue;
        for (const auto& w : fam.curve.fiber_w(z)) {
            const auto gv = curve::eval(fam.data.g, z, w);
            const auto ev = curve::eval(fam.data.eta, z, w);
            CHECK((1.0 + std::norm(gv)) * std::abs(ev) > 0.0);
        }
    }
}

TEST_CASE("guard rails") {
    const auto fam = families::make_genus_family(1, kC1);
    // start_w off the curve
    Path p;
    p.start_w = fam.basepoint_w * 1.05;
    p.segments.push_back(PathSegment::line(fam.basepoint_z, {0.6, 0.2}));
    CHECK_THROWS_AS(integrate_over(fam.data.eta, p, fam.curve), ValidationError);

    // clearance violation: a path running through the branch point z = 1
    Path bad;
    bad.start_w = fam.curve.fiber_w({0.5, 0.0})[0];
    bad.segments.push_back(PathSegment::line({0.5, 0.0}, {1.5, 0.0}));
    CHECK_THROWS_AS(check_clearance(bad, fam.curve, clearance_radius(fam.curve)),
                    NumericError);

    // open "cycle" rejected by verify_periods
    Path open;
    open.start_w = fam.basepoint_w;
    open.segments.push_back(PathSegment::line(fam.basepoint_z, {0.6, 0.2}));
    CHECK_THROWS_AS(verify_periods(fam.data, fam.curve, {open}, {}),
                    ValidationError);
}
