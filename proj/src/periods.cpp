#include "msforge/periods.hpp"
#include "msforge/errors.hpp"
#include "msforge/families.hpp"
#include "msforge/integrator.hpp"
#include "msforge/quad.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace msforge::periods {

namespace {

constexpr double kPi = 3.14159265358979323846;
using quad::AlgebraicIntegrand;

double integrate_checked(const AlgebraicIntegrand& f, double tol = 1e-12) {
    return quad::integrate(f, tol).value;
}

} // namespace

const ValueWithError& PeriodIntegrals::get(const std::string& name) const {
    for (const auto& [n, v] : values)
        if (n == name) return v;
    throw ValidationError("PeriodIntegrals: unknown name " + name);
}

PeriodIntegrals genus_family_integrals(int gamma) {
    if (gamma < 1) throw ValidationError("genus_family_integrals: gamma >= 1 required");
    const double g = gamma;
    // A_gamma = g/(g+2) * int t^(-1/(g+1)) (1-t)^(-g/(g+1)) (1+t)^(-g/(g+1)) dt
    AlgebraicIntegrand fa{-1.0 / (g + 1.0), -g / (g + 1.0),
                          [g](double t) { return std::pow(1.0 + t, -g / (g + 1.0)); },
                          0.0, 1.0};
    // B_gamma = 2 int t^(1/(g+1)) (1-t)^(-1/(g+1)) (1+t)^(-1/(g+1)) dt
    AlgebraicIntegrand fb{1.0 / (g + 1.0), -1.0 / (g + 1.0),
                          [g](double t) { return std::pow(1.0 + t, -1.0 / (g + 1.0)); },
                          0.0, 1.0};
    const auto ra = quad::integrate(fa, 1e-13);
    const auto rb = quad::integrate(fb, 1e-13);
    PeriodIntegrals out;
    out.values.emplace_back("A", ValueWithError{g / (g + 2.0) * ra.value,
                                                g / (g + 2.0) * ra.error});
    out.values.emplace_back("B", ValueWithError{2.0 * rb.value, 2.0 * rb.error});
    if (!(out.get("A").value > 0.0) || !(out.get("B").value > 0.0))
        throw NumericError("genus_family_integrals: integrals must be positive");
    return out;
}

double solve_c(int gamma) {
    const auto pi = genus_family_integrals(gamma);
    const double c = std::sqrt(pi.get("A").value / pi.get("B").value);

    // Verify eq:period1 on the generator cycle by direct cycle integration.
    const auto fam = families::make_genus_family(gamma, c);
    const auto& cyc = fam.generators.front();
    const curve::ExprSum g2eta = fam.data.g * (fam.data.g * fam.data.eta);
    const std::array<curve::ExprSum, 2> ex{fam.data.eta, g2eta};
    const auto vals = integrator::integrate_many(
        std::span<const curve::ExprSum>(ex.data(), 2), cyc, fam.curve, 1e-11);
    const double res = std::abs(vals[0] - std::conj(vals[1]));
    if (res >= 1e-8)
        throw NumericError("solve_c: cycle verification failed, residual " +
                           std::to_string(res));
    return c;
}

PeriodIntegrals even_family_integrals(int k, double a) {
    if (k < 2 || k % 2 != 0)
        throw ValidationError("even_family_integrals: k must be even and >= 2");
    if (!(a > 1.0)) throw ValidationError("even_family_integrals: a must exceed 1");
    const double kp1 = k + 1.0;
    AlgebraicIntegrand f1{-2.0 / kp1, 1.0 / kp1,
                          [a, kp1](double t) { return std::pow(a - t, -1.0 / kp1); },
                          0.0, 1.0};
    AlgebraicIntegrand f2{-2.0 / kp1, -double(k) / kp1,
                          [a, k, kp1](double t) { return std::pow(a - t, k / kp1); },
                          0.0, 1.0};
    AlgebraicIntegrand f3{-(k - 1.0) / kp1, double(k) / kp1,
                          [a, k, kp1](double t) { return std::pow(a - t, -k / kp1); },
                          0.0, 1.0};
    PeriodIntegrals out;
    const auto r1 = quad::integrate(f1, 1e-13);
    const auto r2 = quad::integrate(f2, 1e-13);
    const auto r3 = quad::integrate(f3, 1e-13);
    out.values.emplace_back("A1", ValueWithError{r1.value, r1.error});
    out.values.emplace_back("A2", ValueWithError{r2.value, r2.error});
    out.values.emplace_back("A3", ValueWithError{r3.value, r3.error});
    for (const auto& [n, v] : out.values)
        if (!(v.value > 0.0))
            throw NumericError("even_family_integrals: " + n + " must be positive");
    return out;
}

double even_family_defect(int k, double a) {
    const auto pi = even_family_integrals(k, a);
    return k * pi.get("A1").value +
           2.0 * std::pow(a, (k - 2.0) / (k + 1.0)) * pi.get("A3").value -
           pi.get("A2").value;
}

SolveAResult solve_a(int k, double tol) {
    if (k < 2 || k % 2 != 0) throw ValidationError("solve_a: k must be even and >= 2");
    if (!(tol > 0.0)) throw ValidationError("solve_a: tol must be positive");

    // Bracket [1+1e-3, 10], certified through the sandwich bounds, with the
    // upper end doubled until the sign change; cap 1e12.
    double lo = 1.0 + 1e-3;
    while (quad::period_defect_bounds(k, lo).first <= 0.0 && lo - 1.0 > 1e-12)
        lo = 1.0 + (lo - 1.0) / 4.0;
    double hi = 10.0;
    while (quad::period_defect_bounds(k, hi).second >= 0.0) {
        hi *= 2.0;
        if (hi > 1e12)
            throw NumericError("solve_a: no certified sign change below 1e12");
    }

    SolveAResult out;
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    double flo = even_family_defect(k, lo);
    if (!(flo > 0.0)) throw NumericError("solve_a: defect not positive at bracket start");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = even_family_defect(k, mid);
        if (std::abs(fm) < tol && (hi - lo) < 1e-9 * mid) {
            out.a = mid;
            out.defect = fm;
            out.c = std::pow(mid, (k - 2.0) / (2.0 * k + 2.0));
            return out;
        }
        if (fm > 0.0) { lo = mid; flo = fm; }
        else hi = mid;
    }
    const double mid = 0.5 * (lo + hi);
    const double fm = even_family_defect(k, mid);
    if (std::abs(fm) >= tol)
        throw NumericError("solve_a: bisection failed to reach tolerance");
    out.a = mid;
    out.defect = fm;
    out.c = std::pow(mid, (k - 2.0) / (2.0 * k + 2.0));
    return out;
}

double ell2_closure_check(int k, double a) {
    if (k < 2 || k % 2 != 0)
        throw ValidationError("ell2_closure_check: k must be even and >= 2");
    if (!(a > 1.0)) throw ValidationError("ell2_closure_check: a must exceed 1");
    const double kp1 = k + 1.0;
    // I1 = int_1^a ((a-t)^k / (t^{k+3} (t-1)^k))^(1/(k+1)) dt
    AlgebraicIntegrand f1{-k / kp1, k / kp1,
                          [a, k, kp1](double s) {
                              const double t = 1.0 + (a - 1.0) * s;
                              return std::pow(t, -(k + 3.0) / kp1);
                          },
                          1.0, a};
    // I2 = int_1^a ((t-1)^k / (t^{k-1} (a-t)^k))^(1/(k+1)) dt
    AlgebraicIntegrand f2{k / kp1, -k / kp1,
                          [a, k, kp1](double s) {
                              const double t = 1.0 + (a - 1.0) * s;
                              return std::pow(t, -(k - 1.0) / kp1);
                          },
                          1.0, a};
    const double i1 = integrate_checked(f1, 1e-13);
    const double i2 = integrate_checked(f2, 1e-13);
    const double c2 = std::pow(a, (k - 2.0) / kp1);
    return 2.0 * std::sin(k * kPi / kp1) * std::abs(i1 - c2 * i2);
}

// ------------------------------------------------------------- nonexistence

namespace {

double cuberoot_integral(double alpha, double beta, std::function<double(double)> h) {
    return integrate_checked(AlgebraicIntegrand{alpha, beta, std::move(h), 0.0, 1.0});
}

ObstructionSample sample_case_i(double a) {
    ObstructionSample s;
    s.parameter = a;
    const double s1 = cuberoot_integral(-2.0 / 3.0, -1.0 / 3.0,
        [a](double t) { return std::pow(a - t, 2.0 / 3.0); });
    const double s2 = cuberoot_integral(-2.0 / 3.0, 2.0 / 3.0,
        [a](double t) { return std::pow(a - t, -1.0 / 3.0); });
    s.lhs = -(s1 + s2);
    s.rhs_factor = cuberoot_integral(-1.0 / 3.0, -2.0 / 3.0,
        [a](double t) { return std::pow(a - t, -2.0 / 3.0); });
    s.obstructed = s.lhs < 0.0 && s.rhs_factor > 0.0;
    return s;
}

ObstructionSample sample_case_ii(double a) {
    ObstructionSample s;
    s.parameter = a;
    const double v1 = cuberoot_integral(-2.0 / 3.0, 2.0 / 3.0,
        [a](double t) { return std::pow(1.0 - a * t, -1.0 / 3.0); });
    const double v2 = cuberoot_integral(-2.0 / 3.0, -1.0 / 3.0,
        [a](double t) { return std::pow(1.0 - a * t, 2.0 / 3.0); });
    s.lhs = -(a * v1 + v2);
    s.rhs_factor = cuberoot_integral(-1.0 / 3.0, -2.0 / 3.0,
        [a](double t) { return std::pow(1.0 - a * t, -2.0 / 3.0); });
    s.obstructed = s.lhs < 0.0 && s.rhs_factor > 0.0;
    return s;
}

ObstructionSample sample_case_neg(double a) {
    // a < 0.  For -3/2 <= a use the ell identity (claim 1); below -2/3 the
    // ell' identity (claim 2) applies; the overlap covers everything.
    ObstructionSample s;
    s.parameter = a;
    const double b13 = quad::beta(1.0 / 3.0, 2.0 / 3.0);
    if (a >= -1.5) {
        const double t1 = cuberoot_integral(-2.0 / 3.0, 2.0 / 3.0,
            [a](double t) { return std::pow(1.0 - a * t, -1.0 / 3.0); });
        const double t2 = cuberoot_integral(-2.0 / 3.0, -1.0 / 3.0,
            [a](double t) { return std::pow(1.0 - a * t, 2.0 / 3.0); });
        s.lhs = -(a * t1 + t2);
        s.rhs_factor = cuberoot_integral(-1.0 / 3.0, -2.0 / 3.0,
            [a](double t) { return std::pow(1.0 - a * t, -2.0 / 3.0); });
        s.bound = -(2.0 * a / 3.0 + 1.0) * b13;
        s.obstructed = s.lhs < 0.0 && s.rhs_factor > 0.0 && s.lhs <= s.bound + 1e-9;
    } else {
        const double u1 = cuberoot_integral(-2.0 / 3.0, -1.0 / 3.0,
            [a](double t) { return std::pow(t - a, 2.0 / 3.0); });
        const double u2 = cuberoot_integral(-2.0 / 3.0, 2.0 / 3.0,
            [a](double t) { return std::pow(t - a, -1.0 / 3.0); });
        s.lhs = -u1 + u2;
        s.rhs_factor = cuberoot_integral(-1.0 / 3.0, -2.0 / 3.0,
            [a](double t) { return std::pow(t - a, -2.0 / 3.0); });
        s.bound = std::pow(-a, -1.0 / 3.0) * (a + 2.0 / 3.0) * b13;
        s.obstructed = s.lhs < 0.0 && s.rhs_factor > 0.0 && s.lhs <= s.bound + 1e-9;
    }
    return s;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    return g;
}

} // namespace

ObstructionReport nonexistence_report(NonexistenceCase which, int grid_points) {
    if (grid_points < 2) throw ValidationError("nonexistence_report: grid too small");
    ObstructionReport rep;
    rep.which = which;
    switch (which) {
        case NonexistenceCase::genus1_alt: {
            // eta = c' dz/(z w) on w^2 = z(z^2-1):
            //   -int sqrt(t/(1-t^2)) dt = c^2 int sqrt((1-t^2)/t) dt.
            const double lhs_int = integrate_checked(AlgebraicIntegrand{
                0.5, -0.5, [](double t) { return std::pow(1.0 + t, -0.5); }, 0.0, 1.0});
            const double rhs_int = integrate_checked(AlgebraicIntegrand{
                -0.5, 0.5, [](double t) { return std::pow(1.0 + t, 0.5); }, 0.0, 1.0});
            for (double cc : log_grid(1e-3, 1e3, grid_points)) {
                ObstructionSample s;
                s.parameter = cc;
                s.lhs = -lhs_int;
                s.rhs_factor = cc * cc * rhs_int;
                s.obstructed = s.lhs < 0.0 && s.rhs_factor > 0.0;
                rep.samples.push_back(s);
            }
            break;
        }
        case NonexistenceCase::even_alt_a_gt_1:
            for (double d : log_grid(1e-3, 1e3, grid_points))
                rep.samples.push_back(sample_case_i(1.0 + d));
            break;
        case NonexistenceCase::even_alt_0_lt_a_lt_1:
            for (double d : log_grid(1e-3, 1.0 - 1e-3, grid_points))
                rep.samples.push_back(sample_case_ii(d));
            break;
        case NonexistenceCase::even_alt_a_neg:
            for (double d : log_grid(1e-3, 1e3, grid_points))
                rep.samples.push_back(sample_case_neg(-d));
            rep.claim1_lo = -1.5; rep.claim1_hi = 0.0;
            rep.claim2_lo = -std::numeric_limits<double>::infinity();
            rep.claim2_hi = -2.0 / 3.0;
            break;
    }
    rep.all_obstructed = !rep.samples.empty() &&
                         std::all_of(rep.samples.begin(), rep.samples.end(),
                                     [](const ObstructionSample& s) { return s.obstructed; });
    return rep;
}

// ------------------------------------------------------------------- weber

namespace {

struct WeberEval {
    Eigen::VectorXd residual;  // stacked Re/Im of the cycle defects
    double worst = 0.0;
};

WeberEval weber_residual(int gamma, double c, const std::vector<double>& avec) {
    const auto fam = families::make_weber_family(gamma, c, avec);
    const curve::ExprSum g2eta = fam.data.g * (fam.data.g * fam.data.eta);
    const std::array<curve::ExprSum, 2> ex{fam.data.eta, g2eta};
    WeberEval ev;
    ev.residual.resize(2 * int(fam.generators.size()));
    int row = 0;
    for (const auto& cyc : fam.generators) {
        const auto vals = integrator::integrate_many(
            std::span<const curve::ExprSum>(ex.data(), 2), cyc, fam.curve, 1e-11);
        const curve::Complex d = vals[0] - std::conj(vals[1]);
        ev.residual(row++) = d.real();
        ev.residual(row++) = d.imag();
        ev.worst = std::max(ev.worst, std::abs(d));
    }
    return ev;
}

} // namespace

WeberResult weber_solve(int gamma, double tol, std::optional<WeberInitialGuess> init) {
    if (gamma < 1) throw ValidationError("weber_solve: gamma must be >= 1");

    // Unknowns: x = (log c^2, log(a_2 - 1), log(a_3 - a_2), ...).
    const int n = 2 * gamma;
    Eigen::VectorXd x(n);
    x(0) = std::log(4.0);
    for (int i = 1; i < n; ++i) x(i) = std::log(0.5);
    if (init) {
        if (int(init->a.size()) != 2 * gamma - 1 || !(init->c > 0.0))
            throw ValidationError("weber_solve: malformed initial guess");
        x(0) = 2.0 * std::log(init->c);
        double prev = 1.0;
        for (int i = 1; i < n; ++i) {
            if (!(init->a[i - 1] > prev))
                throw ValidationError("weber_solve: initial guess not ordered");
            x(i) = std::log(init->a[i - 1] - prev);
            prev = init->a[i - 1];
        }
    }

    auto unpack = [&](const Eigen::VectorXd& xv, double& c, std::vector<double>& avec) {
        c = std::sqrt(std::exp(xv(0)));
        avec.assign(2 * gamma - 1, 0.0);
        double cur = 1.0;
        for (int i = 1; i < n; ++i) {
            cur += std::exp(xv(i));
            avec[i - 1] = cur;
        }
    };

    WeberResult out;
    double c;
    std::vector<double> avec;
    unpack(x, c, avec);
    WeberEval ev = weber_residual(gamma, c, avec);

    for (int iter = 0; iter < 60; ++iter) {
        out.iterations = iter;
        if (ev.worst < tol) {
            out.converged = true;
            break;
        }
        // forward-difference Jacobian
        const int m = int(ev.residual.size());
        Eigen::MatrixXd J(m, n);
        const double h = 1e-6;
        for (int j = 0; j < n; ++j) {
            Eigen::VectorXd xp = x;
            xp(j) += h;
            double cp; std::vector<double> ap;
            unpack(xp, cp, ap);
            J.col(j) = (weber_residual(gamma, cp, ap).residual - ev.residual) / h;
        }
        const Eigen::VectorXd step =
            (J.transpose() * J + 1e-12 * Eigen::MatrixXd::Identity(n, n))
                .ldlt()
                .solve(-J.transpose() * ev.residual);
        // damping by halving
        double lambda = 1.0;
        bool improved = false;
        for (int half = 0; half < 25; ++half) {
            Eigen::VectorXd xn = x + lambda * step;
            double cn; std::vector<double> an;
            unpack(xn, cn, an);
            WeberEval en = weber_residual(gamma, cn, an);
            if (en.residual.norm() < ev.residual.norm() * (1.0 - 1e-6) ||
                en.worst < tol) {
                x = xn;
                ev = std::move(en);
                improved = true;
                break;
            }
            lambda /= 2.0;
        }
        if (!improved) break;
    }
    unpack(x, c, avec);
    out.c = c;
    out.a = avec;
    out.residual = ev.worst;
    if (ev.worst < tol) out.converged = true;
    out.message = out.converged ? "converged"
                                : "no convergence within the iteration budget";
    return out;
}

} // namespace msforge::periods
