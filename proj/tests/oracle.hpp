#ifndef MSFORGE_TESTS_ORACLE_HPP
#define MSFORGE_TESTS_ORACLE_HPP

// Test-only quadrature oracle, independent of quad::integrate.
//
// Integrates t^alpha (1-t)^beta h(t) over (0,1) by splitting at 1/2 and
// applying a power substitution on each half (t = s^p on the left,
// 1-t = s^q on the right) that turns the algebraic endpoint factor into a
// polynomial one, then composite Simpson.  p and q must be chosen so that
// alpha*p + p - 1 and beta*q + q - 1 are nonnegative integers (p = q = 2
// for half-integer exponents, the family denominator otherwise).

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      long panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (long i = 1; i < panels; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

inline double integrate(double alpha, double beta,
                        const std::function<double(double)>& h, int p, int q,
                        long panels = 1 << 20) {
    {
        const double ex_l = alpha * p + p - 1.0;
        const double ex_r = beta * q + q - 1.0;
        if (std::abs(ex_l - std::lround(ex_l)) > 1e-9 || ex_l < -1e-9 ||
            std::abs(ex_r - std::lround(ex_r)) > 1e-9 || ex_r < -1e-9)
            throw std::invalid_argument("oracle: substitution powers do not "
                                        "clear the endpoint exponents");
    }
    // left half: t = s^p, ds-integrand p s^(alpha p + p - 1) (1-t)^beta h(t)
    const double sl = std::pow(0.5, 1.0 / p);
    const double left = simpson(
        [&](double s) {
            const double t = std::pow(s, p);
            return p * std::pow(s, alpha * p + p - 1.0) * std::pow(1.0 - t, beta) *
                   h(t);
        },
        0.0, sl, panels);
    // right half: 1 - t = s^q
    const double sr = std::pow(0.5, 1.0 / q);
    const double right = simpson(
        [&](double s) {
            const double t = 1.0 - std::pow(s, q);
            return q * std::pow(s, beta * q + q - 1.0) * std::pow(t, alpha) * h(t);
        },
        0.0, sr, panels);
    return left + right;
}

} // namespace oracle

#endif
