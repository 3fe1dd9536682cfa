#ifndef MSFORGE_QUAD_HPP
#define MSFORGE_QUAD_HPP

#include <functional>
#include <utility>
#include <vector>

namespace msforge::quad {

// Integrand t^alpha * (1-t)^beta * h(t) on the unit interval, where h is
// smooth on (0,1) and bounded on closed subintervals.  An integral over
// (lo,hi) is mapped affinely onto (0,1); the Jacobian factor
// (hi-lo)^(alpha+beta+1) is applied by integrate().  h always receives the
// unit-interval coordinate.
struct AlgebraicIntegrand {
    double alpha = 0.0;   // exponent of t at the left endpoint, > -1
    double beta = 0.0;    // exponent of (1-t) at the right endpoint, > -1
    std::function<double(double)> h = [](double) { return 1.0; };
    double lo = 0.0;
    double hi = 1.0;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   // a-posteriori estimate, conservative
    int levels = 0;       // tanh-sinh halvings actually used
};

// Tanh-sinh quadrature.  Absorbs the algebraic endpoint singularities for
// any alpha, beta > -1 without exponent-specific nodes.
QuadResult integrate(const AlgebraicIntegrand& f, double tol = 1e-12);

// Euler beta function B(x,y), full double precision via log-gamma.
double beta(double x, double y);

// Gauss-Jacobi rule for int_0^1 t^alpha (1-t)^beta h(t) dt with n nodes.
// Returns pairs (t_i, weight_i); the algebraic factors are absorbed into
// the weights.  Cross-check path for integrate().
std::vector<std::pair<double, double>> gauss_jacobi(int n, double alpha, double beta);
double integrate_gauss_jacobi(const AlgebraicIntegrand& f, int n);

// Sandwich bounds on the even-family period defect
//   F(a) = k*A1 + 2*a^((k-2)/(k+1))*A3 - A2
// built from 1/a <= 1/(a-t) <= 1/(a-1) and a-1 <= a-t <= a.
// Requires k >= 2 even and a > 1; returns (lower, upper) with lower <= upper.
std::pair<double, double> period_defect_bounds(int k, double a);

} // namespace msforge::quad

#endif
