#include "msforge/quad.hpp"
#include "msforge/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace msforge::quad {

namespace {

constexpr double kPi = 3.14159265358979323846;

// One tanh-sinh pass at step size hstep.  Nodes are u = j*hstep,
// t = (1+tanh((pi/2) sinh u))/2.  The distances to both endpoints are
// computed through sigmoids so that t^alpha and (1-t)^beta stay accurate
// when t underflows toward an endpoint.
double tanh_sinh_pass(const AlgebraicIntegrand& f, double hstep) {
    double acc = 0.0;
    int tail = 0;
    for (int j = 0;; ++j) {
        const double u = j * hstep;
        if (u > 6.5) break;
        const double s = 0.5 * kPi * std::sinh(u);
        // d0 = (1+tanh s)/2, d1 = (1-tanh s)/2, both as sigmoids
        const double d_pos = 1.0 / (1.0 + std::exp(2.0 * s));   // distance to 1 for +u
        const double d_neg = 1.0 / (1.0 + std::exp(-2.0 * s));  // distance to 0 for +u
        const double dxdu = 0.5 * kPi * std::cosh(u) / (std::cosh(s) * std::cosh(s));
        const double wgt = 0.5 * dxdu * hstep;  // dt = dx/2

        double term = 0.0;
        {   // node at +u : t close to 1
            const double ln0 = std::log(d_neg), ln1 = std::log(d_pos);
            const double alg = std::exp(f.alpha * ln0 + f.beta * ln1);
            if (alg != 0.0 && std::isfinite(alg)) term += alg * f.h(d_neg);
        }
        if (j > 0) {  // mirror node at -u : t close to 0
            const double ln0 = std::log(d_pos), ln1 = std::log(d_neg);
            const double alg = std::exp(f.alpha * ln0 + f.beta * ln1);
            if (alg != 0.0 && std::isfinite(alg)) term += alg * f.h(d_pos);
        }
        acc += term * wgt;
        if (j > 4 && std::abs(term * wgt) < 1e-300) break;
        if (j > 4 && std::abs(term * wgt) < 1e-18 * std::abs(acc)) {
            if (++tail > 3) break;
        } else {
            tail = 0;
        }
    }
    return acc;
}

} // namespace

QuadResult integrate(const AlgebraicIntegrand& f, double tol) {
    if (!(f.alpha > -1.0) || !(f.beta > -1.0))
        throw ValidationError("quad::integrate: endpoint exponents must exceed -1");
    if (!(tol > 0.0))
        throw ValidationError("quad::integrate: tolerance must be positive");
    if (!(f.hi > f.lo))
        throw ValidationError("quad::integrate: empty or reversed interval");

    const double scale = std::pow(f.hi - f.lo, f.alpha + f.beta + 1.0);

    double prev = tanh_sinh_pass(f, 1.0);
    double diff_prev = std::numeric_limits<double>::infinity();
    QuadResult out;
    for (int level = 1; level <= 12; ++level) {
        const double cur = tanh_sinh_pass(f, std::ldexp(1.0, -level));
        const double diff = std::abs(cur - prev);
        out.value = scale * cur;
        // the previous-level difference dominates the true error of `cur`
        // for this doubling scheme; keep it as the reported estimate
        out.error = scale * std::max(diff_prev == std::numeric_limits<double>::infinity()
                                         ? diff : std::min(diff_prev, 16.0 * diff),
                                     diff) +
                    1e-14 * (1.0 + std::abs(out.value));
        out.levels = level;
        if (diff <= 0.1 * tol * (1.0 + std::abs(cur)) &&
            diff_prev <= tol * (1.0 + std::abs(cur)))
            return out;
        diff_prev = diff;
        prev = cur;
    }
    if (diff_prev <= tol * (1.0 + std::abs(prev))) return out;
    throw NumericError("quad::integrate: no convergence within 12 level doublings");
}

double beta(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0))
        throw ValidationError("quad::beta: arguments must be positive");
    return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

std::vector<std::pair<double, double>> gauss_jacobi(int n, double alpha, double beta_) {
    if (n < 1) throw ValidationError("quad::gauss_jacobi: need n >= 1");
    if (!(alpha > -1.0) || !(beta_ > -1.0))
        throw ValidationError("quad::gauss_jacobi: exponents must exceed -1");

    // Jacobi weight on [-1,1] is (1-x)^A (1+x)^B.  Our t = (1+x)/2, so the
    // exponent at t=0 (x=-1) is B = alpha and at t=1 (x=+1) is A = beta_.
    const double A = beta_, B = alpha;

    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        const double d = 2.0 * k + A + B;
        double ak;
        if (k == 0)
            ak = (B - A) / (A + B + 2.0);
        else
            ak = (B * B - A * A) / (d * (d + 2.0));
        J(k, k) = ak;
        if (k + 1 < n) {
            const double kk = k + 1.0;
            double bk;
            if (k == 0)
                bk = 4.0 * (A + 1.0) * (B + 1.0) /
                     ((A + B + 2.0) * (A + B + 2.0) * (A + B + 3.0));
            else
                bk = 4.0 * kk * (kk + A) * (kk + B) * (kk + A + B) /
                     ((d + 2.0) * (d + 2.0) * (d + 1.0) * (d + 3.0));
            J(k, k + 1) = J(k + 1, k) = std::sqrt(bk);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    const double mu0 = std::pow(2.0, A + B + 1.0) * beta(A + 1.0, B + 1.0);

    std::vector<std::pair<double, double>> rule(n);
    for (int i = 0; i < n; ++i) {
        const double x = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        // map x in [-1,1] to t in (0,1); absorb the 2^-(A+B+1) Jacobian
        rule[i] = {(1.0 + x) / 2.0, mu0 * v0 * v0 * std::pow(2.0, -(A + B + 1.0))};
    }
    return rule;
}

double integrate_gauss_jacobi(const AlgebraicIntegrand& f, int n) {
    const auto rule = gauss_jacobi(n, f.alpha, f.beta);
    double acc = 0.0;
    for (const auto& [t, w] : rule) acc += w * f.h(t);
    return acc * std::pow(f.hi - f.lo, f.alpha + f.beta + 1.0);
}

std::pair<double, double> period_defect_bounds(int k, double a) {
    if (k < 2 || k % 2 != 0)
        throw ValidationError("period_defect_bounds: k must be even and >= 2");
    if (!(a > 1.0))
        throw ValidationError("period_defect_bounds: need a > 1");

    const double kp1 = k + 1.0;
    const double B1 = beta((k - 1.0) / kp1, (k + 2.0) / kp1);  // A1 sandwich
    const double B3 = beta(2.0 / kp1, (2.0 * k + 1.0) / kp1);  // A3 sandwich
    const double B2 = beta((k - 1.0) / kp1, 1.0 / kp1);        // A2 sandwich

    const double a1_lo = std::pow(a, -1.0 / kp1) * B1;
    const double a1_hi = std::pow(a - 1.0, -1.0 / kp1) * B1;
    const double a3_lo = std::pow(a, -k / kp1) * B3;
    const double a3_hi = std::pow(a - 1.0, -k / kp1) * B3;
    const double a2_lo = std::pow(a - 1.0, k / kp1) * B2;
    const double a2_hi = std::pow(a, k / kp1) * B2;

    const double amp = 2.0 * std::pow(a, (k - 2.0) / kp1);
    const double lower = k * a1_lo + amp * a3_lo - a2_hi;
    const double upper = k * a1_hi + amp * a3_hi - a2_lo;
    return {lower, upper};
}

} // namespace msforge::quad
