#ifndef MSFORGE_CURVE_HPP
#define MSFORGE_CURVE_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace msforge::curve {

using Complex = std::complex<double>;

// Extended complex number: a finite value or the point at infinity.
struct XComplex {
    Complex value{0.0, 0.0};
    bool infinite = false;

    static XComplex inf() { return XComplex{Complex{}, true}; }
    static XComplex at(Complex v) { return XComplex{v, false}; }
    bool same_as(const XComplex& o, double tol = 1e-12) const {
        if (infinite || o.infinite) return infinite == o.infinite;
        return std::abs(value - o.value) <= tol;
    }
};

struct Factor {
    Complex root;     // finite root of the defining polynomial part
    int exponent;     // nonzero; negative exponents give poles of w^N
};

struct CurvePoint {
    XComplex z;
    XComplex w;
    bool is_puncture = false;
};

// Compact superelliptic Riemann surface  w^N = prod_i (z - r_i)^{e_i}
// with marked punctures.  Immutable after construction.
class SuperellipticCurve {
public:
    SuperellipticCurve(int sheets, std::vector<Factor> factors,
                       std::vector<CurvePoint> punctures = {});

    int sheets() const { return sheets_; }
    const std::vector<Factor>& factors() const { return factors_; }
    const std::vector<CurvePoint>& punctures() const { return punctures_; }

    // Exponent of (z - z0) in F, zero when z0 is not a root; the exponent
    // at infinity is -sum(e_i) by degree bookkeeping.
    int exponent_at(Complex z0) const;
    int exponent_at_infinity() const;

    // Ramification multiplicity of the covering z at the fiber over z0:
    // N / gcd(e, N).  Equals 1 at unbranched fibers.
    int ramification_at(Complex z0) const;
    int ramification_at_infinity() const;

    // Genus of the smooth compactification by Riemann-Hurwitz.  Throws
    // ValidationError at construction if it is not a nonnegative integer.
    int genus() const { return genus_; }

    // All finite branch points (roots with exponent not divisible by N),
    // plus infinity when branched there.
    std::vector<Complex> finite_branch_points() const;
    bool branched_at_infinity() const;
    // Finite special points: all roots (branch or not); used for path clearance.
    std::vector<Complex> finite_special_points() const;

    Complex F(Complex z) const;          // prod (z-r_i)^{e_i}
    Complex dlogF(Complex z) const;      // sum e_i/(z-r_i)
    std::vector<Complex> fiber_w(Complex z) const;  // the N values of w over z

    // |w^N - F(z)| <= tol*(1+|w|^N), the on-curve test for finite points.
    bool contains(Complex z, Complex w, double tol = 1e-10) const;

private:
    int sheets_;
    std::vector<Factor> factors_;
    std::vector<CurvePoint> punctures_;
    int genus_;
};

// A single monomial  coeff * prod_i (z - r_i)^{e_i} * w^m  [ * dz ].
// Products and quotients of monomials are monomials; general expressions
// are finite sums (ExprSum).
struct MonomialExpr {
    Complex coeff{1.0, 0.0};
    std::vector<std::pair<Complex, int>> z_factors;  // (root, exponent)
    int w_power = 0;
    bool differential = false;  // carries dz

    MonomialExpr& mul_factor(Complex root, int e);
    MonomialExpr& mul_w(int m) { w_power += m; return *this; }
    MonomialExpr& mul_coeff(Complex c) { coeff *= c; return *this; }
    MonomialExpr& mul_dz() { differential = true; return *this; }

    // Value of the monomial at a finite curve point (w on the chosen sheet).
    // For differentials this is the coefficient of dz.
    Complex eval(Complex z, Complex w) const;
    // Logarithmic z-derivative d(log M)/dz at (z,w), using dw/dz = w*dlogF/N.
    Complex dlog_dz(Complex z, Complex w, const SuperellipticCurve& c) const;
};

MonomialExpr operator*(const MonomialExpr& x, const MonomialExpr& y);

using ExprSum = std::vector<MonomialExpr>;

ExprSum operator*(const ExprSum& x, const ExprSum& y);
ExprSum operator+(const ExprSum& x, const ExprSum& y);
ExprSum operator-(const ExprSum& x, const ExprSum& y);
ExprSum scaled(const ExprSum& x, Complex c);

Complex eval(const ExprSum& e, Complex z, Complex w);
// d/dz of the (coefficient of dz of the) expression, by the product rule.
Complex eval_dz_derivative(const ExprSum& e, Complex z, Complex w,
                           const SuperellipticCurve& c);

// Order of vanishing of the expression at the fiber over z0 (or infinity),
// in the local uniformizing coordinate.  Negative = pole order.  Exact
// integer arithmetic on the divisor data; ties between monomials of equal
// leading order are resolved through a numeric series probe (cancellation).
int local_order(const ExprSum& expr, const XComplex& z0, const SuperellipticCurve& c);

// Truncated Laurent expansion of expr at a marked point in the local
// coordinate t = (z - z0)^(1/m) continued around the fiber (t = z^(-1/m)
// at infinity).  coefficients[i] multiplies t^(leading_order + i).
struct LaurentSeries {
    int leading_order = 0;
    std::vector<Complex> coefficients;
    Complex residue{0.0, 0.0};  // coefficient of t^-1, differentials include dz/dt
};
LaurentSeries puncture_series(const ExprSum& expr, const XComplex& z0,
                              const SuperellipticCurve& c, int terms);

// JSON (de)serialization of the curve spec; schema documented in README.
SuperellipticCurve curve_from_json(const std::string& json_text);
std::string curve_to_json(const SuperellipticCurve& c);

} // namespace msforge::curve

#endif
