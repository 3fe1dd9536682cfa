#ifndef MSFORGE_PERIODS_HPP
#define MSFORGE_PERIODS_HPP

#include <optional>
#include <string>
#include <vector>

namespace msforge::periods {

enum class FamilyId { genus_family, even_family, weber_family, custom };

struct FamilySpec {
    FamilyId id = FamilyId::custom;
    int gamma = 0;                 // genus family / weber family parameter
    int k = 0;                     // even family parameter
    std::optional<double> c;       // solved constant(s)
    std::optional<double> a;
    std::vector<double> weber_a;   // a_2..a_{2 gamma} for the weber family
    double closure_residual = 0.0;
};

struct ValueWithError {
    double value = 0.0;
    double error = 0.0;
};

// Named period integrals: (A_gamma, B_gamma) for the genus family,
// (A1, A2, A3) for the even family.  All strictly positive.
struct PeriodIntegrals {
    std::vector<std::pair<std::string, ValueWithError>> values;
    const ValueWithError& get(const std::string& name) const;
};

PeriodIntegrals genus_family_integrals(int gamma);

// c = sqrt(A_gamma / B_gamma); afterwards the period1 residual on the
// generator cycle, verified by direct cycle integration, is < 1e-8.
double solve_c(int gamma);

PeriodIntegrals even_family_integrals(int k, double a);

// F(a) = k A1 + 2 a^((k-2)/(k+1)) A3 - A2.
double even_family_defect(int k, double a);

struct SolveAResult {
    double a = 0.0;
    double c = 0.0;        // a^((k-2)/(2k+2))
    double defect = 0.0;   // F(a) at the solution
    double bracket_lo = 0.0, bracket_hi = 0.0;
};
SolveAResult solve_a(int k, double tol = 1e-10);

// | oint_{l2} eta - conj(oint_{l2} g^2 eta) | by direct quadrature of the
// two real integral formulas; holds for every a > 1.
double ell2_closure_check(int k, double a);

enum class NonexistenceCase {
    genus1_alt,            // genus-1 curve with eta = c' dz/(z w)
    even_alt_a_gt_1,       // w^3 = ((z-1)(z-a)/z)^2 data, a > 1
    even_alt_0_lt_a_lt_1,  // same data, 0 < a < 1
    even_alt_a_neg         // same data, a < 0 (two bracketing claims)
};

struct ObstructionSample {
    double parameter = 0.0;
    double lhs = 0.0;         // the side that must be negative
    double rhs_factor = 0.0;  // positive factor multiplying c^2
    double bound = 0.0;       // analytic beta-function bound on lhs (when used)
    bool obstructed = false;
};

struct ObstructionReport {
    NonexistenceCase which;
    std::vector<ObstructionSample> samples;
    bool all_obstructed = false;
    // for the a<0 case: the two claim intervals and their overlap
    double claim1_lo = 0.0, claim1_hi = 0.0;
    double claim2_lo = 0.0, claim2_hi = 0.0;
};

ObstructionReport nonexistence_report(NonexistenceCase which, int grid_points = 64);

struct WeberResult {
    bool converged = false;
    double c = 0.0;
    std::vector<double> a;     // a_2 .. a_{2 gamma}, with a_1 = 1 implied
    double residual = 0.0;     // worst generator-cycle period residual
    int iterations = 0;
    std::string message;
};

struct WeberInitialGuess {
    double c = 2.0;
    std::vector<double> a;   // a_2 .. a_{2 gamma}
};

// Damped Gauss-Newton on the cycle-period residual vector.  gamma = 1 must
// converge; higher genus is best effort and reports non-convergence instead
// of throwing.
WeberResult weber_solve(int gamma, double tol = 1e-10,
                        std::optional<WeberInitialGuess> init = std::nullopt);

} // namespace msforge::periods

#endif
