#include "msforge/curve.hpp"
#include "msforge/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace msforge::curve {

namespace {

int positive_gcd(int a, int b) {
    return std::gcd(std::abs(a), std::abs(b));
}

// Nearest N-th root of F(z) to a predictor value.
Complex snap_root(const SuperellipticCurve& c, Complex z, Complex pred) {
    Complex best{};
    double bestd = std::numeric_limits<double>::infinity();
    for (const Complex& r : c.fiber_w(z)) {
        const double d = std::abs(r - pred);
        if (d < bestd) { bestd = d; best = r; }
    }
    return best;
}

// Small-step continuation of w along a circle around `center`, used by the
// series probe.  Returns the w values at the sample angles.
std::vector<Complex> continue_on_circle(const SuperellipticCurve& c, Complex center,
                                        double radius, int samples, int turns,
                                        Complex w_start) {
    std::vector<Complex> ws(samples);
    Complex w = w_start;
    const int substeps = 4;
    double th_prev = 0.0;
    for (int j = 0; j < samples; ++j) {
        const double th = 2.0 * M_PI * turns * static_cast<double>(j) / samples;
        for (int s = 1; s <= substeps; ++s) {
            const double a0 = th_prev + (th - th_prev) * (s - 1) / substeps;
            const double a1 = th_prev + (th - th_prev) * s / substeps;
            const Complex z0 = center + std::polar(radius, a0);
            const Complex z1 = center + std::polar(radius, a1);
            const Complex pred = w * std::exp(c.dlogF((z0 + z1) / 2.0) *
                                              (z1 - z0) / double(c.sheets()));
            w = snap_root(c, z1, pred);
        }
        th_prev = th;
        ws[j] = w;
    }
    return ws;
}

} // namespace

// ---------------------------------------------------------------- curve

SuperellipticCurve::SuperellipticCurve(int sheets, std::vector<Factor> factors,
                                       std::vector<CurvePoint> punctures)
    : sheets_(sheets), factors_(std::move(factors)), punctures_(std::move(punctures)) {
    if (sheets_ < 1)
        throw ValidationError("curve: sheet count must be >= 1");
    for (const auto& f : factors_)
        if (f.exponent == 0)
            throw ValidationError("curve: factor exponents must be nonzero");
    for (size_t i = 0; i < factors_.size(); ++i)
        for (size_t j = i + 1; j < factors_.size(); ++j)
            if (std::abs(factors_[i].root - factors_[j].root) < 1e-12)
                throw ValidationError("curve: factor roots must be distinct");

    // Irreducibility: gcd of N with every exponent must be 1, otherwise the
    // cover splits into components.
    int g = sheets_;
    for (const auto& f : factors_) g = positive_gcd(g, f.exponent);
    if (!factors_.empty() && g != 1)
        throw ValidationError("curve: reducible cover (non-coprime exponents and sheets)");

    // Riemann-Hurwitz: 2 - 2*genus = 2N - sum over fibers of (N - d).
    long ram = 0;
    for (const auto& f : factors_) {
        const int d = positive_gcd(f.exponent, sheets_);
        if (d != sheets_) ram += sheets_ - d;
    }
    {
        const int einf = exponent_at_infinity();
        const int d = positive_gcd(einf == 0 ? sheets_ : einf, sheets_);
        if (d != sheets_) ram += sheets_ - d;
    }
    const long twog = ram - 2L * sheets_ + 2L;
    if (twog % 2 != 0 || twog < 0)
        throw ValidationError("curve: Riemann-Hurwitz genus is not a nonnegative integer");
    genus_ = static_cast<int>(twog / 2);
}

int SuperellipticCurve::exponent_at(Complex z0) const {
    for (const auto& f : factors_)
        if (std::abs(f.root - z0) < 1e-10 * (1.0 + std::abs(z0))) return f.exponent;
    return 0;
}

int SuperellipticCurve::exponent_at_infinity() const {
    int s = 0;
    for (const auto& f : factors_) s += f.exponent;
    return -s;
}

int SuperellipticCurve::ramification_at(Complex z0) const {
    const int e = exponent_at(z0);
    if (e == 0) return 1;
    return sheets_ / positive_gcd(e, sheets_);
}

int SuperellipticCurve::ramification_at_infinity() const {
    const int e = exponent_at_infinity();
    if (e == 0) return 1;
    return sheets_ / positive_gcd(e, sheets_);
}

std::vector<Complex> SuperellipticCurve::finite_branch_points() const {
    std::vector<Complex> out;
    for (const auto& f : factors_)
        if (positive_gcd(f.exponent, sheets_) != sheets_) out.push_back(f.root);
    return out;
}

bool SuperellipticCurve::branched_at_infinity() const {
    const int e = exponent_at_infinity();
    return e != 0 && positive_gcd(e, sheets_) != sheets_;
}

std::vector<Complex> SuperellipticCurve::finite_special_points() const {
    std::vector<Complex> out;
    out.reserve(factors_.size());
    for (const auto& f : factors_) out.push_back(f.root);
    return out;
}

Complex SuperellipticCurve::F(Complex z) const {
    Complex r{1.0, 0.0};
    for (const auto& f : factors_) {
        const Complex b = z - f.root;
        r *= std::pow(b, f.exponent);
    }
    return r;
}

Complex SuperellipticCurve::dlogF(Complex z) const {
    Complex s{0.0, 0.0};
    for (const auto& f : factors_) s += double(f.exponent) / (z - f.root);
    return s;
}

std::vector<Complex> SuperellipticCurve::fiber_w(Complex z) const {
    const Complex Fz = F(z);
    const double mag = std::pow(std::abs(Fz), 1.0 / sheets_);
    const double ph = std::arg(Fz) / sheets_;
    std::vector<Complex> out(sheets_);
    for (int s = 0; s < sheets_; ++s)
        out[s] = std::polar(mag, ph + 2.0 * M_PI * s / sheets_);
    return out;
}

bool SuperellipticCurve::contains(Complex z, Complex w, double tol) const {
    const Complex lhs = std::pow(w, sheets_);
    const Complex rhs = F(z);
    return std::abs(lhs - rhs) <= tol * (1.0 + std::abs(lhs));
}

// ---------------------------------------------------------------- monomials

MonomialExpr& MonomialExpr::mul_factor(Complex root, int e) {
    for (auto& [r, ex] : z_factors) {
        if (std::abs(r - root) < 1e-12) { ex += e; return *this; }
    }
    z_factors.emplace_back(root, e);
    return *this;
}

Complex MonomialExpr::eval(Complex z, Complex w) const {
    Complex v = coeff;
    for (const auto& [r, e] : z_factors) v *= std::pow(z - r, e);
    if (w_power != 0) v *= std::pow(w, w_power);
    return v;
}

Complex MonomialExpr::dlog_dz(Complex z, Complex w, const SuperellipticCurve& c) const {
    (void)w;
    Complex s{0.0, 0.0};
    for (const auto& [r, e] : z_factors) s += double(e) / (z - r);
    if (w_power != 0) s += double(w_power) * c.dlogF(z) / double(c.sheets());
    return s;
}

MonomialExpr operator*(const MonomialExpr& x, const MonomialExpr& y) {
    MonomialExpr out = x;
    out.coeff *= y.coeff;
    for (const auto& [r, e] : y.z_factors) out.mul_factor(r, e);
    out.w_power += y.w_power;
    if (y.differential) {
        if (out.differential)
            throw ValidationError("MonomialExpr: product of two differentials");
        out.differential = true;
    }
    return out;
}

ExprSum operator*(const ExprSum& x, const ExprSum& y) {
    ExprSum out;
    out.reserve(x.size() * y.size());
    for (const auto& a : x)
        for (const auto& b : y) out.push_back(a * b);
    return out;
}

ExprSum operator+(const ExprSum& x, const ExprSum& y) {
    ExprSum out = x;
    out.insert(out.end(), y.begin(), y.end());
    return out;
}

ExprSum operator-(const ExprSum& x, const ExprSum& y) {
    ExprSum out = x;
    for (auto m : y) { m.coeff = -m.coeff; out.push_back(m); }
    return out;
}

ExprSum scaled(const ExprSum& x, Complex c) {
    ExprSum out = x;
    for (auto& m : out) m.coeff *= c;
    return out;
}

Complex eval(const ExprSum& e, Complex z, Complex w) {
    Complex v{0.0, 0.0};
    for (const auto& m : e) v += m.eval(z, w);
    return v;
}

Complex eval_dz_derivative(const ExprSum& e, Complex z, Complex w,
                           const SuperellipticCurve& c) {
    Complex v{0.0, 0.0};
    for (const auto& m : e) v += m.eval(z, w) * m.dlog_dz(z, w, c);
    return v;
}

// ---------------------------------------------------------------- local order

namespace {

struct FiberData {
    bool at_inf = false;
    Complex z0{};
    int e = 0;   // exponent of F at the fiber
    int m = 1;   // ramification multiplicity
};

FiberData fiber_data(const XComplex& z0, const SuperellipticCurve& c) {
    FiberData fd;
    if (z0.infinite) {
        fd.at_inf = true;
        fd.e = c.exponent_at_infinity();
        fd.m = c.ramification_at_infinity();
    } else {
        fd.z0 = z0.value;
        fd.e = c.exponent_at(z0.value);
        fd.m = c.ramification_at(z0.value);
    }
    return fd;
}

int monomial_order(const MonomialExpr& mono, const FiberData& fd,
                   const SuperellipticCurve& c) {
    const int N = c.sheets();
    long ord = 0;
    if (fd.at_inf) {
        for (const auto& [r, e] : mono.z_factors) { (void)r; ord -= long(e) * fd.m; }
        ord += long(mono.w_power) * fd.e * fd.m / N;
        if (mono.differential) ord += -long(fd.m) - 1;
    } else {
        for (const auto& [r, e] : mono.z_factors)
            if (std::abs(r - fd.z0) < 1e-10 * (1.0 + std::abs(fd.z0)))
                ord += long(e) * fd.m;
        ord += long(mono.w_power) * fd.e * fd.m / N;
        if (mono.differential) ord += fd.m - 1;
    }
    return static_cast<int>(ord);
}

} // namespace

int local_order(const ExprSum& expr, const XComplex& z0, const SuperellipticCurve& c) {
    if (expr.empty())
        throw ValidationError("local_order: empty expression");
    const FiberData fd = fiber_data(z0, c);

    int best = std::numeric_limits<int>::max();
    int count_at_best = 0;
    for (const auto& m : expr) {
        const int o = monomial_order(m, fd, c);
        if (o < best) { best = o; count_at_best = 1; }
        else if (o == best) ++count_at_best;
    }
    if (count_at_best <= 1) return best;

    // Possible cancellation between monomials of equal leading order:
    // probe the Laurent series numerically.
    const LaurentSeries s = puncture_series(expr, z0, c, 2 * fd.m + 4);
    return s.leading_order;
}

LaurentSeries puncture_series(const ExprSum& expr, const XComplex& z0,
                              const SuperellipticCurve& c, int terms) {
    if (terms < 1) throw ValidationError("puncture_series: need terms >= 1");
    const FiberData fd = fiber_data(z0, c);
    const int m = fd.m;

    // Sample circle radius: a fraction of the distance to the nearest other
    // special point (in the relevant chart).
    double dist = 1.0;
    const auto special = c.finite_special_points();
    if (fd.at_inf) {
        double rmax = 0.0;
        for (const Complex& p : special) rmax = std::max(rmax, std::abs(p));
        dist = 1.0 / std::max(rmax, 1.0);
    } else {
        dist = std::numeric_limits<double>::infinity();
        for (const Complex& p : special) {
            const double d = std::abs(p - fd.z0);
            if (d > 1e-12) dist = std::min(dist, d);
        }
        if (!std::isfinite(dist)) dist = 1.0;
    }
    const double rho = 0.25 * dist;

    int lead_candidate = std::numeric_limits<int>::max();
    for (const auto& mo : expr)
        lead_candidate = std::min(lead_candidate, monomial_order(mo, fd, c));

    const int K = std::max(256, 8 * (terms + std::abs(lead_candidate) + m + 4));

    // Walk w around the fiber once (m z-plane turns).  At infinity the
    // circle lives in the zeta = 1/z chart.
    Complex w_start;
    std::vector<Complex> zs(K), ts(K);
    if (fd.at_inf) {
        for (int j = 0; j < K; ++j) {
            const double th = 2.0 * M_PI * m * j / K;
            const Complex zeta = std::polar(rho, th);
            zs[j] = 1.0 / zeta;
            ts[j] = std::polar(std::pow(rho, 1.0 / m), th / m);
        }
    } else {
        for (int j = 0; j < K; ++j) {
            const double th = 2.0 * M_PI * m * j / K;
            zs[j] = fd.z0 + std::polar(rho, th);
            ts[j] = std::polar(std::pow(rho, 1.0 / m), th / m);
        }
    }
    w_start = c.fiber_w(zs[0])[0];

    // Continue w through all samples (in the z chart; the circle in the
    // zeta chart is a circle of radius 1/rho in z traversed clockwise).
    std::vector<Complex> ws(K);
    {
        auto point_at = [&](double frac) {
            const double th = 2.0 * M_PI * m * frac;
            if (fd.at_inf) return 1.0 / std::polar(rho, th);
            return fd.z0 + std::polar(rho, th);
        };
        Complex w = w_start;
        ws[0] = w;
        const int sub = 6;
        for (int j = 1; j < K; ++j) {
            for (int s = 1; s <= sub; ++s) {
                const Complex za = point_at((j - 1 + double(s - 1) / sub) / K);
                const Complex zb = point_at((j - 1 + double(s) / sub) / K);
                const Complex pred = w * std::exp(c.dlogF((za + zb) / 2.0) *
                                                  (zb - za) / double(c.sheets()));
                w = snap_root(c, zb, pred);
            }
            ws[j] = w;
        }
    }

    // Values; differentials contribute the Jacobian dz/dt with z-z0 = t^m
    // exactly (z = t^-m at infinity).
    std::vector<Complex> vals(K);
    for (int j = 0; j < K; ++j) {
        Complex v = eval(expr, zs[j], ws[j]);
        bool has_dz = !expr.empty() && expr.front().differential;
        if (has_dz) {
            const Complex t = ts[j];
            if (fd.at_inf)
                v *= -double(m) * std::pow(t, -m - 1);
            else
                v *= double(m) * std::pow(t, m - 1);
        }
        vals[j] = v;
    }

    // Fourier extraction of coefficients c_n = (1/K) sum v_j t_j^{-n}.
    auto coeff_at = [&](int n) {
        Complex acc{0.0, 0.0};
        for (int j = 0; j < K; ++j) {
            const double th = 2.0 * M_PI * m * j / K;  // arg(z - z0) angle
            const double targ = th / m;
            const double tmag = std::pow(rho, 1.0 / m);
            acc += vals[j] * std::polar(std::pow(tmag, -double(n)), -targ * n);
        }
        return acc / double(K);
    };

    // Adjust the candidate leading order for differentials: the monomial
    // order already accounts for dz, matching the t-Jacobian applied above.
    int n0 = lead_candidate;

    LaurentSeries out;
    // find true leading order (cancellation-aware)
    const double tmag0 = std::pow(rho, 1.0 / m);
    double scale = 0.0;
    for (const auto& v : vals) scale = std::max(scale, std::abs(v));
    int lead = n0;
    for (; lead < n0 + 4 * m + 8; ++lead) {
        const Complex cn = coeff_at(lead);
        if (std::abs(cn) * std::pow(tmag0, lead) > 1e-9 * (scale + 1e-300)) break;
    }
    out.leading_order = lead;
    out.coefficients.resize(terms);
    for (int i = 0; i < terms; ++i) out.coefficients[i] = coeff_at(lead + i);
    out.residue = coeff_at(-1);
    return out;
}

// ---------------------------------------------------------------- JSON

namespace {
using nlohmann::json;

XComplex xcomplex_from_json(const json& j) {
    if (j.is_string() && j.get<std::string>() == "inf") return XComplex::inf();
    if (j.is_array() && j.size() == 2)
        return XComplex::at(Complex(j[0].get<double>(), j[1].get<double>()));
    throw ValidationError("curve json: expected [re,im] or \"inf\"");
}

json xcomplex_to_json(const XComplex& x) {
    if (x.infinite) return json("inf");
    return json::array({x.value.real(), x.value.imag()});
}
} // namespace

SuperellipticCurve curve_from_json(const std::string& json_text) {
    json j = json::parse(json_text);
    const int sheets = j.at("sheets").get<int>();
    std::vector<Factor> factors;
    int inf_exp = 0;
    bool has_inf = false;
    for (const auto& fj : j.at("factors")) {
        const XComplex root = xcomplex_from_json(fj.at("root"));
        const int e = fj.at("exp").get<int>();
        if (root.infinite) { inf_exp = e; has_inf = true; continue; }
        factors.push_back({root.value, e});
    }
    std::vector<CurvePoint> punctures;
    if (j.contains("punctures")) {
        for (const auto& pj : j.at("punctures")) {
            CurvePoint p;
            p.z = xcomplex_from_json(pj.at("z"));
            if (pj.contains("w")) p.w = xcomplex_from_json(pj.at("w"));
            p.is_puncture = true;
            punctures.push_back(p);
        }
    }
    SuperellipticCurve c(sheets, std::move(factors), std::move(punctures));
    if (has_inf && inf_exp != c.exponent_at_infinity())
        throw ValidationError("curve json: explicit infinity exponent contradicts "
                              "the finite factors");
    return c;
}

std::string curve_to_json(const SuperellipticCurve& c) {
    json j;
    j["sheets"] = c.sheets();
    j["factors"] = json::array();
    for (const auto& f : c.factors())
        j["factors"].push_back({{"root", json::array({f.root.real(), f.root.imag()})},
                                {"exp", f.exponent}});
    j["punctures"] = json::array();
    for (const auto& p : c.punctures()) {
        json pj;
        pj["z"] = xcomplex_to_json(p.z);
        pj["w"] = xcomplex_to_json(p.w);
        j["punctures"].push_back(pj);
    }
    return j.dump(2);
}

} // namespace msforge::curve
