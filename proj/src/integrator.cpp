#include "msforge/integrator.hpp"
#include "msforge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace msforge::integrator {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 12-point Gauss-Legendre nodes/weights on [-1,1].
constexpr int kGL = 12;
constexpr double kGLx[kGL] = {
    -0.9815606342467192, -0.9041172563704749, -0.7699026741943047,
    -0.5873179542866175, -0.3678314989981802, -0.1252334085114689,
     0.1252334085114689,  0.3678314989981802,  0.5873179542866175,
     0.7699026741943047,  0.9041172563704749,  0.9815606342467192};
constexpr double kGLw[kGL] = {
    0.0471753363865118, 0.1069393259953184, 0.1600783285433462,
    0.2031674267230659, 0.2334925365383548, 0.2491470458134028,
    0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
    0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

Complex snap_root(const SuperellipticCurve& c, Complex z, Complex pred,
                  double* margin = nullptr) {
    Complex best{};
    double bestd = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    for (const Complex& r : c.fiber_w(z)) {
        const double d = std::abs(r - pred);
        if (d < bestd) { second = bestd; bestd = d; best = r; }
        else if (d < second) second = d;
    }
    if (margin) *margin = (second == std::numeric_limits<double>::infinity())
                              ? 1.0
                              : (bestd / std::max(second, 1e-300));
    return best;
}

// Continue w from z0 to z1 along the straight chord, splitting until the
// logarithmic phase step and the root-snapping margin are safe.
Complex continue_chord(const SuperellipticCurve& c, Complex z0, Complex z1, Complex w,
                       const ContinuationOptions& opts) {
    const int N = c.sheets();
    if (N == 1) return c.fiber_w(z1)[0];
    int pieces = 1;
    {
        const double phase = std::abs(c.dlogF((z0 + z1) / 2.0)) * std::abs(z1 - z0) / N;
        pieces = std::max(1, int(std::ceil(phase / opts.max_phase_step)));
        pieces = std::min(pieces, 1 << 12);
    }
    for (int attempt = 0;; ++attempt) {
        Complex cur = w;
        bool ok = true;
        for (int i = 0; i < pieces; ++i) {
            const Complex a = z0 + (z1 - z0) * (double(i) / pieces);
            const Complex b = z0 + (z1 - z0) * (double(i + 1) / pieces);
            const Complex pred = cur * std::exp(c.dlogF((a + b) / 2.0) * (b - a) /
                                                double(N));
            double margin = 0.0;
            const Complex next = snap_root(c, b, pred, &margin);
            if (margin > opts.ambiguity_margin) { ok = false; break; }
            cur = next;
        }
        if (ok) return cur;
        if (attempt >= opts.max_halvings)
            throw NumericError("continue_w: branch ambiguity (step too large near "
                               "a branch point)");
        pieces *= 2;
    }
}

double min_special_distance(const Path& p, const SuperellipticCurve& c) {
    double dmin = std::numeric_limits<double>::infinity();
    const auto pts = c.finite_special_points();
    for (const auto& seg : p.segments) {
        const int n = 64;
        for (int i = 0; i <= n; ++i) {
            const Complex z = seg.z_at(double(i) / n);
            for (const Complex& q : pts) dmin = std::min(dmin, std::abs(z - q));
        }
    }
    return dmin;
}

struct SegmentIntegrator {
    const SuperellipticCurve& c;
    const PathSegment& seg;
    std::span<const ExprSum> exprs;
    const ContinuationOptions opts{};

    // Integrate over [s0,s1] with w(s0)=w0; upon return w1 holds w(s1).
    std::vector<Complex> panel(double s0, double s1, Complex w0, Complex& w1) const {
        std::vector<Complex> acc(exprs.size(), Complex{0.0, 0.0});
        Complex w = w0;
        Complex zprev = seg.z_at(s0);
        for (int i = 0; i < kGL; ++i) {
            const double s = s0 + (kGLx[i] + 1.0) / 2.0 * (s1 - s0);
            const Complex z = seg.z_at(s);
            w = continue_chord(c, zprev, z, w, opts);
            zprev = z;
            const Complex jac = seg.dz_at(s) * (s1 - s0) / 2.0;
            for (size_t k = 0; k < exprs.size(); ++k)
                acc[k] += kGLw[i] * curve::eval(exprs[k], z, w) * jac;
        }
        w1 = continue_chord(c, zprev, seg.z_at(s1), w, opts);
        return acc;
    }

    void adaptive(double s0, double s1, Complex w0, Complex& w1,
                  const std::vector<Complex>& whole, double tol, int depth,
                  std::vector<Complex>& out) const {
        Complex wmid;
        const double smid = (s0 + s1) / 2.0;
        const auto left = panel(s0, smid, w0, wmid);
        const auto right = panel(smid, s1, wmid, w1);
        double err = 0.0, mag = 0.0;
        for (size_t k = 0; k < whole.size(); ++k) {
            err = std::max(err, std::abs(whole[k] - (left[k] + right[k])));
            mag = std::max(mag, std::abs(left[k] + right[k]));
        }
        if (err <= tol * (1.0 + mag) || depth >= 24) {
            if (depth >= 24 && err > 1e3 * tol * (1.0 + mag))
                throw NumericError("integrate_over: refinement stalled (pole on "
                                   "or too near the path?)");
            for (size_t k = 0; k < whole.size(); ++k) out[k] += left[k] + right[k];
            return;
        }
        Complex wm2;
        adaptive(s0, smid, w0, wm2, left, tol / 1.4, depth + 1, out);
        adaptive(smid, s1, wm2, w1, right, tol / 1.4, depth + 1, out);
    }
};

} // namespace

// ---------------------------------------------------------------- segments

PathSegment PathSegment::line(Complex from, Complex to) {
    PathSegment s;
    s.kind = Kind::line;
    s.a = from;
    s.b = to;
    return s;
}

PathSegment PathSegment::arc(Complex center, double radius, double ang0, double ang1) {
    PathSegment s;
    s.kind = Kind::arc;
    s.center = center;
    s.radius = radius;
    s.ang0 = ang0;
    s.ang1 = ang1;
    return s;
}

Complex PathSegment::z_at(double s) const {
    if (kind == Kind::line) return a + (b - a) * s;
    return center + std::polar(radius, ang0 + (ang1 - ang0) * s);
}

Complex PathSegment::dz_at(double s) const {
    if (kind == Kind::line) return b - a;
    const double th = ang0 + (ang1 - ang0) * s;
    return Complex{0.0, 1.0} * std::polar(radius, th) * (ang1 - ang0);
}

double PathSegment::length_estimate() const {
    if (kind == Kind::line) return std::abs(b - a);
    return radius * std::abs(ang1 - ang0);
}

Complex Path::start_z() const {
    if (segments.empty()) throw ValidationError("Path: empty");
    return segments.front().z_at(0.0);
}

Complex Path::end_z() const {
    if (segments.empty()) throw ValidationError("Path: empty");
    return segments.back().z_at(1.0);
}

bool Path::closed(double tol) const {
    return std::abs(end_z() - start_z()) <=
           tol * (1.0 + std::abs(start_z()));
}

// ---------------------------------------------------------------- assembly

PhiTriple phi_from_data(const ExprSum& g, const ExprSum& eta) {
    const ExprSum g2eta = g * (g * eta);
    PhiTriple phi;
    phi.comp[0] = eta - g2eta;
    phi.comp[1] = curve::scaled(eta + g2eta, Complex{0.0, 1.0});
    phi.comp[2] = curve::scaled(g * eta, Complex{2.0, 0.0});
    return phi;
}

double clearance_radius(const SuperellipticCurve& c) {
    const auto pts = c.finite_special_points();
    double dmin = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            dmin = std::min(dmin, std::abs(pts[i] - pts[j]));
    if (!std::isfinite(dmin)) dmin = 1.0;
    return 1e-3 * dmin;
}

void check_clearance(const Path& p, const SuperellipticCurve& c, double clearance) {
    if (min_special_distance(p, c) < clearance)
        throw NumericError("path violates the branch-point clearance radius");
}

// ---------------------------------------------------------------- continuation

Complex continue_w(const SuperellipticCurve& c, const PathSegment& seg, Complex w0,
                   const ContinuationOptions& opts) {
    if (!c.contains(seg.z_at(0.0), w0, 1e-8))
        throw ValidationError("continue_w: start_w does not satisfy the curve "
                              "equation at the initial point");
    // March through a resolution tied to the segment geometry; the chord
    // continuation refines further on its own.
    const int coarse = std::max(8, int(seg.length_estimate() * 16));
    Complex w = w0;
    for (int i = 0; i < coarse; ++i) {
        const Complex z0 = seg.z_at(double(i) / coarse);
        const Complex z1 = seg.z_at(double(i + 1) / coarse);
        w = continue_chord(c, z0, z1, w, opts);
    }
    return w;
}

Complex continue_w(const SuperellipticCurve& c, const Path& path, Complex w0,
                   const ContinuationOptions& opts) {
    Complex w = w0;
    for (const auto& seg : path.segments) w = continue_w(c, seg, w, opts);
    return w;
}

// ---------------------------------------------------------------- integration

std::vector<Complex> integrate_many(std::span<const ExprSum> exprs, const Path& path,
                                    const SuperellipticCurve& c, double tol) {
    std::vector<Complex> totals(exprs.size(), Complex{0.0, 0.0});
    if (path.segments.empty()) return totals;
    if (!c.contains(path.start_z(), path.start_w, 1e-8))
        throw ValidationError("integrate_many: start_w is not on the curve");

    Complex w = path.start_w;
    for (const auto& seg : path.segments) {
        SegmentIntegrator si{c, seg, exprs};
        // split multi-turn arcs so each adaptive root covers a bounded arc
        const int parts = std::max(1, int(std::ceil(seg.length_estimate())));
        for (int p = 0; p < parts; ++p) {
            const double s0 = double(p) / parts, s1 = double(p + 1) / parts;
            Complex wend;
            const auto whole = si.panel(s0, s1, w, wend);
            std::vector<Complex> acc(exprs.size(), Complex{0.0, 0.0});
            si.adaptive(s0, s1, w, wend, whole, tol, 0, acc);
            for (size_t k = 0; k < exprs.size(); ++k) totals[k] += acc[k];
            w = wend;
        }
    }
    return totals;
}

Complex integrate_over(const ExprSum& expr, const Path& path,
                       const SuperellipticCurve& c, double tol) {
    return integrate_many(std::span<const ExprSum>(&expr, 1), path, c, tol)[0];
}

// ---------------------------------------------------------------- residues

Complex residue_at(const ExprSum& expr, const XComplex& z0,
                   const SuperellipticCurve& c) {
    // Loop radius: half the clearance reference distance to the nearest
    // other special point (in the active chart).
    const auto pts = c.finite_special_points();
    double radius;
    int m;
    Path loop;
    if (z0.infinite) {
        double rmax = 1.0;
        for (const Complex& p : pts) rmax = std::max(rmax, std::abs(p));
        const double R = 4.0 * rmax;  // |z| = R, i.e. |zeta| = 1/R
        m = c.ramification_at_infinity();
        // positively oriented in the zeta chart = clockwise in z
        loop.segments.push_back(PathSegment::arc(0.0, R, 0.0, -2.0 * kPi * m));
        radius = R;
    } else {
        double dmin = std::numeric_limits<double>::infinity();
        for (const Complex& p : pts) {
            const double d = std::abs(p - z0.value);
            if (d > 1e-12) dmin = std::min(dmin, d);
        }
        if (!std::isfinite(dmin)) dmin = 1.0;
        radius = 0.5 * dmin;
        m = c.ramification_at(z0.value);
        loop.segments.push_back(PathSegment::arc(z0.value, radius, 0.0, 2.0 * kPi * m));
    }
    loop.start_w = c.fiber_w(loop.start_z())[0];

    // 64 trapezoid points per turn; the integrand is analytic in the
    // annulus, so the trapezoid rule converges spectrally.
    const int K = 64 * m;
    Complex acc{0.0, 0.0};
    Complex w = loop.start_w;
    const auto& seg = loop.segments.front();
    Complex zprev = seg.z_at(0.0);
    for (int j = 0; j < K; ++j) {
        const double s = (j + 0.5) / K;
        const Complex z = seg.z_at(s);
        w = continue_chord(c, zprev, z, w, ContinuationOptions{});
        zprev = z;
        acc += curve::eval(expr, z, w) * seg.dz_at(s) / double(K);
    }
    return acc / Complex{0.0, 2.0 * kPi};
}

// ---------------------------------------------------------------- verification

PeriodReport verify_periods(const WeierstrassData& data, const SuperellipticCurve& c,
                            const std::vector<Cycle>& generators,
                            const std::vector<XComplex>& punctures, double tol) {
    PeriodReport rep;
    const ExprSum g2eta = data.g * (data.g * data.eta);
    const ExprSum geta = data.g * data.eta;
    const std::array<ExprSum, 3> all = {data.eta, g2eta, geta};

    for (const auto& cyc : generators) {
        if (!cyc.closed())
            throw ValidationError("verify_periods: generator cycle is not closed");
        const auto vals = integrate_many(std::span<const ExprSum>(all.data(), 3),
                                         cyc, c, tol);
        CycleReport cr;
        cr.eta_period = vals[0];
        cr.g2eta_period = vals[1];
        cr.geta_period = vals[2];
        cr.residual_period1 = std::abs(vals[0] - std::conj(vals[1]));
        cr.residual_period2 = std::abs(vals[2].real());
        rep.worst_cycle_residual = std::max({rep.worst_cycle_residual,
                                             cr.residual_period1, cr.residual_period2});
        rep.cycles.push_back(cr);
    }

    const PhiTriple phi = phi_from_data(data.g, data.eta);
    for (const auto& p : punctures) {
        PunctureReport pr;
        pr.z0 = p;
        pr.eta_residue = residue_at(data.eta, p, c);
        pr.g2eta_residue = residue_at(g2eta, p, c);
        for (int j = 0; j < 3; ++j) {
            const Complex r = residue_at(phi.comp[j], p, c);
            pr.phi_residue_imag = std::max(pr.phi_residue_imag, std::abs(r.imag()));
        }
        rep.worst_residue_imag = std::max(rep.worst_residue_imag, pr.phi_residue_imag);
        rep.punctures.push_back(pr);
    }
    return rep;
}

Eigen::Vector3d evaluate_f(const PhiTriple& phi, const Path& path,
                           const SuperellipticCurve& c, double tol) {
    const auto vals = integrate_many(std::span<const ExprSum>(phi.comp.data(), 3),
                                     path, c, tol);
    return Eigen::Vector3d{vals[0].real(), vals[1].real(), vals[2].real()};
}

// ---------------------------------------------------------------- stock cycles

Cycle oval_cycle(const SuperellipticCurve& c, Complex p, Complex q, double margin,
                 int sheet) {
    if (margin <= 0.0) throw ValidationError("oval_cycle: margin must be positive");
    const Complex mid = (p + q) / 2.0;
    const Complex dir = (q - p) / std::abs(q - p);
    const double L = std::abs(q - p) / 2.0;
    // Stadium: two half circles around p and q joined by parallel lines.
    Cycle cyc;
    const double a0 = std::arg(dir);
    const Complex up = dir * Complex{0.0, 1.0} * margin;
    cyc.segments.push_back(PathSegment::line(q + up, p + up));
    cyc.segments.push_back(PathSegment::arc(p, margin, a0 + kPi / 2.0, a0 + 3.0 * kPi / 2.0));
    cyc.segments.push_back(PathSegment::line(p - up, q - up));
    cyc.segments.push_back(PathSegment::arc(q, margin, a0 - kPi / 2.0, a0 + kPi / 2.0));
    cyc.start_w = c.fiber_w(cyc.start_z())[sheet % c.sheets()];
    (void)L; (void)mid;
    return cyc;
}

Cycle two_point_cycle(const SuperellipticCurve& c, Complex z0, double r0, int n0,
                      Complex z1, double r1, int n1, int sheet) {
    const Complex dir = (z1 - z0) / std::abs(z1 - z0);
    const double a01 = std::arg(dir);
    const Complex p0 = z0 + dir * r0;    // on circle 0, toward z1
    const Complex p1 = z1 - dir * r1;    // on circle 1, toward z0
    Cycle cyc;
    if (n0 != 0)
        cyc.segments.push_back(PathSegment::arc(z0, r0, a01, a01 + 2.0 * kPi * n0));
    cyc.segments.push_back(PathSegment::line(p0, p1));
    if (n1 != 0)
        cyc.segments.push_back(PathSegment::arc(z1, r1, a01 + kPi,
                                                a01 + kPi + 2.0 * kPi * n1));
    cyc.segments.push_back(PathSegment::line(p1, p0));
    cyc.start_w = c.fiber_w(cyc.start_z())[sheet % c.sheets()];
    return cyc;
}

} // namespace msforge::integrator
