#include "msforge/geometry.hpp"
#include "msforge/errors.hpp"
#include "msforge/families.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <random>
#include <sstream>

namespace msforge::geometry {

namespace {

constexpr double kPi = 3.14159265358979323846;
using families::FamilyBundle;
using integrator::Cycle;
using integrator::Path;
using integrator::PathSegment;

Complex cpow_int(Complex z, int e) {
    if (e == 1) return z;
    if (e == -1) return 1.0 / z;
    return std::pow(z, e);
}

Eigen::Vector3d stereographic_lift(Complex g) {
    const double n2 = std::norm(g);
    return Eigen::Vector3d(2.0 * g.real(), 2.0 * g.imag(), n2 - 1.0) / (1.0 + n2);
}

} // namespace

// ---------------------------------------------------------------- symmetry ops

std::pair<Complex, Complex> SymmetryOp::apply(Complex z, Complex w) const {
    if (conjugate) { z = std::conj(z); w = std::conj(w); }
    return {zc * cpow_int(z, zpow), wc * cpow_int(w, wpow)};
}

Complex SymmetryOp::dz_map(Complex z) const {
    if (conjugate) z = std::conj(z);
    if (zpow == 1) return zc;
    return -zc / (z * z);
}

bool is_automorphism(const SymmetryOp& op, const SuperellipticCurve& c, double tol) {
    // Exponent bookkeeping for (w')^N / F(z') reduced by w^N = F(z); the
    // factor lists stay finite because z -> zc z^{+-1} maps linear factors
    // to linear factors.  All our curves have real factors, so conjugation
    // maps the factor set to itself.
    const int N = c.sheets();
    // (w')^N = wc^N * (w^N)^wpow = wc^N * F(z)^wpow
    std::map<long long, int> expo;  // quantized root -> exponent
    auto key = [](Complex r) {
        return (long long)std::llround(r.real() * 1e9) * 2000003LL +
               (long long)std::llround(r.imag() * 1e9);
    };
    Complex coeff = std::pow(op.wc, N);
    for (const auto& f : c.factors()) {
        Complex root = f.root;
        if (op.conjugate) root = std::conj(root);
        expo[key(root)] += f.exponent * op.wpow;
    }
    // divide by F(z') = prod (zc z^{zpow} - r_i)^{e_i}
    for (const auto& f : c.factors()) {
        const Complex r = f.root;
        if (op.zpow == 1) {
            // zc z - r = zc (z - r/zc)
            coeff /= std::pow(op.zc, f.exponent);
            expo[key(r / op.zc)] -= f.exponent;
        } else {
            // zc/z - r:  r=0 -> zc * z^-1 ; else  -r (z - zc/r) / z
            if (std::abs(r) < 1e-14) {
                coeff /= std::pow(op.zc, f.exponent);
                expo[key(Complex{0.0, 0.0})] += f.exponent;
            } else {
                coeff /= std::pow(-r, f.exponent);
                expo[key(op.zc / r)] -= f.exponent;
                expo[key(Complex{0.0, 0.0})] += f.exponent;
            }
        }
    }
    for (const auto& [k, e] : expo)
        if (e != 0) return false;
    return std::abs(coeff - Complex{1.0, 0.0}) < tol;
}

// ---------------------------------------------------------------- path builder

namespace {

// Build a clearance-respecting path from the family basepoint to an
// arbitrary z, optionally preceded by `loops` turns around the origin to
// move between sheets.  The trajectory: loops at |basepoint| radius, then
// an arc to the target angle, then a radial line to the target.
Path standard_path(const FamilyBundle& fam, Complex target, int loops) {
    const Complex z0 = fam.basepoint_z;
    const double r0 = std::abs(z0);
    const double a0 = std::arg(z0);
    const double at = std::arg(target);
    Path p;
    p.start_w = fam.basepoint_w;
    if (loops != 0)
        p.segments.push_back(PathSegment::arc(0.0, r0, a0, a0 + 2.0 * kPi * loops));
    // arc from a0 to the target angle at radius r0 (shorter direction)
    double delta = std::remainder(at - a0, 2.0 * kPi);
    if (std::abs(delta) > 1e-12)
        p.segments.push_back(PathSegment::arc(0.0, r0, a0, a0 + delta));
    const Complex mid = std::polar(r0, at);
    if (std::abs(target - mid) > 1e-12)
        p.segments.push_back(PathSegment::line(mid, target));
    return p;
}

// Rejection-sample a point usable by standard_path: its radial spoke must
// keep clear of the special points.
Complex sample_point(const FamilyBundle& fam, std::mt19937& rng) {
    std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> rad(-1.0, 1.0);
    const auto special = fam.curve.finite_special_points();
    double rmax = 1.0;
    for (const Complex& s : special) rmax = std::max(rmax, std::abs(s));
    const double r0 = std::abs(fam.basepoint_z);
    for (int tries = 0; tries < 1000; ++tries) {
        const double r = r0 * std::pow(3.0, rad(rng));
        const double th = ang(rng);
        const Complex z = std::polar(r, th);
        bool ok = true;
        // the radial spoke to z and the arc at radius r0 must stay away
        // from the special points
        for (const Complex& s : special) {
            const Complex u = std::polar(1.0, th);
            const double t = std::clamp((s / u).real(), std::min(r0, r), std::max(r0, r));
            if (std::abs(s - t * u) < 0.12) { ok = false; break; }
            if (std::abs(std::abs(s) - r0) < 0.08) { ok = false; break; }
        }
        if (ok) return z;
    }
    throw NumericError("sample_point: could not find a clear sample");
}

} // namespace

// ---------------------------------------------------------------- mesh

SurfaceMesh build_mesh(const FamilyBundle& fam, const MeshGrid& grid,
                       double period_tol) {
    SurfaceMesh mesh;
    if (grid.radial < 2 || grid.angular < 3) return mesh;  // degenerate: empty

    // Period closure gate: a torn mesh is worse than no mesh.
    if (period_tol > 0.0) {
        const auto rep = integrator::verify_periods(fam.data, fam.curve,
                                                    fam.generators, fam.puncture_z,
                                                    1e-9);
        if (rep.worst_cycle_residual > period_tol)
            throw NumericError("build_mesh: period-closure residual " +
                               std::to_string(rep.worst_cycle_residual) +
                               " exceeds the tear threshold");
    }

    const auto& cur = fam.curve;
    const int N = cur.sheets();

    // z-plane annulus radii from the local-coordinate cutoffs at the two
    // punctures over z=0 and z=infinity.
    const int m0 = cur.ramification_at(Complex{0.0, 0.0});
    const int minf = cur.ramification_at_infinity();
    const double rin = std::exp(-grid.inner_log * m0);
    const double rout = std::exp(grid.outer_log * minf);

    const int NR = grid.radial, NT = grid.angular;
    auto z_at = [&](int i, int j) {
        const double lr = std::log(rin) +
                          (std::log(rout) - std::log(rin)) * (i + 0.31) / NR;
        const double th = 2.0 * kPi * (j + 0.29) / NT;
        return std::polar(std::exp(lr), th);
    };

    const auto special = cur.finite_special_points();
    auto edge_clear = [&](Complex a, Complex b) {
        for (const Complex& s : special) {
            const Complex d = b - a;
            const double t = std::clamp((((s - a) / d)).real(), 0.0, 1.0);
            const double dist = std::abs(s - (a + t * d));
            if (dist < 1e-3 * (1.0 + std::abs(s))) return false;
        }
        return true;
    };

    // BFS labeling over (i, j, sheet-slot).  Each filled slot stores the
    // exact w and the accumulated f.
    struct Node {
        Complex w;
        Eigen::Vector3d f;
        int vid = -1;
        bool filled = false;
    };
    std::vector<Node> nodes(size_t(NR) * NT * N);
    auto slot_of = [&](int i, int j, Complex w) {
        const auto fiber = cur.fiber_w(z_at(i, j));
        int best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (int s = 0; s < N; ++s) {
            const double d = std::abs(fiber[s] - w);
            if (d < bd) { bd = d; best = s; }
        }
        return best;
    };
    auto idx = [&](int i, int j, int s) { return (size_t(i) * NT + j) * N + s; };

    const PhiTriple phi = integrator::phi_from_data(fam.data.g, fam.data.eta);

    // Seed: walk from the basepoint to the nearest grid node.
    int i0 = std::clamp(int(std::lround((std::log(std::abs(fam.basepoint_z)) - std::log(rin)) /
                                        (std::log(rout) - std::log(rin)) * NR)),
                        0, NR - 1);
    int j0 = int(std::lround(std::arg(fam.basepoint_z) / (2.0 * kPi) * NT + NT)) % NT;
    Complex zseed = z_at(i0, j0);
    Path seed_path;
    seed_path.start_w = fam.basepoint_w;
    seed_path.segments.push_back(PathSegment::line(fam.basepoint_z, zseed));
    const Complex wseed = integrator::continue_w(cur, seed_path, fam.basepoint_w);
    const Eigen::Vector3d fseed = integrator::evaluate_f(phi, seed_path, cur, 1e-10);

    std::queue<std::tuple<int, int, int>> bfs;
    {
        Node& nd = nodes[idx(i0, j0, slot_of(i0, j0, wseed))];
        nd.w = wseed;
        nd.f = fseed;
        nd.filled = true;
        bfs.emplace(i0, j0, slot_of(i0, j0, wseed));
    }

    auto visit_neighbor = [&](int i, int j, int s, int i2, int j2) {
        const Node& from = nodes[idx(i, j, s)];
        const Complex za = z_at(i, j), zb = z_at(i2, j2);
        if (!edge_clear(za, zb)) return;
        Path e;
        e.start_w = from.w;
        e.segments.push_back(PathSegment::line(za, zb));
        Complex wb;
        try {
            wb = integrator::continue_w(cur, e, from.w);
        } catch (const NumericError&) {
            return;  // too close to a branch point; BFS routes around
        }
        const int s2 = slot_of(i2, j2, wb);
        Node& to = nodes[idx(i2, j2, s2)];
        if (to.filled) return;
        to.w = wb;
        to.f = from.f + integrator::evaluate_f(phi, e, cur, 1e-10);
        to.filled = true;
        bfs.emplace(i2, j2, s2);
    };

    while (!bfs.empty()) {
        auto [i, j, s] = bfs.front();
        bfs.pop();
        if (i > 0) visit_neighbor(i, j, s, i - 1, j);
        if (i + 1 < NR) visit_neighbor(i, j, s, i + 1, j);
        visit_neighbor(i, j, s, i, (j + 1) % NT);
        visit_neighbor(i, j, s, i, (j + NT - 1) % NT);
    }

    // Emit vertices for filled nodes.
    for (int i = 0; i < NR; ++i)
        for (int j = 0; j < NT; ++j)
            for (int s = 0; s < N; ++s) {
                Node& nd = nodes[idx(i, j, s)];
                if (!nd.filled) continue;
                nd.vid = int(mesh.vertices.size());
                mesh.vertices.push_back(nd.f);
                const Complex z = z_at(i, j);
                const Complex gv = curve::eval(fam.data.g, z, nd.w);
                const Complex ev = curve::eval(fam.data.eta, z, nd.w);
                mesh.gauss_map.push_back(stereographic_lift(gv));
                mesh.conformal_factor.push_back((1.0 + std::norm(gv)) * std::abs(ev));
                mesh.domain_tag.push_back({z, nd.w});
            }

    // Faces: continue w around each grid cell; emit when the loop closes
    // (no branch point inside) and all four corners are labeled.
    auto corner_vid = [&](int i, int j, Complex w) {
        const int s = slot_of(i, j, w);
        const Node& nd = nodes[idx(i, j, s)];
        if (!nd.filled || std::abs(nd.w - w) > 1e-5 * (1.0 + std::abs(w))) return -1;
        return nd.vid;
    };
    for (int i = 0; i + 1 < NR; ++i)
        for (int j = 0; j < NT; ++j) {
            const int j2 = (j + 1) % NT;
            const std::array<std::pair<int, int>, 4> cs{{{i, j}, {i + 1, j},
                                                         {i + 1, j2}, {i, j2}}};
            for (int s = 0; s < N; ++s) {
                const Node& nd = nodes[idx(i, j, s)];
                if (!nd.filled) continue;
                Complex w = nd.w;
                std::array<int, 4> vid{};
                vid[0] = nd.vid;
                bool ok = true;
                for (int cidx = 1; cidx <= 4; ++cidx) {
                    const auto [ia, ja] = cs[cidx - 1];
                    const auto [ib, jb] = cs[cidx % 4];
                    Path e;
                    e.start_w = w;
                    e.segments.push_back(PathSegment::line(z_at(ia, ja), z_at(ib, jb)));
                    if (!edge_clear(z_at(ia, ja), z_at(ib, jb))) { ok = false; break; }
                    try {
                        w = integrator::continue_w(cur, e, w);
                    } catch (const NumericError&) { ok = false; break; }
                    if (cidx < 4) {
                        vid[cidx] = corner_vid(cs[cidx].first, cs[cidx].second, w);
                        if (vid[cidx] < 0) { ok = false; break; }
                    } else if (std::abs(w - nd.w) > 1e-5 * (1.0 + std::abs(w))) {
                        ok = false;  // branch point inside the cell
                    }
                }
                if (!ok) continue;
                mesh.faces.push_back({vid[0], vid[1], vid[2]});
                mesh.faces.push_back({vid[0], vid[2], vid[3]});
            }
        }
    return mesh;
}

// ---------------------------------------------------------------- curvature

double gauss_curvature(Complex z, Complex w, const WeierstrassData& data,
                       const SuperellipticCurve& c) {
    const Complex gv = curve::eval(data.g, z, w);
    const Complex gp = curve::eval_dz_derivative(data.g, z, w, c);
    const Complex ev = curve::eval(data.eta, z, w);
    const double lam2 = std::pow(1.0 + std::norm(gv), 2) * std::norm(ev);
    if (!(lam2 > 0.0) || !std::isfinite(lam2))
        throw ValidationError("gauss_curvature: metric degenerate at this point");
    const double num = 4.0 * std::norm(gp);
    return -num / (std::pow(1.0 + std::norm(gv), 4) * std::norm(ev));
}

namespace {

// One pass of the spherical-density quadrature: integrate the pullback of
// the sphere area form under g over the z-annulus, summing all sheets.
double tau_pass(const WeierstrassData& data, const SuperellipticCurve& c,
                int n, double rin, double rout) {
    const int N = c.sheets();
    double tot = 0.0;
    const double l0 = std::log(rin), l1 = std::log(rout);
    const int nr = n, nt = n;
    for (int i = 0; i < nr; ++i) {
        const double lr = l0 + (l1 - l0) * (i + 0.5) / nr;
        const double r = std::exp(lr);
        const double cell = (l1 - l0) / nr * (2.0 * kPi / nt) * r * r;
        for (int j = 0; j < nt; ++j) {
            const double th = 2.0 * kPi * (j + 0.5) / nt;
            const Complex z = std::polar(r, th);
            for (const Complex& w : c.fiber_w(z)) {
                const Complex gv = curve::eval(data.g, z, w);
                const Complex gp = curve::eval_dz_derivative(data.g, z, w, c);
                const double dens = 4.0 * std::norm(gp) /
                                    std::pow(1.0 + std::norm(gv), 2);
                if (std::isfinite(dens)) tot += dens * cell;
            }
        }
    }
    return tot;
}

} // namespace

TotalCurvatureResult total_curvature(const WeierstrassData& data,
                                     const SuperellipticCurve& c,
                                     int base_resolution, double cutoff_log) {
    TotalCurvatureResult out;
    const int m0 = c.ramification_at(Complex{0.0, 0.0});
    const int minf = c.ramification_at_infinity();
    const double rin = std::exp(-cutoff_log * m0);
    const double rout = std::exp(cutoff_log * minf);

    out.coarse = tau_pass(data, c, base_resolution, rin, rout);
    out.fine = tau_pass(data, c, 2 * base_resolution, rin, rout);
    out.tau = (4.0 * out.fine - out.coarse) / 3.0;  // Richardson, O(h^2) base
    if (!std::isfinite(out.tau) ||
        std::abs(out.fine - out.coarse) > 0.2 * (1.0 + std::abs(out.fine)))
        throw NumericError("total_curvature: refinement did not converge");

    // Combinatorial degree of g from the divisor: sum of pole orders over
    // the fibers of the special points and infinity.
    long deg = 0;
    for (const Complex& r : c.finite_special_points()) {
        const int ord = curve::local_order(data.g, XComplex::at(r), c);
        const int fib = c.sheets() / c.ramification_at(r);
        if (ord < 0) deg += long(-ord) * fib;
    }
    {
        const int ord = curve::local_order(data.g, XComplex::inf(), c);
        const int fib = c.sheets() / c.ramification_at_infinity();
        if (ord < 0) deg += long(-ord) * fib;
    }
    out.deg_g = deg;
    out.tau_over_4pi = out.tau / (4.0 * kPi);
    return out;
}

// ---------------------------------------------------------------- ends

std::vector<int> EndReport::d_profile_sorted() const {
    std::vector<int> d;
    for (const auto& e : ends) d.push_back(e.d);
    std::sort(d.begin(), d.end());
    return d;
}

EndReport end_orders(const WeierstrassData& data, const SuperellipticCurve& c) {
    EndReport rep;
    const PhiTriple phi = integrator::phi_from_data(data.g, data.eta);
    for (const auto& p : c.punctures()) {
        EndData ed;
        ed.z0 = p.z;
        int worst = 0;
        for (int j = 0; j < 3; ++j) {
            const int ord = curve::local_order(phi.comp[j], p.z, c);
            worst = std::min(worst, ord);
        }
        if (worst >= 0)
            throw ValidationError("end_orders: Phi is regular at a marked "
                                  "puncture (not an end)");
        ed.d = -worst - 1;
        if (ed.d < 1)
            throw ValidationError("end_orders: end multiplicity below 1");
        const int gord = curve::local_order(data.g, p.z, c);
        ed.limit_normal = gord > 0 ? Eigen::Vector3d(0, 0, -1)
                                   : Eigen::Vector3d(0, 0, 1);
        if (ed.d == 1) {
            const Complex res3 = integrator::residue_at(phi.comp[2], p.z, c);
            ed.type = std::abs(res3) > 1e-8 ? "embedded-catenoidal" : "embedded-planar";
        } else {
            ed.type = "higher";
        }
        rep.ends.push_back(ed);
    }
    return rep;
}

JorgeMeeksReport jorge_meeks_check(int genus, const EndReport& ends, long deg_g) {
    JorgeMeeksReport rep;
    long sum = 0;
    bool all_embedded = true;
    for (const auto& e : ends.ends) {
        sum += e.d + 1;
        all_embedded = all_embedded && e.d == 1;
    }
    const long chi = 2 - 2 * long(genus);
    const long n = long(ends.ends.size());
    rep.lhs = chi - sum;
    rep.rhs = -2 * deg_g;
    rep.equality = rep.lhs == rep.rhs;
    rep.embedded_equality = rep.lhs == chi - 2 * n;
    if (rep.embedded_equality != all_embedded)
        throw NumericError("jorge_meeks_check: embeddedness equality mismatch");
    return rep;
}

// ---------------------------------------------------------------- symmetry

SymmetryCheckResult symmetry_check(const FamilyBundle& fam, const SymmetryOp& op,
                                   int samples, unsigned seed) {
    if (!is_automorphism(op, fam.curve))
        throw ValidationError("symmetry_check: kappa is not an automorphism of "
                              "the curve");
    std::mt19937 rng(seed);
    const auto& cur = fam.curve;
    const int N = cur.sheets();
    const PhiTriple phi = integrator::phi_from_data(fam.data.g, fam.data.eta);

    // Evaluate f honestly at a prescribed (z,w): try sheet loops until the
    // continuation lands on the requested branch.
    auto f_at = [&](Complex zt, Complex wt) -> Eigen::Vector3d {
        for (int loops = 0; loops < N; ++loops) {
            const Path p = standard_path(fam, zt, loops);
            const Complex wl = integrator::continue_w(cur, p, fam.basepoint_w);
            if (std::abs(wl - wt) < 1e-6 * (1.0 + std::abs(wt)))
                return integrator::evaluate_f(phi, p, cur, 1e-10);
        }
        throw NumericError("symmetry_check: could not route a path to the "
                           "requested sheet");
    };

    std::vector<Eigen::Vector3d> lhs, rhs;
    double pullback = 0.0;
    std::uniform_int_distribution<int> sheet(0, N - 1);
    int made = 0;
    while (made < samples) {
        const Complex z = sample_point(fam, rng);
        // pick the sheet by routing with a random loop count
        const int loops = sheet(rng);
        const Path p = standard_path(fam, z, loops);
        Complex w;
        Eigen::Vector3d fp;
        try {
            w = integrator::continue_w(cur, p, fam.basepoint_w);
            fp = integrator::evaluate_f(phi, p, cur, 1e-10);
        } catch (const NumericError&) { continue; }
        const auto [z2, w2] = op.apply(z, w);
        Eigen::Vector3d fq;
        try {
            fq = f_at(z2, w2);
        } catch (const NumericError&) { continue; }
        rhs.push_back(op.O * fp);
        lhs.push_back(fq);

        // pullback identity kappa*Phi = O Phi (O conj(Phi) when
        // antiholomorphic) at the sample point
        Eigen::Vector3cd phi_p, phi_q;
        for (int jc = 0; jc < 3; ++jc) {
            phi_p(jc) = curve::eval(phi.comp[jc], z, w);
            phi_q(jc) = curve::eval(phi.comp[jc], z2, w2);
        }
        const Complex jac = op.dz_map(z);
        Eigen::Vector3cd pb = phi_q * jac;           // kappa*Phi coefficient
        Eigen::Vector3cd ref;
        for (int r = 0; r < 3; ++r) {
            Complex acc = 0.0;
            for (int cidx = 0; cidx < 3; ++cidx) {
                Complex v = phi_p(cidx);
                if (op.conjugate) v = std::conj(v);
                acc += op.O(r, cidx) * v;
            }
            ref(r) = acc;
        }
        double scale = std::max(1.0, phi_p.norm());
        pullback = std::max(pullback, (pb - ref).norm() / scale);
        ++made;
    }

    Eigen::Vector3d vbar = Eigen::Vector3d::Zero();
    for (size_t i = 0; i < lhs.size(); ++i) vbar += lhs[i] - rhs[i];
    vbar /= double(lhs.size());
    double dev = 0.0;
    for (size_t i = 0; i < lhs.size(); ++i)
        dev = std::max(dev, (lhs[i] - rhs[i] - vbar).norm());

    SymmetryCheckResult out;
    out.deviation = dev;
    out.pullback_defect = pullback;
    out.fitted_v = vbar;
    return out;
}

int symmetry_group_order(const std::vector<SymmetryOp>& generators, int budget) {
    struct Elem {
        Eigen::Matrix3d O;
        bool conj;
    };
    auto same = [](const Elem& a, const Elem& b) {
        return a.conj == b.conj && (a.O - b.O).cwiseAbs().maxCoeff() < 1e-9;
    };
    std::vector<Elem> elems{{Eigen::Matrix3d::Identity(), false}};
    for (const auto& g : generators) {
        if (((g.O.transpose() * g.O) - Eigen::Matrix3d::Identity())
                .cwiseAbs().maxCoeff() > 1e-12)
            throw ValidationError("symmetry_group_order: O is not orthogonal");
    }
    bool grew = true;
    while (grew) {
        grew = false;
        for (size_t i = 0; i < elems.size(); ++i)
            for (const auto& g : generators) {
                // compose: apply g after elems[i]; conjugation flips parity
                Elem e;
                e.O = g.O * elems[i].O;
                e.conj = g.conjugate != elems[i].conj;
                bool found = false;
                for (const auto& x : elems)
                    if (same(x, e)) { found = true; break; }
                if (!found) {
                    elems.push_back(e);
                    grew = true;
                    if (int(elems.size()) > budget)
                        throw NumericError("symmetry_group_order: closure exceeded "
                                           "the budget (not a finite group?)");
                }
            }
    }
    return int(elems.size());
}

SymmetryOp compose(const SymmetryOp& after, const SymmetryOp& before) {
    auto j = [&](Complex v) { return after.conjugate ? std::conj(v) : v; };
    SymmetryOp out;
    out.name = after.name + "*" + before.name;
    out.conjugate = after.conjugate != before.conjugate;
    out.zpow = after.zpow * before.zpow;
    out.wpow = after.wpow * before.wpow;
    out.zc = after.zc * cpow_int(j(before.zc), after.zpow);
    out.wc = after.wc * cpow_int(j(before.wc), after.wpow);
    out.O = after.O * before.O;
    out.v = Eigen::Vector3d::Zero();
    return out;
}

std::vector<SymmetryOp> close_group_ops(const std::vector<SymmetryOp>& generators,
                                        int budget) {
    auto same = [](const SymmetryOp& a, const SymmetryOp& b) {
        return a.conjugate == b.conjugate && a.zpow == b.zpow && a.wpow == b.wpow &&
               std::abs(a.zc - b.zc) < 1e-9 && std::abs(a.wc - b.wc) < 1e-9 &&
               (a.O - b.O).cwiseAbs().maxCoeff() < 1e-9;
    };
    SymmetryOp id;
    id.name = "id";
    std::vector<SymmetryOp> elems{id};
    bool grew = true;
    while (grew) {
        grew = false;
        for (size_t i = 0; i < elems.size(); ++i)
            for (const auto& g : generators) {
                const SymmetryOp e = compose(g, elems[i]);
                bool found = false;
                for (const auto& x : elems)
                    if (same(x, e)) { found = true; break; }
                if (!found) {
                    elems.push_back(e);
                    grew = true;
                    if (int(elems.size()) > budget)
                        throw NumericError("close_group_ops: closure exceeded the "
                                           "budget");
                }
            }
    }
    return elems;
}

// ---------------------------------------------------------------- bjorling

BjorlingResult bjorling_geodesic_check(const FamilyBundle& fam, int samples_per_turn) {
    if (fam.name != "even")
        throw ValidationError("bjorling_geodesic_check: even family required");
    // a is the unique pole among the finite factors
    double a = 0.0;
    for (const auto& f : fam.curve.factors())
        if (f.exponent < 0) a = f.root.real();
    if (!(a > 1.0))
        throw ValidationError("bjorling_geodesic_check: solved parameter missing");
    const int N = fam.curve.sheets();
    const double R = std::sqrt(a);

    const PhiTriple phi = integrator::phi_from_data(fam.data.g, fam.data.eta);

    // Trace the fixed-point circle |z| = sqrt(a), |w| = 1/c through all
    // N z-plane turns (the geodesic covers the circle N times).
    BjorlingResult out;
    Eigen::Vector3d f = Eigen::Vector3d::Zero();
    out.trace.push_back(f);
    Complex w = fam.basepoint_w;
    const int total = samples_per_turn * N;
    std::vector<double> x3s{0.0};
    for (int s = 0; s < total; ++s) {
        const double th0 = 2.0 * kPi * s / samples_per_turn;
        const double th1 = 2.0 * kPi * (s + 1) / samples_per_turn;
        Path seg;
        seg.start_w = w;
        seg.segments.push_back(PathSegment::arc(0.0, R, th0, th1));
        f += integrator::evaluate_f(phi, seg, fam.curve, 1e-11);
        w = integrator::continue_w(fam.curve, seg.segments.front(), w);
        out.trace.push_back(f);
        x3s.push_back(f.z());
    }
    double mean = 0.0;
    for (double v : x3s) mean += v;
    mean /= double(x3s.size());
    for (double v : x3s)
        out.x3_deviation = std::max(out.x3_deviation, std::abs(v - mean));
    out.closure_gap = f.norm();
    return out;
}

// ---------------------------------------------------------------- export

void export_obj(const SurfaceMesh& mesh, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ValidationError("export_obj: cannot open " + path);
    os << "# msforge surface mesh\n";
    os.precision(12);
    for (const auto& v : mesh.vertices)
        os << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
    for (const auto& n : mesh.gauss_map)
        os << "vn " << n.x() << " " << n.y() << " " << n.z() << "\n";
    for (const auto& f : mesh.faces)
        os << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
    if (!os) throw ValidationError("export_obj: write failed for " + path);
}

std::vector<double> discrete_mean_curvature(const SurfaceMesh& mesh) {
    const int nv = int(mesh.vertices.size());
    std::vector<Eigen::Vector3d> lap(nv, Eigen::Vector3d::Zero());
    std::vector<double> area(nv, 0.0);
    std::map<std::pair<int, int>, int> edge_use;
    auto cot = [](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
        const double c = a.cross(b).norm();
        return c < 1e-300 ? 0.0 : a.dot(b) / c;
    };
    for (const auto& fc : mesh.faces) {
        const Eigen::Vector3d& p0 = mesh.vertices[fc[0]];
        const Eigen::Vector3d& p1 = mesh.vertices[fc[1]];
        const Eigen::Vector3d& p2 = mesh.vertices[fc[2]];
        const double A = 0.5 * (p1 - p0).cross(p2 - p0).norm();
        for (int k = 0; k < 3; ++k) {
            area[fc[k]] += A / 3.0;
            const int a = fc[k], b = fc[(k + 1) % 3], c = fc[(k + 2) % 3];
            // cotangent at vertex c opposite edge (a,b)
            const double ct = cot(mesh.vertices[a] - mesh.vertices[c],
                                  mesh.vertices[b] - mesh.vertices[c]);
            lap[a] += 0.5 * ct * (mesh.vertices[b] - mesh.vertices[a]);
            lap[b] += 0.5 * ct * (mesh.vertices[a] - mesh.vertices[b]);
            edge_use[{std::min(a, b), std::max(a, b)}]++;
        }
    }
    std::vector<bool> boundary(nv, false);
    for (const auto& [e, uses] : edge_use)
        if (uses != 2) { boundary[e.first] = true; boundary[e.second] = true; }
    std::vector<double> H;
    for (int i = 0; i < nv; ++i) {
        if (boundary[i] || area[i] <= 0.0) continue;
        H.push_back(lap[i].norm() / (2.0 * area[i]));
    }
    return H;
}

} // namespace msforge::geometry
