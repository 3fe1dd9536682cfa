#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "msforge/errors.hpp"
#include "msforge/families.hpp"
#include "msforge/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using msforge::NumericError;
using msforge::ValidationError;
using namespace msforge;
using namespace msforge::geometry;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kC1 = 0.60393702972336399022;
constexpr double kA2 = 1.779676919199820851809729;
constexpr double kA4 = 2.250641020182699129975262;

// closed-form catenoid immersion for our data (g = z, eta = dz/z^2),
// translated so the basepoint z=1 maps to the origin
Eigen::Vector3d catenoid_exact(curve::Complex z) {
    const curve::Complex m1 = -1.0 / z - z;
    const curve::Complex m2 = curve::Complex{0, 1} * (z - 1.0 / z);
    return Eigen::Vector3d(m1.real() + 2.0, m2.real(), 2.0 * std::log(std::abs(z)));
}
} // namespace

TEST_CASE("symmetry ops are curve automorphisms") {
    for (const auto& fam : {families::make_genus_family(1, kC1),
                            families::make_genus_family(3, 0.95),
                            families::make_even_family(2, kA2),
                            families::make_even_family(4, kA4),
                            families::make_catenoid(),
                            families::make_weber_family(1, 2.1, {1.54})}) {
        for (const auto& op : fam.symmetries)
            CHECK(is_automorphism(op, fam.curve));
    }
    // z -> 2z is not an automorphism of the genus family curve
    const auto fam = families::make_genus_family(1, kC1);
    SymmetryOp bad;
    bad.zc = 2.0;
    CHECK_FALSE(is_automorphism(bad, fam.curve));
}

TEST_CASE("symmetry deviations at the f level") {
    const auto fam = families::make_genus_family(1, kC1);
    for (const auto& op : fam.symmetries) {
        const auto r = symmetry_check(fam, op, 40);
        CAPTURE(op.name);
        CHECK(r.deviation < 1e-6);
        CHECK(r.pullback_defect < 1e-9);
    }
    const auto even = families::make_even_family(2, kA2);
    for (const auto& op : even.symmetries) {
        const auto r = symmetry_check(even, op, 40);
        CAPTURE(op.name);
        CHECK(r.deviation < 1e-6);
        CHECK(r.pullback_defect < 1e-9);
    }
    // identity op: zero deviation
    SymmetryOp id;
    id.name = "id";
    const auto r = symmetry_check(fam, id, 10);
    CHECK(r.deviation < 1e-12);
}

TEST_CASE("symmetry group orders") {
    const auto fam = families::make_genus_family(1, kC1);
    CHECK(symmetry_group_order(fam.symmetries) == 8);     // 4(gamma+1)
    const auto even = families::make_even_family(2, kA2);
    CHECK(symmetry_group_order(even.symmetries) == 12);   // 4(k+1)
    // a single involution generates a group of order 2
    SymmetryOp inv;
    inv.O = Eigen::Vector3d(-1, -1, 1).asDiagonal();
    CHECK(symmetry_group_order({inv}) == 2);
}

TEST_CASE("end orders and asymptotic types") {
    const auto fam = families::make_genus_family(1, kC1);
    const auto ends = end_orders(fam.data, fam.curve);
    CHECK(ends.d_profile_sorted() == std::vector<int>{1, 3});
    // the embedded end of this family is asymptotic to a plane
    for (const auto& e : ends.ends)
        if (e.d == 1) CHECK(e.type == "embedded-planar");

    const auto even = families::make_even_family(2, kA2);
    CHECK(end_orders(even.data, even.curve).d_profile_sorted() ==
          std::vector<int>{2, 2});
    const auto even4 = families::make_even_family(4, kA4);
    CHECK(end_orders(even4.data, even4.curve).d_profile_sorted() ==
          std::vector<int>{2, 2});

    const auto cat = families::make_catenoid();
    const auto cends = end_orders(cat.data, cat.curve);
    CHECK(cends.d_profile_sorted() == std::vector<int>{1, 1});
    for (const auto& e : cends.ends) CHECK(e.type == "embedded-catenoidal");
}

TEST_CASE("jorge-meeks equalities in integer arithmetic") {
    const auto fam = families::make_genus_family(1, kC1);
    const auto ends = end_orders(fam.data, fam.curve);
    const auto jm = jorge_meeks_check(1, ends, 3);
    CHECK(jm.lhs == -6);
    CHECK(jm.rhs == -6);
    CHECK(jm.equality);
    CHECK_FALSE(jm.embedded_equality);  // the d=3 end is not embedded

    const auto even = families::make_even_family(2, kA2);
    const auto jme = jorge_meeks_check(2, end_orders(even.data, even.curve), 4);
    CHECK(jme.lhs == -8);
    CHECK(jme.rhs == -8);
    CHECK(jme.equality);

    const auto cat = families::make_catenoid();
    const auto jmc = jorge_meeks_check(0, end_orders(cat.data, cat.curve), 1);
    CHECK(jmc.lhs == -2);
    CHECK(jmc.rhs == -2);
    CHECK(jmc.equality);
    CHECK(jmc.embedded_equality);
}

TEST_CASE("gauss curvature") {
    const auto cat = families::make_catenoid();
    // at |z| = 1 the catenoid waist has K = -1/4 for this normalization
    const curve::Complex z = std::polar(1.0, 0.7);
    CHECK(gauss_curvature(z, z, cat.data, cat.curve) ==
          doctest::Approx(-0.25).epsilon(1e-12));

    // K <= 0 at sampled points of the genus family
    const auto fam = families::make_genus_family(1, kC1);
    for (double r : {0.3, 0.8, 1.7})
        for (double th : {0.3, 1.2, 2.9, 4.4}) {
            const curve::Complex zz = std::polar(r, th);
            for (const auto& w : fam.curve.fiber_w(zz))
                CHECK(gauss_curvature(zz, w, fam.data, fam.curve) <= 0.0);
        }

    // planar data: g constant, K identically zero
    curve::MonomialExpr one;
    WeierstrassData planar{{one}, {curve::MonomialExpr{}.mul_dz()}};
    CHECK(gauss_curvature({0.4, 0.2}, 1.0, planar, cat.curve) == 0.0);
}

TEST_CASE("total curvature quadrature converges to 4 pi deg g") {
    const auto cat = families::make_catenoid();
    const auto tc = total_curvature(cat.data, cat.curve, 96);
    CHECK(tc.deg_g == 1);
    CHECK(std::abs(tc.tau_over_4pi - 1.0) < 0.005);

    const auto fam = families::make_genus_family(1, kC1);
    const auto tg = total_curvature(fam.data, fam.curve, 128);
    CHECK(tg.deg_g == 3);
    CHECK(std::abs(tg.tau_over_4pi - 3.0) < 0.03);
}

TEST_CASE("catenoid mesh matches the closed form") {
    const auto cat = families::make_catenoid();
    MeshGrid grid;
    grid.radial = 48;
    grid.angular = 48;
    grid.inner_log = 2.0;  // modest annulus keeps the test quick
    grid.outer_log = 2.0;
    const auto mesh = build_mesh(cat, grid);
    REQUIRE(!mesh.empty());
    CHECK(mesh.faces.size() > 1000);
    double worst = 0.0;
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
        const auto expect = catenoid_exact(mesh.domain_tag[i].z);
        worst = std::max(worst, (mesh.vertices[i] - expect).norm());
    }
    CHECK(worst < 1e-2);  // well inside the Hausdorff budget
    CHECK(worst < 1e-6);  // vertex integration is much tighter than that

    // per-vertex gauss map is the stereographic lift of g, unit length
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
        CHECK(std::abs(mesh.gauss_map[i].norm() - 1.0) < 1e-9);
        CHECK(mesh.conformal_factor[i] > 0.0);
    }
    // faces index valid vertices
    for (const auto& f : mesh.faces)
        for (int vid : f) {
            CHECK(vid >= 0);
            CHECK(vid < int(mesh.vertices.size()));
        }
}

TEST_CASE("degenerate grid gives an empty mesh without error") {
    const auto cat = families::make_catenoid();
    MeshGrid grid;
    grid.radial = 0;
    grid.angular = 0;
    CHECK(build_mesh(cat, grid).empty());
}

TEST_CASE("mesh of the genus family stays watertight across the cuts") {
    const auto fam = families::make_genus_family(1, kC1);
    MeshGrid grid;
    grid.radial = 36;
    grid.angular = 36;
    grid.inner_log = 1.5;
    grid.outer_log = 1.5;
    const auto mesh = build_mesh(fam, grid);
    REQUIRE(!mesh.empty());
    CHECK(mesh.faces.size() > 1000);
    for (const auto& v : mesh.vertices) CHECK(v.allFinite());

    // period failure tears the mesh: a perturbed c must abort...
    const auto bad = families::make_genus_family(1, 1.25 * kC1);
    CHECK_THROWS_AS(build_mesh(bad, grid, 1e-6), NumericError);
    // ...unless forced
    CHECK_FALSE(build_mesh(bad, grid, 0.0).empty());
}

TEST_CASE("discrete mean curvature tends to zero under refinement") {
    const auto cat = families::make_catenoid();
    auto median_H = [&](int res) {
        MeshGrid grid;
        grid.radial = res;
        grid.angular = res;
        grid.inner_log = 1.5;
        grid.outer_log = 1.5;
        auto H = discrete_mean_curvature(build_mesh(cat, grid));
        REQUIRE(!H.empty());
        std::sort(H.begin(), H.end());
        return H[H.size() / 2];
    };
    const double h24 = median_H(24);
    const double h48 = median_H(48);
    CHECK(h48 < h24 / 1.7);   // at least first-order convergence
}

TEST_CASE("bjorling geodesic: planar, closed, and traced through all sheets") {
    const auto fam = families::make_even_family(2, kA2);
    const auto bj = bjorling_geodesic_check(fam, 256);
    CHECK(bj.x3_deviation < 1e-6);
    CHECK(bj.closure_gap < 1e-6);
    CHECK(bj.trace.size() == size_t(256 * 3 + 1));
    CHECK_THROWS_AS(bjorling_geodesic_check(families::make_catenoid()),
                    ValidationError);
}

TEST_CASE("obj export round trip") {
    SurfaceMesh tri;
    tri.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    tri.gauss_map = {{0, 0, 1}, {0, 0, 1}, {0, 0, 1}};
    tri.conformal_factor = {1, 1, 1};
    tri.domain_tag.resize(3);
    tri.faces = {{0, 1, 2}};
    const std::string path = "/tmp/msforge_tri.obj";
    export_obj(tri, path);
    std::ifstream is(path);
    std::string line;
    int nv = 0, nf = 0, nn = 0;
    while (std::getline(is, line)) {
        if (line.rfind("v ", 0) == 0) ++nv;
        if (line.rfind("vn ", 0) == 0) ++nn;
        if (line.rfind("f ", 0) == 0) ++nf;
    }
    CHECK(nv == 3);
    CHECK(nn == 3);
    CHECK(nf == 1);

    // empty mesh: header-only file
    export_obj(SurfaceMesh{}, path);
    std::ifstream is2(path);
    int lines = 0;
    while (std::getline(is2, line)) ++lines;
    CHECK(lines == 1);

    // a real mesh passes a reference parse: indices valid, no degenerate faces
    const auto cat = families::make_catenoid();
    MeshGrid grid;
    grid.radial = 20;
    grid.angular = 20;
    grid.inner_log = 1.0;
    grid.outer_log = 1.0;
    const auto mesh = build_mesh(cat, grid);
    export_obj(mesh, path);
    std::ifstream is3(path);
    std::vector<Eigen::Vector3d> vs;
    std::vector<std::array<int, 3>> fs;
    while (std::getline(is3, line)) {
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "v") {
            Eigen::Vector3d v;
            ss >> v.x() >> v.y() >> v.z();
            vs.push_back(v);
        } else if (tag == "f") {
            std::array<int, 3> f{};
            ss >> f[0] >> f[1] >> f[2];
            fs.push_back(f);
        }
    }
    CHECK(vs.size() == mesh.vertices.size());
    CHECK(fs.size() == mesh.faces.size());
    for (const auto& f : fs) {
        for (int vid : f) {
            CHECK(vid >= 1);
            CHECK(vid <= int(vs.size()));
        }
        const Eigen::Vector3d a = vs[f[0] - 1], b = vs[f[1] - 1], c = vs[f[2] - 1];
        CHECK((b - a).cross(c - a).norm() > 1e-12);
    }
    std::remove(path.c_str());
}
