// msforge: constructs, verifies, meshes and classifies the two-ended
// minimal-surface families, and certifies the non-existence cases.

#include "msforge/classify.hpp"
#include "msforge/errors.hpp"
#include "msforge/families.hpp"
#include "msforge/geometry.hpp"
#include "msforge/integrator.hpp"
#include "msforge/periods.hpp"
#include "msforge/quad.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

using nlohmann::json;
using namespace msforge;

namespace {

json load_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open " + path);
    json j;
    is >> j;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot write " + path);
    os << text;
}

families::FamilyBundle bundle_from_params(const json& p) {
    const std::string family = p.at("family").get<std::string>();
    if (family == "genus")
        return families::make_genus_family(p.at("gamma").get<int>(),
                                           p.at("c").get<double>());
    if (family == "even")
        return families::make_even_family(p.at("k").get<int>(),
                                          p.at("a").get<double>());
    if (family == "catenoid") return families::make_catenoid();
    if (family == "weber")
        return families::make_weber_family(p.at("gamma").get<int>(),
                                           p.at("c").get<double>(),
                                           p.at("weber_a").get<std::vector<double>>());
    throw ValidationError("unknown family: " + family);
}

int cmd_solve(const std::string& family, int gamma, int k, double tol,
              const std::string& out_path) {
    json out;
    out["family"] = family;
    if (family == "genus") {
        const auto pi = periods::genus_family_integrals(gamma);
        const double c = periods::solve_c(gamma);
        const auto fam = families::make_genus_family(gamma, c);
        const auto rep = integrator::verify_periods(fam.data, fam.curve,
                                                    {fam.generators.front()},
                                                    {}, 1e-11);
        out["gamma"] = gamma;
        out["c"] = c;
        out["A"] = pi.get("A").value;
        out["B"] = pi.get("B").value;
        out["residual"] = rep.worst_cycle_residual;
        std::cout << "genus family gamma=" << gamma << ": c=" << c
                  << " residual=" << rep.worst_cycle_residual << "\n";
    } else if (family == "even") {
        const auto sol = periods::solve_a(k, tol);
        out["k"] = k;
        out["a"] = sol.a;
        out["c"] = sol.c;
        out["residual"] = std::abs(sol.defect);
        std::cout << "even family k=" << k << ": a=" << sol.a << " c=" << sol.c
                  << " |F(a)|=" << std::abs(sol.defect) << "\n";
    } else if (family == "weber") {
        const auto sol = periods::weber_solve(gamma, tol);
        out["gamma"] = gamma;
        out["c"] = sol.c;
        out["weber_a"] = sol.a;
        out["residual"] = sol.residual;
        out["converged"] = sol.converged;
        std::cout << "weber family gamma=" << gamma << ": "
                  << (sol.converged ? "converged" : "NO CONVERGENCE")
                  << " residual=" << sol.residual << "\n";
        if (!out_path.empty()) write_text(out_path, out.dump(2) + "\n");
        if (!sol.converged) {
            std::cerr << json{{"error", "numeric"},
                              {"message", sol.message}}.dump() << "\n";
            return 3;
        }
        return 0;
    } else if (family == "catenoid") {
        out["residual"] = 0.0;
        std::cout << "catenoid: built-in, nothing to solve\n";
    } else {
        throw ValidationError("unknown family: " + family);
    }
    if (!out_path.empty()) write_text(out_path, out.dump(2) + "\n");
    return 0;
}

int cmd_verify(const std::string& params_path, const std::string& family_direct,
               double tol_period, double tol_symmetry, int samples, unsigned seed,
               const std::string& out_path) {
    json params;
    if (!params_path.empty()) params = load_json(params_path);
    else if (!family_direct.empty()) params["family"] = family_direct;
    else throw ValidationError("verify: need --params or --family");

    const auto fam = bundle_from_params(params);
    json rep;
    rep["family"] = fam.name;
    bool pass = true;

    const auto periods_rep = integrator::verify_periods(fam.data, fam.curve,
                                                        fam.generators,
                                                        fam.puncture_z, 1e-11);
    rep["period"]["worst_cycle_residual"] = periods_rep.worst_cycle_residual;
    rep["period"]["worst_residue_imag"] = periods_rep.worst_residue_imag;
    rep["period"]["pass"] = periods_rep.pass(tol_period);
    pass = pass && periods_rep.pass(tol_period);

    const auto ends = geometry::end_orders(fam.data, fam.curve);
    rep["ends"]["d_profile"] = ends.d_profile_sorted();
    json endarr = json::array();
    for (const auto& e : ends.ends)
        endarr.push_back({{"d", e.d}, {"type", e.type}});
    rep["ends"]["detail"] = endarr;

    const auto tau = geometry::total_curvature(fam.data, fam.curve);
    rep["total_curvature"]["tau_over_4pi"] = tau.tau_over_4pi;
    rep["total_curvature"]["deg_g"] = tau.deg_g;
    const bool tau_ok = std::abs(tau.tau_over_4pi - double(tau.deg_g)) <
                        0.01 * double(tau.deg_g);
    rep["total_curvature"]["pass"] = tau_ok;
    pass = pass && tau_ok;

    const auto jm = geometry::jorge_meeks_check(fam.genus, ends, tau.deg_g);
    rep["jorge_meeks"]["lhs"] = jm.lhs;
    rep["jorge_meeks"]["rhs"] = jm.rhs;
    rep["jorge_meeks"]["equality"] = jm.equality;
    pass = pass && jm.equality;

    json symarr = json::array();
    double worst_dev = 0.0;
    for (const auto& op : fam.symmetries) {
        const auto sc = geometry::symmetry_check(fam, op, samples, seed);
        symarr.push_back({{"name", op.name},
                          {"deviation", sc.deviation},
                          {"pullback_defect", sc.pullback_defect}});
        worst_dev = std::max(worst_dev, sc.deviation);
    }
    rep["symmetry"]["ops"] = symarr;
    rep["symmetry"]["group_order"] = geometry::symmetry_group_order(fam.symmetries);
    rep["symmetry"]["pass"] = worst_dev < tol_symmetry;
    pass = pass && worst_dev < tol_symmetry;

    if (fam.name == "even") {
        const auto bj = geometry::bjorling_geodesic_check(fam);
        rep["bjorling"]["x3_deviation"] = bj.x3_deviation;
        rep["bjorling"]["closure_gap"] = bj.closure_gap;
        const bool bok = bj.x3_deviation < 1e-6 && bj.closure_gap < 1e-6;
        rep["bjorling"]["pass"] = bok;
        pass = pass && bok;
    }

    rep["pass"] = pass;
    std::cout << "verify " << fam.name << ": " << (pass ? "PASS" : "FAIL")
              << " (period " << periods_rep.worst_cycle_residual
              << ", symmetry " << worst_dev
              << ", tau/4pi " << tau.tau_over_4pi << ")\n";
    if (!out_path.empty()) write_text(out_path, rep.dump(2) + "\n");
    return pass ? 0 : 3;
}

int cmd_mesh(const std::string& params_path, const std::string& family_direct,
             const std::string& out_path, int res, bool force,
             const std::string& sidecar_path) {
    json params;
    if (!params_path.empty()) params = load_json(params_path);
    else if (!family_direct.empty()) params["family"] = family_direct;
    else throw ValidationError("mesh: need --params or --family");
    const auto fam = bundle_from_params(params);

    geometry::MeshGrid grid;
    grid.radial = res;
    grid.angular = res;
    const auto mesh = geometry::build_mesh(fam, grid, force ? 0.0 : 1e-6);
    geometry::export_obj(mesh, out_path);
    std::cout << "mesh " << fam.name << ": " << mesh.vertices.size()
              << " vertices, " << mesh.faces.size() << " faces -> " << out_path
              << "\n";
    if (!sidecar_path.empty()) {
        const auto rep = integrator::verify_periods(fam.data, fam.curve,
                                                    fam.generators, fam.puncture_z,
                                                    1e-11);
        const auto tau = geometry::total_curvature(fam.data, fam.curve);
        json side;
        side["family"] = fam.name;
        side["params"] = params;
        side["period_residual"] = rep.worst_cycle_residual;
        side["tau_over_4pi"] = tau.tau_over_4pi;
        side["vertices"] = mesh.vertices.size();
        side["faces"] = mesh.faces.size();
        write_text(sidecar_path, side.dump(2) + "\n");
    }
    return 0;
}

int cmd_classify(int gamma, int gamma_max, bool as_json, const std::string& out_path) {
    std::ostringstream os;
    if (gamma_max > 0) {
        if (as_json) {
            os << classify::render_tables_json(gamma_max);
        } else {
            for (int t = 4; t <= 8; ++t) os << classify::render_table(t, gamma_max);
        }
    } else {
        const auto rc = classify::enumerate_R_cases(gamma);
        const auto d1 = classify::enumerate_Delta0_cases(gamma, true);
        const auto d0 = classify::enumerate_Delta0_cases(gamma, false);
        if (as_json) {
            json j;
            auto dump = [](const std::vector<classify::RamificationCase>& cs) {
                json arr = json::array();
                for (const auto& c : cs)
                    arr.push_back({{"branch_fibers", c.branch_count},
                                   {"group_order", c.group_order},
                                   {"m", c.m}});
                return arr;
            };
            j["gamma"] = gamma;
            j["rotation_cases"] = dump(rc);
            j["swap_cases"] = dump(d1);
            j["noswap_cases"] = dump(d0);
            os << j.dump(2);
        } else {
            auto put = [&](const char* tag,
                           const std::vector<classify::RamificationCase>& cs) {
                for (const auto& c : cs) {
                    os << tag << " gamma=" << gamma << " group=" << c.group_order
                       << " m=";
                    for (size_t i = 0; i < c.m.size(); ++i)
                        os << (i ? "," : "") << c.m[i];
                    os << "\n";
                }
            };
            put("rotation", rc);
            put("swap", d1);
            put("noswap", d0);
        }
    }
    if (!out_path.empty()) write_text(out_path, os.str());
    else std::cout << os.str();
    return 0;
}

int cmd_nonexist(const std::string& case_name, int grid, const std::string& out_path) {
    periods::NonexistenceCase which;
    if (case_name == "genus1_alt") which = periods::NonexistenceCase::genus1_alt;
    else if (case_name == "even_alt_a_gt_1")
        which = periods::NonexistenceCase::even_alt_a_gt_1;
    else if (case_name == "even_alt_0_lt_a_lt_1")
        which = periods::NonexistenceCase::even_alt_0_lt_a_lt_1;
    else if (case_name == "even_alt_a_neg")
        which = periods::NonexistenceCase::even_alt_a_neg;
    else throw ValidationError("unknown case: " + case_name);

    const auto rep = periods::nonexistence_report(which, grid);
    json j;
    j["case"] = case_name;
    j["all_obstructed"] = rep.all_obstructed;
    json arr = json::array();
    for (const auto& s : rep.samples)
        arr.push_back({{"parameter", s.parameter},
                       {"lhs", s.lhs},
                       {"rhs_factor", s.rhs_factor},
                       {"bound", s.bound},
                       {"obstructed", s.obstructed}});
    j["samples"] = arr;
    if (which == periods::NonexistenceCase::even_alt_a_neg) {
        j["claim1"] = {rep.claim1_lo, rep.claim1_hi};
        j["claim2"] = {"-inf", rep.claim2_hi};
        j["overlap_nonempty"] = rep.claim1_lo < rep.claim2_hi;
    }
    std::cout << "nonexist " << case_name << ": "
              << (rep.all_obstructed ? "obstruction confirmed at every sample"
                                     : "NOT obstructed")
              << " (" << rep.samples.size() << " samples)\n";
    if (!out_path.empty()) write_text(out_path, j.dump(2) + "\n");
    return rep.all_obstructed ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimal surfaces of least total curvature with two ends"};
    app.require_subcommand(1);

    std::string family, params_path, out_path, sidecar_path, case_name;
    int gamma = 1, k = 2, res = 48, samples = 200, grid = 64, gamma_max = 0;
    unsigned seed = 12345;
    double tol = 1e-10, tol_period = 1e-8, tol_symmetry = 1e-6;
    bool force = false, as_json = false;

    auto* solve = app.add_subcommand("solve", "solve the period conditions");
    solve->add_option("--family", family, "genus|even|weber|catenoid")->required();
    solve->add_option("--gamma", gamma, "genus for genus/weber families");
    solve->add_option("--k", k, "parameter for the even family");
    solve->add_option("--tol", tol, "solver tolerance");
    solve->add_option("--out", out_path, "write solved parameters JSON here");

    auto* verify = app.add_subcommand("verify", "verify a solved surface");
    verify->add_option("--params", params_path, "solved parameters JSON");
    verify->add_option("--family", family, "built-in family (catenoid)");
    verify->add_option("--tol-period", tol_period, "period residual tolerance")
        ->envname("MSFORGE_TOL_PERIOD");
    verify->add_option("--tol-symmetry", tol_symmetry, "symmetry deviation tolerance");
    verify->add_option("--samples", samples, "symmetry sample count");
    verify->add_option("--seed", seed, "sample seed");
    verify->add_option("--out", out_path, "write the verification report here");

    auto* mesh = app.add_subcommand("mesh", "export a triangle mesh");
    mesh->add_option("--params", params_path, "solved parameters JSON");
    mesh->add_option("--family", family, "built-in family (catenoid)");
    mesh->add_option("--out", out_path, "OBJ output path")->required();
    mesh->add_option("--res", res, "grid resolution")->envname("MSFORGE_MESH_RES");
    mesh->add_flag("--force", force, "mesh even when periods fail");
    mesh->add_option("--sidecar", sidecar_path, "write metadata JSON here");

    auto* cls = app.add_subcommand("classify", "ramification case tables");
    cls->add_option("--gamma", gamma, "genus");
    cls->add_option("--gamma-max", gamma_max, "emit full tables up to this genus");
    cls->add_flag("--json", as_json, "JSON output");
    cls->add_option("--out", out_path, "write output here");

    auto* nonex = app.add_subcommand("nonexist", "certify a non-existence case");
    nonex->add_option("--case", case_name,
                      "genus1_alt|even_alt_a_gt_1|even_alt_0_lt_a_lt_1|even_alt_a_neg")
        ->required();
    nonex->add_option("--grid", grid, "parameter grid size");
    nonex->add_option("--out", out_path, "write the report here");

    auto* weber = app.add_subcommand("weber", "solve the numerical family");
    weber->add_option("--gamma", gamma, "genus")->required();
    weber->add_option("--tol", tol, "residual tolerance");
    weber->add_option("--out", out_path, "write solved parameters JSON here");

    try {
        app.parse(argc, argv);
        if (solve->parsed()) return cmd_solve(family, gamma, k, tol, out_path);
        if (verify->parsed())
            return cmd_verify(params_path, family, tol_period, tol_symmetry,
                              samples, seed, out_path);
        if (mesh->parsed())
            return cmd_mesh(params_path, family, out_path, res, force, sidecar_path);
        if (cls->parsed()) return cmd_classify(gamma, gamma_max, as_json, out_path);
        if (nonex->parsed()) return cmd_nonexist(case_name, grid, out_path);
        if (weber->parsed()) return cmd_solve("weber", gamma, 0, tol, out_path);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << nlohmann::json{{"error", "validation"},
                                    {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << nlohmann::json{{"error", "validation"},
                                    {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << nlohmann::json{{"error", "numeric"},
                                    {"message", e.what()}}.dump() << "\n";
        return 3;
    }
    return 0;
}
