#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using nlohmann::json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult run(const std::string& args) {
    const std::string so = "/tmp/msforge_cli_out.txt";
    const std::string se = "/tmp/msforge_cli_err.txt";
    const std::string cmd = std::string(MSFORGE_CLI_PATH) + " " + args + " > " + so +
                            " 2> " + se;
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.code = WEXITSTATUS(raw);
    std::ifstream fo(so), fe(se);
    std::stringstream bo, be;
    bo << fo.rdbuf();
    be << fe.rdbuf();
    r.out = bo.str();
    r.err = be.str();
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("solve writes solved parameters") {
    const auto r = run("solve --family genus --gamma 1 --out /tmp/msforge_g1.json");
    CHECK(r.code == 0);
    const json p = json::parse(slurp("/tmp/msforge_g1.json"));
    CHECK(p.at("family") == "genus");
    CHECK(p.at("c").get<double>() > 0.0);
    CHECK(p.at("residual").get<double>() < 1e-8);

    const auto r2 = run("solve --family even --k 2 --out /tmp/msforge_e2.json");
    CHECK(r2.code == 0);
    const json p2 = json::parse(slurp("/tmp/msforge_e2.json"));
    const double a = p2.at("a").get<double>();
    CHECK(a > 1.0);
    CHECK(p2.at("residual").get<double>() < 1e-10);
}

TEST_CASE("odd k is a validation failure with machine-readable stderr") {
    const auto r = run("solve --family even --k 3");
    CHECK(r.code == 2);
    const json err = json::parse(r.err);
    CHECK(err.at("error") == "validation");
}

TEST_CASE("unknown family and unknown case fail with exit code 2") {
    CHECK(run("solve --family klein").code == 2);
    CHECK(run("nonexist --case nope").code == 2);
    CHECK(run("verify").code == 2);
}

TEST_CASE("classify emits the sporadic rows") {
    const auto r = run("classify --gamma 11");
    CHECK(r.code == 0);
    CHECK(r.out.find("m=2,3,3") != std::string::npos);
    const auto rj = run("classify --gamma 11 --json");
    CHECK(rj.code == 0);
    const json j = json::parse(rj.out);
    CHECK(!j.at("rotation_cases").empty());
}

TEST_CASE("nonexist confirms the obstruction") {
    const auto r = run("nonexist --case genus1_alt --grid 8 --out /tmp/msforge_ne.json");
    CHECK(r.code == 0);
    CHECK(r.out.find("obstruction confirmed") != std::string::npos);
    const json j = json::parse(slurp("/tmp/msforge_ne.json"));
    CHECK(j.at("all_obstructed") == true);

    const auto rn = run("nonexist --case even_alt_a_neg --grid 8");
    CHECK(rn.code == 0);
}

TEST_CASE("weber subcommand solves gamma 1") {
    const auto r = run("weber --gamma 1 --tol 1e-8 --out /tmp/msforge_w1.json");
    CHECK(r.code == 0);
    const json j = json::parse(slurp("/tmp/msforge_w1.json"));
    CHECK(j.at("converged") == true);
    CHECK(j.at("residual").get<double>() < 1e-8);
}

TEST_CASE("mesh writes an obj and a sidecar") {
    const auto r = run("mesh --family catenoid --out /tmp/msforge_cat.obj "
                       "--res 16 --sidecar /tmp/msforge_cat.json");
    CHECK(r.code == 0);
    const std::string obj = slurp("/tmp/msforge_cat.obj");
    CHECK(obj.find("\nv ") != std::string::npos);
    CHECK(obj.find("\nf ") != std::string::npos);
    const json side = json::parse(slurp("/tmp/msforge_cat.json"));
    CHECK(side.at("family") == "catenoid");
    CHECK(side.at("tau_over_4pi").get<double>() ==
          doctest::Approx(1.0).epsilon(0.01));
    // --out is required
    CHECK(run("mesh --family catenoid").code == 2);
}

TEST_CASE("verify the built-in catenoid end to end") {
    const auto r = run("verify --family catenoid --samples 30 "
                       "--out /tmp/msforge_catv.json");
    CHECK(r.code == 0);
    const json j = json::parse(slurp("/tmp/msforge_catv.json"));
    CHECK(j.at("pass") == true);
    CHECK(j.at("ends").at("d_profile") == json::array({1, 1}));
}

TEST_CASE("verify a solved even family from its params file") {
    REQUIRE(run("solve --family even --k 2 --out /tmp/msforge_e2.json").code == 0);
    const auto r = run("verify --params /tmp/msforge_e2.json --samples 30 "
                       "--out /tmp/msforge_e2v.json");
    CHECK(r.code == 0);
    const json j = json::parse(slurp("/tmp/msforge_e2v.json"));
    CHECK(j.at("pass") == true);
    CHECK(j.at("symmetry").at("group_order") == 12);
    CHECK(j.at("bjorling").at("x3_deviation").get<double>() < 1e-6);
}

TEST_CASE("reruns are byte-identical") {
    const auto a1 = run("classify --gamma 23");
    const auto a2 = run("classify --gamma 23");
    CHECK(a1.out == a2.out);
    REQUIRE(run("solve --family genus --gamma 2 --out /tmp/msforge_d1.json").code == 0);
    REQUIRE(run("solve --family genus --gamma 2 --out /tmp/msforge_d2.json").code == 0);
    CHECK(slurp("/tmp/msforge_d1.json") == slurp("/tmp/msforge_d2.json"));
}

TEST_CASE("environment variable feeds the mesh resolution") {
    const std::string cmd = std::string("MSFORGE_MESH_RES=12 ") + MSFORGE_CLI_PATH +
                            " mesh --family catenoid --out /tmp/msforge_env.obj "
                            "> /dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    const std::string obj = slurp("/tmp/msforge_env.obj");
    int nv = 0;
    for (size_t p = 0; (p = obj.find("\nv ", p)) != std::string::npos; p += 3) ++nv;
    CHECK(nv <= 12 * 12);   // coarse grid, not the default 48x48
    CHECK(nv > 0);
}
