#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "geomlab/surface.hpp"
#include "support.hpp"

using nlohmann::json;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd =
        std::string(GEOMLAB_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
        result.out.append(buf, got);
    }
    const int status = pclose(pipe);
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::filesystem::path work_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("geomlab_cli_" + name);
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Most commands need a mesh on disk; generate it once per process.
std::string sphere3_path() {
    static std::string path;
    if (path.empty()) {
        const auto p = work_path("sphere3.off");
        CliResult gen = run_cli("gen icosphere --level 3 -o " + p.string());
        REQUIRE(gen.code == 0);
        path = p.string();
    }
    return path;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("gen writes a valid mesh and reports its metadata") {
    const auto path = work_path("gen_check.off");
    CliResult res =
        run_cli("gen icosphere --level 3 -o " + path.string());
    CHECK(res.code == 0);
    json doc = json::parse(res.out);
    CHECK(doc["schema"] == "geomlab/1");
    CHECK(doc["kind"] == "gen");
    CHECK(doc["mesh"]["vertices"] == 642);
    CHECK(doc["mesh"]["faces"] == 1280);
    CHECK(doc["mesh"]["level"] == 3);

    geomlab::Mesh mesh = geomlab::load_off(path.string());
    geomlab::validate(mesh);
    CHECK(mesh.vertex_count() == 642);
    std::filesystem::remove(path);
}

TEST_CASE("gen covers the ellipsoid and perturbed families") {
    const auto path = work_path("gen_fam.off");
    CliResult ell = run_cli("gen ellipsoid --axes 1,1,1.1 --level 2 -o " +
                            path.string());
    CHECK(ell.code == 0);
    CHECK(json::parse(ell.out)["mesh"]["vertices"] == 162);

    CliResult pert = run_cli(
        "gen perturbed-sphere --level 2 --t 0.05 --seed 7 -o " +
        path.string());
    CHECK(pert.code == 0);
    CHECK(json::parse(pert.out)["mesh"]["vertices"] == 162);
    std::filesystem::remove(path);
}

TEST_CASE("argument errors exit with code two") {
    const auto path = work_path("never_written.off");
    CHECK(run_cli("gen ellipsoid --axes 1,-1,1 -o " + path.string()).code ==
          2);
    CHECK(run_cli("gen icosphere --level 9 -o " + path.string()).code == 2);
    CHECK(run_cli("gen icosphere --level 3").code == 2);
    CHECK(run_cli("frobnicate").code == 2);
    CHECK_FALSE(std::filesystem::exists(path));
}

TEST_CASE("missing input files exit with code three") {
    CHECK(run_cli("verify /nonexistent/mesh.off").code == 3);
    CHECK(run_cli("pinch /nonexistent/mesh.off").code == 3);
}

TEST_CASE("curvature emits csv rows per vertex") {
    CliResult res =
        run_cli("curvature " + sphere3_path() + " --format csv");
    CHECK(res.code == 0);
    std::istringstream in(res.out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "index,kappa_1,kappa_2,h1,h2,weight");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 642);
}

TEST_CASE("spectrum reports the low eigenvalues of the sphere") {
    CliResult res = run_cli("spectrum " + sphere3_path() + " --k 5");
    CHECK(res.code == 0);
    json doc = json::parse(res.out);
    CHECK(doc["kind"] == "spectrum");
    CHECK(doc["tensor"] == "id");
    auto values = doc["values"].get<std::vector<double>>();
    REQUIRE(values.size() == 5);
    CHECK(std::abs(values[0]) <= doc["zero_threshold"].get<double>());
    CHECK(values[1] >= 1.95);
    CHECK(values[3] <= 2.05);
    auto residuals = doc["residuals"].get<std::vector<double>>();
    for (double r : residuals) CHECK(r <= 1e-8);
}

TEST_CASE("verify certifies every asserted bound on the sphere") {
    CliResult res = run_cli("verify " + sphere3_path());
    CHECK(res.code == 0);
    json doc = json::parse(res.out);
    CHECK(doc["kind"] == "verify");
    CHECK(doc["mesh"]["lambda1_residual"].get<double>() <= 1e-9);
    REQUIRE(doc["entries"].size() == 16);
    for (const auto& e : doc["entries"]) {
        CHECK(e["hypotheses"] == true);
        CHECK(e["certified"] == true);
        CHECK(e["slack"].get<double>() >= 0.0);
    }
    CHECK(doc["entries"][0]["ratio"].get<double>() ==
          doctest::Approx(0.96025213).epsilon(1e-4));
    CHECK(doc["entries"][0]["tolerance"].get<double>() ==
          doctest::Approx(0.040001).epsilon(1e-9));
}

TEST_CASE("pinch passes its lemma checks on the sphere") {
    CliResult res = run_cli("pinch " + sphere3_path() + " --S t1 --T id");
    CHECK(res.code == 0);
    json doc = json::parse(res.out);
    const auto& p = doc["pinch"];
    CHECK(p["S"] == "t1");
    CHECK(p["T"] == "id");
    CHECK(p["lemmas"]["applicable"] == true);
    CHECK(p["lemmas"]["position_ok"] == true);
    CHECK(p["lemmas"]["tangential_ok"] == true);
    CHECK(p["lemmas"]["norm_gap_ok"] == true);
    CHECK(p["quantities"]["epsilon"].get<double>() <= 0.05);
    CHECK(p["starshaped"] == true);
    CHECK(p["quantities"]["radius"].get<double>() ==
          doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("stability reports a small deficit for the sphere") {
    CliResult res = run_cli("stability " + sphere3_path() + " --r 1");
    CHECK(res.code == 0);
    json doc = json::parse(res.out);
    const auto& s = doc["stability"];
    CHECK(s["r"] == 1);
    CHECK(s["deficit"].get<double>() >= 0.1);
    CHECK(s["deficit"].get<double>() <= 0.25);
    CHECK(s["curvature_positive"] == true);
    CHECK(s["chain"]["applicable"] == true);
    CHECK(s["chain"]["ok"] == true);
}

TEST_CASE("einstein reports a nearly constant intrinsic curvature") {
    CliResult res =
        run_cli("einstein " + sphere3_path() + " --p 4 --q 4");
    CHECK(res.code == 0);
    json doc = json::parse(res.out);
    const auto& e = doc["einstein"];
    CHECK(e["rbar"].get<double>() >= 2.0);
    CHECK(e["rbar"].get<double>() <= 2.2);
    CHECK(e["eps_einstein"].get<double>() <= 0.01);
    CHECK(e["chain"]["ok"] == true);
    CHECK(std::abs(e["aubry"]["gap"].get<double>()) <= 0.15);
    CHECK(e["schur"]["hypotheses"] == false);
}

TEST_CASE("pinch scan writes csv with a fit footer") {
    const auto path = work_path("scan.csv");
    CliResult res = run_cli(
        "scan --family ellipsoid --amplitudes 0.05:0.2:4 --level 3 "
        "--S t1 --T id --p 2 --q 4 -o " + path.string());
    CHECK(res.code == 0);
    const std::string text = slurp(path);
    CHECK(text.rfind("t,epsilon,dev_over_r,", 0) == 0);
    const auto footer = text.find("# fit slope=");
    REQUIRE(footer != std::string::npos);
    double slope = 0.0;
    REQUIRE(std::sscanf(text.c_str() + footer, "# fit slope=%lf", &slope) ==
            1);
    CHECK(slope >= 1.0 / 6.0 - 0.02);
    CHECK(slope <= 1.5);
    std::filesystem::remove(path);
}

TEST_CASE("einstein scan smoke test") {
    const auto path = work_path("scan_einstein.json");
    CliResult res = run_cli(
        "scan --einstein --family harmonic --amplitudes 0.04,0.08 "
        "--level 3 --p 4 --q 4 -o " + path.string());
    CHECK(res.code == 0);
    json doc = json::parse(slurp(path));
    CHECK(doc["kind"] == "scan-einstein");
    REQUIRE(doc["rows"].size() == 2);
    CHECK(doc["fit"]["rows_used"] == 2);
    CHECK(doc["fit"]["alpha"].get<double>() ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(doc["rows"][1]["eps_einstein"].get<double>() >
          doc["rows"][0]["eps_einstein"].get<double>());
    std::filesystem::remove(path);
}

TEST_CASE("reruns are byte identical") {
    const auto a = work_path("rerun_a.json");
    const auto b = work_path("rerun_b.json");
    CHECK(run_cli("verify " + sphere3_path() + " -o " + a.string()).code ==
          0);
    CHECK(run_cli("verify " + sphere3_path() + " -o " + b.string()).code ==
          0);
    CHECK(slurp(a) == slurp(b));

    const auto c = work_path("rerun_c.csv");
    const auto d = work_path("rerun_d.csv");
    const std::string scan_args =
        "scan --family ellipsoid --amplitudes 0.05,0.1 --level 3 --S t1 "
        "--T id -o ";
    CHECK(run_cli(scan_args + c.string()).code == 0);
    CHECK(run_cli(scan_args + d.string()).code == 0);
    CHECK(slurp(c) == slurp(d));
    for (const auto& p : {a, b, c, d}) std::filesystem::remove(p);
}

} // TEST_SUITE
