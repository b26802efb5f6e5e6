#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "vestokes/errors.hpp"
#include "vestokes/properties.hpp"

using namespace vestokes;
using namespace vestokes::cli;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto d = std::filesystem::temp_directory_path() / ("vestokes_cli_" + name);
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
}

KeyValues parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

struct Outcome {
    int code;
    std::string out, err;
};

Outcome run(const std::string& command, const KeyValues& kv) {
    std::ostringstream out, err;
    const int code = run_command(make_run_config(command, kv), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// 3^3 grid of diag(2, 0.75, 1) with one negative entry at the center node.
std::filesystem::path write_grid(const std::filesystem::path& dir, bool break_center) {
    const auto p = dir / "b.txt";
    std::ofstream f(p);
    f << "3 3 3 1 1 1\n";
    for (int n = 0; n < 27; ++n) f << "2 0.75 " << (break_center && n == 13 ? -1 : 1) << " 0 0 0\n";
    return p;
}

}  // namespace

TEST(ConfigFile, CommentsBlanksAndUnderscores) {
    const KeyValues kv = parse("# header\n\nmu = 1, 2, 3   # trailing\nquad_points=4\n");
    ASSERT_EQ(kv.size(), 2u);
    EXPECT_EQ(kv.at("mu"), "1, 2, 3");
    EXPECT_EQ(kv.at("quad-points"), "4");
}

TEST(ConfigFile, RejectsMalformedAndRepeated) {
    EXPECT_THROW(parse("mu 1,2,3\n"), ConfigError);
    EXPECT_THROW(parse("= 3\n"), ConfigError);
    EXPECT_THROW(parse("tol = 1\ntol = 2\n"), ConfigError);
}

TEST(RunConfigTest, Defaults) {
    const RunConfig c = make_run_config("solve", {});
    EXPECT_EQ(c.seed, kDefaultSeed);
    EXPECT_EQ(c.threads, 1);
    EXPECT_EQ(c.quad_points, 3);
    EXPECT_EQ(c.solver, "direct");
    ASSERT_TRUE(c.mu_const);
    EXPECT_EQ(c.mu_const->mu1, 1.0);
    EXPECT_FALSE(c.b);
}

TEST(RunConfigTest, ValidatesValues) {
    EXPECT_THROW(make_run_config("verify", {{"tol", "0"}}), ConfigError);
    EXPECT_THROW(make_run_config("verify", {{"tol", "-1e-3"}}), ConfigError);
    EXPECT_THROW(make_run_config("verify", {{"threads", "0"}}), ConfigError);
    EXPECT_THROW(make_run_config("verify", {{"mesh", "4"}}), ConfigError);
    EXPECT_THROW(make_run_config("solve", {{"mu", "1,2"}}), ConfigError);
    EXPECT_THROW(make_run_config("solve", {{"mesh", "4,4"}}), ConfigError);
    EXPECT_THROW(make_run_config("solve", {{"solver", "cg"}}), ConfigError);
    EXPECT_THROW(make_run_config("solve", {{"quad-points", "0"}}), ConfigError);
    EXPECT_THROW(make_run_config("mms", {{"meshes", "2,3"}}), ConfigError);
    EXPECT_THROW(make_run_config("mms", {{"case", "nope"}}), ConfigError);
    EXPECT_THROW(make_run_config("solve", {{"b-field", "/nonexistent/b.txt"}}), ConfigError);
    EXPECT_THROW(make_run_config("solve", {{"b", "1,1,1,0,0,0"}, {"b-field", "x"}}), ConfigError);
    EXPECT_THROW(make_run_config("solve", {{"f", "abs(,0,0"}}), ConfigError);
    EXPECT_THROW(make_run_config("frobnicate", {}), ConfigError);
}

TEST(RunConfigTest, MuConstantOrField) {
    const RunConfig c = make_run_config("ellipticity", {{"mu", "-2.5, 4, 0.25"}});
    ASSERT_TRUE(c.mu_const);
    EXPECT_EQ(c.mu_const->mu2, 4.0);
    const RunConfig d = make_run_config("ellipticity", {{"mu", "1 + x, 0, 0"}});
    EXPECT_FALSE(d.mu_const);
    EXPECT_DOUBLE_EQ(d.mu.mu1.value({0.5, 0, 0}), 1.5);
}

TEST(RunConfigTest, GridFieldNodesAndLengths) {
    const auto dir = scratch("grid");
    const auto p = dir / "b.txt";
    {
        std::ofstream f(p);
        f << "2 3 2 1 2 0.5\n";
        for (int n = 0; n < 12; ++n) f << "1 1 1 0 0 0\n";
    }
    const RunConfig c = make_run_config("ellipticity", {{"b-field", p.string()}});
    ASSERT_EQ(c.b_nodes.size(), 12u);
    EXPECT_EQ(c.lengths, (Vec3{1, 2, 0.5}));
    EXPECT_EQ(c.b_nodes[1], (Vec3{0, 0, 0.5}));
    EXPECT_EQ(c.b_nodes.back(), (Vec3{1, 2, 0.5}));
}

TEST(RunConfigTest, OutputDirPrecedence) {
    const auto dir = scratch("outdir");
    ::setenv(kOutputDirEnv, (dir / "env").c_str(), 1);
    EXPECT_EQ(make_run_config("verify", {}).output_dir, dir / "env");
    EXPECT_EQ(make_run_config("verify", {{"output-dir", (dir / "flag").string()}}).output_dir, dir / "flag");
    ::unsetenv(kOutputDirEnv);
    EXPECT_EQ(make_run_config("verify", {}).output_dir, ".");
    EXPECT_TRUE(std::filesystem::is_directory(dir / "flag"));
}

TEST(Ellipticity, CaseOneHasFullHalfLine) {
    const Outcome r = run("ellipticity", {{"mu", "-1,1,1"}});
    EXPECT_EQ(r.code, kOk);
    EXPECT_NE(r.out.find("scenario: (i)\n"), std::string::npos);
    EXPECT_NE(r.out.find("Lambda: (0, inf)"), std::string::npos);
}

TEST(Ellipticity, RootsAndDelta) {
    const Outcome r = run("ellipticity", {{"mu", "-2.5,4,0.25"}, {"epsilon", "0.1"}});
    EXPECT_EQ(r.code, kOk);
    EXPECT_NE(r.out.find("lambda- = 0.125, lambda+ = 0.5"), std::string::npos);
    EXPECT_NE(r.out.find("delta(eps = 0.1) = "), std::string::npos);
}

TEST(Ellipticity, NotThermodynamicExitsTwo) {
    const Outcome r = run("ellipticity", {{"mu", "1,-1,-1"}});
    EXPECT_EQ(r.code, kConfig);
    EXPECT_NE(r.err.find("mu1 + mu2 + mu3 = -1"), std::string::npos);
}

TEST(Ellipticity, NonSPDGridExitsThree) {
    const auto dir = scratch("ell_spd");
    const Outcome r = run("ellipticity", {{"mu", "1,1,1"}, {"b-field", write_grid(dir, true).string()}});
    EXPECT_EQ(r.code, kNotSPD);
    EXPECT_NE(r.err.find("(0.5, 0.5, 0.5)"), std::string::npos);
}

TEST(Ellipticity, AlphaSignDecidesExit) {
    const auto dir = scratch("ell_alpha");
    // Eigenvalue 0.3 lies between the roots 0.125 and 0.5 where g < 0.
    const Outcome bad = run("ellipticity", {{"mu", "-2.5,4,0.25"}, {"b", "0.3,1,1/0.3,0,0,0"}});
    EXPECT_EQ(bad.code, kNotElliptic);
    const Outcome good = run("ellipticity", {{"mu", "-2.5,4,0.25"},
                                             {"b-field", write_grid(dir, false).string()},
                                             {"json", "e.json"},
                                             {"output-dir", dir.string()}});
    EXPECT_EQ(good.code, kOk);
    // g(2) = 5.625, g(1) = 1.75, g(0.75) = 0.5 + 1/3.
    const auto j = nlohmann::json::parse(slurp(dir / "e.json"));
    EXPECT_NEAR(j["alpha"].get<double>(), 0.5 + 1.0 / 3.0, 1e-14);
    EXPECT_EQ(j["scenario"], "(ii)");
}

TEST(Ellipticity, JsonOnlyWhenRequested) {
    const auto dir = scratch("ell_json");
    run("ellipticity", {{"mu", "-1,1,1"}, {"output-dir", dir.string()}});
    EXPECT_TRUE(std::filesystem::is_empty(dir));
}

TEST(Solve, ZeroForcingGivesZeroFields) {
    const auto dir = scratch("solve_zero");
    const Outcome r = run("solve", {{"mesh", "2"}, {"f", "0,0,0"}, {"output-dir", dir.string()}});
    ASSERT_EQ(r.code, kOk) << r.err;
    std::ifstream vtk(dir / "solve.vtk");
    std::string line;
    while (std::getline(vtk, line) && line != "VECTORS velocity double") {
    }
    int rows = 0;
    while (std::getline(vtk, line) && line.rfind("POINT_DATA", 0) != 0 && line.rfind("SCALARS", 0) != 0) {
        if (line.empty()) continue;
        EXPECT_EQ(line, "0 0 0");
        ++rows;
    }
    EXPECT_EQ(rows, 125);  // P2 nodes of a 2^3 mesh
    const auto j = nlohmann::json::parse(slurp(dir / "solve.json"));
    for (const char* key : {"alpha", "scenario", "bounds", "norms", "solver"}) EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["bounds"][0]["id"], "grad_v");
    EXPECT_TRUE(j["bounds"][0]["satisfied"].get<bool>());
}

TEST(Solve, ClassicalBoundHolds) {
    const auto dir = scratch("solve_classical");
    const Outcome r = run("solve", {{"mesh", "4"}, {"f", "sin(pi*x)*y, cos(pi*z), x*y*z"}, {"output-dir", dir.string()}});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto j = nlohmann::json::parse(slurp(dir / "solve.json"));
    EXPECT_DOUBLE_EQ(j["alpha"].get<double>(), 1.0);
    EXPECT_EQ(j["solver"]["method"], "umfpack-lu");
    const auto& b = j["bounds"][0];
    EXPECT_LE(b["lhs"].get<double>(), b["rhs"].get<double>());
    for (const auto& e : j["bounds"])
        if (e["id"] != "grad_v") EXPECT_TRUE(e.contains("ratio")) << e["id"];
}

TEST(Solve, NonSPDSampleExitsFourWithLocation) {
    const auto dir = scratch("solve_spd");
    const Outcome r = run("solve", {{"mu", "1,1,1"},
                                    {"b-field", write_grid(dir, true).string()},
                                    {"mesh", "4"},
                                    {"output-dir", dir.string()}});
    EXPECT_EQ(r.code, kNotElliptic);
    EXPECT_NE(r.err.find("at quadrature point ("), std::string::npos);
}

TEST(Solve, UzawaAgreesWithDirect) {
    const auto dir = scratch("solve_uzawa");
    const KeyValues base{{"mesh", "2"}, {"mu", "1,0.5,0.25"}, {"f", "x,y*y,sin(z)"}, {"output-dir", dir.string()}};
    KeyValues a = base, b = base;
    a["json"] = "a.json";
    b["json"] = "b.json";
    b["solver"] = "uzawa";
    b["tol"] = "1e-12";
    ASSERT_EQ(run("solve", a).code, kOk);
    ASSERT_EQ(run("solve", b).code, kOk);
    const auto ja = nlohmann::json::parse(slurp(dir / "a.json")), jb = nlohmann::json::parse(slurp(dir / "b.json"));
    EXPECT_EQ(jb["solver"]["method"], "uzawa-cg");
    EXPECT_NEAR(ja["bounds"][0]["lhs"].get<double>(), jb["bounds"][0]["lhs"].get<double>(), 1e-9);
}

TEST(Mms, SingleMeshHasNoRates) {
    const auto dir = scratch("mms_single");
    const Outcome r = run("mms", {{"meshes", "2"}, {"output-dir", dir.string()}});
    EXPECT_EQ(r.code, kOk);
    EXPECT_NE(r.out.find("single mesh: no rates"), std::string::npos);
    EXPECT_TRUE(std::filesystem::exists(dir / "mms_classical.csv"));
}

TEST(Mms, ClassicalTwoLevelsPassesAndLabelsThresholds) {
    const auto dir = scratch("mms_two");
    const Outcome r = run("mms", {{"meshes", "2,4"}, {"output-dir", dir.string()}});
    EXPECT_EQ(r.code, kOk) << r.err;
    const auto j = nlohmann::json::parse(slurp(dir / "mms_classical.json"));
    EXPECT_NE(j["thresholds"]["label"].get<std::string>().find("standard Taylor-Hood"), std::string::npos);
    EXPECT_EQ(j["convergence"]["rows"].size(), 2u);
    EXPECT_EQ(slurp(dir / "mms_classical.csv").substr(0, 5), "case,");
}

TEST(Mms, UnderIntegratedLoadExitsSix) {
    const auto dir = scratch("mms_underint");
    const Outcome r = run("mms", {{"meshes", "2,4"}, {"load-quad-points", "1"}, {"output-dir", dir.string()}});
    EXPECT_EQ(r.code, kRateFailure);
    EXPECT_NE(r.err.find("rate below threshold"), std::string::npos);
}

TEST(Mms, UnderIntegratedOperatorIsSingular) {
    const auto dir = scratch("mms_singular");
    const Outcome r = run("mms", {{"meshes", "2"}, {"quad-points", "1"}, {"output-dir", dir.string()}});
    EXPECT_EQ(r.code, kSolverFailure);
}

TEST(Mms, ReportIsReproducible) {
    const auto dir = scratch("mms_repeat");
    for (const char* name : {"a.json", "b.json"})
        run("mms", {{"case", "anisotropic"}, {"meshes", "2,4"}, {"json", name}, {"output-dir", dir.string()}});
    EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
}
