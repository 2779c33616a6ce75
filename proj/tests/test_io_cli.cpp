#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polydyn/dynamics.hpp"
#include "polydyn/io.hpp"
#include "polydyn/scenarios.hpp"

#include "helpers.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace polydyn;
namespace fs = std::filesystem;
using test::mat;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("polydyn_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

int run_sh(const std::string& command, const fs::path& cwd) {
    const std::string cmd = "cd '" + cwd.string() + "' && " + command +
                            " >cli.out 2>cli.err";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

int run_cli(const std::string& args, const fs::path& cwd) {
    return run_sh(std::string("'") + POLYDYN_CLI_PATH + "' " + args, cwd);
}

}  // namespace

TEST_CASE("doubles serialize losslessly and minimally") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.9) == "0.9");
    CHECK(format_double(1.0) == "1");
    SplitMix64 rng(3);
    for (int i = 0; i < 2000; ++i) {
        const double v = (rng.next_double() - 0.5) * std::pow(10.0, (i % 40) - 20);
        double back = std::strtod(format_double(v).c_str(), nullptr);
        CHECK(back == v);
    }
}

TEST_CASE("matrix files round-trip bit-exactly") {
    const auto dir = fresh_dir("roundtrip");
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto sys = test::random_system(seed);
        const fs::path csv = dir / "m.csv";
        const fs::path jsonp = dir / "m.json";
        write_matrix_csv(csv.string(), sys.w.matrix());
        write_matrix_json(jsonp.string(), sys.w.matrix());
        CHECK((read_matrix(csv.string()) == sys.w.matrix()));
        CHECK((read_matrix(jsonp.string()) == sys.w.matrix()));

        const fs::path vec_csv = dir / "v.csv";
        const fs::path vec_col = dir / "vcol.csv";
        const fs::path vec_json = dir / "v.json";
        write_vector_csv(vec_csv.string(), sys.a.diagonal());
        write_vector_csv_column(vec_col.string(), sys.a.diagonal());
        write_vector_json(vec_json.string(), sys.a.diagonal());
        CHECK((read_vector(vec_csv.string()) == sys.a.diagonal()));
        CHECK((read_vector(vec_col.string()) == sys.a.diagonal()));
        CHECK((read_vector(vec_json.string()) == sys.a.diagonal()));
    }
}

TEST_CASE("a rewritten matrix file is byte-identical") {
    const auto dir = fresh_dir("bytes");
    const auto sys = test::random_system(77);
    const fs::path first = dir / "a.csv";
    const fs::path second = dir / "b.csv";
    write_matrix_csv(first.string(), sys.x0);
    write_matrix_csv(second.string(), read_matrix(first.string()));
    CHECK(slurp(first) == slurp(second));
}

TEST_CASE("csv parse errors carry the line number") {
    const auto dir = fresh_dir("parse");
    spit(dir / "bad.csv", "1,0\n0.3,oops\n");
    try {
        read_matrix((dir / "bad.csv").string());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("bad.csv:2") != std::string::npos);
    }
    spit(dir / "ragged.csv", "1,0\n0.5\n");
    CHECK_THROWS_AS(read_matrix((dir / "ragged.csv").string()), ParseError);
    spit(dir / "empty.csv", "\n\n");
    CHECK_THROWS_AS(read_matrix((dir / "empty.csv").string()), ParseError);
}

TEST_CASE("scenario specs reject unknown keys") {
    const auto dir = fresh_dir("spec");
    spit(dir / "ok.json",
         R"({"kind":"two-value-A","n":8,"m":1,"seed":5,)"
         R"("parameters":{"a_low":0.1,"a_high":0.8,"high_fraction":0.5}})");
    const auto spec = read_scenario_spec((dir / "ok.json").string());
    CHECK(spec.kind == ScenarioKind::TwoValueA);
    CHECK(spec.n == 8);
    CHECK(spec.a_high == 0.8);

    spit(dir / "bad.json", R"({"kind":"cleavage","typo":1})");
    CHECK_THROWS_AS(read_scenario_spec((dir / "bad.json").string()),
                    ParseError);
    spit(dir / "badparam.json",
         R"({"kind":"cleavage","parameters":{"mystery":2}})");
    CHECK_THROWS_AS(read_scenario_spec((dir / "badparam.json").string()),
                    ParseError);
}

TEST_CASE("cli simulate matches the library and exits 0") {
    const auto dir = fresh_dir("cli_sim");
    const auto w = InfluenceMatrix::from_matrix(mat({{0, 1}, {1, 0}}));
    write_matrix_csv((dir / "w.csv").string(), w.matrix());
    spit(dir / "a.csv", "0.5,0.5\n");
    spit(dir / "x0.csv", "0\n1\n");

    REQUIRE(run_cli("simulate --w w.csv --a a.csv --x0 x0.csv --out run",
                    dir) == 0);
    CHECK(fs::exists(dir / "run" / "trajectory.csv"));
    CHECK(fs::exists(dir / "run" / "limit.json"));
    const std::string summary = slurp(dir / "cli.out");
    CHECK(summary.find("converged k=") != std::string::npos);

    // the CLI is a thin dispatch: the library reproduces its artifact
    const auto a = DampingMatrix::uniform(2, 0.5);
    const Matrix x0 = mat({{0}, {1}});
    auto [traj, limit] = iterate(w, a, x0);
    const auto dir2 = dir / "lib";
    fs::create_directories(dir2);
    write_trajectory_csv((dir2 / "trajectory.csv").string(), traj);
    write_limit_json((dir2 / "limit.json").string(), limit, &traj);
    CHECK(slurp(dir / "run" / "trajectory.csv") ==
          slurp(dir2 / "trajectory.csv"));
    CHECK(slurp(dir / "run" / "limit.json") == slurp(dir2 / "limit.json"));
}

TEST_CASE("cli reports legitimate negative outcomes with exit 1") {
    const auto dir = fresh_dir("cli_outcomes");
    spit(dir / "w.csv", "0,1\n1,0\n");
    spit(dir / "a.csv", "0.5,0.5\n");
    spit(dir / "a_one.csv", "1,1\n");
    spit(dir / "x0.csv", "0\n1\n");
    spit(dir / "xinf.csv", "0\n2\n");

    CHECK(run_cli("design-damping --w w.csv --x0 x0.csv --xinf xinf.csv "
                  "--out dd",
                  dir) == 1);
    CHECK(slurp(dir / "cli.out").find("sign-mismatch") != std::string::npos);
    CHECK(fs::exists(dir / "dd" / "feasibility.json"));

    CHECK(run_cli("classify --w w.csv --a a_one.csv", dir) == 1);
    CHECK(run_cli("limit --w w.csv --a a_one.csv --x0 x0.csv", dir) == 1);
    CHECK(run_cli("simulate --w w.csv --a a_one.csv --x0 x0.csv --k-max 200",
                  dir) == 1);
}

TEST_CASE("cli rejects malformed input with exit 2") {
    const auto dir = fresh_dir("cli_bad");
    spit(dir / "w.csv", "0,nope\n1,0\n");
    spit(dir / "a.csv", "0.5,0.5\n");
    spit(dir / "x0.csv", "0\n1\n");
    CHECK(run_cli("classify --w w.csv --a a.csv", dir) == 2);
    CHECK(slurp(dir / "cli.err").find("w.csv:1") != std::string::npos);

    spit(dir / "w.csv", "0.4,0.4\n1,0\n");  // bad row sum
    CHECK(run_cli("classify --w w.csv --a a.csv", dir) == 2);
    CHECK(run_cli("classify --w missing.csv --a a.csv", dir) == 2);
    CHECK(run_cli("frobnicate --w w.csv", dir) == 2);
}

TEST_CASE("cli scenario reruns are bit-identical and honor the env seed") {
    const auto dir = fresh_dir("cli_seed");
    REQUIRE(run_cli("scenario two-value-A --n 9 --m 1 --seed 21 --out s1",
                    dir) == 0);
    REQUIRE(run_cli("scenario two-value-A --n 9 --m 1 --seed 21 --out s2",
                    dir) == 0);
    for (const char* name :
         {"w.csv", "a.csv", "x0.csv", "trajectory.csv", "limit.json",
          "spec.json", "histogram_initial.csv", "histogram_final.csv"})
        CHECK(slurp(dir / "s1" / name) == slurp(dir / "s2" / name));

    REQUIRE(run_sh("POLYDYN_SEED=21 '" POLYDYN_CLI_PATH
                   "' scenario two-value-A --n 9 --m 1 --out s3",
                   dir) == 0);
    // env-run output matches the seeded run
    CHECK(slurp(dir / "s1" / "w.csv") == slurp(dir / "s3" / "w.csv"));
    // an explicit flag beats the environment
    REQUIRE(run_sh("POLYDYN_SEED=99 '" POLYDYN_CLI_PATH
                   "' scenario two-value-A --n 9 --m 1 --seed 21 --out s4",
                   dir) == 0);
    CHECK(slurp(dir / "s1" / "w.csv") == slurp(dir / "s4" / "w.csv"));
}

TEST_CASE("cli accepts a config file in place of flags") {
    const auto dir = fresh_dir("cli_config");
    spit(dir / "w.csv", "0,1\n1,0\n");
    spit(dir / "a.csv", "0.5,0.5\n");
    spit(dir / "x0.csv", "0\n1\n");
    spit(dir / "run.json",
         R"({"command":"simulate","w":"w.csv","a":"a.csv","x0":"x0.csv",)"
         R"("tol":1e-10,"out":"cfg_run"})");
    REQUIRE(run_cli("--config run.json", dir) == 0);
    CHECK(fs::exists(dir / "cfg_run" / "limit.json"));

    spit(dir / "bad.json", R"({"command":"simulate","wut":"w.csv"})");
    CHECK(run_cli("--config bad.json", dir) == 2);
}

TEST_CASE("cli scenario runs from a spec file") {
    const auto dir = fresh_dir("cli_specfile");
    spit(dir / "spec.json",
         R"({"kind":"cleavage","n":60,"m":1,"seed":5,)"
         R"("parameters":{"extremist_fraction":0.1}})");
    REQUIRE(run_cli("scenario cleavage --spec spec.json --out out", dir) == 0);
    CHECK(fs::exists(dir / "out" / "histogram_final.csv"));
    // the echoed spec reproduces the run
    REQUIRE(run_cli("scenario cleavage --spec out/spec.json --out out2",
                    dir) == 0);
    CHECK(slurp(dir / "out" / "x0.csv") == slurp(dir / "out2" / "x0.csv"));
}
