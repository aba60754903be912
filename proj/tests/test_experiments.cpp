#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "fairboost/experiments.hpp"
#include "support.hpp"

using namespace fbtest;

namespace {

Json without_timing(Json report) {
    report.erase("timing");
    return report;
}

namespace fs = std::filesystem;

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / ("fairboost_unit_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FAIRBOOST_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("run reports aggregate numeric row fields") {
    RunReport r("demo", 4);
    r.add_row({{"trial", 0}, {"x", 1.0}, {"name", "a,b"}});
    r.add_row({{"trial", 1}, {"x", 3.0}, {"flag", true}});
    r.add_row({{"trial", 2}, {"x", 2.0}});
    r.add_check("ok", true);
    const auto j = r.to_json();
    CHECK(j["command"] == "demo");
    CHECK(j["aggregate"]["x"]["min"] == 1.0);
    CHECK(j["aggregate"]["x"]["median"] == 2.0);
    CHECK(j["aggregate"]["x"]["max"] == 3.0);
    CHECK_FALSE(j["aggregate"].contains("trial"));
    CHECK(j["passed"] == true);
    CHECK(r.rows_csv() == "trial,x,name,flag\n0,1,\"a,b\",\n1,3,,true\n2,2,,\n");
    r.add_check("bad", false);
    CHECK_FALSE(r.passed());
}

TEST_CASE("parallel_for covers every index and rethrows the first failure") {
    for (unsigned jobs : {1u, 2u, 5u}) {
        std::vector<int> hits(23, 0);
        parallel_for(hits.size(), jobs, [&](std::size_t i) { hits[i] += 1; });
        CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
        try {
            parallel_for(10, jobs, [](std::size_t i) {
                if (i == 3 || i == 7) throw InvalidArgument("index " + std::to_string(i));
            });
            FAIL("expected an exception");
        } catch (const InvalidArgument& e) {
            CHECK(std::string(e.what()).find("index 3") != std::string::npos);
        }
    }
    CHECK(trial_seed(1, 0) != trial_seed(1, 1));
    CHECK(trial_seed(1, 0) == trial_seed(1, 0));
}

TEST_CASE("learn batches do not depend on the worker count") {
    const Json input{{"generator", "corpus"}};
    const Json serial{{"seed", 5}, {"trials", 4}, {"jobs", 1}, {"tier", "ma,calma"}, {"tau", 0.05}};
    Json threaded = serial;
    threaded["jobs"] = 3;
    const auto a = run_command("learn", input, serial);
    const auto b = run_command("learn", input, threaded);
    CHECK(a.exit_code == 0);
    CHECK(without_timing(a.report) == without_timing(b.report));
    CHECK(a.report["rows"].size() == 8);
    CHECK(a.report.contains("timing"));
}

TEST_CASE("iteration cap maps to the non-convergence exit") {
    const Json input{{"generator", "maj"}};
    const auto r = run_command("learn", input, {{"tier", "ma"}, {"tau", 0.001}, {"max_iters", 1}});
    CHECK(r.exit_code == kExitNonConvergence);
    CHECK(r.report["passed"] == false);
    CHECK(r.artifacts.count("trace_csv") == 1);
    CHECK(r.artifacts.count("predictor") == 1);
}

TEST_CASE("unknown commands, suites and options") {
    CHECK_THROWS_AS(run_command("fly", Json(), Json::object()), InvalidArgument);
    CHECK_THROWS(run_command("verify", Json(), {{"suite", "nope"}}));
    CHECK_THROWS_AS(run_command("learn", Json{{"generator", "maj"}}, {{"tau", "big"}}), SchemaError);
    CHECK_THROWS_AS(run_command("gen", Json{{"generator", "mystery"}}, Json::object()), SchemaError);
    CHECK(verify_suite_names().size() == 11);
}

TEST_CASE("audit report on the MAJ instance") {
    const auto gen = run_command("gen", Json{{"generator", "maj"}}, Json::object());
    const auto inst = Json::parse(gen.artifacts.at("instance"));
    const auto r = run_command("audit", inst, Json::object());
    CHECK(r.exit_code == 0);
    const auto& m = r.report["metrics"];
    CHECK(m["ma"]["value"].get<double>() == doctest::Approx(0.0));
    CHECK(m["ece"]["value"].get<double>() == doctest::Approx(0.5));
    CHECK(m["best_postprocessing"].get<double>() == doctest::Approx(0.0));
}

TEST_CASE("command line exit codes") {
    const auto dir = scratch_dir();
    const auto inst = (dir / "maj.json").string();
    REQUIRE(run_cli("gen maj --out " + (dir / "gen").string()) == 0);
    fs::copy_file(dir / "gen" / "instance.json", inst, fs::copy_options::overwrite_existing);

    CHECK(run_cli("audit " + inst) == 0);
    CHECK(run_cli("learn " + inst + " --tier calma --tau 0.01") == 0);
    CHECK(run_cli("learn " + inst + " --tier ma --tau 0.001 --max-iters 1") == 2);
    CHECK(run_cli("learn " + inst + " --tier sideways") == 1);
    CHECK(run_cli("frobnicate") == 1);

    std::ofstream(dir / "broken.json") << "{\"points\": [";
    CHECK(run_cli("audit " + (dir / "broken.json").string()) == 1);

    // The seed falls back to the environment.
    REQUIRE(run_cli("--seed 12 gen corpus --out " + (dir / "a").string()) == 0);
    const std::string env = "FAIRBOOST_SEED=12 ";
    const std::string cmd = env + FAIRBOOST_CLI + " gen corpus --out " + (dir / "c").string() + " > /dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(slurp(dir / "a" / "instance.json") == slurp(dir / "c" / "instance.json"));
    fs::remove_all(dir);
}
