// One line per acceptance criterion; exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "fairboost/constructions.hpp"
#include "fairboost/experiments.hpp"
#include "fairboost/postprocess.hpp"

using namespace fairboost;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

constexpr std::uint64_t kSeed = 20240601;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string failed_checks(const Json& report) {
    std::string out;
    for (const auto& c : report["checks"]) {
        if (!c["passed"].get<bool>()) out += (out.empty() ? "" : ", ") + c["name"].get<std::string>() + "=" + c["detail"].dump();
    }
    return out;
}

// Runs a verification suite; passes when every check holds and, if a time
// limit is given, the suite finishes within it.
Outcome suite(const std::string& name, double limit_seconds = 0.0) {
    const auto start = std::chrono::steady_clock::now();
    const auto r = run_command("verify", Json(), {{"suite", name}, {"seed", kSeed}});
    const double t = seconds_since(start);
    Outcome o;
    o.passed = r.exit_code == 0 && r.report["passed"].get<bool>();
    std::ostringstream d;
    d << name << " rows=" << r.report["rows"].size();
    if (!o.passed) d << " failed: " << failed_checks(r.report);
    d << " time=" << t << "s";
    if (limit_seconds > 0.0) {
        d << " limit=" << limit_seconds << "s";
        if (t >= limit_seconds) o.passed = false;
    }
    o.detail = d.str();
    return o;
}

Outcome maj_counterexample() {
    const auto start = std::chrono::steady_clock::now();
    const auto m = build_maj_instance({});
    const double ma_parity = ma_error(m.inst, m.predictor, m.cls).value;
    const double ma_pairs = ma_error(m.inst, m.predictor, maj_pair_functions({})).value;
    const double post = best_postprocessing(m.inst, m.predictor).correlation;
    const double dict1 = correlation(m.inst, parity_values(3, 0b001));
    const double dict2 = correlation(m.inst, parity_values(3, 0b010));
    const double e = ece(m.inst, m.predictor).value;
    const double t = seconds_since(start);
    Outcome o;
    o.passed = ma_parity <= 1e-12 && ma_pairs <= 1e-12 && std::abs(post) <= 1e-12 && dict1 == 0.5 && dict2 == 0.5 &&
               e == 0.5 && t < 1.0;
    std::ostringstream d;
    d << "ma_parity=" << ma_parity << " ma_pairs=" << ma_pairs << " best_post=" << post << " dictators=" << dict1
      << "," << dict2 << " ece=" << e << " time=" << t << "s limit=1s";
    o.detail = d.str();
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome tier_cost_regression() {
    Outcome o = suite("tier-cost");
    const auto r = run_command("verify", Json(), {{"suite", "tier-cost"}, {"seed", kSeed}});
    const std::string golden = slurp(FAIRBOOST_GOLDEN);
    const std::string table = r.artifacts.at("table_csv");
    const bool same = !golden.empty() && golden == table;
    o.passed = o.passed && same;
    o.detail += same ? " table matches pinned golden" : " table differs from pinned golden";
    return o;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FAIRBOOST_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_determinism() {
    const fs::path dir = fs::temp_directory_path() / ("fairboost_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    Outcome o{true, ""};
    if (run_cli("--seed 3 gen corpus --index 5 --deterministic --out " + (dir / "gen").string()) != 0) {
        return {false, "could not generate an input instance"};
    }
    const std::string inst = (dir / "gen" / "instance.json").string();
    const std::vector<std::pair<std::string, std::string>> runs = {
        {"learn", "--seed 11 --trials 3 learn " + inst + " --tier ma,calma,mc --tau 0.05"},
        {"learn-corpus", "--seed 11 --trials 4 --jobs 2 learn " + (dir / "spec.json").string() + " --tier calma"},
        {"hardcore", "--seed 11 hardcore " + inst},
        {"gl", "--seed 11 gl " + (dir / "poly.json").string() + " --gamma 0.3"},
        {"verify", "--seed 11 verify wma-identity"},
    };
    std::ofstream(dir / "spec.json") << R"({"generator": "corpus"})";
    std::ofstream(dir / "poly.json") << R"({"n": 6, "terms": [{"subset": [1, 4], "coef": 0.6}, {"subset": [2], "coef": 0.1}]})";
    int compared = 0;
    for (const auto& [name, args] : runs) {
        const fs::path a = dir / (name + "_a"), b = dir / (name + "_b");
        const int ea = run_cli(args + " --out " + a.string());
        const int eb = run_cli(args + " --out " + b.string());
        Json ja, jb;
        try {
            ja = Json::parse(slurp(a / "report.json"));
            jb = Json::parse(slurp(b / "report.json"));
        } catch (const std::exception&) {
            o.passed = false;
            o.detail += name + ":missing-report ";
            continue;
        }
        ja.erase("timing");
        jb.erase("timing");
        if (ea != eb || ja.dump() != jb.dump()) {
            o.passed = false;
            o.detail += name + ":differs ";
        }
        ++compared;
    }
    fs::remove_all(dir);
    o.detail += std::to_string(compared) + " command lines run twice, reports compared with timing removed";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"C1 MAJ counterexample", maj_counterexample},
        {"C2 multiaccuracy weak-learning bound", [] { return suite("ma-weak-learning", 30.0); }},
        {"C3 calibrated multiaccuracy strong learning", [] { return suite("calma-strong-learning"); }},
        {"C4 squared loss to correlation", [] { return suite("sqloss-correlation"); }},
        {"C5 weighted MA identity", [] { return suite("wma-identity"); }},
        {"C6 density closed forms", [] { return suite("density-closed-forms"); }},
        {"C7 calibration and hardness density bounds", [] { return suite("density-bounds"); }},
        {"C8 optimal-density pipeline", [] { return suite("optimal-density", 120.0); }},
        {"C9 tier cost comparison", tier_cost_regression},
        {"C10 Goldreich-Levin heavy coefficients", [] { return suite("goldreich-levin", 30.0); }},
        {"C11 projection bound", [] { return suite("projection"); }},
        {"C12 CLI determinism", cli_determinism},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %s: %s\n", o.passed ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
        if (!o.passed) ++failures;
    }
    std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
