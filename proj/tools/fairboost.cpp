// fairboost: audits, learners, hardcore measures and verification sweeps on
// finite instances. Thin front end over the C API in libfairboost.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fairboost/fairboost.h"
#include "json.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitUsage = 1;
constexpr int kExitNonConvergence = 2;

struct Globals {
    std::uint64_t seed = 0;
    std::optional<double> tolerance;
    std::string out;
    std::size_t trials = 1;
    unsigned jobs = 1;
    std::string format = "json";
};

struct Failure {
    int code;
    std::string message;
};

std::string read_input(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kExitUsage, "cannot read '" + path + "'"};
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Failure{kExitUsage, "cannot write '" + path.string() + "'"};
    out << text;
}

json common_options(const Globals& g) {
    json o{{"seed", g.seed}, {"trials", g.trials}, {"jobs", g.jobs}};
    if (g.tolerance) o["tolerance"] = *g.tolerance;
    return o;
}

struct ResultHandle {
    fb_result* r = nullptr;
    ~ResultHandle() { fb_result_free(r); }
};

// Runs a command through the C API, writes artifacts and prints the report.
int run(const std::string& command, const std::optional<std::string>& input, const json& options, const Globals& g,
        bool print_instance = false) {
    ResultHandle h;
    const std::string opts = options.dump();
    const fb_status st = fb_run(command.c_str(), input ? input->c_str() : nullptr, opts.c_str(), &h.r);
    if (st != FB_OK) {
        std::cerr << "fairboost " << command << ": " << fb_status_name(st) << ": " << fb_last_error() << "\n";
        return st == FB_ERR_ITERATION_CAP ? kExitNonConvergence : kExitUsage;
    }
    const std::string report = fb_result_report(h.r);
    if (!g.out.empty()) {
        const std::filesystem::path dir(g.out);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw Failure{kExitUsage, "cannot create '" + g.out + "': " + ec.message()};
        write_file(dir / "report.json", report);
        const std::map<std::string, std::string> files{{"predictor", "predictor.json"}, {"trace_csv", "trace.csv"},
                                                       {"measure", "measure.json"},     {"instance", "instance.json"},
                                                       {"table_csv", "table.csv"}};
        for (const auto& [name, file] : files) {
            if (const char* text = fb_result_artifact(h.r, name.c_str())) write_file(dir / file, text);
        }
    }
    if (print_instance && g.out.empty()) {
        std::cout << fb_result_artifact(h.r, "instance");
    } else if (g.format == "csv") {
        const char* table = fb_result_artifact(h.r, "table_csv");
        std::cout << (table ? table : "");
    } else {
        std::cout << report;
    }
    const int code = fb_result_exit_code(h.r);
    if (code == kExitNonConvergence) std::cerr << "fairboost " << command << ": learner did not converge\n";
    if (code == 3) std::cerr << "fairboost " << command << ": bound violation (see report checks)\n";
    return code;
}

json parse_json_arg(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Failure{kExitUsage, what + " is not valid JSON: " + e.what()};
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiaccuracy, calibration and hardcore-measure toolkit for finite instances"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Random seed")->envname("FAIRBOOST_SEED");
    app.add_option("--tolerance", g.tolerance, "Slack allowed on asserted bounds (default 1e-9)");
    app.add_option("--out", g.out, "Directory for the report and artifacts");
    app.add_option("--trials", g.trials, "Number of trials")->check(CLI::PositiveNumber);
    app.add_option("--jobs", g.jobs, "Worker threads for independent trials")->check(CLI::PositiveNumber);
    app.add_option("--format", g.format, "Report format on stdout")->check(CLI::IsMember({"json", "csv"}));

    std::string input_path;

    auto* audit = app.add_subcommand("audit", "Exact EAE, ECE, MA, weighted MA, MC and Opt of a predictor");
    audit->add_option("instance", input_path, "Instance JSON with class and predictor ('-' for stdin)")->required();

    auto* learn = app.add_subcommand("learn", "Train a predictor and check the tier's guarantee");
    std::string tier = "calma";
    std::optional<double> tau, cal_tau, grid, kappa;
    std::optional<std::size_t> max_iters;
    std::optional<std::string> step_rule;
    learn->add_option("input", input_path, "Instance JSON or generator spec ('-' for stdin)")->required();
    learn->add_option("--tier", tier, "ma, calma, wma, mc or a comma list");
    learn->add_option("--tau", tau, "Multiaccuracy target");
    learn->add_option("--calibration-tau", cal_tau, "ECE target (defaults to tau)");
    learn->add_option("--grid", grid, "Predictor grid step");
    learn->add_option("--max-iters", max_iters, "Iteration cap");
    learn->add_option("--step-rule", step_rule, "line_search or fixed_kappa")
        ->check(CLI::IsMember({"line_search", "fixed_kappa"}));
    learn->add_option("--kappa", kappa, "Step size for fixed_kappa");

    auto* hardcore = app.add_subcommand("hardcore", "Hardcore measure pipeline or density audit of a given predictor");
    std::optional<double> eps, delta_target, hc_tau, hc_grid;
    std::optional<std::size_t> hc_iters;
    hardcore->add_option("instance", input_path, "Instance JSON with deterministic labels ('-' for stdin)")->required();
    hardcore->add_option("--eps", eps, "Advantage target (default 0.1)");
    hardcore->add_option("--tau", hc_tau, "Density slack (default 0.05)");
    hardcore->add_option("--delta", delta_target, "Hardness level (default: best enumerated error)");
    hardcore->add_option("--grid", hc_grid, "Predictor grid step");
    hardcore->add_option("--max-iters", hc_iters, "Iteration cap");

    auto* verify = app.add_subcommand("verify", "Run a verification sweep");
    std::string suite;
    bool list_suites = false;
    verify->add_option("suite", suite, "Suite name");
    verify->add_flag("--list", list_suites, "List suite names");

    auto* gen = app.add_subcommand("gen", "Write a generated instance");
    std::string generator;
    std::optional<int> gen_n, gen_i, gen_j;
    std::optional<double> gen_eta, gen_delta;
    std::optional<std::size_t> gen_ppr, gen_points, gen_index;
    std::optional<std::string> class_spec, label_mode;
    bool gen_det = false;
    gen->add_option("generator", generator, "maj, showcase, random or corpus")
        ->required()
        ->check(CLI::IsMember({"maj", "showcase", "random", "corpus"}));
    gen->add_option("--n", gen_n, "Dimension (maj)");
    gen->add_option("--i", gen_i, "First majority coordinate, 1-based (maj)");
    gen->add_option("--j", gen_j, "Second majority coordinate, 1-based (maj)");
    gen->add_option("--eta", gen_eta, "Showcase eta");
    gen->add_option("--delta", gen_delta, "Showcase delta");
    gen->add_option("--points-per-region", gen_ppr, "Showcase points per region");
    gen->add_option("--points", gen_points, "Domain size (random_boolean family)");
    gen->add_option("--class-spec", class_spec, "Class family JSON (random)");
    gen->add_option("--label-mode", label_mode, "Label mode JSON (random)");
    gen->add_option("--index", gen_index, "Corpus element");
    gen->add_flag("--deterministic", gen_det, "Corpus with deterministic labels");

    auto* gl = app.add_subcommand("gl", "Heavy Fourier coefficients by prefix-bucket search");
    std::optional<double> gamma, delta_fail;
    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> max_queries;
    bool exact = false;
    bool buckets = false;
    gl->add_option("input", input_path, "Planted polynomial or hypercube instance JSON ('-' for stdin)")->required();
    gl->add_option("--gamma", gamma, "Coefficient threshold (default 0.25)");
    gl->add_option("--delta-fail", delta_fail, "Failure probability (default 0.05)");
    gl->add_option("--samples", samples, "Samples per estimate instead of the Hoeffding count");
    gl->add_option("--max-queries", max_queries, "Query budget; the result is flagged incomplete when exhausted");
    gl->add_flag("--exact", exact, "Exact bucket weights from the full spectrum (n <= 12)");
    gl->add_flag("--buckets", buckets, "Include every bucket estimate in the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // CLI11 uses its own codes; the tool reports every usage error as 1.
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        json options = common_options(g);
        auto put = [&](const char* key, const auto& value) {
            if (value) options[key] = *value;
        };
        if (audit->parsed()) return run("audit", read_input(input_path), options, g);
        if (learn->parsed()) {
            options["tier"] = tier;
            put("tau", tau);
            put("calibration_tau", cal_tau);
            put("grid_step", grid);
            put("max_iters", max_iters);
            put("step_rule", step_rule);
            put("kappa", kappa);
            return run("learn", read_input(input_path), options, g);
        }
        if (hardcore->parsed()) {
            put("eps", eps);
            put("tau", hc_tau);
            put("delta_target", delta_target);
            put("grid_step", hc_grid);
            put("max_iters", hc_iters);
            return run("hardcore", read_input(input_path), options, g);
        }
        if (verify->parsed()) {
            if (list_suites || suite.empty()) {
                (list_suites ? std::cout : std::cerr) << fb_suite_names();
                return list_suites ? 0 : kExitUsage;
            }
            options["suite"] = suite;
            if (app.get_option("--trials")->count() == 0) options.erase("trials");
            return run("verify", std::nullopt, options, g);
        }
        if (gen->parsed()) {
            json spec{{"generator", generator}};
            if (gen_n) spec["n"] = *gen_n;
            if (gen_i) spec["i"] = *gen_i - 1;
            if (gen_j) spec["j"] = *gen_j - 1;
            if (gen_eta) spec["eta"] = *gen_eta;
            if (gen_delta) spec["delta"] = *gen_delta;
            if (gen_ppr) spec["points_per_region"] = *gen_ppr;
            if (gen_points) spec["n_points"] = *gen_points;
            if (class_spec) spec["class_spec"] = parse_json_arg(*class_spec, "--class-spec");
            if (label_mode) spec["label_mode"] = parse_json_arg(*label_mode, "--label-mode");
            if (gen_index) spec["index"] = *gen_index;
            if (gen_det) spec["deterministic"] = true;
            return run("gen", spec.dump(), options, g, true);
        }
        if (gl->parsed()) {
            put("gamma", gamma);
            put("delta_fail", delta_fail);
            put("samples", samples);
            put("max_queries", max_queries);
            options["exact"] = exact;
            options["buckets"] = buckets;
            return run("gl", read_input(input_path), options, g);
        }
    } catch (const Failure& f) {
        std::cerr << "fairboost: " << f.message << "\n";
        return f.code;
    }
    return kExitUsage;
}
