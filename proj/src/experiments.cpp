#include "fairboost/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "fairboost/constructions.hpp"
#include "suites.hpp"

namespace fairboost {

namespace {

const Json& empty_object() {
    static const Json empty = Json::object();
    return empty;
}

const Json& opt_node(const Json& options, const char* key) {
    if (options.is_object()) {
        const auto it = options.find(key);
        if (it != options.end() && !it->is_null()) return *it;
    }
    static const Json null_node;
    return null_node;
}

std::string opt_path(const char* key) { return std::string("/options/") + key; }

double opt_double(const Json& options, const char* key, double fallback) {
    const Json& n = opt_node(options, key);
    if (n.is_null()) return fallback;
    if (!n.is_number()) throw SchemaError(opt_path(key), "expected a number");
    return n.get<double>();
}

std::optional<double> opt_maybe_double(const Json& options, const char* key) {
    const Json& n = opt_node(options, key);
    if (n.is_null()) return std::nullopt;
    if (!n.is_number()) throw SchemaError(opt_path(key), "expected a number");
    return n.get<double>();
}

std::uint64_t opt_uint(const Json& options, const char* key, std::uint64_t fallback) {
    const Json& n = opt_node(options, key);
    if (n.is_null()) return fallback;
    if (!is_nonnegative_integer(n)) throw SchemaError(opt_path(key), "expected an unsigned integer");
    return n.get<std::uint64_t>();
}

std::optional<std::uint64_t> opt_maybe_uint(const Json& options, const char* key) {
    const Json& n = opt_node(options, key);
    if (n.is_null()) return std::nullopt;
    if (!is_nonnegative_integer(n)) throw SchemaError(opt_path(key), "expected an unsigned integer");
    return n.get<std::uint64_t>();
}

std::string opt_string(const Json& options, const char* key, const std::string& fallback) {
    const Json& n = opt_node(options, key);
    if (n.is_null()) return fallback;
    if (!n.is_string()) throw SchemaError(opt_path(key), "expected a string");
    return n.get<std::string>();
}

bool opt_bool(const Json& options, const char* key, bool fallback) {
    const Json& n = opt_node(options, key);
    if (n.is_null()) return fallback;
    if (!n.is_boolean()) throw SchemaError(opt_path(key), "expected true or false");
    return n.get<bool>();
}

struct Common {
    std::uint64_t seed = 0;
    double tolerance = kInequalityTolerance;
    std::size_t trials = 1;
    unsigned jobs = 1;
};

Common common_options(const Json& options) {
    Common c;
    c.seed = opt_uint(options, "seed", 0);
    c.tolerance = opt_double(options, "tolerance", kInequalityTolerance);
    if (!(c.tolerance >= 0.0)) throw SchemaError("/options/tolerance", "must be nonnegative");
    c.trials = opt_uint(options, "trials", 1);
    if (c.trials < 1) throw SchemaError("/options/trials", "must be at least 1");
    c.jobs = static_cast<unsigned>(opt_uint(options, "jobs", 1));
    if (c.jobs < 1) throw SchemaError("/options/jobs", "must be at least 1");
    return c;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

const HypothesisClass& need_class(const InstanceDocument& doc) {
    if (!doc.cls) throw SchemaError("/class", "this command needs a hypothesis class");
    if (doc.cls->empty()) throw EmptyClass();
    return *doc.cls;
}

const Predictor& need_predictor(const InstanceDocument& doc) {
    if (!doc.predictor) throw SchemaError("/predictor", "this command needs a predictor");
    return *doc.predictor;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
}

// Metrics every tier reports for a learned predictor.
Json predictor_metrics(const FiniteInstance& inst, const HypothesisClass& cls, const Predictor& p) {
    Json row;
    row["opt"] = opt_correlation(inst, cls).value;
    row["ma"] = ma_error(inst, p, cls).value;
    row["ece"] = ece(inst, p).value;
    row["cor_affine"] = correlation(inst, p);
    row["cor_sign"] = correlation(inst, threshold(p));
    return row;
}

struct TierOutcome {
    Json row;
    bool converged = true;
    bool passed = true;
    std::optional<LearnerResult> result;
    std::string error;
};

TierOutcome run_tier(const std::string& tier, const FiniteInstance& inst, const HypothesisClass& cls,
                     const LearnerConfig& cfg, double tol) {
    TierOutcome out;
    LearnerResult result{Predictor(std::vector<double>{}), {}};
    try {
        if (tier == "ma") result = learn_multiaccurate(inst, cls, cfg);
        else if (tier == "calma") result = learn_calibrated_multiaccurate(inst, cls, cfg);
        else if (tier == "wma") result = learn_calibrated_multiaccurate(inst, cls, cfg, WeightFn::wmax());
        else if (tier == "mc") result = learn_multicalibrated(inst, cls, cfg);
        else throw SchemaError("/options/tier", "unknown tier '" + tier + "' (expected ma, calma, wma or mc)");
    } catch (const IterationCapExceeded& e) {
        out.converged = false;
        out.error = e.what();
        result = LearnerResult{e.last_predictor(), e.trace()};
    }
    const Predictor& p = result.predictor;
    Json row{{"tier", tier}};
    row["converged"] = out.converged;
    row["oracle_calls"] = result.trace.oracle_calls;
    row["recalibrations"] = result.trace.recalibrations;
    row["steps"] = result.trace.steps.size();
    const Json metrics = predictor_metrics(inst, cls, p);
    for (const auto& [k, v] : metrics.items()) row[k] = v;
    const double tau = cfg.tau;
    const double cal = cfg.cal_tau();
    bool ok = true;
    if (tier == "ma") {
        const double bound = 2.0 * row["opt"].get<double>() - 1.0 - 2.0 * tau;
        row["bound"] = bound;
        ok = row["ma"].get<double>() <= tau + tol && row["cor_affine"].get<double>() >= bound - tol;
    } else if (tier == "calma") {
        const double bound = row["opt"].get<double>() - 2.0 * tau - 2.0 * cal;
        row["bound"] = bound;
        ok = row["ma"].get<double>() <= tau + tol && row["ece"].get<double>() <= cal + tol &&
             row["cor_sign"].get<double>() >= bound - tol;
    } else if (tier == "wma") {
        const double wma = weighted_ma_error(inst, p, cls, WeightFn::wmax()).value;
        const auto d = density_bounds(inst, p, WeightFn::wmax(), cal);
        row["weighted_ma"] = wma;
        row["dns_max"] = d.dns_max;
        row["bound"] = 2.0 * d.expected_min - 2.0 * d.ece;
        ok = wma <= tau + tol && d.ece <= cal + tol && d.max_holds;
    } else {
        const double mc = mc_error(inst, p, cls).value;
        row["mc"] = mc;
        ok = mc <= tau + tol;
    }
    row["passed"] = ok && out.converged;
    out.passed = ok;
    out.row = std::move(row);
    out.result = std::move(result);
    return out;
}

std::vector<std::string> split_tiers(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    if (out.empty()) throw SchemaError("/options/tier", "no tier given");
    return out;
}

}  // namespace

void RunReport::add_check(const std::string& name, bool passed, Json detail) {
    checks_.push_back({{"name", name}, {"passed", passed}, {"detail", std::move(detail)}});
}

bool RunReport::passed() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const Json& c) { return c["passed"].get<bool>(); });
}

Json RunReport::to_json() const {
    Json out{{"command", command_}, {"seed", seed_}};
    for (const auto& [k, v] : extra_.items()) out[k] = v;
    out["rows"] = rows_;
    Json aggregate = Json::object();
    std::vector<std::string> keys;
    for (const auto& row : rows_) {
        for (const auto& [k, v] : row.items()) {
            if (v.is_number() && k != "trial" && std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
        }
    }
    for (const auto& k : keys) {
        std::vector<double> values;
        for (const auto& row : rows_) {
            const auto it = row.find(k);
            if (it != row.end() && it->is_number()) values.push_back(it->get<double>());
        }
        aggregate[k] = {{"min", *std::min_element(values.begin(), values.end())},
                        {"median", median(values)},
                        {"max", *std::max_element(values.begin(), values.end())}};
    }
    out["aggregate"] = std::move(aggregate);
    out["checks"] = checks_;
    out["passed"] = passed();
    return out;
}

std::string RunReport::rows_csv() const {
    std::vector<std::string> keys;
    for (const auto& row : rows_) {
        for (const auto& [k, v] : row.items()) {
            if (!v.is_structured() && std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
        }
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (i) os << ',';
            const auto it = row.find(keys[i]);
            if (it == row.end() || it->is_null()) continue;
            if (it->is_number_float()) os << format_double(it->get<double>());
            else if (it->is_string()) os << '"' << it->get<std::string>() << '"';
            else os << it->dump();
        }
        os << '\n';
    }
    return os.str();
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn) {
    std::vector<std::exception_ptr> errors(count);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(jobs, 1u), count));
    auto work = [&](unsigned w) {
        for (std::size_t i = w; i < count; i += workers) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) { return mix64(seed ^ mix64(0x7472ull + trial)); }

Json generate_instance(const Json& spec, std::uint64_t seed) {
    if (!spec.is_object() || !spec.contains("generator")) throw SchemaError("/generator", "missing generator name");
    const auto name = opt_string(spec, "generator", "");
    auto num = [&](const char* key, double fallback) {
        const auto it = spec.find(key);
        if (it == spec.end()) return fallback;
        if (!it->is_number()) throw SchemaError(std::string("/") + key, "expected a number");
        return it->get<double>();
    };
    auto uint = [&](const char* key, std::uint64_t fallback) {
        const auto it = spec.find(key);
        if (it == spec.end()) return fallback;
        if (!is_nonnegative_integer(*it)) throw SchemaError(std::string("/") + key, "expected an unsigned integer");
        return it->get<std::uint64_t>();
    };
    if (name == "maj") {
        MajConfig cfg{static_cast<int>(uint("n", 3)), static_cast<int>(uint("i", 0)), static_cast<int>(uint("j", 1))};
        const auto built = build_maj_instance(cfg);
        return instance_to_json(built.inst, &built.cls, &built.predictor);
    }
    if (name == "showcase") {
        ShowcaseConfig cfg{num("eta", 0.05), num("delta", 0.2), uint("points_per_region", 1)};
        const auto built = build_showcase(cfg);
        return instance_to_json(built.inst, nullptr, &built.predictor);
    }
    if (name == "random") {
        const auto s = uint("seed", seed);
        const auto cspec = spec.contains("class_spec") ? spec.at("class_spec") : Json{{"family", "parities"}, {"n", 4}};
        const auto lspec = spec.contains("label_mode") ? spec.at("label_mode") : Json{{"mode", "bayes_uniform"}};
        const auto built = random_instance(s, uint("n_points", 16), cspec.dump(), lspec.dump());
        return instance_to_json(built.inst, &built.cls);
    }
    if (name == "corpus") {
        const auto s = uint("seed", seed);
        const auto built = corpus_item(s, uint("index", 0), spec.value("deterministic", false));
        return instance_to_json(built.inst, &built.cls);
    }
    throw SchemaError("/generator", "unknown generator '" + name + "' (expected maj, showcase, random or corpus)");
}

CommandResult cmd_audit(const Json& input, const Json& options) {
    const Common common = common_options(options);
    const InstanceDocument doc = parse_instance(input);
    const HypothesisClass& cls = need_class(doc);
    const Predictor& p = need_predictor(doc);
    const FiniteInstance& inst = doc.inst;

    Json metrics;
    metrics["eae"] = eae(inst, p);
    metrics["ece"] = audit_to_json(ece(inst, p));
    metrics["ece_dual"] = ece_dual(inst, p);
    metrics["ma"] = audit_to_json(ma_error(inst, p, cls));
    if (inst.deterministic()) metrics["weighted_ma"] = audit_to_json(weighted_ma_error(inst, p, cls, WeightFn::wmax()));
    metrics["mc"] = audit_to_json(mc_error(inst, p, cls));
    metrics["opt"] = audit_to_json(opt_correlation(inst, cls));
    metrics["best_postprocessing"] = best_postprocessing(inst, p).correlation;
    metrics["cor_affine"] = correlation(inst, p);
    metrics["cor_sign"] = correlation(inst, threshold(p));

    RunReport report("audit", common.seed);
    Json row{{"trial", 0}};
    for (const auto& [k, v] : metrics.items()) row[k] = v.is_object() ? v["value"] : v;
    report.add_row(row);
    report.set("metrics", metrics);
    report.add_check("ece_primal_matches_dual",
                     std::abs(metrics["ece"]["value"].get<double>() - metrics["ece_dual"].get<double>()) <=
                         kIdentityTolerance);
    CommandResult out;
    out.report = report.to_json();
    out.artifacts["table_csv"] = report.rows_csv();
    out.exit_code = report.passed() ? kExitOk : kExitBoundViolation;
    return out;
}

CommandResult cmd_learn(const Json& input, const Json& options) {
    const Common common = common_options(options);
    const auto tiers = split_tiers(opt_string(options, "tier", "calma"));
    Json cfg_doc = Json::object();
    for (const char* key : {"tau", "calibration_tau", "grid_step", "max_iters", "step_rule", "kappa"}) {
        const Json& n = opt_node(options, key);
        if (!n.is_null()) cfg_doc[key] = n;
    }
    const LearnerConfig base = parse_learner_config(cfg_doc, "/options");
    const bool generated = input.is_object() && input.contains("generator");
    std::optional<InstanceDocument> fixed;
    if (!generated) {
        fixed = parse_instance(input);
        need_class(*fixed);
    }

    struct Trial {
        std::vector<TierOutcome> outcomes;
    };
    std::vector<Trial> trials(common.trials);
    parallel_for(common.trials, common.jobs, [&](std::size_t t) {
        const std::uint64_t s = trial_seed(common.seed, t);
        std::optional<InstanceDocument> local;
        if (generated) {
            // A corpus batch walks the corpus instead of redrawing element 0.
            Json spec = input;
            if (spec.value("generator", "") == "corpus" && !spec.contains("index")) {
                spec["index"] = t;
                spec["seed"] = common.seed;
            }
            local = parse_instance(generate_instance(spec, s));
        }
        const InstanceDocument& doc = generated ? *local : *fixed;
        LearnerConfig cfg = base;
        cfg.seed = s;
        for (const auto& tier : tiers) trials[t].outcomes.push_back(run_tier(tier, doc.inst, need_class(doc), cfg, common.tolerance));
    });

    RunReport report("learn", common.seed);
    report.set("config", learner_config_to_json(base));
    report.set("tiers", tiers);
    bool converged = true;
    std::map<std::string, std::vector<double>> calls;
    std::map<std::string, bool> tier_passed;
    for (std::size_t t = 0; t < trials.size(); ++t) {
        for (auto& o : trials[t].outcomes) {
            Json row{{"trial", t}};
            for (auto& [k, v] : o.row.items()) row[k] = v;
            if (!o.converged) row["error"] = o.error;
            report.add_row(row);
            converged = converged && o.converged;
            const std::string tier = o.row["tier"].get<std::string>();
            calls[tier].push_back(o.row["oracle_calls"].get<double>());
            tier_passed.try_emplace(tier, true);
            tier_passed[tier] = tier_passed[tier] && o.passed && o.converged;
        }
    }
    for (const auto& tier : tiers) report.add_check(tier + "_bound", tier_passed[tier]);
    if (tiers.size() > 1) {
        Json medians;
        for (const auto& tier : tiers) medians[tier] = median(calls[tier]);
        report.set("median_oracle_calls", medians);
    }

    CommandResult out;
    if (common.trials == 1 && tiers.size() == 1 && trials[0].outcomes[0].result) {
        const auto& r = *trials[0].outcomes[0].result;
        out.artifacts["predictor"] = dump(predictor_to_json(r.predictor));
        out.artifacts["trace_csv"] = trace_to_csv(r.trace);
        report.set("trace", trace_to_json(r.trace));
    }
    out.report = report.to_json();
    out.artifacts["table_csv"] = report.rows_csv();
    out.exit_code = !converged ? kExitNonConvergence : (report.passed() ? kExitOk : kExitBoundViolation);
    return out;
}

CommandResult cmd_hardcore(const Json& input, const Json& options) {
    const Common common = common_options(options);
    const InstanceDocument doc = parse_instance(input);
    const FiniteInstance& inst = doc.inst;
    if (!inst.deterministic()) throw SchemaError("/labels/kind", "hardcore analysis needs deterministic labels");
    RunReport report("hardcore", common.seed);
    CommandResult out;

    if (doc.predictor) {
        const Predictor& p = *doc.predictor;
        const auto bounds = density_bounds(inst, p, WeightFn::wmax(), opt_maybe_double(options, "tau"));
        report.set("density_bounds", density_bounds_to_json(bounds));
        Json row{{"trial", 0}, {"dns_ttv", bounds.dns_ttv}, {"dns_max", bounds.dns_max}, {"ece", bounds.ece},
                 {"expected_min", bounds.expected_min}};
        report.add_check("density_bounds", bounds.all_hold());
        if (bounds.dns_max > 0.0) {
            const Measure mu = measure_weighted(inst, p, WeightFn::wmax());
            if (doc.cls) {
                const auto audit = hardcore_audit(inst, mu, *doc.cls);
                const auto identity = verify_identity_wma(inst, p, *doc.cls, WeightFn::wmax());
                report.set("hardcore", hardcore_report_to_json(audit));
                row["advantage"] = audit.advantage;
                row["identity_discrepancy"] = identity.discrepancy;
                report.add_check("wma_identity", identity.discrepancy < 1e-10, {{"discrepancy", identity.discrepancy}});
                report.add_check("advantage_sandwich", audit.sandwich_holds);
            }
            out.artifacts["measure"] = dump(instance_to_json(inst, doc.cls ? &*doc.cls : nullptr, &p, &mu));
        } else {
            report.set("marker", "no hardness");
        }
        report.add_row(row);
    } else {
        PipelineConfig cfg;
        cfg.eps = opt_double(options, "eps", cfg.eps);
        cfg.tau = opt_double(options, "tau", cfg.tau);
        cfg.delta_target = opt_maybe_double(options, "delta_target");
        cfg.grid_step = opt_maybe_double(options, "grid_step");
        if (const auto m = opt_maybe_uint(options, "max_iters")) cfg.max_iters = *m;
        cfg.seed = common.seed;
        const PipelineResult r = ihcl_pipeline(inst, need_class(doc), cfg);
        report.set("pipeline", pipeline_to_json(r));
        Json row{{"trial", 0}, {"no_hardness", r.no_hardness}, {"delta_measured", r.delta_measured},
                 {"eps_prime", r.eps_prime}, {"ece", r.ece}, {"oracle_calls", r.trace.oracle_calls}};
        if (r.report) {
            row["density"] = r.report->density;
            row["advantage"] = r.report->advantage;
            row["identity_discrepancy"] = r.identity_discrepancy;
        }
        report.add_row(row);
        if (r.no_hardness) report.set("marker", "no hardness");
        const auto& c = r.checks;
        report.add_check("density_2delta_minus_tau", c.density_ok);
        report.add_check("advantage_vs_weighted_ma", c.advantage_ok);
        report.add_check("hardness_density", c.hardness_density_ok);
        report.add_check("measure_chain", c.chain_ok);
        report.add_check("wma_identity", c.identity_ok);
        if (r.measure) out.artifacts["measure"] = dump(instance_to_json(inst, nullptr, &r.predictor, &*r.measure));
        out.artifacts["predictor"] = dump(predictor_to_json(r.predictor));
        out.artifacts["trace_csv"] = trace_to_csv(r.trace);
    }
    out.report = report.to_json();
    out.artifacts["table_csv"] = report.rows_csv();
    out.exit_code = report.passed() ? kExitOk : kExitBoundViolation;
    return out;
}

CommandResult cmd_verify(const Json& input, const Json& options) {
    (void)input;
    const Common common = common_options(options);
    const std::string suite = opt_string(options, "suite", "");
    if (suite.empty()) throw SchemaError("/options/suite", "missing suite name");
    SuiteOptions so;
    so.seed = common.seed;
    so.tolerance = common.tolerance;
    so.jobs = common.jobs;
    if (const auto t = opt_maybe_uint(options, "trials")) so.trials = static_cast<std::size_t>(*t);
    RunReport report = run_suite(suite, so);
    CommandResult out;
    out.report = report.to_json();
    out.artifacts["table_csv"] = report.rows_csv();
    out.exit_code = report.passed() ? kExitOk : kExitBoundViolation;
    return out;
}

CommandResult cmd_gen(const Json& input, const Json& options) {
    const Common common = common_options(options);
    Json instance = generate_instance(input, common.seed);
    const InstanceDocument doc = parse_instance(instance);
    RunReport report("gen", common.seed);
    report.set("generator", input);
    Json row{{"trial", 0}, {"points", doc.inst.size()}, {"hypotheses", doc.cls ? doc.cls->size() : 0}};
    report.add_row(row);
    CommandResult out;
    out.report = report.to_json();
    out.artifacts["instance"] = dump(instance);
    out.artifacts["table_csv"] = report.rows_csv();
    return out;
}

CommandResult cmd_gl(const Json& input, const Json& options) {
    const Common common = common_options(options);
    GlConfig cfg;
    cfg.gamma = opt_double(options, "gamma", cfg.gamma);
    cfg.delta_fail = opt_double(options, "delta_fail", cfg.delta_fail);
    if (const auto s = opt_maybe_uint(options, "samples")) cfg.samples = static_cast<std::size_t>(*s);
    if (const auto q = opt_maybe_uint(options, "max_queries")) cfg.max_total_queries = *q;
    cfg.seed = common.seed;
    cfg.jobs = common.jobs;
    const bool exact = opt_bool(options, "exact", false);
    const bool buckets = opt_bool(options, "buckets", false);

    RunReport report("gl", common.seed);
    CommandResult out;
    Json row{{"trial", 0}};
    if (input.is_object() && input.contains("terms")) {
        const PlantedPolynomial poly = parse_planted_polynomial(input);
        cfg.bound = std::max(poly.l1(), 1e-12);
        std::optional<FourierSpectrum> spectrum;
        if (poly.n <= 12) spectrum = full_spectrum(poly.table());
        if (exact) {
            if (!spectrum) throw SchemaError("/options/exact", "exact bucket weights need n <= 12");
            cfg.exact = &*spectrum;
        }
        const QueryFn query = [&poly](std::uint32_t x, std::uint64_t) { return poly(x); };
        const GlResult r = goldreich_levin(query, poly.n, cfg);
        report.set("gl", gl_result_to_json(r, buckets));
        report.set("bound", cfg.bound);
        row["listed"] = r.subsets.size();
        row["total_queries"] = r.total_queries;
        if (r.incomplete) report.set("marker", "incomplete: query budget exhausted");
        if (spectrum && !r.incomplete) {
            bool complete = true;
            bool sound = true;
            for (std::uint32_t s = 0; s < spectrum->coefficients.size(); ++s) {
                const bool listed = std::find(r.subsets.begin(), r.subsets.end(), s) != r.subsets.end();
                if (std::abs((*spectrum)[s]) >= cfg.gamma && !listed) complete = false;
                if (std::abs((*spectrum)[s]) < cfg.gamma / 2.0 && listed) sound = false;
            }
            report.add_check("completeness", complete);
            report.add_check("soundness", sound);
            report.add_check("list_size", r.subsets.size() <= static_cast<std::size_t>(4.0 / (cfg.gamma * cfg.gamma)));
        }
    } else {
        const InstanceDocument doc = parse_instance(input);
        const Predictor p = doc.predictor ? *doc.predictor
                                          : Predictor(std::vector<double>(doc.inst.labels().begin(), doc.inst.labels().end()));
        std::optional<FourierSpectrum> spectrum;
        if (exact) {
            const auto dim = doc.inst.hypercube_dim();
            if (!dim || *dim > 12) throw SchemaError("/options/exact", "exact bucket weights need a hypercube with n <= 12");
            spectrum = full_spectrum(affine_pm1(p));
            cfg.exact = &*spectrum;
        }
        const ParityLearnResult r = proper_agnostic_parity_learn(doc.inst, p, cfg);
        report.set("gl", gl_result_to_json(r.gl, buckets));
        report.set("parity", {{"subset", subset_to_json(r.subset)},
                              {"sign", r.sign},
                              {"estimated_coefficient", r.estimated_coefficient},
                              {"correlation", r.correlation},
                              {"error", r.error}});
        row["listed"] = r.gl.subsets.size();
        row["correlation"] = r.correlation;
        row["total_queries"] = r.gl.total_queries;
    }
    report.add_row(row);
    out.report = report.to_json();
    out.artifacts["table_csv"] = report.rows_csv();
    out.exit_code = report.passed() ? kExitOk : kExitBoundViolation;
    return out;
}

CommandResult run_command(const std::string& command, const Json& input, const Json& options) {
    const auto start = std::chrono::steady_clock::now();
    const Json& opts = options.is_null() ? empty_object() : options;
    if (!opts.is_object()) throw SchemaError("/options", "expected an object");
    CommandResult out;
    try {
        if (command == "audit") out = cmd_audit(input, opts);
        else if (command == "learn") out = cmd_learn(input, opts);
        else if (command == "hardcore") out = cmd_hardcore(input, opts);
        else if (command == "verify") out = cmd_verify(input, opts);
        else if (command == "gen") out = cmd_gen(input, opts);
        else if (command == "gl") out = cmd_gl(input, opts);
        else throw InvalidArgument("unknown command '" + command + "'");
    } catch (const IterationCapExceeded& e) {
        out.report = {{"command", command}, {"error", e.what()}, {"trace", trace_to_json(e.trace())}, {"passed", false}};
        out.artifacts["trace_csv"] = trace_to_csv(e.trace());
        out.artifacts["predictor"] = dump(predictor_to_json(e.last_predictor()));
        out.exit_code = kExitNonConvergence;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.report["timing"] = {{"wall_seconds", seconds}};
    return out;
}

std::vector<std::string> verify_suite_names() { return suite_names(); }

}  // namespace fairboost
