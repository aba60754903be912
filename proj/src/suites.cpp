#include "suites.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "fairboost/constructions.hpp"

namespace fairboost {

namespace {

constexpr std::uint64_t kCorpusSalt = 0xc0de;

std::size_t trials_or(const SuiteOptions& o, std::size_t fallback) { return o.trials.value_or(fallback); }

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
}

// Values k / steps with k drawn from raw engine output, so the sequence does
// not depend on the standard library's distributions.
Predictor random_grid_predictor(std::size_t size, std::uint64_t seed, unsigned steps = 20) {
    std::mt19937_64 eng(mix64(seed));
    std::vector<double> v(size);
    for (double& x : v) x = static_cast<double>(eng() % (steps + 1)) / steps;
    return Predictor(std::move(v), 1.0 / steps);
}

double uniform01(std::mt19937_64& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

std::string describe(const RandomInstance& r) {
    return std::to_string(r.inst.size()) + " points, " + std::to_string(r.cls.size()) + " hypotheses, " +
           (r.inst.deterministic() ? "deterministic" : "bayes") + " labels";
}

// Runs fn over trials in parallel and appends the rows in trial order.
template <class Fn>
std::vector<Json> sweep(std::size_t count, unsigned jobs, Fn fn) {
    std::vector<Json> rows(count);
    parallel_for(count, jobs, [&](std::size_t t) {
        rows[t] = fn(t);
        rows[t]["trial"] = t;
    });
    return rows;
}

double max_field(const std::vector<Json>& rows, const char* key) {
    double m = -INFINITY;
    for (const auto& r : rows) {
        if (r.contains(key) && r[key].is_number()) m = std::max(m, r[key].get<double>());
    }
    return m;
}

std::size_t count_false(const std::vector<Json>& rows, const char* key) {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [&](const Json& r) { return r.contains(key) && !r[key].get<bool>(); }));
}

RunReport maj_counterexample(const SuiteOptions& o) {
    RunReport report("verify", o.seed);
    report.set("suite", "maj-counterexample");
    report.set("claim",
               "p(x) = MAJ(x_i, x_j, -x_n) against labels MAJ(x_i, x_j, x_n): multiaccurate for all parities of the "
               "first n-1 coordinates and every function of (x_i, x_j), ECE 1/2, and no post-processing of p "
               "correlates with y although the dictator x_i has correlation 1/2");
    bool all_ok = true;
    for (int n : {3, 4, 5, 6}) {
        for (int i = 0; i < n - 1; ++i) {
            for (int j = 0; j < n - 1; ++j) {
                if (i == j) continue;
                const MajConfig cfg{n, i, j};
                const MajInstance m = build_maj_instance(cfg);
                Json row{{"n", n}, {"i", i + 1}, {"j", j + 1}};
                const double ma_parity = ma_error(m.inst, m.predictor, m.cls).value;
                const double ma_pairs = ma_error(m.inst, m.predictor, maj_pair_functions(cfg)).value;
                const double post = best_postprocessing(m.inst, m.predictor).correlation;
                const double dictator = correlation(m.inst, parity_values(n, 1u << i));
                const double e = ece(m.inst, m.predictor).value;
                row["ma_parities"] = ma_parity;
                row["ma_pair_functions"] = ma_pairs;
                row["best_postprocessing"] = post;
                row["dictator_correlation"] = dictator;
                row["ece"] = e;
                const bool ok = ma_parity <= kIdentityTolerance && ma_pairs <= kIdentityTolerance &&
                                std::abs(post) <= kIdentityTolerance && dictator == 0.5 && e == 0.5;
                row["passed"] = ok;
                all_ok = all_ok && ok;
                report.add_row(row);
            }
        }
    }
    report.add_check("maj_counterexample", all_ok);
    return report;
}

RunReport ma_weak_learning(const SuiteOptions& o, bool calibrated) {
    const std::size_t count = trials_or(o, 200);
    const std::vector<double> taus{0.05, 0.01};
    auto rows = sweep(count, o.jobs, [&](std::size_t t) {
        const RandomInstance r = corpus_item(o.seed ^ kCorpusSalt, t);
        Json row{{"instance", describe(r)}};
        const double opt = opt_correlation(r.inst, r.cls).value;
        row["opt"] = opt;
        bool ok = true;
        for (double tau : taus) {
            LearnerConfig cfg;
            cfg.tau = tau;
            cfg.seed = mix64(o.seed + t);
            const std::string tag = tau == 0.05 ? "tau05" : "tau01";
            try {
                if (calibrated) {
                    const auto res = learn_calibrated_multiaccurate(r.inst, r.cls, cfg);
                    const double cor = correlation(r.inst, threshold(res.predictor));
                    const double bound = opt - 4.0 * tau;
                    row["cor_sign_" + tag] = cor;
                    row["slack_" + tag] = cor - bound;
                    row["calls_" + tag] = res.trace.oracle_calls;
                    ok = ok && cor >= bound - o.tolerance;
                } else {
                    const auto res = learn_multiaccurate(r.inst, r.cls, cfg);
                    const double cor = correlation(r.inst, res.predictor);
                    const double bound = 2.0 * opt - 1.0 - 2.0 * tau;
                    row["cor_affine_" + tag] = cor;
                    row["slack_" + tag] = cor - bound;
                    row["calls_" + tag] = res.trace.oracle_calls;
                    ok = ok && cor >= bound - o.tolerance;
                }
            } catch (const IterationCapExceeded& e) {
                row["error_" + tag] = e.what();
                ok = false;
            }
        }
        row["passed"] = ok;
        return row;
    });
    RunReport report("verify", o.seed);
    report.set("suite", calibrated ? "calma-strong-learning" : "ma-weak-learning");
    report.set("claim", calibrated ? "calibrated multiaccurate p at (tau, tau): cor(y, sign(2p-1)) >= Opt(C) - 4 tau"
                                   : "(C, tau)-multiaccurate p: cor(y, 2p-1) >= 2 Opt(C) - 1 - 2 tau");
    report.set("taus", taus);
    const std::size_t violations = count_false(rows, "passed");
    for (auto& r : rows) report.add_row(std::move(r));
    report.add_check("zero_violations", violations == 0, {{"violations", violations}, {"instances", count}});
    return report;
}

RunReport sqloss_correlation(const SuiteOptions& o) {
    const std::size_t count = trials_or(o, 1000);
    auto rows = sweep(count, o.jobs, [&](std::size_t t) {
        const RandomInstance r = corpus_item(o.seed ^ kCorpusSalt, t % 200);
        std::mt19937_64 eng(mix64(o.seed * 31 + t));
        // h = labels + noise, partly outside [0,1] so that clipping matters.
        const double noise = 0.05 + 0.9 * uniform01(eng);
        std::vector<double> h(r.inst.size());
        for (std::size_t i = 0; i < h.size(); ++i) h[i] = r.inst.label(i) + noise * (2.0 * uniform01(eng) - 1.0);
        const SqLossConversion c = sqloss_to_correlation(r.inst, h);
        Json row{{"gamma", c.gamma}, {"correlation", c.correlation}};
        row["applies"] = c.gamma > 0.0;
        row["passed"] = !(c.gamma > 0.0) || c.correlation >= 2.0 * c.gamma - o.tolerance;
        return row;
    });
    RunReport report("verify", o.seed);
    report.set("suite", "sqloss-correlation");
    report.set("claim", "gamma = E[(y - 1/2)^2] - E[(y - h)^2] > 0 implies cor(y, 2 clip(h) - 1) >= 2 gamma");
    const std::size_t applies = static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const Json& r) { return r["applies"].get<bool>(); }));
    const std::size_t violations = count_false(rows, "passed");
    for (auto& r : rows) report.add_row(std::move(r));
    report.add_check("zero_violations", violations == 0, {{"violations", violations}, {"pairs_with_positive_gamma", applies}});
    return report;
}

RunReport wma_identity(const SuiteOptions& o) {
    const std::size_t count = trials_or(o, 100);
    auto rows = sweep(count, o.jobs, [&](std::size_t t) {
        const RandomInstance r = corpus_item(o.seed ^ kCorpusSalt, t, true);
        const Predictor p = random_grid_predictor(r.inst.size(), o.seed + 7 * t + 1);
        Json row{{"instance", describe(r)}};
        double worst = 0.0;
        for (const auto& [name, w] : {std::pair{"one", WeightFn::one()}, std::pair{"wmax", WeightFn::wmax()}}) {
            try {
                const IdentityCheck c = verify_identity_wma(r.inst, p, r.cls, w);
                row[std::string("discrepancy_") + name] = c.discrepancy;
                worst = std::max(worst, c.discrepancy);
            } catch (const MeasureIdenticallyZero&) {
                // p equals g everywhere: both sides vanish.
                row[std::string("discrepancy_") + name] = 0.0;
            }
        }
        row["discrepancy"] = worst;
        return row;
    });
    RunReport report("verify", o.seed);
    report.set("suite", "wma-identity");
    report.set("claim", "weighted MA error = dns(mu_w) * max_c |cor(g, c)| under the distribution induced by mu_w");
    const double worst = max_field(rows, "discrepancy");
    for (auto& r : rows) report.add_row(std::move(r));
    report.add_check("max_discrepancy_below_1e-10", worst < 1e-10, {{"max_discrepancy", worst}});
    return report;
}

RunReport density_closed_forms(const SuiteOptions& o) {
    RunReport report("verify", o.seed);
    report.set("suite", "density-closed-forms");
    report.set("claim",
               "four-region showcase: dns(mu_TTV) = delta + 2 eta (1 - eta)(1 - 2 delta), "
               "dns(mu_Max) = 2 delta + 2 eta (1 - 2 delta), ECE = 0");
    double worst = 0.0;
    double worst_ece = 0.0;
    for (double eta : {0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.45}) {
        for (double delta : {0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.45}) {
            for (std::size_t per : {std::size_t{1}, std::size_t{3}}) {
                const ShowcaseInstance s = build_showcase({eta, delta, per});
                const double ttv = density(s.inst, measure_ttv(s.inst, s.predictor));
                const double mx = density(s.inst, measure_weighted(s.inst, s.predictor, WeightFn::wmax()));
                const double want_ttv = delta + 2.0 * eta * (1.0 - eta) * (1.0 - 2.0 * delta);
                const double want_max = 2.0 * delta + 2.0 * eta * (1.0 - 2.0 * delta);
                const double e = ece(s.inst, s.predictor).value;
                const double err = std::max(std::abs(ttv - want_ttv), std::abs(mx - want_max));
                worst = std::max(worst, err);
                worst_ece = std::max(worst_ece, e);
                report.add_row({{"eta", eta}, {"delta", delta}, {"points_per_region", per}, {"dns_ttv", ttv},
                                {"dns_max", mx}, {"ece", e}, {"error", err}});
            }
        }
    }
    const ShowcaseInstance s = build_showcase({0.05, 0.2, 1});
    const double ttv = density(s.inst, measure_ttv(s.inst, s.predictor));
    const double mx = density(s.inst, measure_weighted(s.inst, s.predictor, WeightFn::wmax()));
    report.set("showcase", {{"eta", 0.05}, {"delta", 0.2}, {"dns_ttv", ttv}, {"dns_max", mx}});
    report.add_check("showcase_dns_ttv_0.257", std::abs(ttv - 0.257) <= 1e-9, {{"value", ttv}});
    report.add_check("showcase_dns_max_0.46", std::abs(mx - 0.46) <= 1e-9, {{"value", mx}});
    report.add_check("grid_matches_closed_forms", worst <= 1e-9, {{"max_error", worst}});
    report.add_check("showcase_calibrated", worst_ece <= kIdentityTolerance, {{"max_ece", worst_ece}});
    return report;
}

RunReport density_bounds_suite(const SuiteOptions& o) {
    const std::size_t count = trials_or(o, 100);
    auto rows = sweep(count, o.jobs, [&](std::size_t t) {
        const RandomInstance r = corpus_item(o.seed ^ kCorpusSalt, t, true);
        const Predictor raw = random_grid_predictor(r.inst.size(), o.seed + 13 * t + 5);
        const Predictor recal = recalibrate(r.inst, raw, 0.05);
        Json row{{"instance", describe(r)}};
        bool ok = true;
        double worst_slack = INFINITY;
        for (const auto& [tag, p] : {std::pair{"raw", &raw}, std::pair{"recalibrated", &recal}}) {
            for (const auto& [wname, w] : {std::pair{"one", WeightFn::one()}, std::pair{"wmax", WeightFn::wmax()}}) {
                const DensityBoundsReport d = density_bounds(r.inst, *p, w);
                ok = ok && d.all_hold();
                worst_slack = std::min(worst_slack, 2.0 * d.ece - d.calibration_gap);
            }
            const double e = ece(r.inst, *p).value;
            double expected_min = 0.0;
            for (std::size_t i = 0; i < r.inst.size(); ++i) expected_min += r.inst.weight(i) * std::min((*p)[i], 1.0 - (*p)[i]);
            const double delta = enumerated_error(r.inst, r.cls, *p);
            const double slack = expected_min - (delta - e);
            row[std::string("hardness_slack_") + tag] = slack;
            row[std::string("ece_") + tag] = e;
            ok = ok && slack >= -o.tolerance;
        }
        row["calibration_slack"] = worst_slack;
        row["passed"] = ok;
        return row;
    });
    RunReport report("verify", o.seed);
    report.set("suite", "density-bounds");
    report.set("claim",
               "|dns(mu_w) - 2 E[w(p) p (1-p)]| <= 2 ECE for w in {1, w_Max}; "
               "E[min(p, 1-p)] >= (best enumerated error) - ECE; the dns(mu_TTV) and dns(mu_Max) lower bounds");
    const std::size_t violations = count_false(rows, "passed");
    for (auto& r : rows) report.add_row(std::move(r));
    report.add_check("zero_violations", violations == 0, {{"violations", violations}, {"instances", count}});
    return report;
}

RunReport optimal_density(const SuiteOptions& o) {
    const std::size_t count = trials_or(o, 50);
    auto rows = sweep(count, o.jobs, [&](std::size_t t) {
        const std::uint64_t s = mix64(o.seed ^ (0x5eedull + t));
        const int n = 5 + static_cast<int>(t % 6);
        const Json cspec{{"family", "juntas"}, {"n", n}, {"k", 2}, {"tables", 2}, {"max_hypotheses", 24}};
        const Json lspec{{"mode", "deterministic_random"}, {"bias", 0.3 + 0.4 * static_cast<double>(s % 1000) / 1000.0}};
        const RandomInstance r = random_instance(s, 0, cspec.dump(), lspec.dump());
        PipelineConfig cfg;
        cfg.seed = s;
        Json row{{"n", n}};
        try {
            const PipelineResult res = ihcl_pipeline(r.inst, r.cls, cfg);
            row["no_hardness"] = res.no_hardness;
            row["delta_measured"] = res.delta_measured;
            row["eps_prime"] = res.eps_prime;
            row["oracle_calls"] = res.trace.oracle_calls;
            if (res.report) {
                row["density"] = res.report->density;
                row["advantage"] = res.report->advantage;
                row["identity_discrepancy"] = res.identity_discrepancy;
            }
            const auto& c = res.checks;
            row["density_ok"] = c.density_ok;
            row["advantage_ok"] = c.advantage_ok;
            row["chain_ok"] = c.chain_ok;
            row["passed"] = res.no_hardness || (c.density_ok && c.advantage_ok && c.chain_ok && c.identity_ok);
        } catch (const IterationCapExceeded& e) {
            row["error"] = e.what();
            row["passed"] = false;
        }
        return row;
    });
    RunReport report("verify", o.seed);
    report.set("suite", "optimal-density");
    report.set("claim",
               "calibrated w_Max-multiaccurate p: dns(mu_Max) >= 2 E[min(p, 1-p)] - tau, "
               "advantage <= 1/2 + 3 eps' / (2 dns), mu_TTV <= mu_Max <= 2 mu_TTV pointwise");
    const std::size_t violations = count_false(rows, "passed");
    const std::size_t trivial = static_cast<std::size_t>(std::count_if(
        rows.begin(), rows.end(), [](const Json& r) { return r.value("no_hardness", false); }));
    for (auto& r : rows) report.add_row(std::move(r));
    report.add_check("zero_violations", violations == 0,
                     {{"violations", violations}, {"instances", count}, {"no_hardness", trivial}});
    return report;
}

RunReport tier_cost(const SuiteOptions& o) {
    const std::size_t count = trials_or(o, 50);
    const double tau = 0.05;
    auto rows = sweep(count, o.jobs, [&](std::size_t t) {
        const RandomInstance r = corpus_item(o.seed ^ kCorpusSalt, t);
        LearnerConfig cfg;
        cfg.tau = tau;
        cfg.seed = mix64(o.seed + t);
        Json row{{"points", r.inst.size()}, {"hypotheses", r.cls.size()}};
        try {
            row["calma_calls"] = learn_calibrated_multiaccurate(r.inst, r.cls, cfg).trace.oracle_calls;
        } catch (const IterationCapExceeded& e) {
            row["calma_calls"] = e.trace().oracle_calls;
        }
        try {
            row["mc_calls"] = learn_multicalibrated(r.inst, r.cls, cfg).trace.oracle_calls;
        } catch (const IterationCapExceeded& e) {
            row["mc_calls"] = e.trace().oracle_calls;
        }
        return row;
    });
    std::vector<double> calma;
    std::vector<double> mc;
    for (const auto& r : rows) {
        calma.push_back(r["calma_calls"].get<double>());
        mc.push_back(r["mc_calls"].get<double>());
    }
    RunReport report("verify", o.seed);
    report.set("suite", "tier-cost");
    report.set("claim", "median weak-learner calls: calibrated multiaccuracy <= multicalibration at equal tau");
    report.set("tau", tau);
    const double mc_median = median_of(mc);
    const double calma_median = median_of(calma);
    report.set("median_oracle_calls", {{"calma", calma_median}, {"mc", mc_median}});
    for (auto& r : rows) report.add_row(std::move(r));
    report.add_check("calma_median_le_mc_median", calma_median <= mc_median,
                     {{"calma", calma_median}, {"mc", mc_median}});
    return report;
}

RunReport goldreich_levin_suite(const SuiteOptions& o) {
    const std::size_t count = trials_or(o, 20);
    const int n = 8;
    const double gamma = 0.25;
    auto rows = sweep(count, 1, [&](std::size_t t) {
        std::mt19937_64 eng(mix64(o.seed ^ (0x61ull + t)));
        PlantedPolynomial poly;
        poly.n = n;
        std::vector<std::uint32_t> used;
        auto fresh = [&] {
            std::uint32_t s;
            do s = static_cast<std::uint32_t>(eng() & 0xffu);
            while (std::find(used.begin(), used.end(), s) != used.end());
            used.push_back(s);
            return s;
        };
        auto sign = [&] { return (eng() & 1u) ? 1.0 : -1.0; };
        const int heavy = 1 + static_cast<int>(eng() % 2);
        const int light = 1 + static_cast<int>(eng() % 3);
        for (int k = 0; k < heavy; ++k) poly.terms.emplace_back(fresh(), sign() * (gamma + 0.2 * uniform01(eng)));
        for (int k = 0; k < light; ++k) poly.terms.emplace_back(fresh(), sign() * 0.1 * uniform01(eng));
        const FourierSpectrum spectrum = full_spectrum(poly.table());

        GlConfig cfg;
        cfg.gamma = gamma;
        cfg.bound = poly.l1();
        cfg.seed = mix64(o.seed + t);
        cfg.jobs = o.jobs;
        const QueryFn query = [&poly](std::uint32_t x, std::uint64_t) { return poly(x); };
        const GlResult r = goldreich_levin(query, n, cfg);

        bool complete = true;
        bool sound = true;
        for (std::uint32_t s = 0; s < spectrum.coefficients.size(); ++s) {
            const bool listed = std::find(r.subsets.begin(), r.subsets.end(), s) != r.subsets.end();
            if (std::abs(spectrum[s]) >= gamma && !listed) complete = false;
            if (std::abs(spectrum[s]) < gamma / 2.0 && listed) sound = false;
        }
        double estimate_error = 0.0;
        for (std::size_t k = 0; k < r.subsets.size(); ++k) {
            estimate_error = std::max(estimate_error, std::abs(r.coefficient_estimates[k] - spectrum[r.subsets[k]]));
        }
        const bool size_ok = static_cast<double>(r.subsets.size()) <= 4.0 / (gamma * gamma);
        Json row{{"terms", poly.terms.size()}, {"l1", poly.l1()}, {"listed", r.subsets.size()},
                 {"samples_per_estimate", r.samples_per_estimate}, {"total_queries", r.total_queries},
                 {"max_estimate_error", estimate_error}};
        row["complete"] = complete && !r.incomplete;
        row["sound"] = sound;
        row["list_size_ok"] = size_ok && !r.overflow;
        return row;
    });
    RunReport report("verify", o.seed);
    report.set("suite", "goldreich-levin");
    report.set("claim",
               "heavy-coefficient list: every |f(S)| >= gamma listed, nothing with |f(S)| < gamma/2, "
               "at most 4 / gamma^2 entries; checked against the exact spectrum");
    report.set("n", n);
    report.set("gamma", gamma);
    const std::size_t incomplete = count_false(rows, "complete");
    const std::size_t unsound = count_false(rows, "sound");
    const std::size_t oversize = count_false(rows, "list_size_ok");
    for (auto& r : rows) report.add_row(std::move(r));
    report.add_check("completeness", incomplete == 0, {{"failures", incomplete}});
    report.add_check("soundness", unsound == 0, {{"failures", unsound}});
    report.add_check("list_size", oversize == 0, {{"failures", oversize}});
    return report;
}

RunReport projection_suite(const SuiteOptions& o) {
    const std::size_t count = trials_or(o, 100);
    auto rows = sweep(count, o.jobs, [&](std::size_t t) {
        const RandomInstance r = corpus_item(o.seed ^ kCorpusSalt, t);
        Predictor p = random_grid_predictor(r.inst.size(), o.seed + 17 * t + 3);
        bool learned = t % 2 == 1;
        if (learned) {
            LearnerConfig cfg;
            cfg.tau = 0.05;
            cfg.seed = mix64(o.seed + t);
            try {
                p = learn_multiaccurate(r.inst, r.cls, cfg).predictor;
            } catch (const IterationCapExceeded& e) {
                p = e.last_predictor();
            }
        }
        const double tau = ma_error(r.inst, p, r.cls).value;
        const ProjectionResult pr = project_span(r.inst, p, r.cls, tau);
        Json row{{"instance", describe(r)}, {"learned", learned}, {"tau", tau}, {"gamma", pr.gamma},
                 {"l1", pr.l1_norm}, {"rank", pr.rank}, {"clipped_loss", pr.clipped_loss}, {"bound", *pr.bound}};
        row["passed"] = pr.clipped_loss <= *pr.bound + o.tolerance;
        return row;
    });
    RunReport report("verify", o.seed);
    report.set("suite", "projection");
    report.set("claim",
               "q = least-squares projection of 2p - 1 onto span(C), h = clip(q): "
               "E[((2y - 1) - h)^2] <= 1 - gamma + 4 tau sum |lambda| with tau the measured MA error");
    const std::size_t violations = count_false(rows, "passed");
    for (auto& r : rows) report.add_row(std::move(r));
    report.add_check("zero_violations", violations == 0, {{"violations", violations}, {"instances", count}});
    return report;
}

}  // namespace

std::vector<std::string> suite_names() {
    return {"maj-counterexample", "ma-weak-learning", "calma-strong-learning", "sqloss-correlation",
            "wma-identity",       "density-closed-forms", "density-bounds", "optimal-density",
            "tier-cost",          "goldreich-levin",  "projection"};
}

RunReport run_suite(const std::string& name, const SuiteOptions& options) {
    if (name == "maj-counterexample") return maj_counterexample(options);
    if (name == "ma-weak-learning") return ma_weak_learning(options, false);
    if (name == "calma-strong-learning") return ma_weak_learning(options, true);
    if (name == "sqloss-correlation") return sqloss_correlation(options);
    if (name == "wma-identity") return wma_identity(options);
    if (name == "density-closed-forms") return density_closed_forms(options);
    if (name == "density-bounds") return density_bounds_suite(options);
    if (name == "optimal-density") return optimal_density(options);
    if (name == "tier-cost") return tier_cost(options);
    if (name == "goldreich-levin") return goldreich_levin_suite(options);
    if (name == "projection") return projection_suite(options);
    std::string known;
    for (const auto& s : suite_names()) known += (known.empty() ? "" : ", ") + s;
    throw SchemaError("/options/suite", "unknown suite '" + name + "' (known: " + known + ")");
}

}  // namespace fairboost
