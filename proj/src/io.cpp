#include "fairboost/io.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace fairboost {

namespace {

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

const Json& require(const Json& doc, const std::string& path, const std::string& key) {
    if (!doc.is_object()) throw SchemaError(path.empty() ? "/" : path, "expected an object");
    const auto it = doc.find(key);
    if (it == doc.end()) throw SchemaError(child(path, key), "missing required field");
    return *it;
}

double number(const Json& node, const std::string& path) {
    if (!node.is_number()) throw SchemaError(path, "expected a number");
    return node.get<double>();
}

std::string string_of(const Json& node, const std::string& path) {
    if (!node.is_string()) throw SchemaError(path, "expected a string");
    return node.get<std::string>();
}

void reject_unknown(const Json& doc, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!doc.is_object()) throw SchemaError(path.empty() ? "/" : path, "expected an object");
    for (const auto& [key, value] : doc.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) throw SchemaError(child(path, key), "unknown field");
    }
}

// A per-point table: array in point order, object keyed by point id, or a
// truth-table string on hypercube domains.
std::vector<double> table(const Json& node, const std::string& path, const std::vector<std::string>& points,
                          bool hypercube, double one, double zero) {
    std::vector<double> out(points.size());
    if (node.is_array()) {
        if (node.size() != points.size()) {
            if (node.size() < points.size()) {
                throw DomainMismatch(path + ": no value for point '" + points[node.size()] + "'");
            }
            throw SchemaError(path, "has " + std::to_string(node.size()) + " entries for " +
                                        std::to_string(points.size()) + " points");
        }
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = number(node[i], child(path, i));
        return out;
    }
    if (node.is_object()) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto it = node.find(points[i]);
            if (it == node.end()) throw DomainMismatch(path + ": no value for point '" + points[i] + "'");
            out[i] = number(*it, child(path, points[i]));
        }
        if (node.size() != points.size()) {
            std::set<std::string> known(points.begin(), points.end());
            for (const auto& [key, value] : node.items()) {
                if (!known.count(key)) throw DomainMismatch(path + ": unknown point '" + key + "'");
            }
        }
        return out;
    }
    if (node.is_string() && hypercube) {
        const auto text = node.get<std::string>();
        if (text.size() != points.size()) {
            throw SchemaError(path, "truth table has " + std::to_string(text.size()) + " characters for " +
                                        std::to_string(points.size()) + " points");
        }
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] != '0' && text[i] != '1') throw SchemaError(path, "truth table characters must be 0 or 1");
            out[i] = text[i] == '1' ? one : zero;
        }
        return out;
    }
    throw SchemaError(path, hypercube ? "expected an array, object or truth-table string"
                                      : "expected an array or an object keyed by point id");
}

template <typename F>
auto guarded(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const SchemaError&) {
        throw;
    } catch (const DomainMismatch&) {
        throw;
    } catch (const InvalidArgument& e) {
        throw SchemaError(path, e.what());
    }
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("/", what + " is not valid JSON (byte " + std::to_string(e.byte) + ")");
    }
}

InstanceDocument parse_instance_text(const std::string& text) { return parse_instance(parse_json_text(text, "instance")); }

InstanceDocument parse_instance(const Json& doc) {
    if (!doc.is_object()) throw SchemaError("/", "instance document must be an object");
    reject_unknown(doc, "", {"points", "hypercube", "weights", "labels", "class", "predictor", "measure", "meta"});
    std::vector<std::string> points;
    std::optional<int> cube;
    if (doc.contains("hypercube")) {
        const Json& n = doc.at("hypercube");
        if (!n.is_number_integer() || n.get<int>() < 1 || n.get<int>() > 20) {
            throw SchemaError("/hypercube", "expected an integer dimension in [1,20]");
        }
        cube = n.get<int>();
        for (std::uint32_t k = 0; k < (1u << *cube); ++k) points.push_back(hypercube_point_id(*cube, k));
        if (doc.contains("points")) throw SchemaError("/points", "not allowed together with \"hypercube\"");
    } else {
        const Json& node = require(doc, "", "points");
        if (!node.is_array() || node.empty()) throw SchemaError("/points", "expected a non-empty array of ids");
        for (std::size_t i = 0; i < node.size(); ++i) points.push_back(string_of(node[i], child("/points", i)));
    }

    std::vector<double> weights;
    if (doc.contains("weights")) {
        weights = table(doc.at("weights"), "/weights", points, false, 1.0, 0.0);
    } else {
        weights.assign(points.size(), 1.0 / static_cast<double>(points.size()));
    }

    const Json& labels = require(doc, "", "labels");
    reject_unknown(labels, "/labels", {"kind", "values"});
    const auto kind_text = string_of(require(labels, "/labels", "kind"), "/labels/kind");
    LabelKind kind;
    if (kind_text == "bayes") kind = LabelKind::Bayes;
    else if (kind_text == "deterministic") kind = LabelKind::Deterministic;
    else throw SchemaError("/labels/kind", "expected \"bayes\" or \"deterministic\"");
    auto label_values = table(require(labels, "/labels", "values"), "/labels/values", points, cube.has_value(), 1.0, 0.0);

    auto inst = guarded("/", [&] {
        if (cube) {
            FiniteInstance base = FiniteInstance::hypercube(*cube, kind, label_values);
            return doc.contains("weights") ? base.with_weights(weights) : base;
        }
        return FiniteInstance(points, weights, kind, label_values);
    });
    InstanceDocument out{std::move(inst), std::nullopt, std::nullopt, std::nullopt};

    if (doc.contains("class")) {
        const Json& c = doc.at("class");
        reject_unknown(c, "/class", {"kind", "hypotheses"});
        const auto k = string_of(require(c, "/class", "kind"), "/class/kind");
        HypothesisKind hk;
        if (k == "pm1") hk = HypothesisKind::BooleanPM;
        else if (k == "boolean01") hk = HypothesisKind::Boolean01;
        else if (k == "bounded") hk = HypothesisKind::Bounded;
        else throw SchemaError("/class/kind", "expected \"pm1\", \"boolean01\" or \"bounded\"");
        const Json& hs = require(c, "/class", "hypotheses");
        if (!hs.is_array()) throw SchemaError("/class/hypotheses", "expected an array");
        std::vector<Hypothesis> hyps;
        for (std::size_t i = 0; i < hs.size(); ++i) {
            const std::string path = child("/class/hypotheses", i);
            reject_unknown(hs[i], path, {"name", "values"});
            const auto name = string_of(require(hs[i], path, "name"), child(path, "name"));
            const bool strings_ok = cube.has_value() && hk != HypothesisKind::Bounded;
            const double zero = hk == HypothesisKind::Boolean01 ? 0.0 : -1.0;
            auto values = table(require(hs[i], path, "values"), child(path, "values"), points, strings_ok, 1.0, zero);
            hyps.push_back(guarded(path, [&] { return Hypothesis(name, hk, std::move(values)); }));
        }
        out.cls = HypothesisClass(std::move(hyps));
    }
    if (doc.contains("predictor")) {
        const Json& p = doc.at("predictor");
        reject_unknown(p, "/predictor", {"values", "grid"});
        auto values = table(require(p, "/predictor", "values"), "/predictor/values", points, false, 1.0, 0.0);
        std::optional<double> grid;
        if (p.contains("grid") && !p.at("grid").is_null()) grid = number(p.at("grid"), "/predictor/grid");
        out.predictor = guarded("/predictor", [&] { return Predictor(std::move(values), grid); });
    }
    if (doc.contains("measure")) {
        auto values = table(doc.at("measure"), "/measure", points, false, 1.0, 0.0);
        out.measure = guarded("/measure", [&] { return Measure(std::move(values)); });
    }
    return out;
}

Json predictor_to_json(const Predictor& p) {
    Json out;
    out["values"] = std::vector<double>(p.values().begin(), p.values().end());
    out["grid"] = optional_number(p.grid());
    return out;
}

Json instance_to_json(const FiniteInstance& inst, const HypothesisClass* cls, const Predictor* predictor,
                      const Measure* measure) {
    Json out;
    if (inst.hypercube_dim() && inst.uniform()) {
        out["hypercube"] = *inst.hypercube_dim();
    } else {
        out["points"] = inst.points();
        out["weights"] = std::vector<double>(inst.weights().begin(), inst.weights().end());
    }
    out["labels"] = {{"kind", inst.deterministic() ? "deterministic" : "bayes"},
                     {"values", std::vector<double>(inst.labels().begin(), inst.labels().end())}};
    if (cls) {
        Json hyps = Json::array();
        for (const auto& h : cls->hypotheses()) hyps.push_back({{"name", h.name}, {"values", h.values}});
        out["class"] = {{"kind", to_string(cls->kind())}, {"hypotheses", std::move(hyps)}};
    }
    if (predictor) out["predictor"] = predictor_to_json(*predictor);
    if (measure) out["measure"] = std::vector<double>(measure->values().begin(), measure->values().end());
    return out;
}

LearnerConfig parse_learner_config(const Json& doc, const std::string& path) {
    LearnerConfig cfg;
    if (doc.is_null()) return cfg;
    reject_unknown(doc, path, {"tau", "calibration_tau", "grid_step", "max_iters", "step_rule", "kappa", "seed"});
    if (doc.contains("tau")) cfg.tau = number(doc.at("tau"), child(path, "tau"));
    if (doc.contains("calibration_tau") && !doc.at("calibration_tau").is_null()) {
        cfg.calibration_tau = number(doc.at("calibration_tau"), child(path, "calibration_tau"));
    }
    if (doc.contains("grid_step") && !doc.at("grid_step").is_null()) {
        cfg.grid_step = number(doc.at("grid_step"), child(path, "grid_step"));
    }
    if (doc.contains("max_iters") && !doc.at("max_iters").is_null()) {
        const Json& m = doc.at("max_iters");
        if (!is_nonnegative_integer(m)) throw SchemaError(child(path, "max_iters"), "expected a positive integer");
        cfg.max_iters = m.get<std::size_t>();
    }
    if (doc.contains("step_rule")) {
        const auto rule = string_of(doc.at("step_rule"), child(path, "step_rule"));
        if (rule == "line_search") cfg.step_rule = StepRule::OptimalLineSearch;
        else if (rule == "fixed_kappa") cfg.step_rule = StepRule::FixedKappa;
        else throw SchemaError(child(path, "step_rule"), "expected \"line_search\" or \"fixed_kappa\"");
    }
    if (doc.contains("kappa")) cfg.kappa = number(doc.at("kappa"), child(path, "kappa"));
    if (doc.contains("seed")) {
        if (!is_nonnegative_integer(doc.at("seed"))) throw SchemaError(child(path, "seed"), "expected an unsigned integer");
        cfg.seed = doc.at("seed").get<std::uint64_t>();
    }
    guarded(path.empty() ? "/" : path, [&] {
        cfg.validate();
        return 0;
    });
    return cfg;
}

Json learner_config_to_json(const LearnerConfig& cfg) {
    return {{"tau", cfg.tau},
            {"calibration_tau", cfg.cal_tau()},
            {"grid_step", cfg.effective_grid()},
            {"max_iters", cfg.effective_max_iters()},
            {"step_rule", cfg.step_rule == StepRule::OptimalLineSearch ? "line_search" : "fixed_kappa"},
            {"kappa", cfg.kappa},
            {"seed", cfg.seed}};
}

Json audit_to_json(const AuditReport& r) {
    Json out{{"metric", to_string(r.metric)}, {"value", r.value}};
    if (r.witness) out["witness"] = *r.witness;
    if (r.level) out["level"] = *r.level;
    return out;
}

Json trace_to_json(const LearnerTrace& trace) {
    Json finals{{"ma", trace.final_reports.ma}, {"ece", trace.final_reports.ece}};
    if (trace.final_reports.weighted_ma) finals["weighted_ma"] = *trace.final_reports.weighted_ma;
    if (trace.final_reports.mc) finals["mc"] = *trace.final_reports.mc;
    return {{"oracle_calls", trace.oracle_calls},
            {"recalibrations", trace.recalibrations},
            {"steps", trace.steps.size()},
            {"grid", trace.grid},
            {"initial_sq_loss", trace.sq_loss_trajectory.empty() ? 0.0 : trace.sq_loss_trajectory.front()},
            {"final_sq_loss", trace.sq_loss_trajectory.empty() ? 0.0 : trace.sq_loss_trajectory.back()},
            {"final_reports", std::move(finals)}};
}

bool is_nonnegative_integer(const Json& node) {
    return node.is_number_unsigned() || (node.is_number_integer() && node.get<std::int64_t>() >= 0);
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string trace_to_csv(const LearnerTrace& trace) {
    std::ostringstream os;
    os << "step,kind,violation,sq_loss,hypothesis,level\n";
    if (!trace.sq_loss_trajectory.empty()) os << "0,initial,," << format_double(trace.sq_loss_trajectory.front()) << ",,\n";
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        const auto& s = trace.steps[k];
        os << k + 1 << ',' << to_string(s.kind) << ',' << format_double(s.violation) << ',' << format_double(s.sq_loss)
           << ',';
        if (s.hypothesis) {
            // Names may contain commas (coordinate lists), so quote them.
            os << '"' << *s.hypothesis << '"';
        }
        os << ',';
        if (s.level) os << format_double(*s.level);
        os << '\n';
    }
    return os.str();
}

Json hardcore_report_to_json(const HardcoreReport& r) {
    return {{"density", r.density},
            {"min_entropy_ratio", r.min_entropy_ratio},
            {"eta", r.eta},
            {"advantage", r.advantage},
            {"advantage_witness", r.advantage_witness},
            {"class_correlation", r.class_correlation},
            {"correlation_witness", r.correlation_witness},
            {"sandwich_lower", r.sandwich_lower},
            {"sandwich_upper", r.sandwich_upper},
            {"sandwich_lower_valid", r.sandwich_lower_valid},
            {"sandwich_holds", r.sandwich_holds}};
}

Json density_bounds_to_json(const DensityBoundsReport& r) {
    Json out{{"ece", r.ece},
             {"dns_w", r.dns_w},
             {"calibration_term", r.calibration_term},
             {"calibration_gap", r.calibration_gap},
             {"calibration_holds", r.calibration_holds},
             {"expected_min", r.expected_min},
             {"majority_error", r.majority_error},
             {"majority_holds", r.majority_holds},
             {"dns_ttv", r.dns_ttv},
             {"expected_2p1p", r.expected_2p1p},
             {"ttv_holds", r.ttv_holds},
             {"dns_max", r.dns_max},
             {"max_holds", r.max_holds},
             {"chain_holds", r.chain_holds}};
    if (r.tau_cal) out["tau_cal"] = *r.tau_cal;
    if (r.calibrated_within_tau) out["calibrated_within_tau"] = *r.calibrated_within_tau;
    return out;
}

Json projection_to_json(const ProjectionResult& r) {
    Json coeffs = Json::array();
    for (const auto& [name, lambda] : r.coefficients) coeffs.push_back({{"name", name}, {"lambda", lambda}});
    Json out{{"coefficients", std::move(coeffs)},
             {"l1_norm", r.l1_norm},
             {"gamma", r.gamma},
             {"gram_condition_number", r.condition_number},
             {"rank", r.rank},
             {"clipped_loss", r.clipped_loss},
             {"q_values", r.q_values},
             {"h_values", r.h_values}};
    out["tau"] = optional_number(r.tau);
    out["bound"] = optional_number(r.bound);
    return out;
}

Json pipeline_to_json(const PipelineResult& r) {
    Json out{{"no_hardness", r.no_hardness}};
    if (r.no_hardness) out["marker"] = "no hardness";
    out["delta_initial"] = r.delta_initial;
    out["delta_measured"] = r.delta_measured;
    out["delta_enumerated"] = r.delta_enumerated;
    out["ma_target"] = r.ma_target;
    out["eps_prime"] = r.eps_prime;
    out["ece"] = r.ece;
    out["identity_discrepancy"] = r.identity_discrepancy;
    out["trace"] = trace_to_json(r.trace);
    if (r.report) out["hardcore"] = hardcore_report_to_json(*r.report);
    const auto& c = r.checks;
    Json checks{{"density_2delta_minus_tau", c.density_ok},
                {"advantage_vs_weighted_ma", c.advantage_ok},
                {"hardness_density", c.hardness_density_ok},
                {"measure_chain", c.chain_ok},
                {"wma_identity", c.identity_ok},
                {"posthoc_ma_condition", c.posthoc_ma_ok}};
    checks["advantage_half_plus_eps"] = c.half_eps_ok ? Json(*c.half_eps_ok) : Json(nullptr);
    out["checks"] = std::move(checks);
    return out;
}

Json subset_to_json(std::uint32_t subset) {
    Json out = Json::array();
    for (int i = 0; i < 32; ++i) {
        if ((subset >> i) & 1u) out.push_back(i + 1);
    }
    return out;
}

Json gl_result_to_json(const GlResult& r, bool include_buckets) {
    Json list = Json::array();
    for (std::size_t k = 0; k < r.subsets.size(); ++k) {
        list.push_back({{"subset", subset_to_json(r.subsets[k])}, {"estimate", r.coefficient_estimates[k]}});
    }
    Json out{{"list", std::move(list)},
             {"incomplete", r.incomplete},
             {"overflow", r.overflow},
             {"samples_per_estimate", r.samples_per_estimate},
             {"total_queries", r.total_queries},
             {"estimates", r.buckets.size()}};
    if (include_buckets) {
        Json buckets = Json::array();
        for (const auto& b : r.buckets) {
            buckets.push_back({{"depth", b.depth},
                               {"prefix", subset_to_json(b.prefix)},
                               {"estimate", b.estimate},
                               {"halfwidth", b.halfwidth},
                               {"kept", b.kept}});
        }
        out["buckets"] = std::move(buckets);
    }
    return out;
}

PlantedPolynomial parse_planted_polynomial(const Json& doc, const std::string& path) {
    reject_unknown(doc, path, {"n", "terms"});
    const Json& n = require(doc, path, "n");
    if (!n.is_number_integer() || n.get<int>() < 1 || n.get<int>() > kMaxQueryDim) {
        throw SchemaError(child(path, "n"), "expected an integer in [1,24]");
    }
    PlantedPolynomial poly;
    poly.n = n.get<int>();
    const Json& terms = require(doc, path, "terms");
    if (!terms.is_array()) throw SchemaError(child(path, "terms"), "expected an array");
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const std::string tp = child(child(path, "terms"), t);
        reject_unknown(terms[t], tp, {"subset", "coef"});
        const Json& subset = require(terms[t], tp, "subset");
        if (!subset.is_array()) throw SchemaError(child(tp, "subset"), "expected an array of coordinates");
        std::uint32_t mask = 0;
        for (std::size_t i = 0; i < subset.size(); ++i) {
            const Json& c = subset[i];
            if (!c.is_number_integer() || c.get<int>() < 1 || c.get<int>() > poly.n) {
                throw SchemaError(child(child(tp, "subset"), i), "coordinate must lie in [1, n]");
            }
            mask |= 1u << (c.get<int>() - 1);
        }
        poly.terms.emplace_back(mask, number(require(terms[t], tp, "coef"), child(tp, "coef")));
    }
    return poly;
}

}  // namespace fairboost
