#include "fairboost/fairboost.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "fairboost/experiments.hpp"

using namespace fairboost;

struct fb_instance {
    InstanceDocument doc;
};

struct fb_predictor {
    Predictor p;
};

struct fb_result {
    std::string report;
    int exit_code = 0;
    std::map<std::string, std::string> artifacts;
};

namespace {

thread_local std::string last_error;

fb_status to_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return FB_ERR_INVALID_ARGUMENT;
        case ErrorCode::Schema: return FB_ERR_SCHEMA;
        case ErrorCode::DomainMismatch: return FB_ERR_DOMAIN_MISMATCH;
        case ErrorCode::EmptyClass: return FB_ERR_EMPTY_CLASS;
        case ErrorCode::IterationCapExceeded: return FB_ERR_ITERATION_CAP;
        case ErrorCode::MeasureIdenticallyZero: return FB_ERR_MEASURE_ZERO;
        case ErrorCode::BoundViolation: return FB_ERR_BOUND_VIOLATION;
        case ErrorCode::Io: return FB_ERR_IO;
    }
    return FB_ERR_INTERNAL;
}

template <class Fn>
fb_status guarded(Fn fn) {
    last_error.clear();
    try {
        fn();
        return FB_OK;
    } catch (const Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
    } catch (const std::exception& e) {
        last_error = e.what();
    } catch (...) {
        last_error = "unknown failure";
    }
    return FB_ERR_INTERNAL;
}

void require(const void* ptr, const char* what) {
    if (!ptr) throw InvalidArgument(std::string(what) + " is null");
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

const HypothesisClass& class_of(const fb_instance* inst) {
    if (!inst->doc.cls) throw SchemaError("/class", "instance has no hypothesis class");
    return *inst->doc.cls;
}

}  // namespace

extern "C" {

const char* fb_version(void) { return "0.1.0"; }

const char* fb_suite_names(void) {
    static const std::string names = [] {
        std::string out;
        for (const auto& n : verify_suite_names()) out += n + "\n";
        return out;
    }();
    return names.c_str();
}

const char* fb_last_error(void) { return last_error.c_str(); }

const char* fb_status_name(fb_status status) {
    switch (status) {
        case FB_OK: return "ok";
        case FB_ERR_INVALID_ARGUMENT: return "invalid argument";
        case FB_ERR_SCHEMA: return "schema error";
        case FB_ERR_DOMAIN_MISMATCH: return "domain mismatch";
        case FB_ERR_EMPTY_CLASS: return "empty class";
        case FB_ERR_ITERATION_CAP: return "iteration cap exceeded";
        case FB_ERR_MEASURE_ZERO: return "measure identically zero";
        case FB_ERR_BOUND_VIOLATION: return "bound violation";
        case FB_ERR_IO: return "io error";
        case FB_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void fb_string_free(char* s) { std::free(s); }

fb_status fb_instance_from_json(const char* json, fb_instance** out) {
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        *out = new fb_instance{parse_instance_text(json)};
    });
}

void fb_instance_free(fb_instance* inst) { delete inst; }

fb_status fb_instance_size(const fb_instance* inst, size_t* out) {
    return guarded([&] {
        require(inst, "instance");
        require(out, "out");
        *out = inst->doc.inst.size();
    });
}

fb_status fb_instance_class_size(const fb_instance* inst, size_t* out) {
    return guarded([&] {
        require(inst, "instance");
        require(out, "out");
        *out = inst->doc.cls ? inst->doc.cls->size() : 0;
    });
}

fb_status fb_instance_predictor(const fb_instance* inst, fb_predictor** out) {
    return guarded([&] {
        require(inst, "instance");
        require(out, "out");
        if (!inst->doc.predictor) throw SchemaError("/predictor", "instance has no predictor");
        *out = new fb_predictor{*inst->doc.predictor};
    });
}

fb_status fb_predictor_from_values(const double* values, size_t n, double grid, fb_predictor** out) {
    return guarded([&] {
        require(out, "out");
        if (n > 0) require(values, "values");
        std::optional<double> g;
        if (grid > 0.0) g = grid;
        *out = new fb_predictor{Predictor(std::vector<double>(values, values + n), g)};
    });
}

void fb_predictor_free(fb_predictor* p) { delete p; }

fb_status fb_predictor_size(const fb_predictor* p, size_t* out) {
    return guarded([&] {
        require(p, "predictor");
        require(out, "out");
        *out = p->p.size();
    });
}

fb_status fb_predictor_values(const fb_predictor* p, double* out, size_t n) {
    return guarded([&] {
        require(p, "predictor");
        if (n > 0) require(out, "out");
        const auto v = p->p.values();
        std::copy_n(v.begin(), std::min(n, v.size()), out);
    });
}

fb_status fb_metric_value(const fb_instance* inst, const fb_predictor* p, fb_metric metric, double* out) {
    return guarded([&] {
        require(inst, "instance");
        require(out, "out");
        const FiniteInstance& in = inst->doc.inst;
        if (metric == FB_METRIC_OPT) {
            *out = opt_correlation(in, class_of(inst)).value;
            return;
        }
        require(p, "predictor");
        check_domain(in, p->p.size(), "predictor");
        switch (metric) {
            case FB_METRIC_EAE: *out = eae(in, p->p); break;
            case FB_METRIC_ECE: *out = ece(in, p->p).value; break;
            case FB_METRIC_MA: *out = ma_error(in, p->p, class_of(inst)).value; break;
            case FB_METRIC_WEIGHTED_MA: *out = weighted_ma_error(in, p->p, class_of(inst), WeightFn::wmax()).value; break;
            case FB_METRIC_MC: *out = mc_error(in, p->p, class_of(inst)).value; break;
            case FB_METRIC_BEST_POSTPROCESSING: *out = best_postprocessing(in, p->p).correlation; break;
            case FB_METRIC_CORRELATION: *out = correlation(in, p->p); break;
            default: throw InvalidArgument("unknown metric " + std::to_string(static_cast<int>(metric)));
        }
    });
}

fb_status fb_learn(const fb_instance* inst, const char* tier, const char* config_json, fb_predictor** out,
                   char** trace_json) {
    return guarded([&] {
        require(inst, "instance");
        require(tier, "tier");
        require(out, "out");
        const LearnerConfig cfg =
            config_json ? parse_learner_config(parse_json_text(config_json, "config")) : LearnerConfig{};
        const FiniteInstance& in = inst->doc.inst;
        const HypothesisClass& cls = class_of(inst);
        const std::string t = tier;
        auto run = [&]() -> LearnerResult {
            if (t == "ma") return learn_multiaccurate(in, cls, cfg);
            if (t == "calma") return learn_calibrated_multiaccurate(in, cls, cfg);
            if (t == "wma") return learn_calibrated_multiaccurate(in, cls, cfg, WeightFn::wmax());
            if (t == "mc") return learn_multicalibrated(in, cls, cfg);
            throw InvalidArgument("unknown tier '" + t + "'");
        };
        LearnerResult r = run();
        if (trace_json) *trace_json = dup_string(trace_to_json(r.trace).dump());
        *out = new fb_predictor{std::move(r.predictor)};
    });
}

fb_status fb_run(const char* command, const char* input_json, const char* options_json, fb_result** out) {
    return guarded([&] {
        require(command, "command");
        require(out, "out");
        const Json input = input_json ? parse_json_text(input_json, "input") : Json();
        const Json options = options_json ? parse_json_text(options_json, "options") : Json::object();
        CommandResult r = run_command(command, input, options);
        *out = new fb_result{r.report.dump(2) + "\n", r.exit_code, std::move(r.artifacts)};
    });
}

void fb_result_free(fb_result* r) { delete r; }

int fb_result_exit_code(const fb_result* r) { return r ? r->exit_code : -1; }

const char* fb_result_report(const fb_result* r) { return r ? r->report.c_str() : nullptr; }

const char* fb_result_artifact(const fb_result* r, const char* name) {
    if (!r || !name) return nullptr;
    const auto it = r->artifacts.find(name);
    return it == r->artifacts.end() ? nullptr : it->second.c_str();
}

}  // extern "C"
