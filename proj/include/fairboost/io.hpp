#pragma once

// JSON documents for instances, predictors, measures, learner configs and
// reports, plus the per-step trace CSV. Schema errors carry a JSON pointer.

#include <optional>
#include <string>

#include "fairboost/core.hpp"
#include "fairboost/fourier.hpp"
#include "fairboost/hardcore.hpp"
#include "fairboost/learners.hpp"
#include "fairboost/postprocess.hpp"
#include "json.hpp"

namespace fairboost {

using Json = nlohmann::ordered_json;

struct InstanceDocument {
    FiniteInstance inst;
    std::optional<HypothesisClass> cls;
    std::optional<Predictor> predictor;
    std::optional<Measure> measure;
};

/// Parses {"points" | "hypercube", "weights"?, "labels", "class"?,
/// "predictor"?, "measure"?}. Per-point tables may be arrays, objects keyed
/// by point id, or (on hypercube domains) truth-table strings.
InstanceDocument parse_instance(const Json& doc);
InstanceDocument parse_instance_text(const std::string& text);
Json parse_json_text(const std::string& text, const std::string& what);

Json instance_to_json(const FiniteInstance& inst, const HypothesisClass* cls = nullptr,
                      const Predictor* predictor = nullptr, const Measure* measure = nullptr);
Json predictor_to_json(const Predictor& p);

/// {"tau", "calibration_tau", "grid_step", "max_iters", "step_rule":
/// "line_search" | "fixed_kappa", "kappa", "seed"}; unknown keys are rejected.
LearnerConfig parse_learner_config(const Json& doc, const std::string& path = "");
Json learner_config_to_json(const LearnerConfig& cfg);

Json audit_to_json(const AuditReport& r);
Json trace_to_json(const LearnerTrace& trace);
/// step,kind,violation,sq_loss,hypothesis,level with step 0 the initial loss.
std::string trace_to_csv(const LearnerTrace& trace);
Json hardcore_report_to_json(const HardcoreReport& r);
Json density_bounds_to_json(const DensityBoundsReport& r);
Json projection_to_json(const ProjectionResult& r);
Json pipeline_to_json(const PipelineResult& r);
Json gl_result_to_json(const GlResult& r, bool include_buckets);

/// {"n": 8, "terms": [{"subset": [1, 3], "coef": 0.5}, ...]} with 1-based
/// coordinates.
PlantedPolynomial parse_planted_polynomial(const Json& doc, const std::string& path = "");
Json subset_to_json(std::uint32_t subset);

/// True for JSON integers >= 0, whether stored signed or unsigned.
bool is_nonnegative_integer(const Json& node);

/// Shortest round-trip decimal form, used for CSV cells.
std::string format_double(double v);

}  // namespace fairboost
