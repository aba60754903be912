#pragma once

// Weak-learner oracle and the boosting loops built on it: multiaccuracy,
// recalibration, calibrated multiaccuracy (optionally weighted) and a
// level-set multicalibration learner.
//
// All learners keep the predictor on a grid of step 1/N and only accept moves
// that strictly reduce E[(y - p(x))^2], so every trace is monotone.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairboost/core.hpp"

namespace fairboost {

/// Exhaustive proper learner over a finite class.
struct WeakLearnerOracle {
    const HypothesisClass* cls = nullptr;
    double alpha = 0.0;
    double beta = 0.0;

    WeakLearnerOracle(const HypothesisClass& c, double alpha_, double beta_);
};

struct WeakLearnResult {
    std::size_t index = 0;
    double correlation = 0.0;  ///< signed E[c(x) residual(x)]
};

/// argmax_c |E[c(x) residual(x)]|, lowest index on ties; nullopt when the best
/// value is below alpha.
std::optional<WeakLearnResult> weak_learn(const WeakLearnerOracle& oracle, const FiniteInstance& inst,
                                          std::span<const double> residual);

enum class StepRule { OptimalLineSearch, FixedKappa };

struct LearnerConfig {
    double tau = 0.05;
    /// ECE target for the calibrated learners; defaults to tau.
    std::optional<double> calibration_tau;
    /// Defaults to min(tau, calibration_tau) / 4, rounded down to 1/N.
    std::optional<double> grid_step;
    /// Defaults to 10 * ceil(1 / min(tau, calibration_tau)^2).
    std::optional<std::size_t> max_iters;
    StepRule step_rule = StepRule::OptimalLineSearch;
    double kappa = 0.25;
    /// Seeds the randomized grid rounding used when the nearest grid point
    /// does not reduce the squared loss.
    std::uint64_t seed = 0;

    double cal_tau() const { return calibration_tau.value_or(tau); }
    double effective_grid() const;
    std::size_t effective_max_iters() const;
    void validate() const;
};

enum class StepKind { MultiaccuracyStep, Recalibration, LevelSetPatch };

const char* to_string(StepKind kind);

struct TraceStep {
    StepKind kind = StepKind::MultiaccuracyStep;
    double violation = 0.0;
    double sq_loss = 0.0;
    std::optional<std::string> hypothesis;
    std::optional<double> level;
};

struct FinalReports {
    double ma = 0.0;
    double ece = 0.0;
    std::optional<double> weighted_ma;
    std::optional<double> mc;
};

struct LearnerTrace {
    std::size_t oracle_calls = 0;
    std::size_t recalibrations = 0;
    /// Squared loss of the initial predictor followed by one entry per step.
    std::vector<double> sq_loss_trajectory;
    std::vector<TraceStep> steps;
    FinalReports final_reports;
    double grid = 0.0;
};

struct LearnerResult {
    Predictor predictor;
    LearnerTrace trace;
};

class IterationCapExceeded : public Error {
public:
    IterationCapExceeded(const std::string& what, LearnerTrace trace, Predictor last)
        : Error(ErrorCode::IterationCapExceeded, what), trace_(std::move(trace)), last_(std::move(last)) {}
    const LearnerTrace& trace() const noexcept { return trace_; }
    const Predictor& last_predictor() const noexcept { return last_; }

private:
    LearnerTrace trace_;
    Predictor last_;
};

/// Gradient boosting to (C, tau)-multiaccuracy from the constant 1/2 (or
/// `initial`, snapped to the grid).
LearnerResult learn_multiaccurate(const FiniteInstance& inst, const HypothesisClass& cls, const LearnerConfig& config,
                                  const std::optional<Predictor>& initial = std::nullopt);

/// Replaces every value by E[y | grid cell of p(x)], snapped to the grid.
/// Squared loss does not increase when p already lies on the grid.
Predictor recalibrate(const FiniteInstance& inst, const Predictor& p, double grid_step);

/// calMA: multiaccuracy steps (weighted by w when given) interleaved with
/// recalibration until both MA and ECE are within target.
LearnerResult learn_calibrated_multiaccurate(const FiniteInstance& inst, const HypothesisClass& cls,
                                             const LearnerConfig& config,
                                             const std::optional<WeightFn>& w = std::nullopt,
                                             const std::optional<Predictor>& initial = std::nullopt);

/// Level-set patching until no (c, v) has |E[c(y-p) 1{p=v}]| > tau Pr[p=v]
/// and mc_error <= tau. Each audit pass costs one oracle call per level set.
LearnerResult learn_multicalibrated(const FiniteInstance& inst, const HypothesisClass& cls,
                                    const LearnerConfig& config,
                                    const std::optional<Predictor>& initial = std::nullopt);

}  // namespace fairboost
