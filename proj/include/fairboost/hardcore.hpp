#pragma once

// Measures, induced distributions and the hardcore auditors. A measure is a
// [0,1]-valued reweighting mu of the base distribution; dns(mu) = E[mu(x)]
// and the induced distribution is Pr[x] mu(x) / dns(mu).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairboost/core.hpp"
#include "fairboost/learners.hpp"

namespace fairboost {

class Measure {
public:
    /// Throws MeasureIdenticallyZero when every value is 0.
    explicit Measure(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

private:
    std::vector<double> values_;
};

double density(const FiniteInstance& inst, const Measure& mu);

/// |g(x) - p(x)|.
Measure measure_ttv(const FiniteInstance& inst, const Predictor& p);
/// w(p(x)) |g(x) - p(x)|; for w_Max the division form is used so that the
/// value is exactly 1 where g sits on the far side of 1/2.
Measure measure_weighted(const FiniteInstance& inst, const Predictor& p, const WeightFn& w);

/// Same points and labels under the distribution induced by mu.
FiniteInstance induce(const FiniteInstance& inst, const Measure& mu);

struct HardcoreReport {
    double density = 0.0;
    double min_entropy_ratio = 0.0;  ///< max mu / dns(mu)
    double eta = 0.0;                ///< E[g] under the induced distribution
    double advantage = 0.0;          ///< max_c Pr[c = g] under the induced distribution
    std::string advantage_witness;
    double class_correlation = 0.0;  ///< max_c |E[(2g - 1) c]| under the induced distribution
    std::string correlation_witness;
    double sandwich_lower = 0.0;     ///< min(eta, 1 - eta) + class_correlation
    double sandwich_upper = 0.0;     ///< max(eta, 1 - eta) + class_correlation
    /// The lower bound only applies to complement-closed classes.
    bool sandwich_lower_valid = false;
    bool sandwich_holds = false;
};

/// Audits a Boolean class under the induced distribution. ±1 classes are
/// mapped to {0,1} via (c + 1) / 2 first.
HardcoreReport hardcore_audit(const FiniteInstance& inst, const Measure& mu, const HypothesisClass& cls);

struct IdentityCheck {
    double lhs = 0.0;  ///< weighted multiaccuracy error
    double rhs = 0.0;  ///< class correlation under the induced distribution times dns(mu_w)
    double discrepancy = 0.0;
};

IdentityCheck verify_identity_wma(const FiniteInstance& inst, const Predictor& p, const HypothesisClass& cls,
                                  const WeightFn& w);

struct DensityBoundsReport {
    double ece = 0.0;
    // |dns(mu_w) - 2 E[w(p) p (1-p)]| <= 2 ECE
    double dns_w = 0.0;
    double calibration_term = 0.0;
    double calibration_gap = 0.0;
    bool calibration_holds = false;
    // Pr[1{p >= 1/2} != g] <= E[min(p, 1-p)] + ECE
    double expected_min = 0.0;
    double majority_error = 0.0;
    bool majority_holds = false;
    // dns(mu_TTV) >= E[2p(1-p)] - 2 ECE
    double dns_ttv = 0.0;
    double expected_2p1p = 0.0;
    bool ttv_holds = false;
    // dns(mu_Max) >= 2 E[min(p, 1-p)] - 2 ECE
    double dns_max = 0.0;
    bool max_holds = false;
    // E[min] <= E[2p(1-p)] <= 2 E[min]
    bool chain_holds = false;
    std::optional<double> tau_cal;
    std::optional<bool> calibrated_within_tau;

    bool all_hold() const { return calibration_holds && majority_holds && ttv_holds && max_holds && chain_holds; }
};

DensityBoundsReport density_bounds(const FiniteInstance& inst, const Predictor& p, const WeightFn& w,
                                   std::optional<double> tau_cal = std::nullopt);

/// Smallest Pr[f != g] over the class (Boolean, mapped to {0,1}), the two
/// constants, every threshold 1{p >= v} of p and the majority 1{p >= 1/2}.
/// Pass no predictor to enumerate the class and constants only.
double enumerated_error(const FiniteInstance& inst, const HypothesisClass& cls,
                        const std::optional<Predictor>& p = std::nullopt);

struct PipelineConfig {
    double eps = 0.1;
    /// Uses the enumerated error of the class when absent.
    std::optional<double> delta_target;
    double tau = 0.05;
    std::optional<double> grid_step;
    std::optional<std::size_t> max_iters;
    std::uint64_t seed = 0;
};

struct PipelineChecks {
    bool density_ok = false;          ///< dns(mu_Max) >= 2 delta_measured - tau
    bool advantage_ok = false;        ///< advantage <= 1/2 + 3 eps' / (2 dns)
    std::optional<bool> half_eps_ok;  ///< advantage <= 1/2 + eps, when its hypotheses hold
    bool hardness_density_ok = false; ///< E[min(p,1-p)] >= delta_enum - ECE
    bool chain_ok = false;            ///< mu_TTV <= mu_Max <= 2 mu_TTV pointwise
    bool identity_ok = false;
    bool posthoc_ma_ok = false;       ///< eps' <= eps * dns(mu_Max)

    bool all_asserted() const { return density_ok && advantage_ok && hardness_density_ok && chain_ok && identity_ok; }
};

struct PipelineResult {
    bool no_hardness = false;
    Predictor predictor{std::vector<double>{}};
    std::optional<Measure> measure;
    std::optional<HardcoreReport> report;
    LearnerTrace trace;
    double delta_initial = 0.0;   ///< delta used for the MA target
    double delta_measured = 0.0;  ///< E[min(p, 1-p)]
    double delta_enumerated = 0.0;
    double eps_prime = 0.0;       ///< weighted MA error against the closed class
    double ece = 0.0;
    double ma_target = 0.0;
    double identity_discrepancy = 0.0;
    PipelineChecks checks;
};

/// Runs calibrated weighted multiaccuracy with w_Max against the class closed
/// under complements and constants, builds mu_Max and audits it.
PipelineResult ihcl_pipeline(const FiniteInstance& inst, const HypothesisClass& cls, const PipelineConfig& cfg);

}  // namespace fairboost
