#pragma once

// Transforms applied to a predictor after training: the affine and sign
// views, the best post-processor, the squared-loss to correlation conversion
// and least-squares projection of 2p - 1 onto the span of a class.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairboost/core.hpp"

namespace fairboost {

/// Per-point 2p(x) - 1.
std::vector<double> affine_pm1(const Predictor& p);

/// sign(2p - 1) as a ±1 hypothesis, with sign(0) = +1.
Hypothesis threshold(const Predictor& p);

/// A map k from predictor values to [-1,1].
struct PostProcessor {
    std::map<double, double> table;

    double operator()(double v) const;
    std::vector<double> apply(const Predictor& p) const;
};

struct PostProcessResult {
    PostProcessor k;
    double correlation = 0.0;
};

/// k*(v) = sign(E[2y - 1 | p = v]); the correlation is the maximum over all
/// post-processors because the objective is linear in each k(v).
PostProcessResult best_postprocessing(const FiniteInstance& inst, const Predictor& p);

/// E[(2y - 1) k(p(x))] for an arbitrary post-processor.
double postprocessed_correlation(const FiniteInstance& inst, const Predictor& p, const PostProcessor& k);

struct SqLossConversion {
    std::vector<double> truncated;  ///< h clipped to [0,1]
    std::vector<double> bounded;    ///< 2 * truncated - 1
    double gamma = 0.0;             ///< E[(y - 1/2)^2] - E[(y - h)^2]
    double correlation = 0.0;
};

SqLossConversion sqloss_to_correlation(const FiniteInstance& inst, std::span<const double> h);

struct ProjectionResult {
    std::vector<std::pair<std::string, double>> coefficients;
    double l1_norm = 0.0;
    std::vector<double> q_values;
    std::vector<double> h_values;  ///< q clipped to [-1,1]
    double gamma = 0.0;            ///< E[(2p-1)^2] - E[((2p-1) - q)^2]
    double condition_number = 0.0;
    std::size_t rank = 0;
    /// E[((2y - 1) - h)^2], computed exactly over y | x.
    double clipped_loss = 0.0;
    std::optional<double> tau;
    /// 1 - gamma + 4 tau l1_norm when tau is supplied.
    std::optional<double> bound;
};

/// Minimum-norm least squares of 2p - 1 on the class under the domain weights
/// (pseudo-inverse of the Gram matrix, singular values below 1e-10 of the
/// largest dropped). With `l1_budget` the coefficients are scaled down
/// uniformly until their l1 norm fits.
ProjectionResult project_span(const FiniteInstance& inst, const Predictor& p, const HypothesisClass& cls,
                              std::optional<double> tau = std::nullopt,
                              std::optional<double> l1_budget = std::nullopt);

}  // namespace fairboost
