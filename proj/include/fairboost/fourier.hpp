#pragma once

// Fourier analysis on {-1,1}^n. Point k has x_{i+1} = -1 exactly when bit i of
// k is set, so chi_S(k) = (-1)^popcount(S & k) with S a coordinate bitmask.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fairboost/core.hpp"

namespace fairboost {

inline constexpr int kMaxSpectrumDim = 20;
inline constexpr int kMaxQueryDim = 24;

struct FourierSpectrum {
    int n = 0;
    std::vector<double> coefficients;  ///< indexed by subset bitmask

    double operator[](std::uint32_t subset) const { return coefficients[subset]; }
    double total_weight() const;
    /// Sum of squared coefficients over subsets whose restriction to the
    /// first `depth` coordinates equals `prefix`.
    double bucket_weight(int depth, std::uint32_t prefix) const;
};

/// Exact coefficients of a table of 2^n values in O(n 2^n).
FourierSpectrum full_spectrum(std::span<const double> f);
std::vector<double> inverse_spectrum(const FourierSpectrum& spectrum);

/// Query access. The nonce is unique per query within a run so randomized
/// oracles stay reproducible however the queries are scheduled.
using QueryFn = std::function<double(std::uint32_t point, std::uint64_t nonce)>;

struct GlConfig {
    double gamma = 0.25;
    double delta_fail = 0.05;
    /// Upper bound on |f|; sets the estimator range and the sample budget.
    double bound = 1.0;
    /// Samples per estimate; derived from Hoeffding when absent.
    std::optional<std::size_t> samples;
    /// Stop and flag the result incomplete once this many queries are spent.
    std::optional<std::uint64_t> max_total_queries;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    /// Exact bucket weights for small n, bypassing sampling entirely.
    const FourierSpectrum* exact = nullptr;

    void validate() const;
    /// 32 B^4 ln(2 / delta') / gamma^4 with delta' split over every estimate.
    std::size_t hoeffding_samples(int n) const;
    double per_estimate_failure(int n) const;
};

struct GlBucket {
    int depth = 0;
    std::uint32_t prefix = 0;
    double estimate = 0.0;
    double halfwidth = 0.0;  ///< confidence half-width at level delta'
    bool kept = false;
};

struct GlResult {
    std::vector<std::uint32_t> subsets;
    std::vector<double> coefficient_estimates;
    bool incomplete = false;
    bool overflow = false;
    std::size_t samples_per_estimate = 0;
    std::uint64_t total_queries = 0;
    std::vector<GlBucket> buckets;
};

/// Prefix-bucket heavy coefficient search: keeps buckets whose estimated
/// weight is at least gamma^2 / 2, returns the surviving singletons and caps
/// the list at 4 / gamma^2 entries.
GlResult goldreich_levin(const QueryFn& f, int n, const GlConfig& cfg);

/// f(x) = sum_t coef_t chi_{S_t}(x).
struct PlantedPolynomial {
    int n = 0;
    std::vector<std::pair<std::uint32_t, double>> terms;

    double operator()(std::uint32_t point) const;
    double l1() const;
    std::vector<double> table() const;
};

struct ParityLearnResult {
    std::uint32_t subset = 0;
    double sign = 1.0;
    double estimated_coefficient = 0.0;
    double correlation = 0.0;  ///< exact E[(2y - 1) sign chi_S]
    double error = 0.0;        ///< Pr[sign chi_S != 2y - 1]
    GlResult gl;
};

/// Goldreich-Levin on labels simulated as Bernoulli(p(x)) draws mapped to ±1.
ParityLearnResult proper_agnostic_parity_learn(const FiniteInstance& inst, const Predictor& p, const GlConfig& cfg);

}  // namespace fairboost
