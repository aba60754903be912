#pragma once

// Instance generators: the anti-calibrated majority counterexample, the
// four-region density showcase and seeded random families for sweeps.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairboost/core.hpp"

namespace fairboost {

struct MajConfig {
    int n = 3;
    int i = 0;  ///< 0-based coordinate, < n - 1
    int j = 1;  ///< 0-based coordinate, < n - 1, != i
};

struct MajInstance {
    FiniteInstance inst;
    Predictor predictor;
    /// Parities of the first n - 1 coordinates as ±1 hypotheses.
    HypothesisClass cls;
};

/// Uniform {-1,1}^n with p*(x) = MAJ(x_i, x_j, x_n) and predictor
/// p(x) = MAJ(x_i, x_j, -x_n), both read as 1 when the majority is +1.
MajInstance build_maj_instance(const MajConfig& cfg);

/// Every ±1 function of the two coordinates (i, j) on the MAJ domain; for
/// n = 3 these are all 16 functions of the first two bits.
HypothesisClass maj_pair_functions(const MajConfig& cfg);

struct ShowcaseConfig {
    double eta = 0.05;
    double delta = 0.2;
    /// Points per region; 1 keeps the four aggregate points.
    std::size_t points_per_region = 1;
};

struct ShowcaseInstance {
    FiniteInstance inst;
    Predictor predictor;
};

/// Regions (p, g, mass): (1/2, 1, delta), (1/2, 0, delta),
/// (eta, 0, (1-eta)(1-2 delta)), (eta, 1, eta(1-2 delta)).
ShowcaseInstance build_showcase(const ShowcaseConfig& cfg);

double showcase_dns_ttv(double eta, double delta);
double showcase_dns_max(double eta, double delta);

struct RandomInstance {
    FiniteInstance inst;
    HypothesisClass cls;
};

/// class_spec and label_mode are small JSON documents, e.g.
///   {"family": "juntas", "n": 6, "k": 2}
///   {"family": "random_boolean", "m": 20, "kind": "pm1", "close": true}
///   {"mode": "planted", "index": 3, "noise": 0.1}
/// Hypercube families use the uniform distribution on 2^n points and ignore
/// n_points; random_boolean draws a random distribution on n_points points.
RandomInstance random_instance(std::uint64_t seed, std::size_t n_points, const std::string& class_spec,
                               const std::string& label_mode);

/// A mixed batch of small seeded instances (at most 256 points and 64
/// hypotheses each). Deterministic labels when `deterministic` is set.
std::vector<RandomInstance> corpus(std::uint64_t seed, std::size_t count, bool deterministic = false);
/// Element t of corpus(seed, ...), built on its own.
RandomInstance corpus_item(std::uint64_t seed, std::size_t t, bool deterministic = false);

/// Parity chi_S on {-1,1}^n, S a bitmask over coordinates.
std::vector<double> parity_values(int n, std::uint32_t subset);
std::string subset_name(std::uint32_t subset);

}  // namespace fairboost
