#pragma once

// Seeded generators and brute-force reference computations shared by the
// unit tests. The references deliberately avoid the library's own helpers
// (level_sets, max_abs_over_class, the FWHT) so they can catch mistakes there.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fairboost/core.hpp"

namespace fbtest {

using namespace fairboost;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed * 0x9e3779b97f4a7c15ull + 1) {}
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }
    bool coin() { return (eng_() & 1u) != 0; }
    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

inline std::vector<double> random_distribution(Gen& g, std::size_t n) {
    std::vector<double> w(n);
    double total = 0.0;
    for (double& x : w) total += (x = 0.05 + g.unit());
    for (double& x : w) x /= total;
    return w;
}

inline FiniteInstance random_instance(Gen& g, std::size_t n, bool deterministic) {
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = "p" + std::to_string(i);
    std::vector<double> labels(n);
    for (double& y : labels) y = deterministic ? (g.coin() ? 1.0 : 0.0) : (g.below(5) == 0 ? 0.5 : g.unit());
    return FiniteInstance(ids, random_distribution(g, n), deterministic ? LabelKind::Deterministic : LabelKind::Bayes,
                          labels);
}

inline HypothesisClass random_class(Gen& g, std::size_t n, std::size_t m, HypothesisKind kind) {
    std::vector<Hypothesis> hs;
    for (std::size_t k = 0; k < m; ++k) {
        std::vector<double> v(n);
        for (double& x : v) {
            if (kind == HypothesisKind::BooleanPM) x = g.coin() ? 1.0 : -1.0;
            else if (kind == HypothesisKind::Boolean01) x = g.coin() ? 1.0 : 0.0;
            else x = 2.0 * g.unit() - 1.0;
        }
        hs.emplace_back("h" + std::to_string(k), kind, std::move(v));
    }
    return HypothesisClass(std::move(hs));
}

inline Predictor random_predictor(Gen& g, std::size_t n, unsigned steps = 10) {
    std::vector<double> v(n);
    for (double& x : v) x = static_cast<double>(g.below(steps + 1)) / steps;
    return Predictor(std::move(v), 1.0 / steps);
}

inline HypothesisKind random_kind(Gen& g) {
    switch (g.below(3)) {
        case 0: return HypothesisKind::BooleanPM;
        case 1: return HypothesisKind::Boolean01;
        default: return HypothesisKind::Bounded;
    }
}

// Sum over level sets found by pairwise comparison.
inline double ref_ece(const FiniteInstance& inst, std::span<const double> p) {
    double total = 0.0;
    std::vector<bool> seen(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (seen[i]) continue;
        double mass = 0.0, ysum = 0.0;
        for (std::size_t j = i; j < p.size(); ++j) {
            if (p[j] == p[i]) {
                seen[j] = true;
                mass += inst.weight(j);
                ysum += inst.weight(j) * inst.label(j);
            }
        }
        total += std::abs(ysum - mass * p[i]);
    }
    return total;
}

inline double ref_ma(const FiniteInstance& inst, std::span<const double> p, const HypothesisClass& cls,
                     double (*w)(double) = nullptr) {
    double best = 0.0;
    for (const auto& h : cls.hypotheses()) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            s += inst.weight(i) * h.values[i] * (w ? w(p[i]) : 1.0) * (inst.label(i) - p[i]);
        }
        best = std::max(best, std::abs(s));
    }
    return best;
}

inline double ref_wmax(double v) { return v >= 0.5 ? 1.0 / v : 1.0 / (1.0 - v); }

// E[(y - v)^2] with y ~ Bernoulli(label) written out case by case.
inline double ref_sq_loss(const FiniteInstance& inst, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double q = inst.label(i);
        s += inst.weight(i) * (q * (1.0 - v[i]) * (1.0 - v[i]) + (1.0 - q) * v[i] * v[i]);
    }
    return s;
}

inline double ref_parity(std::uint32_t subset, std::uint32_t point) {
    int bits = 0;
    for (std::uint32_t m = subset & point; m; m &= m - 1) ++bits;
    return bits % 2 ? -1.0 : 1.0;
}

}  // namespace fbtest
