#include "doctest.h"
#include "fairboost/constructions.hpp"
#include "fairboost/learners.hpp"
#include "fairboost/postprocess.hpp"
#include "support.hpp"

using namespace fbtest;

namespace {

// Projection onto span(C) by modified Gram-Schmidt under the weighted inner
// product; dependent directions are dropped.
std::vector<double> ref_projection(const FiniteInstance& inst, const std::vector<double>& target,
                                   const HypothesisClass& cls) {
    const std::size_t n = inst.size();
    auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += inst.weight(i) * a[i] * b[i];
        return s;
    };
    std::vector<std::vector<double>> basis;
    for (const auto& h : cls.hypotheses()) {
        std::vector<double> v = h.values;
        const double norm0 = std::sqrt(dot(v, v));
        for (const auto& b : basis) {
            const double c = dot(v, b);
            for (std::size_t i = 0; i < n; ++i) v[i] -= c * b[i];
        }
        const double norm = std::sqrt(dot(v, v));
        if (norm <= 1e-7 * std::max(norm0, 1e-300)) continue;
        for (double& x : v) x /= norm;
        basis.push_back(std::move(v));
    }
    std::vector<double> q(n, 0.0);
    for (const auto& b : basis) {
        const double c = dot(target, b);
        for (std::size_t i = 0; i < n; ++i) q[i] += c * b[i];
    }
    return q;
}

}  // namespace

TEST_CASE("threshold maps 1/2 to +1") {
    const auto h = threshold(Predictor({0.5, 0.49, 0.51, 0.0}));
    CHECK(h.values == std::vector<double>{1.0, -1.0, 1.0, -1.0});
    CHECK(h.kind == HypothesisKind::BooleanPM);
    CHECK(affine_pm1(Predictor({0.25, 1.0})) == std::vector<double>{-0.5, 1.0});
}

TEST_CASE("best post-processing dominates every sign table") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        Gen g(seed + 11);
        const std::size_t n = 1 + g.below(30);
        const auto inst = random_instance(g, n, g.coin());
        const auto p = random_predictor(g, n, 1 + static_cast<unsigned>(g.below(6)));
        const auto best = best_postprocessing(inst, p);
        const auto levels = level_sets(inst, p);
        // Enumerate all 2^L sign assignments; L <= 7 here.
        double brute = -INFINITY;
        for (std::uint32_t mask = 0; mask < (1u << levels.size()); ++mask) {
            PostProcessor k;
            for (std::size_t l = 0; l < levels.size(); ++l) k.table[levels[l].value] = (mask >> l) & 1u ? 1.0 : -1.0;
            brute = std::max(brute, postprocessed_correlation(inst, p, k));
        }
        CHECK(best.correlation == doctest::Approx(brute).epsilon(1e-12));
        CHECK(postprocessed_correlation(inst, p, best.k) == doctest::Approx(best.correlation).epsilon(1e-12));
        // Fractional post-processors cannot do better.
        PostProcessor frac;
        for (const auto& l : levels) frac.table[l.value] = 2.0 * g.unit() - 1.0;
        CHECK(postprocessed_correlation(inst, p, frac) <= best.correlation + kIdentityTolerance);
    }
}

TEST_CASE("post-processor lookups outside its table fail") {
    PostProcessor k;
    k.table[0.5] = 1.0;
    CHECK(k(0.5) == 1.0);
    CHECK_THROWS_AS(k(0.25), InvalidArgument);
}

TEST_CASE("squared-loss advantage converts to correlation") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        Gen g(seed + 21);
        const std::size_t n = 1 + g.below(40);
        const auto inst = random_instance(g, n, g.coin());
        std::vector<double> h(n);
        const double spread = 0.1 + g.unit();
        for (std::size_t i = 0; i < n; ++i) h[i] = inst.label(i) + spread * (2.0 * g.unit() - 1.0);
        const auto c = sqloss_to_correlation(inst, h);
        const std::vector<double> half(n, 0.5);
        CHECK(c.gamma == doctest::Approx(ref_sq_loss(inst, half) - ref_sq_loss(inst, h)).epsilon(1e-12));
        for (std::size_t i = 0; i < n; ++i) CHECK(c.bounded[i] == 2.0 * std::clamp(h[i], 0.0, 1.0) - 1.0);
        if (c.gamma > 0.0) CHECK(c.correlation >= 2.0 * c.gamma - kInequalityTolerance);
    }
}

TEST_CASE("projection matches a Gram-Schmidt reference") {
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        Gen g(seed + 31);
        const std::size_t n = 2 + g.below(40);
        const auto inst = random_instance(g, n, g.coin());
        const auto p = random_predictor(g, n);
        auto cls = random_class(g, n, 1 + g.below(8), random_kind(g));
        if (seed % 4 == 0) {
            // Duplicate a member to force a rank-deficient Gram matrix.
            auto hs = cls.hypotheses();
            hs.push_back(Hypothesis("dup", hs[0].kind, hs[0].values));
            cls = HypothesisClass(std::move(hs));
        }
        const auto r = project_span(inst, p, cls);
        const auto q = ref_projection(inst, affine_pm1(p), cls);
        CAPTURE(seed);
        for (std::size_t i = 0; i < n; ++i) CHECK(r.q_values[i] == doctest::Approx(q[i]).epsilon(1e-8).scale(1.0));
        double qq = 0.0;
        for (std::size_t i = 0; i < n; ++i) qq += inst.weight(i) * q[i] * q[i];
        // For an orthogonal projection the explained energy is E[q^2].
        CHECK(r.gamma == doctest::Approx(qq).epsilon(1e-8).scale(1.0));
        CHECK(r.rank <= cls.size());
        CHECK_FALSE(r.bound);
    }
}

TEST_CASE("minimum-norm coefficients split evenly across duplicates") {
    const FiniteInstance inst({"a", "b"}, {0.5, 0.5}, LabelKind::Bayes, {0.8, 0.2});
    const HypothesisClass cls({Hypothesis("x", HypothesisKind::BooleanPM, {1.0, -1.0}),
                               Hypothesis("y", HypothesisKind::BooleanPM, {1.0, -1.0})});
    const auto r = project_span(inst, Predictor({0.75, 0.25}), cls);
    CHECK(r.rank == 1);
    CHECK(r.coefficients[0].second == doctest::Approx(0.25));
    CHECK(r.coefficients[1].second == doctest::Approx(0.25));
    CHECK(r.l1_norm == doctest::Approx(0.5));
    CHECK(r.condition_number == doctest::Approx(1.0));
}

TEST_CASE("projection bound holds with the measured MA error") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto inst = corpus_item(seed + 5, seed);
        LearnerConfig cfg;
        cfg.tau = 0.05;
        const auto p = learn_multiaccurate(inst.inst, inst.cls, cfg).predictor;
        const double tau = ma_error(inst.inst, p, inst.cls).value;
        const auto r = project_span(inst.inst, p, inst.cls, tau);
        REQUIRE(r.bound);
        CHECK(r.clipped_loss <= *r.bound + kInequalityTolerance);
        // Clipping toward [-1,1] can only help against ±1 targets.
        double unclipped = 0.0;
        for (std::size_t i = 0; i < inst.inst.size(); ++i) {
            const double y = inst.inst.label(i), q = r.q_values[i];
            unclipped += inst.inst.weight(i) * (y * (1.0 - q) * (1.0 - q) + (1.0 - y) * (1.0 + q) * (1.0 + q));
        }
        CHECK(r.clipped_loss <= unclipped + kIdentityTolerance);
    }
}

TEST_CASE("l1 budget scales coefficients uniformly") {
    Gen g(4);
    const auto inst = random_instance(g, 20, false);
    const auto p = random_predictor(g, 20);
    const auto cls = random_class(g, 20, 5, HypothesisKind::BooleanPM);
    const auto full = project_span(inst, p, cls);
    const double budget = full.l1_norm / 2.0;
    const auto cut = project_span(inst, p, cls, 0.1, budget);
    CHECK(cut.l1_norm == doctest::Approx(budget));
    for (std::size_t s = 0; s < cls.size(); ++s) {
        CHECK(cut.coefficients[s].second == doctest::Approx(full.coefficients[s].second / 2.0));
    }
    CHECK_THROWS_AS(project_span(inst, p, cls, 0.1, -1.0), InvalidArgument);
    CHECK_THROWS_AS(project_span(inst, p, HypothesisClass()), EmptyClass);
}
