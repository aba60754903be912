#include <algorithm>

#include "doctest.h"
#include "fairboost/constructions.hpp"
#include "fairboost/fourier.hpp"
#include "support.hpp"

using namespace fbtest;

namespace {

std::vector<double> ref_spectrum(const std::vector<double>& f) {
    std::vector<double> out(f.size(), 0.0);
    for (std::uint32_t s = 0; s < f.size(); ++s) {
        for (std::uint32_t x = 0; x < f.size(); ++x) out[s] += f[x] * ref_parity(s, x);
        out[s] /= static_cast<double>(f.size());
    }
    return out;
}

PlantedPolynomial random_polynomial(Gen& g, int n, double gamma) {
    PlantedPolynomial f{n, {}};
    std::vector<std::uint32_t> used;
    auto fresh = [&] {
        for (;;) {
            const auto s = static_cast<std::uint32_t>(g.below(std::size_t{1} << n));
            if (std::find(used.begin(), used.end(), s) == used.end()) {
                used.push_back(s);
                return s;
            }
        }
    };
    const std::size_t heavy = 1 + g.below(2);
    for (std::size_t t = 0; t < heavy; ++t) f.terms.emplace_back(fresh(), (g.coin() ? 1 : -1) * (gamma + 0.2 * g.unit()));
    const std::size_t light = 1 + g.below(3);
    for (std::size_t t = 0; t < light; ++t) f.terms.emplace_back(fresh(), (g.coin() ? 1 : -1) * 0.1 * g.unit());
    return f;
}

}  // namespace

TEST_CASE("fast transform matches the naive sum") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Gen g(seed);
        const int n = 1 + static_cast<int>(g.below(7));
        std::vector<double> f(std::size_t{1} << n);
        for (double& v : f) v = 2.0 * g.unit() - 1.0;
        const auto fast = full_spectrum(f);
        const auto slow = ref_spectrum(f);
        CHECK(fast.n == n);
        for (std::size_t s = 0; s < f.size(); ++s) CHECK(fast.coefficients[s] == doctest::Approx(slow[s]).epsilon(1e-12));
        const auto back = inverse_spectrum(fast);
        double energy = 0.0;
        for (std::size_t x = 0; x < f.size(); ++x) {
            CHECK(back[x] == doctest::Approx(f[x]).epsilon(1e-12));
            energy += f[x] * f[x] / static_cast<double>(f.size());
        }
        CHECK(fast.total_weight() == doctest::Approx(energy).epsilon(1e-12));
    }
    CHECK_THROWS_AS(full_spectrum(std::vector<double>(6, 0.0)), InvalidArgument);
}

TEST_CASE("bucket weight sums squared coefficients under a prefix") {
    Gen g(5);
    std::vector<double> f(32);
    for (double& v : f) v = g.unit();
    const auto spec = full_spectrum(f);
    for (int depth = 0; depth <= 5; ++depth) {
        double total = 0.0;
        for (std::uint32_t prefix = 0; prefix < (1u << depth); ++prefix) {
            double naive = 0.0;
            for (std::uint32_t s = 0; s < 32; ++s) {
                if ((s & ((1u << depth) - 1u)) == prefix) naive += spec[s] * spec[s];
            }
            CHECK(spec.bucket_weight(depth, prefix) == doctest::Approx(naive).epsilon(1e-12));
            total += naive;
        }
        CHECK(total == doctest::Approx(spec.total_weight()).epsilon(1e-12));
    }
}

TEST_CASE("exact mode returns every coefficient with weight at least gamma^2/2") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Gen g(seed + 100);
        const int n = 3 + static_cast<int>(g.below(6));
        const auto f = random_polynomial(g, n, 0.3);
        const auto spec = full_spectrum(f.table());
        GlConfig cfg;
        cfg.gamma = 0.3;
        cfg.bound = f.l1();
        cfg.exact = &spec;
        const auto r = goldreich_levin([&](std::uint32_t x, std::uint64_t) { return f(x); }, n, cfg);
        std::vector<std::uint32_t> expected;
        for (std::uint32_t s = 0; s < (1u << n); ++s) {
            if (spec[s] * spec[s] >= cfg.gamma * cfg.gamma / 2.0) expected.push_back(s);
        }
        CAPTURE(seed);
        CHECK_FALSE(r.incomplete);
        CHECK(r.total_queries == 0);
        auto found = r.subsets;
        std::sort(found.begin(), found.end());
        if (!r.overflow) CHECK(found == expected);
        for (std::size_t k = 0; k < r.subsets.size(); ++k) CHECK(r.coefficient_estimates[k] == spec[r.subsets[k]]);
    }
}

TEST_CASE("sampled search finds heavy and rejects light coefficients") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        Gen g(seed + 200);
        const int n = 4 + static_cast<int>(g.below(3));
        const auto f = random_polynomial(g, n, 0.3);
        GlConfig cfg;
        cfg.gamma = 0.3;
        cfg.bound = f.l1();
        cfg.seed = seed;
        const auto r = goldreich_levin([&](std::uint32_t x, std::uint64_t) { return f(x); }, n, cfg);
        const auto spec = full_spectrum(f.table());
        CAPTURE(seed);
        CHECK(r.samples_per_estimate == cfg.hoeffding_samples(n));
        CHECK(r.subsets.size() <= static_cast<std::size_t>(4.0 / (cfg.gamma * cfg.gamma)));
        for (std::uint32_t s = 0; s < (1u << n); ++s) {
            const bool listed = std::find(r.subsets.begin(), r.subsets.end(), s) != r.subsets.end();
            if (std::abs(spec[s]) >= cfg.gamma) CHECK(listed);
            if (listed) CHECK(std::abs(spec[s]) >= cfg.gamma / 2.0);
        }
    }
}

TEST_CASE("query budget exhaustion is flagged") {
    const PlantedPolynomial f{6, {{5, 0.6}}};
    GlConfig cfg;
    cfg.gamma = 0.5;
    cfg.samples = 100;
    cfg.max_total_queries = 1000;
    const auto r = goldreich_levin([&](std::uint32_t x, std::uint64_t) { return f(x); }, 6, cfg);
    CHECK(r.incomplete);
    CHECK(r.total_queries <= 1000);
    CHECK(r.subsets.empty());
}

TEST_CASE("configuration errors") {
    GlConfig cfg;
    cfg.gamma = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg.gamma = 0.2;
    cfg.delta_fail = 1.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg.delta_fail = 0.1;
    cfg.samples = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg.samples.reset();
    const auto q = [](std::uint32_t, std::uint64_t) { return 1.0; };
    CHECK_THROWS_AS(goldreich_levin(q, 0, cfg), InvalidArgument);
    CHECK_THROWS_AS(goldreich_levin(q, 25, cfg), InvalidArgument);
    const auto spec = full_spectrum(std::vector<double>(8, 1.0));
    cfg.exact = &spec;
    CHECK_THROWS_AS(goldreich_levin(q, 4, cfg), InvalidArgument);
}

TEST_CASE("thread count does not change the result") {
    const PlantedPolynomial f{7, {{9, 0.5}, {64, -0.4}, {3, 0.05}}};
    GlConfig cfg;
    cfg.gamma = 0.35;
    cfg.bound = f.l1();
    cfg.seed = 17;
    const auto q = [&](std::uint32_t x, std::uint64_t) { return f(x); };
    const auto one = goldreich_levin(q, 7, cfg);
    cfg.jobs = 3;
    const auto three = goldreich_levin(q, 7, cfg);
    CHECK(one.subsets == three.subsets);
    CHECK(one.coefficient_estimates == three.coefficient_estimates);
    CHECK(one.total_queries == three.total_queries);
}

TEST_CASE("Hoeffding sample count") {
    GlConfig cfg;
    cfg.gamma = 0.5;
    cfg.delta_fail = 0.1;
    cfg.bound = 1.0;
    const int n = 4;
    const double per_level = std::ceil(4.0 / 0.25);
    const double dprime = 0.1 / (2.0 * n * per_level);
    CHECK(cfg.per_estimate_failure(n) == doctest::Approx(dprime));
    CHECK(cfg.hoeffding_samples(n) == static_cast<std::size_t>(std::ceil(32.0 * std::log(2.0 / dprime) / 0.0625)));
}

TEST_CASE("parity learner recovers a planted parity") {
    const auto r = random_instance(4, 0, R"({"family": "parities", "n": 6})",
                                   R"({"mode": "planted", "index": 37, "noise": 0.1})");
    std::vector<double> labels(r.inst.labels().begin(), r.inst.labels().end());
    const Predictor truth(labels);
    GlConfig cfg;
    cfg.gamma = 0.5;
    cfg.seed = 3;
    const auto res = proper_agnostic_parity_learn(r.inst, truth, cfg);
    CHECK(res.subset == 37u);
    CHECK(res.sign == 1.0);
    CHECK(res.correlation == doctest::Approx(0.8));
    CHECK(res.error == doctest::Approx(0.1));
    const FiniteInstance flat({"a", "b"}, {0.5, 0.5}, LabelKind::Bayes, {0.5, 0.5});
    CHECK_THROWS_AS(proper_agnostic_parity_learn(flat, Predictor({0.5, 0.5}), cfg), InvalidArgument);
}
