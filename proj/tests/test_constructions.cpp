#include <set>

#include "doctest.h"
#include "fairboost/constructions.hpp"
#include "fairboost/postprocess.hpp"
#include "support.hpp"

using namespace fbtest;

TEST_CASE("MAJ counterexample on three bits") {
    const auto m = build_maj_instance({});
    CHECK(m.inst.size() == 8);
    CHECK(m.cls.size() == 4);
    CHECK(ma_error(m.inst, m.predictor, m.cls).value <= kIdentityTolerance);
    CHECK(ma_error(m.inst, m.predictor, maj_pair_functions({})).value <= kIdentityTolerance);
    CHECK(std::abs(best_postprocessing(m.inst, m.predictor).correlation) <= kIdentityTolerance);
    CHECK(correlation(m.inst, parity_values(3, 0b001)) == 0.5);
    CHECK(correlation(m.inst, parity_values(3, 0b010)) == 0.5);
    CHECK(ece(m.inst, m.predictor).value == 0.5);
    CHECK(correlation(m.inst, m.predictor) == 0.0);
}

TEST_CASE("MAJ labels and predictor by hand") {
    const auto m = build_maj_instance({});
    for (std::uint32_t k = 0; k < 8; ++k) {
        const double x1 = k & 1u ? -1.0 : 1.0, x2 = k & 2u ? -1.0 : 1.0, x3 = k & 4u ? -1.0 : 1.0;
        const double label = x1 + x2 + x3 > 0 ? 1.0 : 0.0;
        const double pred = x1 + x2 - x3 > 0 ? 1.0 : 0.0;
        CHECK(m.inst.label(k) == label);
        CHECK(m.predictor[k] == pred);
    }
}

TEST_CASE("pair functions are the 16 distinct functions of two coordinates") {
    const auto cls = maj_pair_functions({4, 2, 0});
    CHECK(cls.size() == 16);
    std::set<std::vector<double>> tables;
    for (const auto& h : cls.hypotheses()) tables.insert(h.values);
    CHECK(tables.size() == 16);
    CHECK(cls.negation_closed());
    CHECK(cls.contains_constant_one());
}

TEST_CASE("MAJ configuration checks") {
    CHECK_THROWS_AS(build_maj_instance({2, 0, 1}), InvalidArgument);
    CHECK_THROWS_AS(build_maj_instance({3, 0, 0}), InvalidArgument);
    CHECK_THROWS_AS(build_maj_instance({3, 0, 2}), InvalidArgument);
    for (int n = 3; n <= 7; ++n) {
        const auto m = build_maj_instance({n, n - 2, 0});
        CHECK(m.cls.size() == std::size_t{1} << (n - 1));
        CHECK(ma_error(m.inst, m.predictor, m.cls).value <= kIdentityTolerance);
    }
}

TEST_CASE("showcase instance") {
    const auto s = build_showcase({0.1, 0.3, 3});
    CHECK(s.inst.size() == 12);
    CHECK(ece(s.inst, s.predictor).value <= kIdentityTolerance);
    CHECK(s.inst.deterministic());
    CHECK_THROWS_AS(build_showcase({0.6, 0.2, 1}), InvalidArgument);
    CHECK_THROWS_AS(build_showcase({0.05, 0.5, 1}), InvalidArgument);
    CHECK_THROWS_AS(build_showcase({0.05, 0.2, 0}), InvalidArgument);
}

TEST_CASE("random instances are reproducible") {
    const std::string cspec = R"({"family": "random_boolean", "m": 7, "kind": "boolean01"})";
    const std::string lspec = R"({"mode": "bayes_uniform"})";
    const auto a = random_instance(42, 30, cspec, lspec);
    const auto b = random_instance(42, 30, cspec, lspec);
    const auto c = random_instance(43, 30, cspec, lspec);
    CHECK(std::vector<double>(a.inst.labels().begin(), a.inst.labels().end()) ==
          std::vector<double>(b.inst.labels().begin(), b.inst.labels().end()));
    CHECK(a.cls[3].values == b.cls[3].values);
    CHECK(std::vector<double>(a.inst.labels().begin(), a.inst.labels().end()) !=
          std::vector<double>(c.inst.labels().begin(), c.inst.labels().end()));
    CHECK(a.cls.size() == 7);
    CHECK(a.cls.kind() == HypothesisKind::Boolean01);
}

TEST_CASE("random families") {
    const auto par = random_instance(1, 0, R"({"family": "parities", "n": 4, "degree": 1})", R"({"mode": "bayes_uniform"})");
    CHECK(par.cls.size() == 5);
    CHECK(par.inst.size() == 16);
    const auto dic = random_instance(1, 0, R"({"family": "dictators", "n": 5, "close": true})",
                                     R"({"mode": "bayes_constant", "value": 0.3})");
    CHECK(dic.cls.size() == 12);
    CHECK(dic.inst.label(7) == 0.3);
    const auto jun = random_instance(1, 0, R"({"family": "juntas", "n": 6, "k": 3, "tables": 2, "max_hypotheses": 10})",
                                     R"({"mode": "deterministic_random", "bias": 0.9})");
    CHECK(jun.cls.size() == 10);
    CHECK(jun.inst.deterministic());
    CHECK_THROWS_AS(random_instance(1, 0, R"({"family": "nope"})", R"({"mode": "bayes_uniform"})"), SchemaError);
    CHECK_THROWS_AS(random_instance(1, 0, R"({"family": "juntas", "n": 3, "k": 4})", R"({"mode": "bayes_uniform"})"),
                    SchemaError);
    CHECK_THROWS_AS(random_instance(1, 0, "{not json", R"({"mode": "bayes_uniform"})"), SchemaError);
}

TEST_CASE("planted labels follow the chosen hypothesis") {
    const auto r = random_instance(3, 0, R"({"family": "parities", "n": 5})",
                                   R"({"mode": "planted", "index": 6, "noise": 0})");
    CHECK(correlation(r.inst, r.cls[6]) == doctest::Approx(1.0));
    const auto noisy = random_instance(3, 0, R"({"family": "parities", "n": 5})",
                                       R"({"mode": "planted", "index": 6, "noise": 0.2})");
    CHECK(correlation(noisy.inst, noisy.cls[6]) == doctest::Approx(0.6));
    const auto det = random_instance(3, 0, R"({"family": "parities", "n": 5, "close": true})",
                                     R"({"mode": "planted", "index": 6, "noise": 0.2, "deterministic": true})");
    CHECK(det.inst.deterministic());
    CHECK(opt_correlation(det.inst, det.cls).value > 0.0);
}

TEST_CASE("corpus stays within its size limits") {
    for (bool deterministic : {false, true}) {
        const auto items = corpus(123, 400, deterministic);
        std::set<std::size_t> sizes;
        for (const auto& r : items) {
            CHECK(r.inst.size() <= 256);
            CHECK(r.cls.size() <= 64);
            CHECK(r.cls.size() >= 1);
            if (deterministic) CHECK(r.inst.deterministic());
            sizes.insert(r.inst.size());
        }
        CHECK(sizes.size() > 10);
    }
    const auto one = corpus_item(9, 17);
    const auto all = corpus(9, 18);
    CHECK(one.cls.size() == all[17].cls.size());
    CHECK(one.inst.points() == all[17].inst.points());
}

TEST_CASE("parity tables") {
    for (std::uint32_t s = 0; s < 16; ++s) {
        const auto v = parity_values(4, s);
        for (std::uint32_t x = 0; x < 16; ++x) CHECK(v[x] == ref_parity(s, x));
    }
    CHECK(subset_name(0) == "chi{}");
    CHECK(subset_name(0b101) == "chi{1,3}");
}
