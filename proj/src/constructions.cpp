#include "fairboost/constructions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "json.hpp"

namespace fairboost {

using nlohmann::json;

namespace {

// x_{i+1} of hypercube point k: bit i set means -1.
double coord(std::uint32_t k, int i) { return ((k >> i) & 1u) ? -1.0 : 1.0; }

double maj(double a, double b, double c) { return a + b + c > 0.0 ? 1.0 : 0.0; }

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }
    bool coin(double p = 0.5) { return uniform() < p; }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

json parse_spec(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("/") + what, std::string("not valid JSON: ") + e.what());
    }
}

template <typename T>
T field(const json& doc, const char* what, const char* key, T fallback) {
    if (!doc.contains(key)) return fallback;
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw SchemaError(std::string("/") + what + "/" + key, "wrong type");
    }
}

HypothesisKind parse_kind(const std::string& kind, const char* what) {
    if (kind == "pm1") return HypothesisKind::BooleanPM;
    if (kind == "boolean01") return HypothesisKind::Boolean01;
    throw SchemaError(std::string("/") + what + "/kind", "expected \"pm1\" or \"boolean01\"");
}

Hypothesis boolean_hypothesis(std::string name, HypothesisKind kind, const std::vector<bool>& bits) {
    std::vector<double> v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        v[i] = bits[i] ? 1.0 : (kind == HypothesisKind::Boolean01 ? 0.0 : -1.0);
    }
    return Hypothesis(std::move(name), kind, std::move(v));
}

int hypercube_n(const json& spec, const char* what) {
    const int n = field<int>(spec, what, "n", -1);
    if (n < 1 || n > 16) throw SchemaError(std::string("/") + what + "/n", "hypercube dimension must lie in [1,16]");
    return n;
}

std::string coords_name(const std::vector<int>& coords) {
    std::string s;
    for (int c : coords) s += (s.empty() ? "" : ",") + std::to_string(c + 1);
    return s;
}

}  // namespace

std::vector<double> parity_values(int n, std::uint32_t subset) {
    std::vector<double> v(std::size_t{1} << n);
    for (std::uint32_t k = 0; k < v.size(); ++k) v[k] = (std::popcount(subset & k) & 1) ? -1.0 : 1.0;
    return v;
}

std::string subset_name(std::uint32_t subset) {
    std::vector<int> coords;
    for (int i = 0; i < 32; ++i) {
        if ((subset >> i) & 1u) coords.push_back(i);
    }
    return "chi{" + coords_name(coords) + "}";
}

MajInstance build_maj_instance(const MajConfig& cfg) {
    if (cfg.n < 3 || cfg.n > 16) throw InvalidArgument("MAJ instance needs 3 <= n <= 16");
    const int last = cfg.n - 1;
    if (cfg.i < 0 || cfg.j < 0 || cfg.i >= last || cfg.j >= last || cfg.i == cfg.j) {
        throw InvalidArgument("MAJ indices must be distinct and lie among the first n - 1 coordinates");
    }
    const std::uint32_t size = 1u << cfg.n;
    std::vector<double> labels(size);
    std::vector<double> pred(size);
    for (std::uint32_t k = 0; k < size; ++k) {
        const double a = coord(k, cfg.i);
        const double b = coord(k, cfg.j);
        const double z = coord(k, last);
        labels[k] = maj(a, b, z);
        pred[k] = maj(a, b, -z);
    }
    std::vector<Hypothesis> hyps;
    for (std::uint32_t s = 0; s < (1u << last); ++s) {
        hyps.emplace_back(subset_name(s), HypothesisKind::BooleanPM, parity_values(cfg.n, s));
    }
    return {FiniteInstance::hypercube(cfg.n, LabelKind::Bayes, std::move(labels)), Predictor(std::move(pred), 1.0),
            HypothesisClass(std::move(hyps))};
}

HypothesisClass maj_pair_functions(const MajConfig& cfg) {
    if (cfg.n < 3 || cfg.n > 16) throw InvalidArgument("MAJ instance needs 3 <= n <= 16");
    const std::uint32_t size = 1u << cfg.n;
    std::vector<Hypothesis> hyps;
    for (std::uint32_t table = 0; table < 16; ++table) {
        std::vector<double> v(size);
        for (std::uint32_t k = 0; k < size; ++k) {
            const unsigned cell = ((k >> cfg.i) & 1u) | (((k >> cfg.j) & 1u) << 1);
            v[k] = ((table >> cell) & 1u) ? 1.0 : -1.0;
        }
        hyps.emplace_back("pair" + std::to_string(table), HypothesisKind::BooleanPM, std::move(v));
    }
    return HypothesisClass(std::move(hyps));
}

double showcase_dns_ttv(double eta, double delta) { return delta + 2.0 * eta * (1.0 - eta) * (1.0 - 2.0 * delta); }

double showcase_dns_max(double eta, double delta) { return 2.0 * delta + 2.0 * eta * (1.0 - 2.0 * delta); }

ShowcaseInstance build_showcase(const ShowcaseConfig& cfg) {
    if (!(cfg.eta > 0.0 && cfg.eta < 0.5)) throw InvalidArgument("showcase eta must lie in (0, 1/2)");
    if (!(cfg.delta > 0.0 && cfg.delta < 0.5)) throw InvalidArgument("showcase delta must lie in (0, 1/2)");
    if (cfg.points_per_region < 1) throw InvalidArgument("showcase needs at least one point per region");
    struct Region {
        const char* name;
        double p;
        double g;
        double mass;
    };
    const double eta = cfg.eta;
    const double delta = cfg.delta;
    const Region regions[] = {
        {"half_g1", 0.5, 1.0, delta},
        {"half_g0", 0.5, 0.0, delta},
        {"eta_g0", eta, 0.0, (1.0 - eta) * (1.0 - 2.0 * delta)},
        {"eta_g1", eta, 1.0, eta * (1.0 - 2.0 * delta)},
    };
    const std::size_t m = cfg.points_per_region;
    std::vector<std::string> points;
    std::vector<double> weights, labels, values;
    for (const auto& r : regions) {
        for (std::size_t k = 0; k < m; ++k) {
            points.push_back(m == 1 ? std::string(r.name) : std::string(r.name) + "_" + std::to_string(k));
            weights.push_back(r.mass / static_cast<double>(m));
            labels.push_back(r.g);
            values.push_back(r.p);
        }
    }
    return {FiniteInstance(std::move(points), std::move(weights), LabelKind::Deterministic, std::move(labels)),
            Predictor(std::move(values))};
}

RandomInstance random_instance(std::uint64_t seed, std::size_t n_points, const std::string& class_spec,
                               const std::string& label_mode) {
    const json cspec = parse_spec(class_spec, "class_spec");
    const json lspec = parse_spec(label_mode, "label_mode");
    if (!cspec.is_object() || !cspec.contains("family")) throw SchemaError("/class_spec/family", "missing");
    if (!lspec.is_object() || !lspec.contains("mode")) throw SchemaError("/label_mode/mode", "missing");
    const auto family = field<std::string>(cspec, "class_spec", "family", "");
    const auto kind = parse_kind(field<std::string>(cspec, "class_spec", "kind", "pm1"), "class_spec");
    Rng rng(seed);

    std::vector<std::string> points;
    std::vector<double> weights;
    std::vector<Hypothesis> hyps;
    std::optional<int> cube;

    if (family == "random_boolean") {
        if (n_points < 2) throw InvalidArgument("random instances need at least 2 points");
        const auto m = field<std::size_t>(cspec, "class_spec", "m", 8);
        if (m < 1) throw SchemaError("/class_spec/m", "must be at least 1");
        double total = 0.0;
        for (std::size_t i = 0; i < n_points; ++i) {
            points.push_back("x" + std::to_string(i));
            weights.push_back(0.1 + rng.uniform());
            total += weights.back();
        }
        for (double& w : weights) w /= total;
        for (std::size_t h = 0; h < m; ++h) {
            std::vector<bool> bits(n_points);
            for (std::size_t i = 0; i < n_points; ++i) bits[i] = rng.coin();
            hyps.push_back(boolean_hypothesis("h" + std::to_string(h), kind, bits));
        }
    } else if (family == "parities" || family == "dictators" || family == "juntas") {
        const int n = hypercube_n(cspec, "class_spec");
        cube = n;
        const std::uint32_t size = 1u << n;
        if (family == "parities") {
            const int degree = field<int>(cspec, "class_spec", "degree", n);
            for (std::uint32_t s = 0; s < size; ++s) {
                if (std::popcount(s) <= degree) {
                    hyps.emplace_back(subset_name(s), HypothesisKind::BooleanPM, parity_values(n, s));
                }
            }
        } else if (family == "dictators") {
            for (int i = 0; i < n; ++i) {
                std::vector<bool> bits(size);
                for (std::uint32_t k = 0; k < size; ++k) bits[k] = coord(k, i) > 0.0;
                hyps.push_back(boolean_hypothesis("x" + std::to_string(i + 1), kind, bits));
            }
        } else {
            const int k = field<int>(cspec, "class_spec", "k", 2);
            const auto per_subset = field<std::size_t>(cspec, "class_spec", "tables", 1);
            const auto cap = field<std::size_t>(cspec, "class_spec", "max_hypotheses", 64);
            if (k < 1 || k > n || k > 5) throw SchemaError("/class_spec/k", "junta size must lie in [1, min(n, 5)]");
            std::vector<std::vector<int>> subsets;
            for (std::uint32_t s = 0; s < size; ++s) {
                if (std::popcount(s) != k) continue;
                std::vector<int> c;
                for (int i = 0; i < n; ++i) {
                    if ((s >> i) & 1u) c.push_back(i);
                }
                subsets.push_back(std::move(c));
            }
            std::shuffle(subsets.begin(), subsets.end(), rng.engine());
            const std::size_t keep = std::max<std::size_t>(1, std::min(subsets.size(), cap / std::max<std::size_t>(per_subset, 1)));
            subsets.resize(std::min(subsets.size(), keep));
            std::sort(subsets.begin(), subsets.end());
            for (const auto& c : subsets) {
                for (std::size_t t = 0; t < per_subset; ++t) {
                    std::vector<bool> table(std::size_t{1} << k);
                    for (std::size_t e = 0; e < table.size(); ++e) table[e] = rng.coin();
                    std::vector<bool> bits(size);
                    for (std::uint32_t x = 0; x < size; ++x) {
                        std::size_t cell = 0;
                        for (std::size_t b = 0; b < c.size(); ++b) cell |= static_cast<std::size_t>((x >> c[b]) & 1u) << b;
                        bits[x] = table[cell];
                    }
                    hyps.push_back(boolean_hypothesis("junta{" + coords_name(c) + "}#" + std::to_string(t), kind, bits));
                }
            }
        }
        for (std::uint32_t x = 0; x < size; ++x) points.push_back(hypercube_point_id(n, x));
        weights.assign(size, 1.0 / static_cast<double>(size));
    } else {
        throw SchemaError("/class_spec/family", "unknown family '" + family + "'");
    }

    HypothesisClass cls(std::move(hyps));

    const auto mode = field<std::string>(lspec, "label_mode", "mode", "");
    const std::size_t size = points.size();
    std::vector<double> labels(size);
    LabelKind label_kind = LabelKind::Bayes;
    if (mode == "bayes_uniform") {
        for (double& y : labels) y = rng.uniform();
    } else if (mode == "bayes_constant") {
        const double v = field<double>(lspec, "label_mode", "value", 0.5);
        if (!(v >= 0.0 && v <= 1.0)) throw SchemaError("/label_mode/value", "must lie in [0,1]");
        std::fill(labels.begin(), labels.end(), v);
    } else if (mode == "deterministic_random") {
        const double bias = field<double>(lspec, "label_mode", "bias", 0.5);
        for (double& y : labels) y = rng.coin(bias) ? 1.0 : 0.0;
        label_kind = LabelKind::Deterministic;
    } else if (mode == "planted") {
        const auto index = field<std::size_t>(lspec, "label_mode", "index", 0);
        const double noise = field<double>(lspec, "label_mode", "noise", 0.0);
        const bool flips = field<bool>(lspec, "label_mode", "deterministic", false);
        if (index >= cls.size()) throw SchemaError("/label_mode/index", "no hypothesis with that index");
        if (!(noise >= 0.0 && noise <= 0.5)) throw SchemaError("/label_mode/noise", "must lie in [0, 1/2]");
        const auto& c = cls[index];
        for (std::size_t i = 0; i < size; ++i) {
            const double clean = c.kind == HypothesisKind::Boolean01 ? c.values[i] : (c.values[i] + 1.0) / 2.0;
            if (flips) {
                const double bit = clean >= 0.5 ? 1.0 : 0.0;
                labels[i] = rng.coin(noise) ? 1.0 - bit : bit;
            } else {
                labels[i] = (1.0 - noise) * clean + noise * (1.0 - clean);
            }
        }
        const bool binary = std::all_of(labels.begin(), labels.end(), [](double y) { return y == 0.0 || y == 1.0; });
        if (flips || (noise == 0.0 && binary)) label_kind = LabelKind::Deterministic;
    } else {
        throw SchemaError("/label_mode/mode", "unknown mode '" + mode + "'");
    }

    // Planted indices refer to the class before closure.
    if (field<bool>(cspec, "class_spec", "close", false)) cls = cls.closed();
    if (cube) return {FiniteInstance::hypercube(*cube, label_kind, std::move(labels)), std::move(cls)};
    return {FiniteInstance(std::move(points), std::move(weights), label_kind, std::move(labels)), std::move(cls)};
}

RandomInstance corpus_item(std::uint64_t seed, std::size_t t, bool deterministic) {
    const std::uint64_t s = mix64(seed ^ mix64(t + 1));
    Rng rng(s);
    const bool close = rng.coin();
    json cspec;
    std::size_t n_points = 0;
    std::size_t hypotheses = 0;
    switch (t % 4) {
        case 0: {
            const int n = static_cast<int>(3 + rng.below(close ? 3 : 4));
            cspec = {{"family", "parities"}, {"n", n}};
            hypotheses = std::size_t{1} << n;
            break;
        }
        case 1: {
            const int n = static_cast<int>(4 + rng.below(5));
            cspec = {{"family", "juntas"}, {"n", n}, {"k", 1 + static_cast<int>(rng.below(3))},
                     {"kind", rng.coin() ? "pm1" : "boolean01"}, {"max_hypotheses", close ? 30 : 60}};
            hypotheses = 60;
            break;
        }
        case 2: {
            n_points = 8 + rng.below(249);
            hypotheses = 4 + rng.below(close ? 27 : 61);
            cspec = {{"family", "random_boolean"}, {"m", hypotheses}, {"kind", rng.coin() ? "pm1" : "boolean01"}};
            break;
        }
        default: {
            const int n = static_cast<int>(3 + rng.below(6));
            cspec = {{"family", "dictators"}, {"n", n}, {"kind", rng.coin() ? "pm1" : "boolean01"}};
            hypotheses = static_cast<std::size_t>(n);
            break;
        }
    }
    cspec["close"] = close;
    json lspec;
    const auto pick = rng.below(3);
    const auto planted_index = rng.below(std::max<std::size_t>(1, std::min<std::size_t>(hypotheses, 4)));
    if (deterministic) {
        if (pick == 0) lspec = {{"mode", "deterministic_random"}};
        else lspec = {{"mode", "planted"}, {"index", planted_index}, {"noise", 0.05 + 0.25 * rng.uniform()}, {"deterministic", true}};
    } else if (pick == 0) {
        lspec = {{"mode", "bayes_uniform"}};
    } else if (pick == 1) {
        lspec = {{"mode", "planted"}, {"index", planted_index}, {"noise", 0.3 * rng.uniform()}};
    } else {
        lspec = {{"mode", "deterministic_random"}, {"bias", 0.2 + 0.6 * rng.uniform()}};
    }
    return random_instance(s, n_points, cspec.dump(), lspec.dump());
}

std::vector<RandomInstance> corpus(std::uint64_t seed, std::size_t count, bool deterministic) {
    std::vector<RandomInstance> out;
    out.reserve(count);
    for (std::size_t t = 0; t < count; ++t) out.push_back(corpus_item(seed, t, deterministic));
    return out;
}

}  // namespace fairboost
