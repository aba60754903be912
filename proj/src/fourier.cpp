#include "fairboost/fourier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <thread>

namespace fairboost {

namespace {

int dimension_of(std::size_t size) {
    if (size == 0 || !std::has_single_bit(size)) throw InvalidArgument("table size must be a power of two");
    return std::countr_zero(size);
}

double chi(std::uint32_t subset, std::uint32_t point) { return (std::popcount(subset & point) & 1) ? -1.0 : 1.0; }

}  // namespace

double FourierSpectrum::total_weight() const {
    double total = 0.0;
    for (double c : coefficients) total += c * c;
    return total;
}

double FourierSpectrum::bucket_weight(int depth, std::uint32_t prefix) const {
    const std::uint32_t mask = depth >= 32 ? ~0u : ((1u << depth) - 1u);
    double total = 0.0;
    for (std::uint32_t s = 0; s < coefficients.size(); ++s) {
        if ((s & mask) == prefix) total += coefficients[s] * coefficients[s];
    }
    return total;
}

FourierSpectrum full_spectrum(std::span<const double> f) {
    const int n = dimension_of(f.size());
    if (n > kMaxSpectrumDim) throw InvalidArgument("full spectrum limited to n <= 20");
    FourierSpectrum out{n, std::vector<double>(f.begin(), f.end())};
    auto& a = out.coefficients;
    for (std::size_t h = 1; h < a.size(); h <<= 1) {
        for (std::size_t i = 0; i < a.size(); i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double u = a[j];
                const double v = a[j + h];
                a[j] = u + v;
                a[j + h] = u - v;
            }
        }
    }
    const double scale = 1.0 / static_cast<double>(a.size());
    for (double& c : a) c *= scale;
    return out;
}

std::vector<double> inverse_spectrum(const FourierSpectrum& spectrum) {
    std::vector<double> a = spectrum.coefficients;
    dimension_of(a.size());
    for (std::size_t h = 1; h < a.size(); h <<= 1) {
        for (std::size_t i = 0; i < a.size(); i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double u = a[j];
                const double v = a[j + h];
                a[j] = u + v;
                a[j + h] = u - v;
            }
        }
    }
    return a;
}

void GlConfig::validate() const {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidArgument("gamma must lie in (0,1]");
    if (!(delta_fail > 0.0 && delta_fail < 1.0)) throw InvalidArgument("delta_fail must lie in (0,1)");
    if (!(bound > 0.0)) throw InvalidArgument("bound must be positive");
    if (samples && *samples < 1) throw InvalidArgument("samples must be at least 1");
    if (jobs < 1) throw InvalidArgument("jobs must be at least 1");
}

double GlConfig::per_estimate_failure(int n) const {
    const double per_level = std::ceil(4.0 * bound * bound / (gamma * gamma));
    return delta_fail / (2.0 * std::max(n, 1) * per_level);
}

std::size_t GlConfig::hoeffding_samples(int n) const {
    const double b4 = std::pow(bound, 4);
    const double m = 32.0 * b4 * std::log(2.0 / per_estimate_failure(n)) / std::pow(gamma, 4);
    return static_cast<std::size_t>(std::ceil(m));
}

GlResult goldreich_levin(const QueryFn& f, int n, const GlConfig& cfg) {
    cfg.validate();
    if (n < 1 || n > kMaxQueryDim) throw InvalidArgument("Goldreich-Levin supports 1 <= n <= 24");
    if (cfg.exact && cfg.exact->n != n) throw InvalidArgument("exact spectrum dimension does not match n");

    GlResult out;
    const std::size_t m = cfg.samples.value_or(cfg.hoeffding_samples(n));
    out.samples_per_estimate = cfg.exact ? 0 : m;
    const double b2 = cfg.bound * cfg.bound;
    const double halfwidth = cfg.exact ? 0.0 : b2 * std::sqrt(2.0 * std::log(2.0 / cfg.per_estimate_failure(n)) / m);
    const double keep_at = cfg.gamma * cfg.gamma / 2.0;
    const auto level_cap = static_cast<std::size_t>(std::ceil(8.0 * b2 / (cfg.gamma * cfg.gamma)));

    struct Estimate {
        double weight = 0.0;
        double coefficient = 0.0;
    };
    // Paired estimator f(x,y) f(x',y) chi_a(x xor x') of the weight of all
    // subsets extending prefix a over the first `depth` coordinates.
    auto estimate = [&](int depth, std::uint32_t prefix) {
        Estimate e;
        if (cfg.exact) {
            e.weight = cfg.exact->bucket_weight(depth, prefix);
            if (depth == n) e.coefficient = (*cfg.exact)[prefix];
            return e;
        }
        const std::uint64_t stream = mix64(cfg.seed ^ mix64((static_cast<std::uint64_t>(depth) << 32) | prefix));
        const std::uint32_t low = (1u << depth) - 1u;
        const std::uint32_t high = (n - depth) >= 32 ? ~0u : ((1u << (n - depth)) - 1u);
        double wsum = 0.0;
        double csum = 0.0;
        for (std::size_t s = 0; s < m; ++s) {
            const std::uint64_t r = mix64(stream + s);
            const auto x = static_cast<std::uint32_t>(r) & low;
            const auto x2 = static_cast<std::uint32_t>(r >> 24) & low;
            const auto y = static_cast<std::uint32_t>(mix64(r)) & high;
            const std::uint32_t p1 = x | (depth < 32 ? y << depth : 0u);
            const std::uint32_t p2 = x2 | (depth < 32 ? y << depth : 0u);
            const double f1 = f(p1, stream + 2 * s);
            const double f2 = f(p2, stream + 2 * s + 1);
            wsum += f1 * f2 * chi(prefix, x ^ x2);
            if (depth == n) csum += f1 * chi(prefix, x);
        }
        e.weight = wsum / static_cast<double>(m);
        e.coefficient = csum / static_cast<double>(m);
        return e;
    };

    std::vector<std::uint32_t> alive{0};
    std::vector<Estimate> leaf_estimates;
    for (int depth = 1; depth <= n; ++depth) {
        std::vector<std::uint32_t> children;
        for (std::uint32_t a : alive) {
            children.push_back(a);
            children.push_back(a | (1u << (depth - 1)));
        }
        const std::uint64_t cost = cfg.exact ? 0 : 2 * static_cast<std::uint64_t>(m) * children.size();
        if (cfg.max_total_queries && out.total_queries + cost > *cfg.max_total_queries) {
            out.incomplete = true;
            return out;
        }
        std::vector<Estimate> est(children.size());
        const unsigned workers = std::min<unsigned>(cfg.jobs, static_cast<unsigned>(children.size()));
        if (workers <= 1) {
            for (std::size_t c = 0; c < children.size(); ++c) est[c] = estimate(depth, children[c]);
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    for (std::size_t c = w; c < children.size(); c += workers) est[c] = estimate(depth, children[c]);
                });
            }
            for (auto& t : pool) t.join();
        }
        out.total_queries += cost;

        std::vector<std::size_t> kept;
        for (std::size_t c = 0; c < children.size(); ++c) {
            if (est[c].weight >= keep_at) kept.push_back(c);
        }
        const std::size_t cap = depth == n ? static_cast<std::size_t>(std::floor(4.0 / (cfg.gamma * cfg.gamma)))
                                           : level_cap;
        if (kept.size() > cap) {
            out.overflow = true;
            std::stable_sort(kept.begin(), kept.end(),
                             [&](std::size_t a, std::size_t b) { return est[a].weight > est[b].weight; });
            kept.resize(cap);
            std::sort(kept.begin(), kept.end());
        }
        std::vector<bool> keep_flag(children.size(), false);
        for (std::size_t c : kept) keep_flag[c] = true;
        for (std::size_t c = 0; c < children.size(); ++c) {
            out.buckets.push_back({depth, children[c], est[c].weight, halfwidth, keep_flag[c]});
        }
        alive.clear();
        leaf_estimates.clear();
        for (std::size_t c : kept) {
            alive.push_back(children[c]);
            leaf_estimates.push_back(est[c]);
        }
    }
    out.subsets = alive;
    for (const auto& e : leaf_estimates) out.coefficient_estimates.push_back(e.coefficient);
    return out;
}

double PlantedPolynomial::operator()(std::uint32_t point) const {
    double v = 0.0;
    for (const auto& [s, c] : terms) v += c * chi(s, point);
    return v;
}

double PlantedPolynomial::l1() const {
    double total = 0.0;
    for (const auto& term : terms) total += std::abs(term.second);
    return total;
}

std::vector<double> PlantedPolynomial::table() const {
    std::vector<double> v(std::size_t{1} << n);
    for (std::uint32_t k = 0; k < v.size(); ++k) v[k] = (*this)(k);
    return v;
}

ParityLearnResult proper_agnostic_parity_learn(const FiniteInstance& inst, const Predictor& p, const GlConfig& cfg) {
    const auto dim = inst.hypercube_dim();
    if (!dim) throw InvalidArgument("parity learning needs a hypercube instance");
    check_domain(inst, p.size(), "predictor");
    const std::uint64_t label_seed = mix64(cfg.seed ^ 0x5A5A5A5A5A5A5A5Aull);
    const QueryFn query = [&](std::uint32_t point, std::uint64_t nonce) {
        return 2.0 * sample_label(p, point, label_seed, nonce) - 1.0;
    };
    GlConfig run = cfg;
    run.bound = 1.0;
    ParityLearnResult out;
    out.gl = goldreich_levin(query, *dim, run);
    double best = -1.0;
    for (std::size_t k = 0; k < out.gl.subsets.size(); ++k) {
        const double c = out.gl.coefficient_estimates[k];
        if (std::abs(c) > best) {
            best = std::abs(c);
            out.subset = out.gl.subsets[k];
            out.estimated_coefficient = c;
        }
    }
    out.sign = out.estimated_coefficient >= 0.0 ? 1.0 : -1.0;
    double cor = 0.0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        cor += inst.weight(i) * (2.0 * inst.label(i) - 1.0) * out.sign * chi(out.subset, static_cast<std::uint32_t>(i));
    }
    out.correlation = cor;
    out.error = (1.0 - cor) / 2.0;
    return out;
}

}  // namespace fairboost
