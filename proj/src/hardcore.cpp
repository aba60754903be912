#include "fairboost/hardcore.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace fairboost {

namespace {

void require_deterministic(const FiniteInstance& inst, const char* what) {
    if (!inst.deterministic()) throw InvalidArgument(std::string(what) + " requires deterministic labels");
}

// w(p) |g - p| without the non-zero check, so densities of degenerate
// measures can still be reported.
std::vector<double> weighted_values(const FiniteInstance& inst, const Predictor& p, const WeightFn& w) {
    check_domain(inst, p.size(), "predictor");
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double gap = std::abs(inst.label(i) - p[i]);
        double v = 0.0;
        switch (w.kind()) {
            case WeightFn::Kind::Constant: v = gap; break;
            case WeightFn::Kind::WMax: v = gap / std::max(p[i], 1.0 - p[i]); break;
            case WeightFn::Kind::Table: v = w(p[i]) * gap; break;
        }
        if (v > 1.0) {
            if (v > 1.0 + kIdentityTolerance) throw InvalidArgument("weight function pushes the measure above 1");
            v = 1.0;
        }
        out[i] = v;
    }
    return out;
}

double weighted_sum(const FiniteInstance& inst, std::span<const double> values) {
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) total += inst.weight(i) * values[i];
    return total;
}

HypothesisClass boolean01_view(const HypothesisClass& cls) {
    if (cls.empty()) throw EmptyClass();
    switch (cls.kind()) {
        case HypothesisKind::Boolean01: return cls;
        case HypothesisKind::BooleanPM: {
            std::vector<Hypothesis> out;
            for (const auto& h : cls.hypotheses()) {
                std::vector<double> v(h.values.size());
                for (std::size_t i = 0; i < v.size(); ++i) v[i] = (h.values[i] + 1.0) / 2.0;
                out.emplace_back(h.name, HypothesisKind::Boolean01, std::move(v));
            }
            return HypothesisClass(std::move(out));
        }
        case HypothesisKind::Bounded: break;
    }
    throw InvalidArgument("hardness audits need a Boolean class");
}

double disagreement(const FiniteInstance& inst, std::span<const double> f) {
    double err = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] != inst.label(i)) err += inst.weight(i);
    }
    return err;
}

}  // namespace

Measure::Measure(std::vector<double> values) : values_(std::move(values)) {
    double top = 0.0;
    for (double v : values_) {
        if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("measure values must lie in [0,1]");
        top = std::max(top, v);
    }
    if (top == 0.0) throw MeasureIdenticallyZero();
}

double density(const FiniteInstance& inst, const Measure& mu) {
    check_domain(inst, mu.size(), "measure");
    return weighted_sum(inst, mu.values());
}

Measure measure_ttv(const FiniteInstance& inst, const Predictor& p) {
    require_deterministic(inst, "measure_ttv");
    return Measure(weighted_values(inst, p, WeightFn::one()));
}

Measure measure_weighted(const FiniteInstance& inst, const Predictor& p, const WeightFn& w) {
    require_deterministic(inst, "measure_weighted");
    return Measure(weighted_values(inst, p, w));
}

FiniteInstance induce(const FiniteInstance& inst, const Measure& mu) {
    const double dns = density(inst, mu);
    if (!(dns > 0.0)) throw MeasureIdenticallyZero();
    std::vector<double> weights(inst.size());
    for (std::size_t i = 0; i < weights.size(); ++i) weights[i] = inst.weight(i) * mu[i] / dns;
    // Renormalize the rounding residue so the new distribution validates.
    double total = 0.0;
    for (double w : weights) total += w;
    for (double& w : weights) w /= total;
    return inst.with_weights(std::move(weights));
}

HardcoreReport hardcore_audit(const FiniteInstance& inst, const Measure& mu, const HypothesisClass& cls) {
    require_deterministic(inst, "hardcore_audit");
    const HypothesisClass boolean = boolean01_view(cls);
    check_domain(inst, boolean[0].values.size(), "hypothesis class");
    const FiniteInstance induced = induce(inst, mu);

    HardcoreReport r;
    r.density = density(inst, mu);
    r.min_entropy_ratio = *std::max_element(mu.values().begin(), mu.values().end()) / r.density;
    r.eta = weighted_sum(induced, induced.labels());
    r.class_correlation = -1.0;
    r.advantage = -1.0;
    for (const auto& h : boolean.hypotheses()) {
        const double cor = std::abs(correlation(induced, h));
        if (cor > r.class_correlation) {
            r.class_correlation = cor;
            r.correlation_witness = h.name;
        }
        const double agree = 1.0 - disagreement(induced, h.values);
        if (agree > r.advantage) {
            r.advantage = agree;
            r.advantage_witness = h.name;
        }
    }
    r.sandwich_lower = std::min(r.eta, 1.0 - r.eta) + r.class_correlation;
    r.sandwich_upper = std::max(r.eta, 1.0 - r.eta) + r.class_correlation;
    r.sandwich_lower_valid = boolean.negation_closed();
    const bool upper = r.advantage <= r.sandwich_upper + kInequalityTolerance;
    const bool lower = !r.sandwich_lower_valid || r.advantage >= r.sandwich_lower - kInequalityTolerance;
    r.sandwich_holds = upper && lower;
    return r;
}

IdentityCheck verify_identity_wma(const FiniteInstance& inst, const Predictor& p, const HypothesisClass& cls,
                                  const WeightFn& w) {
    require_deterministic(inst, "verify_identity_wma");
    if (cls.empty()) throw EmptyClass();
    const Measure mu = measure_weighted(inst, p, w);
    const FiniteInstance induced = induce(inst, mu);
    IdentityCheck out;
    out.lhs = weighted_ma_error(inst, p, cls, w).value;
    double cor = 0.0;
    for (const auto& h : cls.hypotheses()) cor = std::max(cor, std::abs(correlation(induced, h)));
    out.rhs = cor * density(inst, mu);
    out.discrepancy = std::abs(out.lhs - out.rhs);
    return out;
}

DensityBoundsReport density_bounds(const FiniteInstance& inst, const Predictor& p, const WeightFn& w,
                                   std::optional<double> tau_cal) {
    require_deterministic(inst, "density_bounds");
    DensityBoundsReport r;
    r.ece = ece(inst, p).value;
    r.dns_w = weighted_sum(inst, weighted_values(inst, p, w));
    r.dns_ttv = weighted_sum(inst, weighted_values(inst, p, WeightFn::one()));
    r.dns_max = weighted_sum(inst, weighted_values(inst, p, WeightFn::wmax()));
    std::vector<double> majority(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double v = p[i];
        r.calibration_term += inst.weight(i) * 2.0 * w(v) * v * (1.0 - v);
        r.expected_min += inst.weight(i) * std::min(v, 1.0 - v);
        r.expected_2p1p += inst.weight(i) * 2.0 * v * (1.0 - v);
        majority[i] = v >= 0.5 ? 1.0 : 0.0;
    }
    r.majority_error = disagreement(inst, majority);
    const double tol = kInequalityTolerance;
    r.calibration_gap = std::abs(r.dns_w - r.calibration_term);
    r.calibration_holds = r.calibration_gap <= 2.0 * r.ece + tol;
    r.majority_holds = r.majority_error <= r.expected_min + r.ece + tol;
    r.ttv_holds = r.dns_ttv >= r.expected_2p1p - 2.0 * r.ece - tol;
    r.max_holds = r.dns_max >= 2.0 * r.expected_min - 2.0 * r.ece - tol;
    r.chain_holds = r.expected_min <= r.expected_2p1p + tol && r.expected_2p1p <= 2.0 * r.expected_min + tol;
    if (tau_cal) {
        r.tau_cal = tau_cal;
        r.calibrated_within_tau = r.ece <= *tau_cal + tol;
    }
    return r;
}

double enumerated_error(const FiniteInstance& inst, const HypothesisClass& cls, const std::optional<Predictor>& p) {
    require_deterministic(inst, "enumerated_error");
    const HypothesisClass boolean = boolean01_view(cls);
    check_domain(inst, boolean[0].values.size(), "hypothesis class");
    const std::size_t n = inst.size();
    double best = std::min(disagreement(inst, std::vector<double>(n, 0.0)),
                           disagreement(inst, std::vector<double>(n, 1.0)));
    for (const auto& h : boolean.hypotheses()) best = std::min(best, disagreement(inst, h.values));
    if (p) {
        check_domain(inst, p->size(), "predictor");
        std::set<double> cuts(p->values().begin(), p->values().end());
        cuts.insert(0.5);
        std::vector<double> f(n);
        for (double t : cuts) {
            for (std::size_t i = 0; i < n; ++i) f[i] = (*p)[i] >= t ? 1.0 : 0.0;
            best = std::min(best, disagreement(inst, f));
        }
    }
    return best;
}

PipelineResult ihcl_pipeline(const FiniteInstance& inst, const HypothesisClass& cls, const PipelineConfig& cfg) {
    require_deterministic(inst, "ihcl_pipeline");
    if (!(cfg.eps > 0.0)) throw InvalidArgument("eps must be positive");
    if (!(cfg.tau > 0.0)) throw InvalidArgument("tau must be positive");
    if (cfg.delta_target && !(*cfg.delta_target > 0.0 && *cfg.delta_target <= 0.5)) {
        throw InvalidArgument("delta_target must lie in (0, 1/2]");
    }
    const HypothesisClass closed = boolean01_view(cls).closed();
    check_domain(inst, closed[0].values.size(), "hypothesis class");

    PipelineResult out;
    const double class_error = enumerated_error(inst, closed);
    out.delta_initial = cfg.delta_target.value_or(class_error);

    auto realize = [&]() {
        // g is computed exactly by a member of the class: nothing is hard.
        for (const auto& h : closed.hypotheses()) {
            if (disagreement(inst, h.values) == 0.0) return Predictor(h.values, 1.0);
        }
        return Predictor(std::vector<double>(inst.labels().begin(), inst.labels().end()), 1.0);
    };
    if (class_error <= kIdentityTolerance) {
        out.no_hardness = true;
        out.predictor = realize();
        out.checks = {true, true, std::nullopt, true, true, true, true};
        return out;
    }

    LearnerConfig lc;
    lc.tau = cfg.eps * out.delta_initial;
    lc.calibration_tau = cfg.tau / 4.0;
    lc.grid_step = cfg.grid_step;
    lc.max_iters = cfg.max_iters;
    lc.seed = cfg.seed;
    out.ma_target = lc.tau;
    LearnerResult learned = learn_calibrated_multiaccurate(inst, closed, lc, WeightFn::wmax());
    out.predictor = std::move(learned.predictor);
    out.trace = std::move(learned.trace);

    const Predictor& p = out.predictor;
    out.ece = ece(inst, p).value;
    out.eps_prime = weighted_ma_error(inst, p, closed, WeightFn::wmax()).value;
    for (std::size_t i = 0; i < p.size(); ++i) out.delta_measured += inst.weight(i) * std::min(p[i], 1.0 - p[i]);
    out.delta_enumerated = enumerated_error(inst, closed, p);

    const std::vector<double> ttv = weighted_values(inst, p, WeightFn::one());
    const std::vector<double> mmax = weighted_values(inst, p, WeightFn::wmax());
    if (*std::max_element(mmax.begin(), mmax.end()) == 0.0) {
        out.no_hardness = true;
        out.checks = {true, true, std::nullopt, true, true, true, true};
        return out;
    }
    out.measure = Measure(mmax);
    out.report = hardcore_audit(inst, *out.measure, closed);
    const double dns = out.report->density;
    const double tol = kInequalityTolerance;

    auto& c = out.checks;
    c.density_ok = dns >= 2.0 * out.delta_measured - cfg.tau - tol;
    c.advantage_ok = out.report->advantage <= 0.5 + 3.0 * out.eps_prime / (2.0 * dns) + tol;
    if (out.eps_prime <= cfg.eps * out.delta_measured + tol && cfg.tau <= out.delta_measured / 2.0) {
        c.half_eps_ok = out.report->advantage <= 0.5 + cfg.eps + tol;
    }
    c.hardness_density_ok = out.delta_measured >= out.delta_enumerated - out.ece - tol;
    c.chain_ok = true;
    for (std::size_t i = 0; i < p.size(); ++i) {
        c.chain_ok = c.chain_ok && ttv[i] <= mmax[i] + tol && mmax[i] <= 2.0 * ttv[i] + tol;
    }
    out.identity_discrepancy = verify_identity_wma(inst, p, closed, WeightFn::wmax()).discrepancy;
    c.identity_ok = out.identity_discrepancy < 1e-10;
    c.posthoc_ma_ok = out.eps_prime <= cfg.eps * dns + tol;
    return out;
}

}  // namespace fairboost
