#include "fairboost/learners.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fairboost {

WeakLearnerOracle::WeakLearnerOracle(const HypothesisClass& c, double alpha_, double beta_)
    : cls(&c), alpha(alpha_), beta(beta_) {
    if (c.empty()) throw EmptyClass();
    if (!(beta_ <= alpha_)) throw InvalidArgument("weak learner requires beta <= alpha");
    if (alpha_ < 0.0 || alpha_ > 1.0) throw InvalidArgument("weak learner alpha must lie in [0,1]");
}

std::optional<WeakLearnResult> weak_learn(const WeakLearnerOracle& oracle, const FiniteInstance& inst,
                                          std::span<const double> residual) {
    const auto& cls = *oracle.cls;
    if (cls.empty()) throw EmptyClass();
    check_domain(inst, residual.size(), "residual");
    check_domain(inst, cls[0].values.size(), "hypothesis class");
    for (double r : residual) {
        if (!(r >= -1.0 - kIdentityTolerance && r <= 1.0 + kIdentityTolerance)) {
            throw InvalidArgument("residual must lie in [-1,1]");
        }
    }
    WeakLearnResult best;
    double best_abs = -1.0;
    for (std::size_t k = 0; k < cls.size(); ++k) {
        const auto& c = cls[k].values;
        double total = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) total += inst.weight(i) * c[i] * residual[i];
        if (std::abs(total) > best_abs) {
            best_abs = std::abs(total);
            best = {k, total};
        }
    }
    if (best_abs < oracle.alpha) return std::nullopt;
    return best;
}

double LearnerConfig::effective_grid() const {
    const double step = grid_step.value_or(std::min(tau, cal_tau()) / 4.0);
    const double cells = std::ceil(1.0 / step - 1e-9);
    return 1.0 / cells;
}

std::size_t LearnerConfig::effective_max_iters() const {
    if (max_iters) return *max_iters;
    const double beta = std::min(tau, cal_tau());
    return 10 * static_cast<std::size_t>(std::ceil(1.0 / (beta * beta)));
}

void LearnerConfig::validate() const {
    if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
    if (!(cal_tau() > 0.0)) throw InvalidArgument("calibration tau must be positive");
    if (grid_step && !(*grid_step > 0.0 && *grid_step <= 1.0)) throw InvalidArgument("grid_step must lie in (0,1]");
    if (max_iters && *max_iters < 1) throw InvalidArgument("max_iters must be at least 1");
    if (step_rule == StepRule::FixedKappa && !(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
}

const char* to_string(StepKind kind) {
    switch (kind) {
        case StepKind::MultiaccuracyStep: return "ma_step";
        case StepKind::Recalibration: return "recalibrate";
        case StepKind::LevelSetPatch: return "level_patch";
    }
    return "?";
}

namespace {

using Index = std::int64_t;

Index nearest_cell(double target, Index current, Index cells) {
    const double x = target * static_cast<double>(cells);
    const double lo = std::floor(x);
    const double frac = x - lo;
    Index k = static_cast<Index>(lo);
    if (frac > 0.5 || (frac == 0.5 && current == k + 1)) ++k;
    return std::clamp<Index>(k, 0, cells);
}

// Predictor held as integer grid indices k / cells.
class GridState {
public:
    GridState(const FiniteInstance& inst, Index cells, std::span<const double> init)
        : inst_(inst), cells_(cells), k_(init.size()) {
        for (std::size_t i = 0; i < init.size(); ++i) {
            k_[i] = std::clamp<Index>(std::llround(init[i] * static_cast<double>(cells_)), 0, cells_);
        }
        loss_ = loss_of(k_);
    }

    double value(std::size_t i) const { return static_cast<double>(k_[i]) / static_cast<double>(cells_); }
    double loss() const { return loss_; }
    std::size_t size() const { return k_.size(); }

    std::vector<double> values() const {
        std::vector<double> v(k_.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = value(i);
        return v;
    }
    Predictor predictor() const { return Predictor(values(), 1.0 / static_cast<double>(cells_)); }

    // Moves along p + t d. Grid-multiple steps are exact for {-1,0,1}
    // directions; otherwise the nearest rounding is tried first and then
    // seeded randomized roundings. Only strict loss decreases are accepted.
    bool step(std::span<const double> direction, double t, std::uint64_t seed) {
        const double n = static_cast<double>(cells_);
        std::vector<Index> candidate(k_.size());
        const bool integral = std::all_of(direction.begin(), direction.end(),
                                          [](double d) { return d == 0.0 || d == 1.0 || d == -1.0; });
        if (integral) {
            Index m = std::llround(t * n);
            if (m == 0) m = t > 0.0 ? 1 : -1;
            for (std::size_t i = 0; i < k_.size(); ++i) {
                candidate[i] = std::clamp<Index>(k_[i] + m * static_cast<Index>(direction[i]), 0, cells_);
            }
            if (accept(candidate)) return true;
        }
        std::vector<double> target(k_.size());
        for (std::size_t i = 0; i < k_.size(); ++i) {
            target[i] = std::clamp(value(i) + t * direction[i], 0.0, 1.0) * n;
            candidate[i] = std::clamp<Index>(std::llround(target[i]), 0, cells_);
        }
        if (accept(candidate)) return true;
        for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
            const std::uint64_t base = mix64(seed ^ mix64(attempt + 1));
            for (std::size_t i = 0; i < k_.size(); ++i) {
                const double lo = std::floor(target[i]);
                const double u = static_cast<double>(mix64(base + i) >> 11) * 0x1.0p-53;
                candidate[i] = std::clamp<Index>(static_cast<Index>(lo) + (u < target[i] - lo ? 1 : 0), 0, cells_);
            }
            if (accept(candidate)) return true;
        }
        return false;
    }

    // Level-set recalibration; returns false when nothing changed.
    bool recalibrate() {
        std::map<Index, std::pair<double, double>> levels;  // k -> (mass, label mass)
        for (std::size_t i = 0; i < k_.size(); ++i) {
            auto& [mass, labels] = levels[k_[i]];
            mass += inst_.weight(i);
            labels += inst_.weight(i) * inst_.label(i);
        }
        std::map<Index, Index> remap;
        bool changed = false;
        for (const auto& [k, acc] : levels) {
            const auto& [mass, labels] = acc;
            const Index target = mass > 0.0 ? nearest_cell(labels / mass, k, cells_) : k;
            remap[k] = target;
            changed = changed || target != k;
        }
        if (!changed) return false;
        for (auto& k : k_) k = remap[k];
        loss_ = loss_of(k_);
        return true;
    }

private:
    double loss_of(const std::vector<Index>& k) const {
        std::vector<double> v(k.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(k[i]) / static_cast<double>(cells_);
        return squared_loss(inst_, v);
    }

    bool accept(const std::vector<Index>& candidate) {
        const double l = loss_of(candidate);
        if (l < loss_) {
            k_ = candidate;
            loss_ = l;
            return true;
        }
        return false;
    }

    const FiniteInstance& inst_;
    Index cells_;
    std::vector<Index> k_;
    double loss_ = 0.0;
};

struct Run {
    const FiniteInstance& inst;
    const HypothesisClass& cls;
    const LearnerConfig& config;
    GridState state;
    LearnerTrace trace;
    std::size_t iterations = 0;

    Run(const FiniteInstance& inst_, const HypothesisClass& cls_, const LearnerConfig& config_,
        const std::optional<Predictor>& initial)
        : inst(inst_),
          cls(cls_),
          config(config_),
          state(inst_, static_cast<Index>(std::llround(1.0 / config_.effective_grid())),
                initial ? initial->values() : std::span<const double>(std::vector<double>(inst_.size(), 0.5))) {
        if (cls.empty()) throw EmptyClass();
        check_domain(inst, cls[0].values.size(), "hypothesis class");
        if (initial) check_domain(inst, initial->size(), "initial predictor");
        trace.grid = config.effective_grid();
        trace.sq_loss_trajectory.push_back(state.loss());
    }

    [[noreturn]] void fail(const std::string& why) {
        throw IterationCapExceeded(why, trace, state.predictor());
    }

    void tick() {
        if (++iterations > config.effective_max_iters()) {
            fail("iteration cap of " + std::to_string(config.effective_max_iters()) +
                 " exceeded (tau too small for the grid step?)");
        }
    }

    void record(StepKind kind, double violation, std::optional<std::string> hyp, std::optional<double> level) {
        trace.sq_loss_trajectory.push_back(state.loss());
        trace.steps.push_back({kind, violation, state.loss(), std::move(hyp), level});
    }

    // One boosting step along d = scale(x) * h(x) with correlation gamma.
    void boost(std::span<const double> direction, double gamma, StepKind kind, const std::string& name,
               std::optional<double> level) {
        double energy = 0.0;
        for (std::size_t i = 0; i < direction.size(); ++i) energy += inst.weight(i) * direction[i] * direction[i];
        const double t = config.step_rule == StepRule::OptimalLineSearch ? gamma / energy : config.kappa * gamma;
        if (!state.step(direction, t, mix64(config.seed ^ iterations))) {
            fail("no grid-aligned step reduces the squared loss; refine grid_step");
        }
        record(kind, std::abs(gamma), name, level);
    }

    void recalibration_step(double violation) {
        if (!state.recalibrate()) fail("recalibration made no progress; grid_step too coarse for the ECE target");
        ++trace.recalibrations;
        record(StepKind::Recalibration, violation, std::nullopt, std::nullopt);
    }

    LearnerResult finish(const std::optional<WeightFn>& w) {
        Predictor p = state.predictor();
        trace.final_reports.ma = ma_error(inst, p, cls).value;
        trace.final_reports.ece = ece(inst, p).value;
        if (w) trace.final_reports.weighted_ma = weighted_ma_error(inst, p, cls, *w).value;
        return {std::move(p), std::move(trace)};
    }
};

LearnerResult run_ma_loop(const FiniteInstance& inst, const HypothesisClass& cls, const LearnerConfig& config,
                          const std::optional<WeightFn>& w, bool calibrate, const std::optional<Predictor>& initial) {
    config.validate();
    if (w && w->kind() != WeightFn::Kind::Constant && !inst.deterministic()) {
        throw InvalidArgument("weighted multiaccuracy requires deterministic labels");
    }
    Run run(inst, cls, config, initial);
    const WeakLearnerOracle oracle(cls, std::min(config.tau, 1.0), std::min(config.tau, 1.0));
    std::vector<double> residual(inst.size());
    std::vector<double> scale(inst.size(), 1.0);
    std::vector<double> direction(inst.size());
    for (;;) {
        for (std::size_t i = 0; i < inst.size(); ++i) {
            const double v = run.state.value(i);
            scale[i] = w ? (*w)(v) : 1.0;
            residual[i] = scale[i] * (inst.label(i) - v);
        }
        ++run.trace.oracle_calls;
        const auto found = weak_learn(oracle, inst, residual);
        if (found && std::abs(found->correlation) > config.tau) {
            run.tick();
            const auto& h = cls[found->index].values;
            for (std::size_t i = 0; i < h.size(); ++i) direction[i] = scale[i] * h[i];
            run.boost(direction, found->correlation, StepKind::MultiaccuracyStep, cls[found->index].name,
                      std::nullopt);
            continue;
        }
        if (calibrate) {
            const double e = ece(inst, run.state.predictor()).value;
            if (e > config.cal_tau()) {
                run.tick();
                run.recalibration_step(e);
                continue;
            }
        }
        return run.finish(w);
    }
}

}  // namespace

LearnerResult learn_multiaccurate(const FiniteInstance& inst, const HypothesisClass& cls, const LearnerConfig& config,
                                  const std::optional<Predictor>& initial) {
    return run_ma_loop(inst, cls, config, std::nullopt, false, initial);
}

LearnerResult learn_calibrated_multiaccurate(const FiniteInstance& inst, const HypothesisClass& cls,
                                             const LearnerConfig& config, const std::optional<WeightFn>& w,
                                             const std::optional<Predictor>& initial) {
    return run_ma_loop(inst, cls, config, w, true, initial);
}

Predictor recalibrate(const FiniteInstance& inst, const Predictor& p, double grid_step) {
    check_domain(inst, p.size(), "predictor");
    if (!(grid_step > 0.0 && grid_step <= 1.0)) throw InvalidArgument("grid_step must lie in (0,1]");
    const auto cells = static_cast<Index>(std::ceil(1.0 / grid_step - 1e-9));
    std::vector<Index> bucket(p.size());
    std::map<Index, std::pair<double, double>> acc;
    for (std::size_t i = 0; i < p.size(); ++i) {
        bucket[i] = std::llround(p[i] * static_cast<double>(cells));
        acc[bucket[i]].first += inst.weight(i);
        acc[bucket[i]].second += inst.weight(i) * inst.label(i);
    }
    std::map<Index, Index> target;
    for (const auto& [b, sums] : acc) {
        target[b] = sums.first > 0.0 ? nearest_cell(sums.second / sums.first, b, cells) : b;
    }
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        out[i] = static_cast<double>(target[bucket[i]]) / static_cast<double>(cells);
    }
    return Predictor(std::move(out), 1.0 / static_cast<double>(cells));
}

LearnerResult learn_multicalibrated(const FiniteInstance& inst, const HypothesisClass& cls,
                                    const LearnerConfig& config, const std::optional<Predictor>& initial) {
    config.validate();
    Run run(inst, cls, config, initial);
    std::vector<double> residual(inst.size());
    std::vector<double> direction(inst.size());
    for (;;) {
        const Predictor p = run.state.predictor();
        struct Candidate {
            std::size_t hypothesis;
            double gamma;
            double gain;
            const LevelSet* level;
        };
        std::optional<Candidate> best;
        const auto levels = level_sets(inst, p);
        for (const auto& level : levels) {
            std::fill(residual.begin(), residual.end(), 0.0);
            for (std::size_t i : level.members) residual[i] = inst.label(i) - p[i];
            const double threshold = config.tau * level.mass;
            const WeakLearnerOracle oracle(cls, std::min(threshold, 1.0), std::min(threshold, 1.0));
            ++run.trace.oracle_calls;
            const auto found = weak_learn(oracle, inst, residual);
            if (!found || std::abs(found->correlation) <= threshold) continue;
            double energy = 0.0;
            for (std::size_t i : level.members) {
                const double c = cls[found->index].values[i];
                energy += inst.weight(i) * c * c;
            }
            const double gain = found->correlation * found->correlation / energy;
            if (!best || gain > best->gain) best = Candidate{found->index, found->correlation, gain, &level};
        }
        if (best) {
            run.tick();
            std::fill(direction.begin(), direction.end(), 0.0);
            for (std::size_t i : best->level->members) direction[i] = cls[best->hypothesis].values[i];
            run.boost(direction, best->gamma, StepKind::LevelSetPatch, cls[best->hypothesis].name,
                      best->level->value);
            continue;
        }
        const double mc = mc_error(inst, p, cls).value;
        if (mc > config.tau) {
            run.tick();
            run.recalibration_step(mc);
            continue;
        }
        LearnerResult result = run.finish(std::nullopt);
        result.trace.final_reports.mc = mc_error(inst, result.predictor, cls).value;
        return result;
    }
}

}  // namespace fairboost
