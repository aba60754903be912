#include "fairboost/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace fairboost {

namespace {

void validate_distribution(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw InvalidArgument("weights must be finite and nonnegative");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > kIdentityTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "weights sum to " << total << ", expected 1";
        throw InvalidArgument(os.str());
    }
}

void validate_labels(LabelKind kind, std::span<const double> labels) {
    for (double v : labels) {
        if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("label values must lie in [0,1]");
        if (kind == LabelKind::Deterministic && v != 0.0 && v != 1.0) {
            throw InvalidArgument("deterministic label values must be exactly 0 or 1");
        }
    }
}

std::int64_t grid_cells(double grid) {
    if (!(grid > 0.0 && grid <= 1.0)) throw InvalidArgument("grid step must lie in (0,1]");
    return static_cast<std::int64_t>(std::ceil(1.0 / grid - 1e-9));
}

}  // namespace

std::string hypercube_point_id(int n, std::uint32_t bits) {
    std::string id(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i) {
        if ((bits >> i) & 1u) id[static_cast<std::size_t>(i)] = '1';
    }
    return id;
}

FiniteInstance::FiniteInstance(std::vector<std::string> points, std::vector<double> weights, LabelKind kind,
                               std::vector<double> labels)
    : points_(std::move(points)), weights_(std::move(weights)), kind_(kind), labels_(std::move(labels)) {
    if (points_.empty()) throw InvalidArgument("instance must have at least one point");
    if (weights_.size() != points_.size()) throw InvalidArgument("weights and points differ in length");
    if (labels_.size() != points_.size()) throw InvalidArgument("labels and points differ in length");
    validate_distribution(weights_);
    validate_labels(kind_, labels_);
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!index_.emplace(points_[i], i).second) {
            throw InvalidArgument("duplicate point id '" + points_[i] + "'");
        }
    }
    // Recognise the canonical hypercube ordering so Fourier tools can use it.
    const std::size_t n_points = points_.size();
    if (n_points >= 2 && (n_points & (n_points - 1)) == 0) {
        int n = 0;
        while ((std::size_t{1} << n) < n_points) ++n;
        bool canonical = true;
        for (std::size_t k = 0; k < n_points && canonical; ++k) {
            canonical = points_[k] == hypercube_point_id(n, static_cast<std::uint32_t>(k));
        }
        if (canonical) hypercube_dim_ = n;
    }
}

FiniteInstance FiniteInstance::hypercube(int n, LabelKind kind, std::vector<double> labels) {
    if (n < 1 || n > 20) throw InvalidArgument("hypercube dimension must lie in [1,20]");
    const std::size_t size = std::size_t{1} << n;
    std::vector<std::string> points;
    points.reserve(size);
    for (std::size_t k = 0; k < size; ++k) points.push_back(hypercube_point_id(n, static_cast<std::uint32_t>(k)));
    return FiniteInstance(std::move(points), std::vector<double>(size, 1.0 / static_cast<double>(size)), kind,
                          std::move(labels));
}

bool FiniteInstance::uniform() const {
    const double u = 1.0 / static_cast<double>(size());
    return std::all_of(weights_.begin(), weights_.end(), [u](double w) { return std::abs(w - u) <= 1e-15; });
}

std::size_t FiniteInstance::index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw DomainMismatch("unknown point '" + id + "'");
    return it->second;
}

FiniteInstance FiniteInstance::with_weights(std::vector<double> weights) const {
    return FiniteInstance(points_, std::move(weights), kind_, labels_);
}

FiniteInstance FiniteInstance::with_labels(LabelKind kind, std::vector<double> labels) const {
    return FiniteInstance(points_, weights_, kind, std::move(labels));
}

double snap_to_grid(double v, double grid) {
    const auto cells = grid_cells(grid);
    const double k = std::round(v * static_cast<double>(cells));
    return k / static_cast<double>(cells);
}

Predictor::Predictor(std::vector<double> values, std::optional<double> grid)
    : values_(std::move(values)), grid_(grid) {
    for (double v : values_) {
        if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("predictor values must lie in [0,1]");
    }
    if (grid_) {
        const double cells = static_cast<double>(grid_cells(*grid_));
        for (double v : values_) {
            if (std::abs(v * cells - std::round(v * cells)) / cells > kIdentityTolerance) {
                throw InvalidArgument("predictor value off its declared grid");
            }
        }
    }
    for (double& v : values_) v += 0.0;  // fold -0.0 into +0.0 so level sets key cleanly
}

Predictor Predictor::constant(std::size_t n, double value, std::optional<double> grid) {
    return Predictor(std::vector<double>(n, value), grid);
}

const char* to_string(HypothesisKind kind) {
    switch (kind) {
        case HypothesisKind::Bounded: return "bounded";
        case HypothesisKind::Boolean01: return "boolean01";
        case HypothesisKind::BooleanPM: return "pm1";
    }
    return "?";
}

Hypothesis::Hypothesis(std::string name_, HypothesisKind kind_, std::vector<double> values_)
    : name(std::move(name_)), kind(kind_), values(std::move(values_)) {
    for (double v : values) {
        switch (kind) {
            case HypothesisKind::Boolean01:
                if (v != 0.0 && v != 1.0) throw InvalidArgument("hypothesis '" + name + "' is not {0,1}-valued");
                break;
            case HypothesisKind::BooleanPM:
                if (v != -1.0 && v != 1.0) throw InvalidArgument("hypothesis '" + name + "' is not {-1,1}-valued");
                break;
            case HypothesisKind::Bounded:
                if (!(v >= -1.0 && v <= 1.0)) throw InvalidArgument("hypothesis '" + name + "' leaves [-1,1]");
                break;
        }
    }
}

Hypothesis Hypothesis::to_pm1() const {
    if (kind != HypothesisKind::Boolean01) return *this;
    std::vector<double> pm(values.size());
    std::transform(values.begin(), values.end(), pm.begin(), [](double v) { return 2.0 * v - 1.0; });
    return Hypothesis(name, HypothesisKind::BooleanPM, std::move(pm));
}

namespace {

std::vector<double> negation_of(const Hypothesis& h) {
    std::vector<double> out(h.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = h.kind == HypothesisKind::Boolean01 ? 1.0 - h.values[i] : -h.values[i];
        out[i] += 0.0;
    }
    return out;
}

std::string negated_name(const Hypothesis& h) {
    const char mark = h.kind == HypothesisKind::Boolean01 ? '!' : '-';
    if (!h.name.empty() && h.name.front() == mark) return h.name.substr(1);
    return std::string(1, mark) + h.name;
}

}  // namespace

HypothesisClass::HypothesisClass(std::vector<Hypothesis> hypotheses, ClassFlags required)
    : hypotheses_(std::move(hypotheses)) {
    if (hypotheses_.empty()) {
        if (required.contains_constant_one || required.negation_closed) {
            throw InvalidArgument("empty class cannot satisfy closure flags");
        }
        return;
    }
    kind_ = hypotheses_.front().kind;
    const std::size_t n = hypotheses_.front().values.size();
    std::set<std::vector<double>> tables;
    for (const auto& h : hypotheses_) {
        if (h.kind != kind_) throw InvalidArgument("class mixes hypothesis kinds");
        if (h.values.size() != n) throw InvalidArgument("class hypotheses have different domain sizes");
        tables.insert(h.values);
    }
    flags_.contains_constant_one = tables.count(std::vector<double>(n, 1.0)) > 0;
    has_zero_ = tables.count(std::vector<double>(n, 0.0)) > 0;
    flags_.negation_closed = std::all_of(hypotheses_.begin(), hypotheses_.end(),
                                         [&](const Hypothesis& h) { return tables.count(negation_of(h)) > 0; });
    if (required.contains_constant_one && !flags_.contains_constant_one) {
        throw InvalidArgument("class declared to contain the constant 1 but does not");
    }
    if (required.negation_closed && !flags_.negation_closed) {
        throw InvalidArgument("class declared negation-closed but is not");
    }
}

HypothesisClass HypothesisClass::closed() const {
    if (hypotheses_.empty()) throw EmptyClass();
    const std::size_t n = hypotheses_.front().values.size();
    std::vector<Hypothesis> out;
    std::set<std::vector<double>> seen;
    auto add = [&](Hypothesis h) {
        if (seen.insert(h.values).second) out.push_back(std::move(h));
    };
    add(Hypothesis("1", kind_, std::vector<double>(n, 1.0)));
    if (kind_ == HypothesisKind::Boolean01) add(Hypothesis("0", kind_, std::vector<double>(n, 0.0)));
    else add(Hypothesis("-1", kind_, std::vector<double>(n, -1.0)));
    for (const auto& h : hypotheses_) {
        add(h);
        add(Hypothesis(negated_name(h), h.kind, negation_of(h)));
    }
    return HypothesisClass(std::move(out));
}

HypothesisClass HypothesisClass::to_pm1() const {
    std::vector<Hypothesis> out;
    out.reserve(hypotheses_.size());
    for (const auto& h : hypotheses_) out.push_back(h.to_pm1());
    return HypothesisClass(std::move(out));
}

double w_max(double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("w_max argument must lie in [0,1]");
    return 1.0 / std::max(v, 1.0 - v);
}

WeightFn WeightFn::one() { return WeightFn{}; }

WeightFn WeightFn::wmax() {
    WeightFn w;
    w.kind_ = Kind::WMax;
    return w;
}

WeightFn WeightFn::table(std::map<double, double> entries) {
    for (const auto& [v, weight] : entries) {
        if (!(weight >= 1.0 - kIdentityTolerance && weight <= w_max(v) + kIdentityTolerance)) {
            throw InvalidArgument("weight table entry outside [1, w_max(v)]");
        }
    }
    WeightFn w;
    w.kind_ = Kind::Table;
    w.table_ = std::move(entries);
    return w;
}

bool WeightFn::defined_at(double v) const {
    return kind_ != Kind::Table || table_.count(v) > 0;
}

double WeightFn::operator()(double v) const {
    switch (kind_) {
        case Kind::Constant: return 1.0;
        case Kind::WMax: return w_max(v);
        case Kind::Table: {
            auto it = table_.find(v);
            if (it == table_.end()) {
                std::ostringstream os;
                os.precision(17);
                os << "weight function undefined at predictor value " << v;
                throw InvalidArgument(os.str());
            }
            return it->second;
        }
    }
    return 1.0;
}

const char* to_string(Metric metric) {
    switch (metric) {
        case Metric::EAE: return "EAE";
        case Metric::ECE: return "ECE";
        case Metric::MA: return "MA";
        case Metric::WeightedMA: return "WeightedMA";
        case Metric::MC: return "MC";
        case Metric::Opt: return "Opt";
        case Metric::HardnessAdvantage: return "HardnessAdvantage";
    }
    return "?";
}

void check_domain(const FiniteInstance& inst, std::size_t table_size, const std::string& what) {
    if (table_size < inst.size()) {
        throw DomainMismatch(what + " has no value for point '" + inst.points()[table_size] + "' (index " +
                             std::to_string(table_size) + ")");
    }
    if (table_size > inst.size()) {
        throw DomainMismatch(what + " has " + std::to_string(table_size) + " values but the instance has " +
                             std::to_string(inst.size()) + " points");
    }
}

std::vector<LevelSet> level_sets(const FiniteInstance& inst, const Predictor& p) {
    check_domain(inst, p.size(), "predictor");
    std::map<double, LevelSet> by_value;
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto& level = by_value[p[i]];
        level.value = p[i];
        level.mass += inst.weight(i);
        level.label_mean += inst.weight(i) * inst.label(i);
        level.members.push_back(i);
    }
    std::vector<LevelSet> out;
    out.reserve(by_value.size());
    for (auto& [value, level] : by_value) {
        level.label_mean = level.mass > 0.0 ? level.label_mean / level.mass : value;
        out.push_back(std::move(level));
    }
    return out;
}

double correlation(const FiniteInstance& inst, std::span<const double> h) {
    check_domain(inst, h.size(), "hypothesis");
    double total = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) total += inst.weight(i) * (2.0 * inst.label(i) - 1.0) * h[i];
    return total;
}

double correlation(const FiniteInstance& inst, const Hypothesis& h) {
    check_domain(inst, h.values.size(), "hypothesis '" + h.name + "'");
    return correlation(inst, std::span<const double>(h.values));
}

double correlation(const FiniteInstance& inst, const Predictor& p) {
    check_domain(inst, p.size(), "predictor");
    std::vector<double> pm(p.size());
    for (std::size_t i = 0; i < pm.size(); ++i) pm[i] = 2.0 * p[i] - 1.0;
    return correlation(inst, std::span<const double>(pm));
}

AuditReport opt_correlation(const FiniteInstance& inst, const HypothesisClass& cls) {
    if (cls.empty()) throw EmptyClass();
    AuditReport report{Metric::Opt, 0.0, std::nullopt, std::nullopt};
    for (std::size_t k = 0; k < cls.size(); ++k) {
        const double c = correlation(inst, cls[k]);
        if (k == 0 || c > report.value) {
            report.value = c;
            report.witness = cls[k].name;
        }
    }
    return report;
}

double eae(const FiniteInstance& inst, const Predictor& p) {
    check_domain(inst, p.size(), "predictor");
    double diff = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) diff += inst.weight(i) * (inst.label(i) - p[i]);
    return std::abs(diff);
}

AuditReport ece(const FiniteInstance& inst, const Predictor& p) {
    AuditReport report{Metric::ECE, 0.0, std::nullopt, std::nullopt};
    double worst = -1.0;
    for (const auto& level : level_sets(inst, p)) {
        const double contribution = level.mass * std::abs(level.label_mean - level.value);
        report.value += contribution;
        if (contribution > worst) {
            worst = contribution;
            report.level = level.value;
        }
    }
    return report;
}

double ece_dual(const FiniteInstance& inst, const Predictor& p) {
    const auto levels = level_sets(inst, p);
    double total = 0.0;
    for (const auto& level : levels) {
        const double gap = level.label_mean - level.value;
        const double auditor = gap > 0.0 ? 1.0 : (gap < 0.0 ? -1.0 : 0.0);
        for (std::size_t i : level.members) total += inst.weight(i) * auditor * (inst.label(i) - p[i]);
    }
    return total;
}

namespace {

AuditReport max_abs_over_class(const HypothesisClass& cls, Metric metric, std::span<const double> residual,
                               std::span<const double> weights) {
    if (cls.empty()) throw EmptyClass();
    AuditReport report{metric, 0.0, std::nullopt, std::nullopt};
    for (std::size_t k = 0; k < cls.size(); ++k) {
        const auto& c = cls[k].values;
        double total = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) total += weights[i] * c[i] * residual[i];
        const double a = std::abs(total);
        if (k == 0 || a > report.value) {
            report.value = a;
            report.witness = cls[k].name;
        }
    }
    return report;
}

}  // namespace

AuditReport ma_error(const FiniteInstance& inst, const Predictor& p, const HypothesisClass& cls) {
    check_domain(inst, p.size(), "predictor");
    if (!cls.empty()) check_domain(inst, cls[0].values.size(), "hypothesis class");
    std::vector<double> residual(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) residual[i] = inst.label(i) - p[i];
    return max_abs_over_class(cls, Metric::MA, residual, inst.weights());
}

AuditReport weighted_ma_error(const FiniteInstance& inst, const Predictor& p, const HypothesisClass& cls,
                              const WeightFn& w) {
    check_domain(inst, p.size(), "predictor");
    if (!cls.empty()) check_domain(inst, cls[0].values.size(), "hypothesis class");
    std::vector<double> residual(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) residual[i] = w(p[i]) * (inst.label(i) - p[i]);
    return max_abs_over_class(cls, Metric::WeightedMA, residual, inst.weights());
}

AuditReport mc_error(const FiniteInstance& inst, const Predictor& p, const HypothesisClass& cls) {
    if (cls.empty()) throw EmptyClass();
    check_domain(inst, cls[0].values.size(), "hypothesis class");
    std::vector<double> gap(p.size());
    for (const auto& level : level_sets(inst, p)) {
        for (std::size_t i : level.members) gap[i] = std::abs(level.label_mean - level.value);
    }
    AuditReport report{Metric::MC, 0.0, std::nullopt, std::nullopt};
    for (std::size_t k = 0; k < cls.size(); ++k) {
        const auto& c = cls[k].values;
        double total = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) total += inst.weight(i) * std::abs(c[i]) * gap[i];
        if (k == 0 || total > report.value) {
            report.value = total;
            report.witness = cls[k].name;
        }
    }
    return report;
}

double squared_loss(const FiniteInstance& inst, std::span<const double> values) {
    check_domain(inst, values.size(), "predictor");
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double y = inst.label(i);
        const double d = y - values[i];
        total += inst.weight(i) * (y * (1.0 - y) + d * d);
    }
    return total;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

int sample_label(const Predictor& p, std::size_t point, std::uint64_t seed, std::uint64_t draw) {
    if (point >= p.size()) throw DomainMismatch("unknown point index " + std::to_string(point));
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ (static_cast<std::uint64_t>(point) * 0xD1B54A32D192ED03ull));
    h = mix64(h ^ draw);
    const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    return u < p[point] ? 1 : 0;
}

}  // namespace fairboost
