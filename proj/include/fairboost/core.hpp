#pragma once

// Finite-domain data model and exact evaluation of the fairness metrics.
//
// Every expectation here is an exact weighted sum over the domain. Labels are
// stored as label(x) = E[y | x] in [0,1]; a deterministic target g is the
// special case label(x) in {0,1}.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairboost/error.hpp"

namespace fairboost {

/// Comparison tolerance for exact identities.
inline constexpr double kIdentityTolerance = 1e-12;
/// Comparison tolerance for asserted inequalities.
inline constexpr double kInequalityTolerance = 1e-9;

enum class LabelKind { Bayes, Deterministic };

class FiniteInstance {
public:
    FiniteInstance(std::vector<std::string> points, std::vector<double> weights, LabelKind kind,
                   std::vector<double> labels);

    /// Uniform distribution over {-1,1}^n. Point k has id given by the bits of k
    /// (character i is bit i; '0' means x_{i+1} = +1, '1' means x_{i+1} = -1).
    static FiniteInstance hypercube(int n, LabelKind kind, std::vector<double> labels);

    std::size_t size() const noexcept { return points_.size(); }
    const std::vector<std::string>& points() const noexcept { return points_; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::span<const double> labels() const noexcept { return labels_; }
    double weight(std::size_t i) const { return weights_[i]; }
    double label(std::size_t i) const { return labels_[i]; }
    LabelKind label_kind() const noexcept { return kind_; }
    bool deterministic() const noexcept { return kind_ == LabelKind::Deterministic; }

    /// Set when the domain is the full hypercube {-1,1}^n in canonical order.
    std::optional<int> hypercube_dim() const noexcept { return hypercube_dim_; }
    bool uniform() const;

    std::size_t index_of(const std::string& id) const;

    /// Same points and labels under a new distribution (validated).
    FiniteInstance with_weights(std::vector<double> weights) const;
    FiniteInstance with_labels(LabelKind kind, std::vector<double> labels) const;

private:
    std::vector<std::string> points_;
    std::vector<double> weights_;
    LabelKind kind_;
    std::vector<double> labels_;
    std::optional<int> hypercube_dim_;
    std::map<std::string, std::size_t> index_;
};

std::string hypercube_point_id(int n, std::uint32_t bits);

/// A map from domain points to [0,1]. When a grid step is present every value
/// is an integer multiple of it.
class Predictor {
public:
    explicit Predictor(std::vector<double> values, std::optional<double> grid = std::nullopt);

    static Predictor constant(std::size_t n, double value, std::optional<double> grid = std::nullopt);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::optional<double> grid() const noexcept { return grid_; }

private:
    std::vector<double> values_;
    std::optional<double> grid_;
};

/// Nearest multiple of `grid`, computed as k / round(1/grid) so that equal
/// indices give bit-identical doubles.
double snap_to_grid(double v, double grid);

enum class HypothesisKind { Bounded, Boolean01, BooleanPM };

const char* to_string(HypothesisKind kind);

struct Hypothesis {
    std::string name;
    HypothesisKind kind = HypothesisKind::Bounded;
    std::vector<double> values;

    Hypothesis() = default;
    Hypothesis(std::string name, HypothesisKind kind, std::vector<double> values);

    /// {0,1} -> {-1,1} via 2c - 1; other kinds are returned unchanged.
    Hypothesis to_pm1() const;
};

struct ClassFlags {
    bool contains_constant_one = false;
    bool negation_closed = false;
};

class HypothesisClass {
public:
    HypothesisClass() = default;
    /// `required` flags are checked against a scan of the value tables; a flag
    /// that does not hold raises InvalidArgument.
    explicit HypothesisClass(std::vector<Hypothesis> hypotheses, ClassFlags required = {});

    bool empty() const noexcept { return hypotheses_.empty(); }
    std::size_t size() const noexcept { return hypotheses_.size(); }
    const Hypothesis& operator[](std::size_t i) const { return hypotheses_[i]; }
    const std::vector<Hypothesis>& hypotheses() const noexcept { return hypotheses_; }
    HypothesisKind kind() const noexcept { return kind_; }
    bool contains_constant_one() const noexcept { return flags_.contains_constant_one; }
    bool negation_closed() const noexcept { return flags_.negation_closed; }
    /// Both constants 0 and 1 are present (only meaningful for Boolean01 classes).
    bool contains_constants() const noexcept { return has_zero_ && flags_.contains_constant_one; }

    /// Adds the constant 1 (and 0 for Boolean01) plus the negation of every
    /// member, dropping duplicate value tables.
    HypothesisClass closed() const;
    HypothesisClass to_pm1() const;

private:
    std::vector<Hypothesis> hypotheses_;
    HypothesisKind kind_ = HypothesisKind::Bounded;
    ClassFlags flags_;
    bool has_zero_ = false;
};

/// Weight functions w : [0,1] -> [1, w_max] used by weighted multiaccuracy.
class WeightFn {
public:
    enum class Kind { WMax, Constant, Table };

    static WeightFn one();
    static WeightFn wmax();
    /// Grid-valued table; every entry must satisfy 1 <= w(v) <= w_max(v).
    static WeightFn table(std::map<double, double> entries);

    Kind kind() const noexcept { return kind_; }
    /// Throws InvalidArgument when the table has no entry for v.
    double operator()(double v) const;
    bool defined_at(double v) const;

private:
    Kind kind_ = Kind::Constant;
    std::map<double, double> table_;
};

/// 1 / max(v, 1 - v), in [1, 2].
double w_max(double v);

enum class Metric { EAE, ECE, MA, WeightedMA, MC, Opt, HardnessAdvantage };

const char* to_string(Metric metric);

struct AuditReport {
    Metric metric = Metric::MA;
    double value = 0.0;
    std::optional<std::string> witness;
    std::optional<double> level;
};

struct LevelSet {
    double value = 0.0;
    double mass = 0.0;
    double label_mean = 0.0;  ///< E[y | p(x) = value]
    std::vector<std::size_t> members;
};

/// Level sets of p in ascending order of value, keyed by exact value.
std::vector<LevelSet> level_sets(const FiniteInstance& inst, const Predictor& p);

void check_domain(const FiniteInstance& inst, std::size_t table_size, const std::string& what);

/// E[(2y - 1) h(x)] for a [-1,1]-valued table.
double correlation(const FiniteInstance& inst, std::span<const double> h);
double correlation(const FiniteInstance& inst, const Hypothesis& h);
/// Correlation of the [-1,1] version 2p - 1.
double correlation(const FiniteInstance& inst, const Predictor& p);

AuditReport opt_correlation(const FiniteInstance& inst, const HypothesisClass& cls);

double eae(const FiniteInstance& inst, const Predictor& p);

/// Primal form E[|E[y|p] - p|] over level sets.
AuditReport ece(const FiniteInstance& inst, const Predictor& p);
/// Dual form E[v(p)(y - p)] with the maximizing v(t) = sign(E[y|p=t] - t).
double ece_dual(const FiniteInstance& inst, const Predictor& p);

AuditReport ma_error(const FiniteInstance& inst, const Predictor& p, const HypothesisClass& cls);
AuditReport weighted_ma_error(const FiniteInstance& inst, const Predictor& p, const HypothesisClass& cls,
                              const WeightFn& w);
/// max_c E[|c(x) (E[y|p(x)] - p(x))|] with c inside the absolute value.
AuditReport mc_error(const FiniteInstance& inst, const Predictor& p, const HypothesisClass& cls);

/// E[(y - v(x))^2] taken exactly over y | x.
double squared_loss(const FiniteInstance& inst, std::span<const double> values);

/// Bernoulli(p(point)) draw; a pure function of (seed, point, draw).
int sample_label(const Predictor& p, std::size_t point, std::uint64_t seed, std::uint64_t draw);

/// Counter-based label sampler: each call consumes one draw index.
class BernoulliSampler {
public:
    BernoulliSampler(const Predictor& p, std::uint64_t seed) : p_(&p), seed_(seed) {}
    int operator()(std::size_t point) { return sample_label(*p_, point, seed_, draw_++); }
    std::uint64_t draws() const noexcept { return draw_; }

private:
    const Predictor* p_;
    std::uint64_t seed_;
    std::uint64_t draw_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace fairboost
