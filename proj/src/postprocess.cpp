#include "fairboost/postprocess.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace fairboost {

std::vector<double> affine_pm1(const Predictor& p) {
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = 2.0 * p[i] - 1.0;
    return out;
}

Hypothesis threshold(const Predictor& p) {
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = 2.0 * p[i] - 1.0 >= 0.0 ? 1.0 : -1.0;
    return Hypothesis("sign(2p-1)", HypothesisKind::BooleanPM, std::move(out));
}

double PostProcessor::operator()(double v) const {
    const auto it = table.find(v == 0.0 ? 0.0 : v);
    if (it == table.end()) throw InvalidArgument("post-processor undefined at value " + std::to_string(v));
    return it->second;
}

std::vector<double> PostProcessor::apply(const Predictor& p) const {
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = (*this)(p[i]);
    return out;
}

double postprocessed_correlation(const FiniteInstance& inst, const Predictor& p, const PostProcessor& k) {
    check_domain(inst, p.size(), "predictor");
    return correlation(inst, std::span<const double>(k.apply(p)));
}

PostProcessResult best_postprocessing(const FiniteInstance& inst, const Predictor& p) {
    check_domain(inst, p.size(), "predictor");
    PostProcessResult result;
    for (const auto& level : level_sets(inst, p)) {
        // mass * E[2y - 1 | p = v]
        const double bias = level.mass * (2.0 * level.label_mean - 1.0);
        result.k.table[level.value] = bias >= 0.0 ? 1.0 : -1.0;
        result.correlation += std::abs(bias);
    }
    return result;
}

SqLossConversion sqloss_to_correlation(const FiniteInstance& inst, std::span<const double> h) {
    check_domain(inst, h.size(), "h");
    SqLossConversion out;
    out.truncated.resize(h.size());
    out.bounded.resize(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        out.truncated[i] = std::clamp(h[i], 0.0, 1.0);
        out.bounded[i] = 2.0 * out.truncated[i] - 1.0;
    }
    const std::vector<double> half(h.size(), 0.5);
    out.gamma = squared_loss(inst, half) - squared_loss(inst, h);
    out.correlation = correlation(inst, std::span<const double>(out.bounded));
    return out;
}

ProjectionResult project_span(const FiniteInstance& inst, const Predictor& p, const HypothesisClass& cls,
                              std::optional<double> tau, std::optional<double> l1_budget) {
    if (cls.empty()) throw EmptyClass();
    check_domain(inst, p.size(), "predictor");
    check_domain(inst, cls[0].values.size(), "hypothesis class");
    if (l1_budget && !(*l1_budget >= 0.0)) throw InvalidArgument("l1_budget must be nonnegative");

    const auto n = static_cast<Eigen::Index>(inst.size());
    const auto m = static_cast<Eigen::Index>(cls.size());
    const std::vector<double> target = affine_pm1(p);

    Eigen::MatrixXd c(n, m);
    for (Eigen::Index s = 0; s < m; ++s) {
        for (Eigen::Index i = 0; i < n; ++i) c(i, s) = cls[static_cast<std::size_t>(s)].values[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(inst.weights().data(), n);
    const Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(target.data(), n);
    const Eigen::MatrixXd gram = c.transpose() * w.asDiagonal() * c;
    const Eigen::VectorXd rhs = c.transpose() * w.asDiagonal() * t;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double top = sigma.size() > 0 ? sigma(0) : 0.0;
    ProjectionResult out;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
    double smallest = top;
    for (Eigen::Index k = 0; k < sigma.size(); ++k) {
        if (top > 0.0 && sigma(k) > 1e-10 * top) {
            inv(k) = 1.0 / sigma(k);
            smallest = sigma(k);
            ++out.rank;
        }
    }
    out.condition_number = out.rank > 0 ? top / smallest : 0.0;
    Eigen::VectorXd lambda = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose() * rhs;

    double l1 = lambda.cwiseAbs().sum();
    if (l1_budget && l1 > *l1_budget) {
        lambda *= *l1_budget / l1;
        l1 = lambda.cwiseAbs().sum();
    }
    const Eigen::VectorXd q = c * lambda;

    out.l1_norm = l1;
    for (Eigen::Index s = 0; s < m; ++s) out.coefficients.emplace_back(cls[static_cast<std::size_t>(s)].name, lambda(s));
    out.q_values.assign(q.data(), q.data() + n);
    out.h_values.resize(out.q_values.size());
    double before = 0.0;
    double after = 0.0;
    for (std::size_t i = 0; i < out.q_values.size(); ++i) {
        out.h_values[i] = std::clamp(out.q_values[i], -1.0, 1.0);
        before += inst.weight(i) * target[i] * target[i];
        const double r = target[i] - out.q_values[i];
        after += inst.weight(i) * r * r;
        const double y = inst.label(i);
        const double h = out.h_values[i];
        out.clipped_loss += inst.weight(i) * (y * (1.0 - h) * (1.0 - h) + (1.0 - y) * (1.0 + h) * (1.0 + h));
    }
    out.gamma = before - after;
    if (tau) {
        out.tau = tau;
        out.bound = 1.0 - out.gamma + 4.0 * *tau * out.l1_norm;
    }
    return out;
}

}  // namespace fairboost
