#include "bregbench/losses.hpp"

#include <algorithm>
#include <cmath>

#include "bregbench/errors.hpp"

namespace bregbench {

namespace {

constexpr std::array<LossId, 9> kAllLosses = {
    LossId::Mse,           LossId::Rmse,         LossId::CrossEntropy,
    LossId::ReverseKl,     LossId::JensenShannon, LossId::ForwardKl,
    LossId::ItakuraSaito,  LossId::GeneralizedI,  LossId::SquaredEuclidean,
};

// Operand clamp for log/ratio terms.
inline double cl(double x, double eps) { return std::clamp(x, eps, 1.0); }

// Stop-gradient slope of the clamp: 1 where the clamp is the identity.
inline double cl_slope(double x, double eps) {
    return (x >= eps && x <= 1.0) ? 1.0 : 0.0;
}

void require_same_size(std::size_t a, std::size_t b, const char* where) {
    if (a != b)
        throw ShapeError(std::string(where) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
}

double sum_squared_error(std::span<const double> p, std::span<const double> q) {
    double acc = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double d = p[j] - q[j];
        acc += d * d;
    }
    return acc;
}

// sum_j x_j * (log cl(x_j) - log cl(y_j)); the KL building block. A zero
// multiplier kills the clipped log, so boundary x is safe.
double kl_sum(std::span<const double> x, std::span<const double> y, double eps) {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j)
        acc += x[j] * (std::log(cl(x[j], eps)) - std::log(cl(y[j], eps)));
    return acc;
}

double loss_value(LossId id, std::span<const double> p, std::span<const double> q, double eps) {
    const std::size_t k = p.size();
    switch (id) {
    case LossId::Mse:
        return sum_squared_error(p, q) / static_cast<double>(k);
    case LossId::Rmse:
        return std::sqrt(sum_squared_error(p, q) / static_cast<double>(k));
    case LossId::SquaredEuclidean:
        return sum_squared_error(p, q);
    case LossId::CrossEntropy: {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            acc -= p[j] * std::log(cl(q[j], eps));
        return acc;
    }
    case LossId::ReverseKl:
        return kl_sum(q, p, eps);
    case LossId::JensenShannon: {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double m = 0.5 * (p[j] + q[j]);
            const double log_m = std::log(cl(m, eps));
            acc += p[j] * (std::log(cl(p[j], eps)) - log_m);
            acc += q[j] * (std::log(cl(q[j], eps)) - log_m);
        }
        return 0.5 * acc;
    }
    case LossId::ForwardKl:
        return kl_sum(p, q, eps);
    case LossId::GeneralizedI: {
        double acc = kl_sum(p, q, eps);
        for (std::size_t j = 0; j < k; ++j)
            acc -= p[j] - q[j];
        return acc;
    }
    case LossId::ItakuraSaito: {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double pc = cl(p[j], eps);
            const double qc = cl(q[j], eps);
            acc += pc / qc - std::log(pc) + std::log(qc) - 1.0;
        }
        return acc;
    }
    }
    throw InvalidInputError("evaluate_loss: unknown loss id");
}

std::vector<double> loss_gradient(LossId id, std::span<const double> p,
                                  std::span<const double> q, double eps) {
    const std::size_t k = p.size();
    std::vector<double> g(k);
    switch (id) {
    case LossId::Mse:
        for (std::size_t j = 0; j < k; ++j)
            g[j] = 2.0 * (q[j] - p[j]) / static_cast<double>(k);
        return g;
    case LossId::SquaredEuclidean:
        for (std::size_t j = 0; j < k; ++j)
            g[j] = 2.0 * (q[j] - p[j]);
        return g;
    case LossId::Rmse: {
        const double mse = sum_squared_error(p, q) / static_cast<double>(k);
        if (mse < kRmseGradientFloor)
            throw SingularGradientError(
                "gradient_wrt_prediction: RMSE derivative is unbounded, MSE=" +
                std::to_string(mse) + " under the 1e-12 floor");
        const double root = std::sqrt(mse);
        for (std::size_t j = 0; j < k; ++j)
            g[j] = (q[j] - p[j]) / (static_cast<double>(k) * root);
        return g;
    }
    case LossId::CrossEntropy:
        for (std::size_t j = 0; j < k; ++j)
            g[j] = -p[j] * cl_slope(q[j], eps) / cl(q[j], eps);
        return g;
    case LossId::ReverseKl:
        for (std::size_t j = 0; j < k; ++j)
            g[j] = std::log(cl(q[j], eps)) - std::log(cl(p[j], eps)) +
                   q[j] * cl_slope(q[j], eps) / cl(q[j], eps);
        return g;
    case LossId::JensenShannon:
        for (std::size_t j = 0; j < k; ++j) {
            const double m = 0.5 * (p[j] + q[j]);
            g[j] = 0.5 * (std::log(cl(q[j], eps)) - std::log(cl(m, eps)) +
                          q[j] * cl_slope(q[j], eps) / cl(q[j], eps) -
                          (p[j] + q[j]) * cl_slope(m, eps) / (2.0 * cl(m, eps)));
        }
        return g;
    case LossId::ForwardKl:
    case LossId::GeneralizedI:
        // Positive-orthant Bregman form: the +1 term makes d(p, p) stationary
        // and is a constant vector, invisible through softmax.
        for (std::size_t j = 0; j < k; ++j)
            g[j] = 1.0 - p[j] * cl_slope(q[j], eps) / cl(q[j], eps);
        return g;
    case LossId::ItakuraSaito:
        for (std::size_t j = 0; j < k; ++j) {
            const double qc = cl(q[j], eps);
            g[j] = cl_slope(q[j], eps) * (qc - cl(p[j], eps)) / (qc * qc);
        }
        return g;
    }
    throw InvalidInputError("gradient_wrt_prediction: unknown loss id");
}

} // namespace

bool is_bregman(LossId id) {
    switch (id) {
    case LossId::ForwardKl:
    case LossId::ItakuraSaito:
    case LossId::GeneralizedI:
    case LossId::SquaredEuclidean:
        return true;
    default:
        return false;
    }
}

std::string loss_name(LossId id) {
    switch (id) {
    case LossId::Mse: return "mse";
    case LossId::Rmse: return "rmse";
    case LossId::CrossEntropy: return "cross_entropy";
    case LossId::ReverseKl: return "reverse_kl";
    case LossId::JensenShannon: return "jensen_shannon";
    case LossId::ForwardKl: return "forward_kl";
    case LossId::ItakuraSaito: return "itakura_saito";
    case LossId::GeneralizedI: return "generalized_i";
    case LossId::SquaredEuclidean: return "squared_euclidean";
    }
    throw InvalidInputError("loss_name: unknown loss id");
}

LossId loss_from_name(const std::string& name) {
    for (LossId id : kAllLosses)
        if (loss_name(id) == name)
            return id;
    throw InvalidInputError("unknown loss name: '" + name + "'");
}

std::span<const LossId> all_losses() { return kAllLosses; }

ProbVector softmax(const Logits& z) {
    const auto& v = z.values();
    const double zmax = *std::max_element(v.begin(), v.end());
    std::vector<double> out(v.size());
    double total = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        out[j] = std::exp(v[j] - zmax);
        total += out[j];
    }
    for (double& x : out)
        x /= total;
    return ProbVector(std::move(out));
}

double evaluate_loss(LossId id, const ProbVector& target, const ProbVector& prediction,
                     const ClipPolicy& clip) {
    require_same_size(target.size(), prediction.size(), "evaluate_loss");
    const double value = loss_value(id, target.span(), prediction.span(), clip.epsilon());
    if (!std::isfinite(value))
        throw NumericDomainError("evaluate_loss: non-finite result for " + loss_name(id) +
                                 " (insufficient clipping)");
    return value;
}

std::vector<double> gradient_wrt_prediction(LossId id, const ProbVector& target,
                                            const ProbVector& prediction,
                                            const ClipPolicy& clip) {
    require_same_size(target.size(), prediction.size(), "gradient_wrt_prediction");
    auto g = loss_gradient(id, target.span(), prediction.span(), clip.epsilon());
    for (double x : g)
        if (!std::isfinite(x))
            throw NumericDomainError("gradient_wrt_prediction: non-finite gradient for " +
                                     loss_name(id));
    return g;
}

std::vector<double> gradient_wrt_logits(LossId id, const ProbVector& target, const Logits& z,
                                        const ClipPolicy& clip) {
    require_same_size(target.size(), z.size(), "gradient_wrt_logits");
    const ProbVector q = softmax(z);
    const auto g = gradient_wrt_prediction(id, target, q, clip);
    // J^T g with J the softmax Jacobian: q_j * (g_j - <q, g>).
    double qg = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
        qg += q[j] * g[j];
    std::vector<double> out(g.size());
    for (std::size_t j = 0; j < g.size(); ++j)
        out[j] = q[j] * (g[j] - qg);
    return out;
}

double batch_loss(LossId id, std::span<const ProbVector> targets,
                  std::span<const ProbVector> predictions, const ClipPolicy& clip) {
    if (targets.empty())
        throw InvalidInputError("batch_loss: empty batch");
    require_same_size(targets.size(), predictions.size(), "batch_loss");
    double acc = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i)
        acc += evaluate_loss(id, targets[i], predictions[i], clip);
    return acc / static_cast<double>(targets.size());
}

double entropy(const ProbVector& p, const ClipPolicy& clip) {
    double acc = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j)
        acc -= p[j] * std::log(cl(p[j], clip.epsilon()));
    return acc;
}

} // namespace bregbench
