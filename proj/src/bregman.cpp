#include "bregbench/bregman.hpp"

#include <algorithm>
#include <cmath>

#include "bregbench/errors.hpp"

namespace bregbench {

namespace {

inline double cl(double x, double eps) { return std::clamp(x, eps, 1.0); }

} // namespace

double bregman_from_phi(const ConvexGenerator& phi, const ProbVector& x, const ProbVector& y,
                        const ClipPolicy& clip) {
    if (x.size() != y.size())
        throw ShapeError("bregman_from_phi: dimension mismatch (" + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()) + ")");

    std::vector<double> y_interior(y.size());
    for (std::size_t j = 0; j < y.size(); ++j)
        y_interior[j] = cl(y[j], clip.epsilon());

    const double phi_x = phi.value(x.span());
    const double phi_y = phi.value(y.span());
    const std::vector<double> grad_y = phi.gradient(y_interior);

    double inner = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j)
        inner += (x[j] - y[j]) * grad_y[j];

    const double d = phi_x - phi_y - inner;
    if (!std::isfinite(d))
        throw NumericDomainError("bregman_from_phi: generator '" + phi.name +
                                 "' produced a non-finite value");
    return d;
}

ConvexGenerator make_squared_norm_generator() {
    ConvexGenerator g;
    g.name = "squared_norm";
    g.value = [](std::span<const double> x) {
        double acc = 0.0;
        for (double v : x)
            acc += v * v;
        return acc;
    };
    g.gradient = [](std::span<const double> x) {
        std::vector<double> out(x.size());
        for (std::size_t j = 0; j < x.size(); ++j)
            out[j] = 2.0 * x[j];
        return out;
    };
    return g;
}

ConvexGenerator make_negative_entropy_generator(const ClipPolicy& clip) {
    const double eps = clip.epsilon();
    ConvexGenerator g;
    g.name = "negative_entropy";
    g.value = [eps](std::span<const double> x) {
        double acc = 0.0;
        for (double v : x)
            acc += v * std::log(cl(v, eps));
        return acc;
    };
    g.gradient = [eps](std::span<const double> x) {
        std::vector<double> out(x.size());
        for (std::size_t j = 0; j < x.size(); ++j)
            out[j] = std::log(cl(x[j], eps)) + 1.0;
        return out;
    };
    return g;
}

ConvexGenerator make_negative_log_generator(const ClipPolicy& clip) {
    const double eps = clip.epsilon();
    ConvexGenerator g;
    g.name = "negative_log";
    g.value = [eps](std::span<const double> x) {
        double acc = 0.0;
        for (double v : x)
            acc -= std::log(cl(v, eps));
        return acc;
    };
    g.gradient = [eps](std::span<const double> x) {
        std::vector<double> out(x.size());
        for (std::size_t j = 0; j < x.size(); ++j)
            out[j] = -1.0 / cl(x[j], eps);
        return out;
    };
    return g;
}

ConvexGenerator make_generalized_i_generator(const ClipPolicy& clip) {
    const double eps = clip.epsilon();
    ConvexGenerator g;
    g.name = "generalized_i";
    g.value = [eps](std::span<const double> x) {
        double acc = 0.0;
        for (double v : x)
            acc += v * std::log(cl(v, eps)) - v;
        return acc;
    };
    g.gradient = [eps](std::span<const double> x) {
        std::vector<double> out(x.size());
        for (std::size_t j = 0; j < x.size(); ++j)
            out[j] = std::log(cl(x[j], eps));
        return out;
    };
    return g;
}

ConvexGenerator generator_for(LossId id, const ClipPolicy& clip) {
    switch (id) {
    case LossId::SquaredEuclidean:
        return make_squared_norm_generator();
    case LossId::ForwardKl:
        return make_negative_entropy_generator(clip);
    case LossId::ItakuraSaito:
        return make_negative_log_generator(clip);
    case LossId::GeneralizedI:
        return make_generalized_i_generator(clip);
    default:
        throw InvalidInputError("generator_for: " + loss_name(id) +
                                " is not a Bregman divergence");
    }
}

} // namespace bregbench
