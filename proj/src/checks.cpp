#include "bregbench/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "bregbench/bregman.hpp"
#include "bregbench/dataset.hpp"
#include "bregbench/errors.hpp"
#include "bregbench/losses.hpp"
#include "bregbench/metrics.hpp"
#include "bregbench/mlp.hpp"
#include "bregbench/rng.hpp"
#include "bregbench/sampling.hpp"
#include "bregbench/synth.hpp"

namespace bregbench {

namespace {

std::string fmt3g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// Category counts cycled through by the sampled checks.
constexpr std::size_t kDims[] = {2, 3, 5, 8};

// Keeps sampled points away from the clip region AND far enough from the
// simplex boundary that +-1e-5 finite-difference steps stay in the smooth
// regime of every loss.
constexpr double kInteriorFloor = 0.02;

constexpr double kFdStep = 1e-5;
constexpr double kFdTolerance = 1e-4;

double fd_relative_error(double analytic, double fd, double scale) {
    const double denom = std::max({std::abs(analytic), std::abs(fd), scale, 1e-3});
    return std::abs(analytic - fd) / denom;
}

ProbVector make_prob(std::vector<double> values) { return ProbVector(std::move(values)); }

// Direction in the simplex tangent space (entries sum to zero), unit norm.
std::vector<double> tangent_direction(Rng& rng, std::size_t k) {
    std::vector<double> v(k);
    while (true) {
        double mean = 0.0;
        for (double& x : v) {
            x = rng.normal();
            mean += x;
        }
        mean /= static_cast<double>(k);
        double norm_sq = 0.0;
        for (double& x : v) {
            x -= mean;
            norm_sq += x * x;
        }
        if (norm_sq > 1e-12) {
            const double inv_norm = 1.0 / std::sqrt(norm_sq);
            for (double& x : v) {
                x *= inv_norm;
            }
            return v;
        }
    }
}

ProbVector shifted(const ProbVector& q, const std::vector<double>& v, double step) {
    std::vector<double> values(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) {
        values[j] = q[j] + step * v[j];
    }
    return ProbVector(std::move(values));
}

bool nearly_equal(double a, double b, double tol) { return std::abs(a - b) <= tol; }

} // namespace

CheckResult check_nonnegativity_and_identity(std::size_t pairs, std::uint64_t seed) {
    Rng rng(seed);
    double worst_negative = 0.0; // most negative divergence seen
    double worst_identity = 0.0;
    for (LossId loss : all_losses()) {
        for (std::size_t i = 0; i < pairs; ++i) {
            const std::size_t k = kDims[i % std::size(kDims)];
            const ProbVector p = random_simplex(rng, k);
            const ProbVector q = random_simplex(rng, k);
            worst_negative = std::min(worst_negative, evaluate_loss(loss, p, q));
            if (loss != LossId::CrossEntropy) {
                worst_identity = std::max(worst_identity, std::abs(evaluate_loss(loss, p, p)));
            }
        }
    }
    CheckResult result;
    result.name = "divergence non-negativity and identity";
    result.pass = worst_negative >= -1e-12 && worst_identity <= 1e-8;
    result.detail = "most negative value " + fmt3g(worst_negative) + ", worst d(p,p) " +
                    fmt3g(worst_identity);
    return result;
}

CheckResult check_bregman_consistency(std::size_t pairs, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (LossId loss : all_losses()) {
        if (!is_bregman(loss)) {
            continue;
        }
        const ConvexGenerator gen = generator_for(loss);
        for (std::size_t i = 0; i < pairs; ++i) {
            const std::size_t k = kDims[i % std::size(kDims)];
            const ProbVector p = random_simplex(rng, k);
            const ProbVector q = random_simplex(rng, k);
            const double direct = evaluate_loss(loss, p, q);
            const double generic = bregman_from_phi(gen, p, q);
            worst = std::max(worst, std::abs(direct - generic));
        }
    }
    CheckResult result;
    result.name = "closed forms match generator Bregman form";
    result.pass = worst <= 1e-9;
    result.detail = "worst |closed - generator| " + fmt3g(worst);
    return result;
}

CheckResult check_eq15_value(std::size_t pairs, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        const std::size_t k = kDims[i % std::size(kDims)];
        const ProbVector p = random_simplex(rng, k);
        const ProbVector q = random_simplex(rng, k);
        const double ce = evaluate_loss(LossId::CrossEntropy, p, q);
        const double kl = evaluate_loss(LossId::ForwardKl, p, q);
        worst = std::max(worst, std::abs(ce - kl - entropy(p)));
    }
    CheckResult result;
    result.name = "cross-entropy = KL + entropy";
    result.pass = worst <= 1e-9;
    result.detail = "worst |CE - KL - H| " + fmt3g(worst);
    return result;
}

CheckResult check_eq15_logit_gradient(std::size_t pairs, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        const std::size_t k = kDims[i % std::size(kDims)];
        const ProbVector p = random_simplex(rng, k);
        std::vector<double> z(k);
        for (double& v : z) {
            v = rng.uniform(-2.0, 2.0);
        }
        const Logits logits(z);
        const auto g_ce = gradient_wrt_logits(LossId::CrossEntropy, p, logits);
        const auto g_kl = gradient_wrt_logits(LossId::ForwardKl, p, logits);
        for (std::size_t j = 0; j < k; ++j) {
            worst = std::max(worst, std::abs(g_ce[j] - g_kl[j]));
        }
    }
    CheckResult result;
    result.name = "logit gradients of CE and forward KL coincide";
    result.pass = worst <= 1e-9;
    result.detail = "worst coordinate gap " + fmt3g(worst);
    return result;
}

CheckResult check_geni_equals_forward_kl(std::size_t pairs, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        const std::size_t k = kDims[i % std::size(kDims)];
        const ProbVector p = random_simplex(rng, k);
        const ProbVector q = random_simplex(rng, k);
        const double geni = evaluate_loss(LossId::GeneralizedI, p, q);
        const double kl = evaluate_loss(LossId::ForwardKl, p, q);
        worst = std::max(worst, std::abs(geni - kl));
    }
    CheckResult result;
    result.name = "generalized I reduces to forward KL on the simplex";
    result.pass = worst <= 1e-12;
    result.detail = "worst |GenI - KL| " + fmt3g(worst);
    return result;
}

CheckResult check_sse_mse_scaling(std::size_t pairs, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        const std::size_t k = kDims[i % std::size(kDims)];
        const ProbVector p = random_simplex(rng, k);
        const ProbVector q = random_simplex(rng, k);
        const double sse = evaluate_loss(LossId::SquaredEuclidean, p, q);
        const double mse = evaluate_loss(LossId::Mse, p, q);
        worst = std::max(worst, std::abs(sse - static_cast<double>(k) * mse));
    }
    CheckResult result;
    result.name = "SSE equals K times MSE";
    result.pass = worst <= 1e-12;
    result.detail = "worst |SSE - K*MSE| " + fmt3g(worst);
    return result;
}

CheckResult check_prediction_gradients(std::size_t points_per_loss, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (LossId loss : all_losses()) {
        for (std::size_t i = 0; i < points_per_loss; ++i) {
            const std::size_t k = kDims[i % std::size(kDims)];
            const ProbVector p = random_simplex(rng, k, kInteriorFloor);
            ProbVector q = random_simplex(rng, k, kInteriorFloor);
            if (loss == LossId::Rmse) {
                while (evaluate_loss(LossId::Mse, p, q) < 1e-8) {
                    q = random_simplex(rng, k, kInteriorFloor);
                }
            }
            // Directional derivative along a simplex tangent: coordinate-wise
            // steps would leave the ProbVector domain, and every consumer of
            // this gradient (softmax chains, simplex-constrained descent)
            // only ever sees tangential components.
            const std::vector<double> v = tangent_direction(rng, k);
            const std::vector<double> g = gradient_wrt_prediction(loss, p, q);
            double analytic = 0.0;
            double g_norm_sq = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                analytic += g[j] * v[j];
                g_norm_sq += g[j] * g[j];
            }
            const double plus = evaluate_loss(loss, p, shifted(q, v, kFdStep));
            const double minus = evaluate_loss(loss, p, shifted(q, v, -kFdStep));
            const double fd = (plus - minus) / (2.0 * kFdStep);
            worst = std::max(worst, fd_relative_error(analytic, fd, std::sqrt(g_norm_sq)));
        }
    }
    CheckResult result;
    result.name = "prediction-space gradients match finite differences";
    result.pass = worst < kFdTolerance;
    result.detail = "worst relative error " + fmt3g(worst);
    return result;
}

CheckResult check_logit_gradients(std::size_t points_per_loss, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (LossId loss : all_losses()) {
        for (std::size_t i = 0; i < points_per_loss; ++i) {
            const std::size_t k = kDims[i % std::size(kDims)];
            const ProbVector p = random_simplex(rng, k, 1e-3);
            std::vector<double> z(k);
            for (double& value : z) {
                value = rng.uniform(-2.0, 2.0);
            }
            if (loss == LossId::Rmse &&
                evaluate_loss(LossId::Mse, p, softmax(Logits(z))) < 1e-8) {
                --i;
                continue;
            }
            const std::vector<double> g = gradient_wrt_logits(loss, p, Logits(z));
            for (std::size_t j = 0; j < k; ++j) {
                std::vector<double> z_plus = z;
                std::vector<double> z_minus = z;
                z_plus[j] += kFdStep;
                z_minus[j] -= kFdStep;
                const double plus = evaluate_loss(loss, p, softmax(Logits(z_plus)));
                const double minus = evaluate_loss(loss, p, softmax(Logits(z_minus)));
                const double fd = (plus - minus) / (2.0 * kFdStep);
                worst = std::max(worst, fd_relative_error(g[j], fd, 0.0));
            }
        }
    }
    CheckResult result;
    result.name = "logit-space gradients match finite differences";
    result.pass = worst < kFdTolerance;
    result.detail = "worst relative error " + fmt3g(worst);
    return result;
}

CheckResult check_mlp_gradients(std::size_t points, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t sizes[] = {3, 4, 2};
    double worst = 0.0;
    for (LossId loss : all_losses()) {
        for (std::size_t i = 0; i < points; ++i) {
            const MlpParams params = glorot_init(sizes, rng.next_u64());
            std::vector<double> x(sizes[0]);
            ProbVector target = random_simplex(rng, sizes[2], 0.05);
            // Keep hidden pre-activations away from the ReLU kink so the
            // finite-difference window stays on one side of it.
            while (true) {
                for (double& value : x) {
                    value = rng.normal();
                }
                Eigen::Map<const Eigen::VectorXd> xv(x.data(), 3);
                const Eigen::VectorXd z1 = params.weights[0] * xv + params.biases[0];
                if (z1.cwiseAbs().minCoeff() > 1e-3) {
                    break;
                }
            }
            if (loss == LossId::Rmse) {
                const ProbVector pred = forward(params, x).probabilities;
                if (evaluate_loss(LossId::Mse, target, pred) < 1e-8) {
                    --i;
                    continue;
                }
            }
            const MlpParams analytic = backward(params, x, target, loss);
            auto fd_at = [&](auto mutate) {
                MlpParams plus = params;
                MlpParams minus = params;
                mutate(plus, kFdStep);
                mutate(minus, -kFdStep);
                const double lp =
                    evaluate_loss(loss, target, forward(plus, x).probabilities);
                const double lm =
                    evaluate_loss(loss, target, forward(minus, x).probabilities);
                return (lp - lm) / (2.0 * kFdStep);
            };
            for (std::size_t l = 0; l < params.weights.size(); ++l) {
                for (Eigen::Index r = 0; r < params.weights[l].rows(); ++r) {
                    for (Eigen::Index c = 0; c < params.weights[l].cols(); ++c) {
                        const double fd = fd_at([&](MlpParams& m, double h) {
                            m.weights[l](r, c) += h;
                        });
                        worst = std::max(worst,
                                         fd_relative_error(analytic.weights[l](r, c), fd, 0.0));
                    }
                    const double fd = fd_at([&](MlpParams& m, double h) {
                        m.biases[l](r) += h;
                    });
                    worst = std::max(worst, fd_relative_error(analytic.biases[l](r), fd, 0.0));
                }
            }
        }
    }
    CheckResult result;
    result.name = "end-to-end MLP gradients match finite differences";
    result.pass = worst < kFdTolerance;
    result.detail = "worst relative error " + fmt3g(worst);
    return result;
}

CheckResult check_mean_minimizer(std::size_t points, std::uint64_t seed) {
    Rng rng(seed);
    constexpr std::size_t k = 4;
    double worst = 0.0;
    std::string slowest;
    for (LossId loss : all_losses()) {
        if (!is_bregman(loss)) {
            continue;
        }
        std::vector<ProbVector> xs;
        xs.reserve(points);
        std::vector<double> mean(k, 0.0);
        for (std::size_t i = 0; i < points; ++i) {
            xs.push_back(random_simplex(rng, k, 1e-3));
            for (std::size_t j = 0; j < k; ++j) {
                mean[j] += xs.back()[j];
            }
        }
        for (double& m : mean) {
            m /= static_cast<double>(points);
        }

        // Minimize sum_i d(x_i, softmax(z)) by gradient descent with Armijo
        // backtracking; softmax keeps the iterate on the simplex interior.
        auto objective = [&](const std::vector<double>& z) {
            const ProbVector y = softmax(Logits(z));
            double total = 0.0;
            for (const ProbVector& x : xs) {
                total += evaluate_loss(loss, x, y);
            }
            return total;
        };
        auto gradient = [&](const std::vector<double>& z) {
            const Logits logits(z);
            std::vector<double> g(k, 0.0);
            for (const ProbVector& x : xs) {
                const std::vector<double> gi = gradient_wrt_logits(loss, x, logits);
                for (std::size_t j = 0; j < k; ++j) {
                    g[j] += gi[j];
                }
            }
            return g;
        };

        std::vector<double> z(k, 0.0);
        double f = objective(z);
        double step = 1.0;
        for (std::size_t iter = 0; iter < 50000; ++iter) {
            const std::vector<double> g = gradient(z);
            double g_inf = 0.0;
            double g_norm_sq = 0.0;
            for (double gj : g) {
                g_inf = std::max(g_inf, std::abs(gj));
                g_norm_sq += gj * gj;
            }
            if (g_inf <= 1e-9) {
                break;
            }
            step = std::min(step * 2.0, 1e3);
            bool moved = false;
            while (step >= 1e-12) {
                std::vector<double> z_next(k);
                for (std::size_t j = 0; j < k; ++j) {
                    z_next[j] = z[j] - step * g[j];
                }
                const double f_next = objective(z_next);
                if (f_next <= f - 1e-4 * step * g_norm_sq) {
                    z = std::move(z_next);
                    f = f_next;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) {
                break;
            }
        }

        const ProbVector y = softmax(Logits(z));
        for (std::size_t j = 0; j < k; ++j) {
            worst = std::max(worst, std::abs(y[j] - mean[j]));
        }
    }
    CheckResult result;
    result.name = "Bregman barycenter is the arithmetic mean";
    result.pass = worst <= 1e-3;
    result.detail = "worst coordinate deviation " + fmt3g(worst);
    return result;
}

CheckResult check_metric_examples() {
    std::vector<std::string> failures;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) {
            failures.push_back(what);
        }
    };

    expect(rank_categories(make_prob({0.2, 0.5, 0.3})) == RankPermutation{1, 2, 0},
           "rank [0.2,0.5,0.3]");
    expect(rank_categories(make_prob({1.0 / 3, 1.0 / 3, 1.0 / 3})) == RankPermutation{0, 1, 2},
           "rank uniform ties");
    expect(rank_categories(make_prob({1.0, 0.0})) == RankPermutation{0, 1}, "rank degenerate");

    {
        const std::vector<double> d = convergence_delta({10.0, 5.0, 4.0});
        expect(d.size() == 2 && nearly_equal(d[0], 0.5, 1e-15) && nearly_equal(d[1], 0.2, 1e-15),
               "delta [10,5,4]");
        const std::vector<double> constant = convergence_delta({3.0, 3.0, 3.0});
        expect(constant == std::vector<double>({0.0, 0.0}), "delta constant");
        const std::vector<double> up = convergence_delta({1.0, 2.0});
        expect(up.size() == 1 && nearly_equal(up[0], 1.0, 1e-15), "delta [1,2]");
    }
    {
        expect(epochs_to_converge({10.0, 5.0, 4.9, 4.85}, 0.05) == std::size_t{1},
               "converge at t=1");
        expect(epochs_to_converge({3.0, 3.0, 3.0}, 0.01) == std::size_t{0}, "constant converges");
        expect(!epochs_to_converge({16.0, 8.0, 4.0, 2.0, 1.0}, 0.05).has_value(),
               "halving never converges");
    }
    {
        // Argmax pattern: true [0,0,1,1], predicted [0,1,1,1].
        const std::vector<ProbVector> t = {make_prob({0.9, 0.1}), make_prob({0.8, 0.2}),
                                           make_prob({0.3, 0.7}), make_prob({0.1, 0.9})};
        const std::vector<ProbVector> p = {make_prob({0.6, 0.4}), make_prob({0.4, 0.6}),
                                           make_prob({0.2, 0.8}), make_prob({0.45, 0.55})};
        expect(nearly_equal(macro_f1(t, p, 2), 11.0 / 15.0, 1e-12), "macro F1 11/15");
        expect(nearly_equal(macro_f1(t, t, 2), 1.0, 0.0), "macro F1 perfect");
    }
    {
        // Class 2 never occurs and is never predicted: contributes F1 = 0.
        const std::vector<ProbVector> t = {make_prob({0.8, 0.1, 0.1}), make_prob({0.1, 0.8, 0.1})};
        expect(nearly_equal(macro_f1(t, t, 3), 2.0 / 3.0, 1e-12), "macro F1 silent class");
    }
    {
        const std::vector<ProbVector> t = {make_prob({0.8, 0.2})};
        const std::vector<ProbVector> reversed = {make_prob({0.2, 0.8})};
        expect(nearly_equal(ndcg(t, t), 1.0, 0.0), "NDCG perfect");
        expect(nearly_equal(ndcg(t, reversed), 0.760909623292876, 1e-12), "NDCG reversed pair");
        const std::vector<ProbVector> uniform = {make_prob({0.5, 0.5})};
        expect(nearly_equal(ndcg(uniform, reversed), 1.0, 1e-15), "NDCG uniform target");
    }
    {
        const std::vector<ProbVector> t = {make_prob({0.7, 0.3}), make_prob({0.2, 0.8})};
        const std::vector<ProbVector> reversed = {make_prob({0.3, 0.7}), make_prob({0.8, 0.2})};
        expect(nearly_equal(accuracy_ranking_decrease(t, t), 0.75, 1e-15), "acc_rank H_2/2");
        expect(nearly_equal(accuracy_ranking_decrease(t, reversed), 0.0, 0.0),
               "acc_rank reversed");
        const std::vector<ProbVector> t3 = {make_prob({0.5, 0.3, 0.2})};
        const std::vector<ProbVector> swapped_tail = {make_prob({0.5, 0.2, 0.3})};
        expect(nearly_equal(accuracy_ranking_decrease(t3, swapped_tail), 1.0 / 3.0, 1e-15),
               "acc_rank tail swap");
    }

    CheckResult result;
    result.name = "metric reference examples";
    result.pass = failures.empty();
    if (failures.empty()) {
        result.detail = "all reference values reproduced";
    } else {
        result.detail = "failed: ";
        for (std::size_t i = 0; i < failures.size(); ++i) {
            result.detail += (i ? ", " : "") + failures[i];
        }
    }
    return result;
}

CheckResult check_dataset_roundtrip(std::uint64_t seed) {
    SynthConfig cfg;
    cfg.instances = 24;
    cfg.feature_dim = 3;
    cfg.categories = 4;
    cfg.annotators_per_item = 7;
    cfg.teacher_hidden = 5;
    cfg.seed = seed;
    const LabeledDataset original = generate_synthetic(cfg).dataset;

    const std::filesystem::path path =
        std::filesystem::temp_directory_path() / "bregbench_roundtrip_check.csv";
    save_dataset(original, path);
    const LabeledDataset loaded = load_dataset(path);
    std::filesystem::remove(path);

    bool same = loaded.size() == original.size();
    double worst = 0.0;
    for (std::size_t i = 0; same && i < original.size(); ++i) {
        if (loaded[i].features != original[i].features) {
            same = false;
            break;
        }
        for (std::size_t j = 0; j < original.categories(); ++j) {
            worst = std::max(worst, std::abs(loaded[i].target[j] - original[i].target[j]));
        }
    }
    CheckResult result;
    result.name = "dataset save/load round trip";
    result.pass = same && worst == 0.0;
    result.detail = same ? ("worst target drift " + fmt3g(worst)) : "structure mismatch";
    return result;
}

std::vector<CheckResult> run_property_checks() {
    return {
        check_nonnegativity_and_identity(10000, 0xb1),
        check_bregman_consistency(10000, 0xb2),
        check_eq15_value(10000, 0xb3),
        check_eq15_logit_gradient(1000, 0xb4),
        check_geni_equals_forward_kl(10000, 0xb5),
        check_sse_mse_scaling(10000, 0xb6),
        check_prediction_gradients(200, 0xb7),
        check_logit_gradients(200, 0xb8),
        check_mlp_gradients(200, 0xb9),
        check_mean_minimizer(50, 0xba),
        check_metric_examples(),
        check_dataset_roundtrip(0xbb),
    };
}

} // namespace bregbench
