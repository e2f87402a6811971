#include <doctest.h>

#include <cmath>
#include <vector>

#include "bregbench/errors.hpp"
#include "bregbench/losses.hpp"
#include "bregbench/rng.hpp"
#include "bregbench/sampling.hpp"

using namespace bregbench;

namespace {

ProbVector pv(std::vector<double> values) { return ProbVector(std::move(values)); }

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

} // namespace

TEST_SUITE("losses") {

TEST_CASE("softmax reference points") {
    const ProbVector uniform = softmax(Logits({0.0, 0.0}));
    CHECK(uniform[0] == 0.5);
    CHECK(uniform[1] == 0.5);

    const ProbVector thirds = softmax(Logits({7.25, 7.25, 7.25}));
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(close(thirds[j], 1.0 / 3.0, 1e-15));

    const ProbVector two_thirds = softmax(Logits({std::log(2.0), 0.0}));
    CHECK(close(two_thirds[0], 2.0 / 3.0, 1e-15));
    CHECK(close(two_thirds[1], 1.0 / 3.0, 1e-15));

    // Shift invariance and overflow safety via max subtraction.
    const ProbVector shifted = softmax(Logits({1000.0 + std::log(2.0), 1000.0}));
    CHECK(close(shifted[0], 2.0 / 3.0, 1e-15));
    const ProbVector extreme = softmax(Logits({1e4, -1e4}));
    CHECK(extreme[0] > 0.999999);
    CHECK(std::isfinite(extreme[1]));

    CHECK_THROWS_AS(Logits({1.0, std::nan("")}), InvalidInputError);
}

TEST_CASE("values at the reference pair p=[0.8,0.2], q=[0.5,0.5]") {
    const ProbVector p = pv({0.8, 0.2});
    const ProbVector q = pv({0.5, 0.5});
    CHECK(close(evaluate_loss(LossId::SquaredEuclidean, p, q), 0.18, 1e-15));
    CHECK(close(evaluate_loss(LossId::Mse, p, q), 0.09, 1e-15));
    CHECK(close(evaluate_loss(LossId::Rmse, p, q), 0.3, 1e-15));
    CHECK(close(evaluate_loss(LossId::CrossEntropy, p, q), 0.6931471805599453, 1e-15));
    CHECK(close(evaluate_loss(LossId::ForwardKl, p, q), 0.19274475702175742, 1e-15));
    CHECK(close(evaluate_loss(LossId::ReverseKl, p, q), 0.22314355131420976, 1e-15));
    CHECK(close(evaluate_loss(LossId::JensenShannon, p, q), 0.05067183698556586, 1e-14));
    CHECK(close(evaluate_loss(LossId::ItakuraSaito, p, q), 0.44628710262841953, 1e-14));
    CHECK(close(evaluate_loss(LossId::GeneralizedI, p, q), 0.19274475702175742, 1e-14));
}

TEST_CASE("further reference values") {
    // SSE carries no 1/K; MSE does.
    CHECK(evaluate_loss(LossId::SquaredEuclidean, pv({1.0, 0.0}), pv({0.5, 0.5})) == 0.5);
    CHECK(evaluate_loss(LossId::Mse, pv({1.0, 0.0}), pv({0.5, 0.5})) == 0.25);
    CHECK(close(evaluate_loss(LossId::ItakuraSaito, pv({0.5, 0.5}), pv({0.25, 0.75})),
                0.37898459421488573, 1e-14));
    // Maximal disagreement: zero entries contribute nothing to the clipped
    // log terms, so JS lands on ln 2 exactly.
    CHECK(close(evaluate_loss(LossId::JensenShannon, pv({1.0, 0.0}), pv({0.0, 1.0})),
                0.6931471805599453, 1e-15));
    CHECK(close(evaluate_loss(LossId::CrossEntropy, pv({0.5, 0.5}), pv({0.5, 0.5})),
                0.6931471805599453, 1e-15));
}

TEST_CASE("identity of indiscernibles") {
    const ProbVector p = pv({0.3, 0.45, 0.25});
    for (LossId id : all_losses()) {
        if (id == LossId::CrossEntropy)
            continue;
        CHECK(std::abs(evaluate_loss(id, p, p)) <= 1e-12);
    }
}

TEST_CASE("clipping applies only inside log terms") {
    const ProbVector p = pv({0.5, 0.5});
    const ProbVector q = pv({1.0, 0.0});
    CHECK(close(evaluate_loss(LossId::CrossEntropy, p, q), 8.05904782547916, 1e-12));
    CHECK(close(evaluate_loss(LossId::CrossEntropy, p, q, ClipPolicy(1e-4)),
                4.605170185988092, 1e-12));
    // Difference terms stay exact regardless of the policy.
    CHECK(evaluate_loss(LossId::Mse, p, q) == 0.25);
    CHECK(evaluate_loss(LossId::Mse, p, q, ClipPolicy(1e-4)) == 0.25);
}

TEST_CASE("entropy") {
    CHECK(close(entropy(pv({0.5, 0.5})), 0.6931471805599453, 1e-15));
    CHECK(entropy(pv({1.0, 0.0})) == 0.0); // 0 * log(clip(0)) is exactly 0
    CHECK(close(entropy(pv({0.8, 0.2})), 0.5004024235381879, 1e-15));
}

TEST_CASE("cross-entropy decomposes into entropy plus forward KL") {
    Rng rng(41);
    for (int i = 0; i < 100; ++i) {
        const ProbVector p = random_simplex(rng, 5);
        const ProbVector q = random_simplex(rng, 5);
        const double ce = evaluate_loss(LossId::CrossEntropy, p, q);
        const double kl = evaluate_loss(LossId::ForwardKl, p, q);
        CHECK(close(ce, kl + entropy(p), 1e-12));
    }
}

TEST_CASE("prediction gradients at reference points") {
    const ProbVector p = pv({0.8, 0.2});
    const ProbVector q = pv({0.5, 0.5});

    const auto mse = gradient_wrt_prediction(LossId::Mse, pv({1.0, 0.0}), pv({0.5, 0.5}));
    CHECK(mse[0] == -0.5);
    CHECK(mse[1] == 0.5);

    const auto ce = gradient_wrt_prediction(LossId::CrossEntropy, p, q);
    CHECK(close(ce[0], -1.6, 1e-15));
    CHECK(close(ce[1], -0.4, 1e-15));

    const auto is = gradient_wrt_prediction(LossId::ItakuraSaito, p, q);
    CHECK(close(is[0], -1.2, 1e-15));
    CHECK(close(is[1], 1.2, 1e-15));

    const auto rkl = gradient_wrt_prediction(LossId::ReverseKl, p, q);
    CHECK(close(rkl[0], 0.5299963707542644, 1e-15));
    CHECK(close(rkl[1], 1.916290731874155, 1e-15));

    // SSE gradient is exactly K times the MSE gradient.
    const auto sse = gradient_wrt_prediction(LossId::SquaredEuclidean, p, q);
    const auto mse2 = gradient_wrt_prediction(LossId::Mse, p, q);
    for (std::size_t j = 0; j < 2; ++j)
        CHECK(close(sse[j], 2.0 * mse2[j], 1e-16));
}

TEST_CASE("forward KL and generalized I gradients vanish at p = q") {
    const ProbVector p = pv({0.3, 0.45, 0.25});
    for (LossId id : {LossId::ForwardKl, LossId::GeneralizedI}) {
        const auto g = gradient_wrt_prediction(id, p, p);
        for (double gj : g)
            CHECK(gj == 0.0);
    }
}

TEST_CASE("RMSE gradient is singular at p = q") {
    const ProbVector p = pv({0.6, 0.4});
    CHECK_THROWS_AS((void)gradient_wrt_prediction(LossId::Rmse, p, p), SingularGradientError);
    CHECK(evaluate_loss(LossId::Rmse, p, p) == 0.0); // the value itself is fine
    // Away from the singularity the gradient exists.
    CHECK_NOTHROW((void)gradient_wrt_prediction(LossId::Rmse, p, pv({0.5, 0.5})));
}

TEST_CASE("logit gradients") {
    const auto g2 = gradient_wrt_logits(LossId::CrossEntropy, pv({1.0, 0.0}), Logits({0.0, 0.0}));
    CHECK(close(g2[0], -0.5, 1e-16));
    CHECK(close(g2[1], 0.5, 1e-16));

    const auto g3 =
        gradient_wrt_logits(LossId::CrossEntropy, pv({0.2, 0.3, 0.5}), Logits({1.0, 2.0, 3.0}));
    CHECK(close(g3[0], -0.10996942682961955, 1e-15));
    CHECK(close(g3[1], -0.05527152894520235, 1e-15));
    CHECK(close(g3[2], 0.1652409557748219, 1e-15));

    // Stationary at the matched point: softmax(log p) = p.
    const ProbVector p = pv({0.2, 0.3, 0.5});
    const Logits z({std::log(0.2), std::log(0.3), std::log(0.5)});
    for (LossId id : {LossId::ForwardKl, LossId::CrossEntropy, LossId::Mse}) {
        for (double gj : gradient_wrt_logits(id, p, z))
            CHECK(std::abs(gj) <= 1e-15);
    }
}

TEST_CASE("CE and forward KL share logit gradients on random pairs") {
    Rng rng(42);
    for (int i = 0; i < 100; ++i) {
        const ProbVector p = random_simplex(rng, 4);
        std::vector<double> z(4);
        for (double& v : z)
            v = rng.uniform(-3.0, 3.0);
        const auto ce = gradient_wrt_logits(LossId::CrossEntropy, p, Logits(z));
        const auto kl = gradient_wrt_logits(LossId::ForwardKl, p, Logits(z));
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(close(ce[j], kl[j], 1e-9));
    }
}

TEST_CASE("batch_loss") {
    const ProbVector p = pv({1.0, 0.0});
    const ProbVector q = pv({0.5, 0.5});
    const std::vector<ProbVector> one_t = {p};
    const std::vector<ProbVector> one_q = {q};
    CHECK(batch_loss(LossId::ForwardKl, one_t, one_q) ==
          evaluate_loss(LossId::ForwardKl, p, q));

    const std::vector<ProbVector> two_t = {p, p};
    const std::vector<ProbVector> two_q = {q, q};
    CHECK(batch_loss(LossId::Mse, two_t, two_q) == evaluate_loss(LossId::Mse, p, q));

    const std::vector<ProbVector> mixed_t = {pv({1.0, 0.0}), pv({0.0, 1.0})};
    const std::vector<ProbVector> mixed_q = {pv({0.5, 0.5}), pv({0.0, 1.0})};
    CHECK(batch_loss(LossId::Mse, mixed_t, mixed_q) == 0.125);

    // RMSE batches as mean of per-example roots, not root of mean.
    const std::vector<ProbVector> r_t = {pv({0.8, 0.2}), pv({0.5, 0.5})};
    const std::vector<ProbVector> r_q = {pv({0.5, 0.5}), pv({0.5, 0.5})};
    CHECK(close(batch_loss(LossId::Rmse, r_t, r_q), 0.15, 1e-15));

    CHECK_THROWS_AS((void)batch_loss(LossId::Mse, std::vector<ProbVector>{},
                                     std::vector<ProbVector>{}),
                    InvalidInputError);
}

TEST_CASE("validation errors") {
    CHECK_THROWS_AS((void)evaluate_loss(LossId::Mse, pv({0.5, 0.5}), pv({0.2, 0.3, 0.5})),
                    ShapeError);
    CHECK_THROWS_AS(pv({0.5, 0.6}), InvalidInputError);             // sum > 1
    CHECK_THROWS_AS(pv({1.2, -0.2}), InvalidInputError);            // out of range
    CHECK_THROWS_AS(pv({std::nan(""), 1.0}), InvalidInputError);    // NaN
    CHECK_THROWS_AS(pv({1.0}), InvalidInputError);                  // K < 2
    CHECK_THROWS_AS(ClipPolicy(0.0), InvalidInputError);
    CHECK_THROWS_AS(ClipPolicy(1e-3), InvalidInputError);
    CHECK_NOTHROW(ClipPolicy(1e-4));
}

TEST_CASE("identifiers") {
    CHECK(all_losses().size() == 9);
    int bregman_count = 0;
    for (LossId id : all_losses()) {
        CHECK(loss_from_name(loss_name(id)) == id);
        if (is_bregman(id))
            ++bregman_count;
    }
    CHECK(bregman_count == 4);
    CHECK(is_bregman(LossId::ForwardKl));
    CHECK(is_bregman(LossId::GeneralizedI));
    CHECK(is_bregman(LossId::ItakuraSaito));
    CHECK(is_bregman(LossId::SquaredEuclidean));
    CHECK_FALSE(is_bregman(LossId::CrossEntropy));
    CHECK(loss_name(LossId::Mse) == "mse");
    CHECK(loss_name(LossId::JensenShannon) == "jensen_shannon");
    CHECK(loss_name(LossId::ItakuraSaito) == "itakura_saito");
    CHECK_THROWS_AS((void)loss_from_name("nope"), InvalidInputError);
}

TEST_CASE("Bregman losses are convex in the first argument") {
    Rng rng(43);
    for (LossId id : all_losses()) {
        if (!is_bregman(id))
            continue;
        for (int i = 0; i < 200; ++i) {
            const ProbVector q = random_simplex(rng, 4, 1e-3);
            const ProbVector x1 = random_simplex(rng, 4, 1e-3);
            const ProbVector x2 = random_simplex(rng, 4, 1e-3);
            std::vector<double> mid(4);
            for (std::size_t j = 0; j < 4; ++j)
                mid[j] = 0.5 * (x1[j] + x2[j]);
            const double lhs = evaluate_loss(id, ProbVector(mid), q);
            const double rhs =
                0.5 * (evaluate_loss(id, x1, q) + evaluate_loss(id, x2, q));
            CHECK(lhs <= rhs + 1e-12);
        }
    }
}

} // TEST_SUITE
