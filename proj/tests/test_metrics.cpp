#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bregbench/errors.hpp"
#include "bregbench/metrics.hpp"
#include "bregbench/rng.hpp"
#include "bregbench/sampling.hpp"

using namespace bregbench;

namespace {

ProbVector pv(std::vector<double> values) { return ProbVector(std::move(values)); }

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::vector<ProbVector> random_instances(Rng& rng, std::size_t n, std::size_t k) {
    std::vector<ProbVector> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(random_simplex(rng, k));
    return out;
}

// Strictly monotone per-instance rescaling that preserves orderings:
// q -> q^2, renormalized.
std::vector<ProbVector> squared_renormalized(const std::vector<ProbVector>& qs) {
    std::vector<ProbVector> out;
    out.reserve(qs.size());
    for (const ProbVector& q : qs) {
        std::vector<double> v(q.size());
        double sum = 0.0;
        for (std::size_t j = 0; j < q.size(); ++j) {
            v[j] = q[j] * q[j];
            sum += v[j];
        }
        for (double& x : v)
            x /= sum;
        out.push_back(pv(v));
    }
    return out;
}

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("rank_categories") {
    CHECK(rank_categories(pv({0.2, 0.5, 0.3})) == RankPermutation{1, 2, 0});
    CHECK(rank_categories(pv({1.0 / 3, 1.0 / 3, 1.0 / 3})) == RankPermutation{0, 1, 2});
    CHECK(rank_categories(pv({1.0, 0.0})) == RankPermutation{0, 1});
    CHECK(rank_categories(pv({0.3, 0.3, 0.4})) == RankPermutation{2, 0, 1});
}

TEST_CASE("convergence_delta") {
    const std::vector<double> d = convergence_delta({10.0, 5.0, 4.0});
    REQUIRE(d.size() == 2);
    CHECK(d[0] == 0.5);
    CHECK(close(d[1], 0.2, 1e-16));

    CHECK(convergence_delta({3.0, 3.0, 3.0}) == std::vector<double>{0.0, 0.0});
    CHECK(convergence_delta({1.0, 2.0}) == std::vector<double>{1.0});
    // A trailing zero is never a divisor.
    CHECK(convergence_delta({1.0, 2.0, 0.0}) == std::vector<double>{1.0, 1.0});

    CHECK_THROWS_AS((void)convergence_delta({5.0}), InvalidInputError);
    CHECK_THROWS_AS((void)convergence_delta({0.0, 1.0}), DivisionDomainError);
    CHECK_THROWS_AS((void)convergence_delta({1.0, 0.0, 1.0}), DivisionDomainError);
    CHECK_THROWS_AS((void)convergence_delta({1.0, std::nan(""), 1.0}), InvalidInputError);
}

TEST_CASE("epochs_to_converge") {
    CHECK(epochs_to_converge({10.0, 5.0, 4.9, 4.85}, 0.05) == std::size_t{1});
    CHECK(epochs_to_converge({3.0, 3.0, 3.0}, 0.01) == std::size_t{0});
    CHECK_FALSE(epochs_to_converge({16.0, 8.0, 4.0, 2.0, 1.0}, 0.05).has_value());
    // Sustained convergence: a late spike pushes the epoch past it.
    CHECK(epochs_to_converge({10.0, 9.9, 9.8, 4.0, 3.99}, 0.05) == std::size_t{3});
    CHECK_THROWS_AS((void)epochs_to_converge({1.0, 2.0}, 0.0), InvalidInputError);
    CHECK_THROWS_AS((void)epochs_to_converge({1.0, 2.0}, -0.1), InvalidInputError);
}

TEST_CASE("larger tail deltas converge later") {
    const LossHistory fast = {10.0, 5.0, 4.99, 4.98, 4.97};
    const LossHistory slow = {10.0, 5.0, 4.0, 3.9, 3.89};
    REQUIRE(epochs_to_converge(fast, 0.05).has_value());
    REQUIRE(epochs_to_converge(slow, 0.05).has_value());
    CHECK(*epochs_to_converge(fast, 0.05) < *epochs_to_converge(slow, 0.05));
}

TEST_CASE("confusion counts") {
    const std::vector<ProbVector> t = {pv({0.9, 0.1}), pv({0.8, 0.2}), pv({0.3, 0.7}),
                                       pv({0.1, 0.9})};
    const std::vector<ProbVector> p = {pv({0.6, 0.4}), pv({0.4, 0.6}), pv({0.2, 0.8}),
                                       pv({0.45, 0.55})};
    const ConfusionCounts c = confusion_counts(t, p, 2);
    CHECK(c.true_positives == std::vector<std::int64_t>{1, 2});
    CHECK(c.false_positives == std::vector<std::int64_t>{0, 1});
    CHECK(c.false_negatives == std::vector<std::int64_t>{1, 0});
}

TEST_CASE("macro F1") {
    const std::vector<ProbVector> t = {pv({0.9, 0.1}), pv({0.8, 0.2}), pv({0.3, 0.7}),
                                       pv({0.1, 0.9})};
    const std::vector<ProbVector> p = {pv({0.6, 0.4}), pv({0.4, 0.6}), pv({0.2, 0.8}),
                                       pv({0.45, 0.55})};
    CHECK(close(macro_f1(t, p, 2), 11.0 / 15.0, 1e-12));
    CHECK(macro_f1(t, t, 2) == 1.0);

    // A category that never occurs and is never predicted contributes 0.
    const std::vector<ProbVector> t3 = {pv({0.8, 0.1, 0.1}), pv({0.1, 0.8, 0.1})};
    CHECK(close(macro_f1(t3, t3, 3), 2.0 / 3.0, 1e-12));

    CHECK_THROWS_AS((void)macro_f1(t, p, 3), ShapeError);
}

TEST_CASE("NDCG") {
    const std::vector<ProbVector> t = {pv({0.8, 0.2})};
    const std::vector<ProbVector> reversed = {pv({0.2, 0.8})};
    CHECK(ndcg(t, t) == 1.0);
    CHECK(close(ndcg(t, reversed), 0.7609096232928763, 1e-15));
    const std::vector<ProbVector> uniform = {pv({0.5, 0.5})};
    CHECK(close(ndcg(uniform, reversed), 1.0, 1e-15));
}

TEST_CASE("accuracy under ranking decrease") {
    const std::vector<ProbVector> t = {pv({0.7, 0.3}), pv({0.2, 0.8})};
    const std::vector<ProbVector> reversed = {pv({0.3, 0.7}), pv({0.8, 0.2})};
    CHECK(accuracy_ranking_decrease(t, t) == 0.75); // H_2 / 2
    CHECK(accuracy_ranking_decrease(t, reversed) == 0.0);

    const std::vector<ProbVector> t3 = {pv({0.5, 0.3, 0.2})};
    const std::vector<ProbVector> tail_swap = {pv({0.5, 0.2, 0.3})};
    CHECK(close(accuracy_ranking_decrease(t3, tail_swap), 1.0 / 3.0, 1e-15));
}

TEST_CASE("instance-permutation invariance") {
    Rng rng(21);
    std::vector<ProbVector> t = random_instances(rng, 40, 4);
    std::vector<ProbVector> p = random_instances(rng, 40, 4);
    const double f1 = macro_f1(t, p, 4);
    const double nd = ndcg(t, p);
    const double ar = accuracy_ranking_decrease(t, p);

    std::vector<std::size_t> order(t.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    rng.shuffle(order);
    std::vector<ProbVector> t2, p2;
    for (std::size_t i : order) {
        t2.push_back(t[i]);
        p2.push_back(p[i]);
    }
    CHECK(macro_f1(t2, p2, 4) == f1);
    CHECK(close(ndcg(t2, p2), nd, 1e-13));
    CHECK(close(accuracy_ranking_decrease(t2, p2), ar, 1e-13));
}

TEST_CASE("monotone-rescaling invariance") {
    Rng rng(22);
    const std::vector<ProbVector> t = random_instances(rng, 40, 4);
    const std::vector<ProbVector> p = random_instances(rng, 40, 4);
    const std::vector<ProbVector> p2 = squared_renormalized(p);
    CHECK(macro_f1(t, p, 4) == macro_f1(t, p2, 4));
    CHECK(ndcg(t, p) == ndcg(t, p2));
    CHECK(accuracy_ranking_decrease(t, p) == accuracy_ranking_decrease(t, p2));
}

TEST_CASE("metric ranges on random inputs") {
    Rng rng(23);
    const std::vector<ProbVector> t = random_instances(rng, 60, 5);
    const std::vector<ProbVector> p = random_instances(rng, 60, 5);
    const double f1 = macro_f1(t, p, 5);
    const double nd = ndcg(t, p);
    const double ar = accuracy_ranking_decrease(t, p);
    CHECK(f1 >= 0.0);
    CHECK(f1 <= 1.0);
    CHECK(nd >= 0.0);
    CHECK(nd <= 1.0);
    const double h5 = 1.0 + 0.5 + 1.0 / 3.0 + 0.25 + 0.2;
    CHECK(ar >= 0.0);
    CHECK(ar <= h5 / 5.0 + 1e-15);
}

TEST_CASE("shape errors") {
    const std::vector<ProbVector> one = {pv({0.5, 0.5})};
    const std::vector<ProbVector> two = {pv({0.5, 0.5}), pv({0.5, 0.5})};
    const std::vector<ProbVector> none;
    CHECK_THROWS_AS((void)ndcg(one, two), ShapeError);
    CHECK_THROWS_AS((void)accuracy_ranking_decrease(one, two), ShapeError);
    CHECK_THROWS_AS((void)ndcg(none, none), InvalidInputError);
    const std::vector<ProbVector> three_wide = {pv({0.2, 0.3, 0.5})};
    CHECK_THROWS_AS((void)ndcg(one, three_wide), ShapeError);
}

} // TEST_SUITE
