#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sokolab/analysis.hpp"
#include "sokolab/board.hpp"
#include "sokolab/errors.hpp"
#include "sokolab/rng.hpp"
#include "sokolab/search.hpp"
#include "sokolab/treemodel.hpp"

using namespace sokolab;

TEST_CASE("survival_function on a worked sample") {
    // costs {1, 1, 3, 5(unsolved)}: P[X > 1] = 2/4, P[X > 3] = 1/4.
    RuntimeSample s{{1, 1, 3, 5}, {1, 1, 1, 0}, 5};
    auto sf = survival_function(s);
    REQUIRE(sf.size() == 2);
    CHECK(sf[0].first == 1);
    CHECK(sf[0].second == doctest::Approx(0.5));
    CHECK(sf[1].first == 3);
    CHECK(sf[1].second == doctest::Approx(0.25));
}

TEST_CASE("hill_alpha exact on a tiny sample") {
    // x = {e^2, e, 1, 1}, k = 2: threshold x_(n-k) = 1,
    // alpha = 2 / (ln e^2 + ln e) = 2/3.
    std::vector<std::uint64_t> xs{
        static_cast<std::uint64_t>(std::llround(std::exp(2.0) * 1000000)),
        static_cast<std::uint64_t>(std::llround(std::exp(1.0) * 1000000)),
        1000000, 1000000};
    double a = hill_alpha(xs, 2);
    CHECK(a == doctest::Approx(2.0 / 3.0).epsilon(1e-5));

    CHECK_THROWS_AS(hill_alpha(std::vector<std::uint64_t>{7, 7, 7, 7}, 2), DegenerateTail);
    CHECK_THROWS_AS(hill_alpha(xs, 1), std::invalid_argument);
    CHECK_THROWS_AS(hill_alpha(xs, 4), std::invalid_argument);
}

TEST_CASE("hill_alpha recovers a Pareto exponent") {
    // Pareto(alpha): X = x_m * U^(-1/alpha) via inverse CDF, on an integer
    // lattice coarse enough not to disturb the tail.
    for (double alpha : {1.0, 2.0}) {
        Rng rng(static_cast<std::uint64_t>(alpha * 31));
        const std::size_t n = 200000;
        std::vector<std::uint64_t> xs(n);
        for (auto& x : xs) {
            double u = rng.uniform_pos();
            x = static_cast<std::uint64_t>(std::llround(1e6 * std::pow(u, -1.0 / alpha)));
        }
        double est = hill_alpha(xs, n / 10);
        CHECK(est == doctest::Approx(alpha).epsilon(0.05));
    }
}

TEST_CASE("hill_alpha drifts on a light tail instead of stabilizing") {
    // Exponential tails have no Hill plateau: the estimate keeps rising as k
    // shrinks. Verify the spread across the plateau ks is large.
    Rng rng(17);
    const std::size_t n = 100000;
    std::vector<std::uint64_t> xs(n);
    for (auto& x : xs) x = 1 + static_cast<std::uint64_t>(std::llround(1e5 * rng.exponential()));
    double a5 = hill_alpha(xs, n / 20);
    double a10 = hill_alpha(xs, n / 10);
    double a20 = hill_alpha(xs, n / 5);
    double lo = std::min({a5, a10, a20});
    double hi = std::max({a5, a10, a20});
    CHECK(hi - lo > 0.5);
}

TEST_CASE("classify_tail labels the three regimes") {
    // Right-heavy: nearly all solved, Pareto-ish costs from the lattice model.
    RightTailModelParams rm;
    auto right = sample_right_runtime(rm, 50000, 3);
    auto rc = classify_tail(right);
    CHECK(rc.label == TailLabel::RightHeavy);
    CHECK(rc.unsolved_ratio <= 0.10);
    REQUIRE(rc.alpha.has_value());
    CHECK(*rc.alpha <= 2.0);
    CHECK(rc.plateau_stable);

    // Left-heavy: mostly unsolved at the cap, a few fast solves.
    RuntimeSample left;
    left.cap = 100000;
    for (int i = 0; i < 95; ++i) {
        left.costs.push_back(left.cap);
        left.solved.push_back(0);
    }
    for (int i = 0; i < 5; ++i) {
        left.costs.push_back(50 + i);
        left.solved.push_back(1);
    }
    auto lc = classify_tail(left);
    CHECK(lc.label == TailLabel::LeftHeavy);
    CHECK(lc.unsolved_ratio >= 0.90);

    // Neither: everything solved at nearly constant cost.
    RuntimeSample flat;
    flat.cap = 1000;
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        flat.costs.push_back(100 + rng.below(5));
        flat.solved.push_back(1);
    }
    auto nc = classify_tail(flat);
    CHECK(nc.label == TailLabel::Neither);

    // Mostly unsolved but with no fast solve: not left-heavy either.
    RuntimeSample slowfail;
    slowfail.cap = 1000;
    for (int i = 0; i < 99; ++i) {
        slowfail.costs.push_back(1000);
        slowfail.solved.push_back(0);
    }
    slowfail.costs.push_back(900);
    slowfail.solved.push_back(1);
    CHECK(classify_tail(slowfail).label == TailLabel::Neither);
}

TEST_CASE("tail label names") {
    CHECK(std::string(tail_label_name(TailLabel::LeftHeavy)) == "left-heavy");
    CHECK(std::string(tail_label_name(TailLabel::RightHeavy)) == "right-heavy");
    CHECK(std::string(tail_label_name(TailLabel::Neither)) == "neither");
}

TEST_CASE("dead_subtree_histogram on a hand-built trace") {
    // Expansion tree:        0
    //                      /   \
    //                     1     2*      (* = path to goal)
    //                    / \     \
    //                   3   4     5(goal)
    // Node 1's subtree {1,3,4} is dead; nodes 3, 4 fold into it.
    SearchTrace t;
    auto add = [&](std::uint64_t node, std::int64_t parent, std::uint64_t g) {
        TraceEntry e;
        e.node = node;
        e.parent = parent;
        e.state = 100 + node;
        e.g = g;
        t.log.push_back(e);
    };
    add(0, -1, 0);
    add(1, 0, 1);
    add(2, 0, 1);
    add(3, 1, 2);
    add(4, 1, 2);
    add(5, 2, 2);
    t.goal_node = 5;

    auto hist = dead_subtree_histogram(t);
    REQUIRE(hist.bins.size() == 1);
    CHECK(hist.bins.at(3) == 1);
    CHECK(hist.total_nodes() == 3);

    // Without a goal the histogram is undefined.
    SearchTrace lost = t;
    lost.goal_node.reset();
    CHECK_THROWS_AS(dead_subtree_histogram(lost), TraceUnsolved);
}

TEST_CASE("dead_subtree_histogram accounts for every off-path node") {
    Board b = parse_level(
        "########\n"
        "#      #\n"
        "# @ $  #\n"
        "#   .  #\n"
        "########\n");
    OracleConfig cfg;
    cfg.seed = 2;
    StochasticOracle oracle(b, cfg, 0);
    auto out = best_first_search(b, {EvalVariant::PHS, 1.0}, oracle, 100000, true);
    REQUIRE(out.status == SearchStatus::Solved);

    auto hist = dead_subtree_histogram(out.trace);
    // Path nodes: goal depth + 1; every other expanded or generated-goal node
    // lies in some dead subtree.
    std::uint64_t path_nodes = out.trace.log.back().g + 1;
    CHECK(hist.total_nodes() + path_nodes == out.trace.log.size());
}

TEST_CASE("dead_end_benchmark scores a corpus deterministically") {
    std::vector<Board> corpus;
    corpus.push_back(parse_level(
        "#######\n"
        "#     #\n"
        "# @$. #\n"
        "#     #\n"
        "#######\n"));
    corpus.push_back(parse_level(
        "#######\n"
        "#     #\n"
        "# $@$ #\n"
        "# . . #\n"
        "#######\n"));
    OracleConfig cfg;
    cfg.dropout = 0.0;
    cfg.seed = 0;

    auto r1 = dead_end_benchmark(corpus, cfg, 8, 1000000);
    auto r2 = dead_end_benchmark(corpus, cfg, 8, 1000000);
    CHECK(r1.states_sampled == r2.states_sampled);
    CHECK(r1.states_evaluated == r2.states_evaluated);
    CHECK(r1.policy_accuracy == r2.policy_accuracy);
    CHECK(r1.value_accuracy == r2.value_accuracy);

    CHECK(r1.states_sampled > 0);
    CHECK(r1.states_evaluated > 0);
    CHECK(r1.policy_accuracy >= 0.0);
    CHECK(r1.policy_accuracy <= 1.0);
    CHECK(r1.value_accuracy >= 0.0);
    CHECK(r1.value_accuracy <= 1.0);

    // The clean matching oracle on these tiny rooms separates push-into-corner
    // children well; expect better-than-chance accuracy.
    CHECK(r1.value_accuracy > 0.5);
}

TEST_CASE("linear_fit recovers a known line") {
    std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y{3.1, 5.0, 7.1, 8.9, 11.0};
    auto fit = linear_fit(x, y);
    CHECK(fit.slope == doctest::Approx(1.98).epsilon(0.02));
    CHECK(fit.intercept == doctest::Approx(1.06).epsilon(0.2));
    CHECK(fit.r2 > 0.99);

    // Exact line: r2 = 1.
    std::vector<double> y2{2, 4, 6, 8, 10};
    auto exact = linear_fit(x, y2);
    CHECK(exact.slope == doctest::Approx(2.0));
    CHECK(exact.intercept == doctest::Approx(0.0));
    CHECK(exact.r2 == doctest::Approx(1.0));
}
