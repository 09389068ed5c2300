#include <chrono>
#include <cmath>
#include <random>

#include "doctest.h"
#include "owabms/error.hpp"
#include "owabms/optimizer.hpp"
#include "support/oracles.hpp"
#include "support/random_panels.hpp"

using namespace owabms;

namespace {

// (E, M) = (1, 2), (2, 6), (3, 12) with equal confidences
ScaledLossSet three_experts() {
    return ScaledLossSet({{1, 2}, {2, 6}, {3, 12}}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
}

WeightVector preset(const std::string& token, std::size_t n) {
    return preset_weights(Preset::parse(token), n);
}

std::vector<oracle::Quadratic> as_oracle(const ScaledLossSet& set) {
    std::vector<oracle::Quadratic> out;
    for (std::size_t i = 0; i < set.size(); ++i) {
        out.push_back({set.losses()[i].mean, set.losses()[i].second_moment, set.confidences()[i]});
    }
    return out;
}

}  // namespace

TEST_CASE("scaled loss sets validate their inputs") {
    CHECK_THROWS_AS(ScaledLossSet({{1, 2}}, {0.5, 0.5}), Error);
    CHECK_THROWS_AS(ScaledLossSet({{1, 2}, {1, 2}}, {0.5, 0.6}), Error);
    CHECK_THROWS_AS(ScaledLossSet({{1, 2}, {1, 2}}, {1.0, 0.0}), Error);
    CHECK_THROWS_AS(ScaledLossSet({}, {}), Error);
    CHECK_NOTHROW(ScaledLossSet({{1, 2}, {1, 2}}, {0.5, 0.5}));
}

TEST_CASE("breaking points") {
    const auto set = three_experts();
    const auto points = breaking_points(set, SearchDomain::make(4.0)).points;
    const std::vector<double> expected{0, 2, 2.5, 3, 4};
    REQUIRE(points.size() == expected.size());
    for (std::size_t i = 0; i < points.size(); ++i) CHECK(points[i] == doctest::Approx(expected[i]).epsilon(1e-12));

    const ScaledLossSet single({{0.3, 0.5}}, {1.0});
    CHECK(breaking_points(single, SearchDomain::make(2.0)).points == std::vector<double>{0, 2});

    const ScaledLossSet twins({{0.3, 0.5}, {0.3, 0.5}}, {0.5, 0.5});
    CHECK(breaking_points(twins, SearchDomain::make(2.0)).points == std::vector<double>{0, 2});

    SUBCASE("crossings are roots of the pairwise differences") {
        const auto crossings = pairwise_crossings(set);
        CHECK(crossings.size() == 3);
        for (double p : crossings) {
            bool some_pair = false;
            for (std::size_t i = 0; i < 3; ++i) {
                for (std::size_t j = i + 1; j < 3; ++j) {
                    some_pair = some_pair || std::abs(set.scaled_loss(i, p) - set.scaled_loss(j, p)) < 1e-12;
                }
            }
            CHECK(some_pair);
        }
    }
}

TEST_CASE("default domain covers the hull and the last crossing") {
    const auto set = three_experts();
    const auto domain = default_domain(set);
    CHECK(domain.lower == 0.0);
    CHECK(domain.upper == doctest::Approx(4.0));
}

TEST_CASE("worked three-expert panel") {
    const auto set = three_experts();
    const auto domain = SearchDomain::make(4.0);
    struct Row {
        const char* token;
        double premium;
        double loss;
    };
    for (const auto& row : {Row{"sum", 2.0, 8.0 / 3.0}, Row{"max", 2.5, 13.0 / 12.0}, Row{"min", 1.0, 1.0 / 3.0},
                            Row{"antikcentrum:2", 1.5, 7.0 / 6.0}, Row{"hurwicz:0.5", 2.5, 11.0 / 12.0},
                            Row{"hurwicz:0.7", 1.6, 0.81333333333333333}}) {
        CAPTURE(row.token);
        const auto s = minimize_owa(set, preset(row.token, 3), domain);
        CHECK(s.premium == doctest::Approx(row.premium).epsilon(1e-12));
        CHECK(s.loss_value == doctest::Approx(row.loss).epsilon(1e-12));
        CHECK(s.premium >= breaking_points(set, domain).points[s.interval_index]);
        CHECK(s.premium <= breaking_points(set, domain).points[s.interval_index + 1]);
    }
    const auto max = minimize_owa(set, preset("max", 3), domain);
    CHECK(max.permutation == std::vector<std::size_t>{2, 0, 1});
    CHECK(sum_closed_form(set) == doctest::Approx(2.0));
}

TEST_CASE("single expert returns its mean for any positive weight") {
    const ScaledLossSet single({{0.37, 0.5}}, {1.0});
    for (double w : {1.0, 0.3, 1e-6}) CHECK(minimize_owa(single, WeightVector({w})).premium == doctest::Approx(0.37));
    CHECK(sum_closed_form(single) == doctest::Approx(0.37));
}

TEST_CASE("sum closed form over four means") {
    const ScaledLossSet set({{0.2265, 0.3}, {0.0690, 0.1}, {0.14, 0.2}, {0.1290, 0.2}}, {0.25, 0.25, 0.25, 0.25});
    CHECK(sum_closed_form(set) == doctest::Approx(0.141125));
}

TEST_CASE("negative weights need an explicit domain") {
    const auto set = three_experts();
    CHECK_THROWS_WITH_AS(minimize_owa(set, preset("range", 3)), doctest::Contains("UnboundedProblem"), Error);
    const auto s = minimize_owa(set, preset("range", 3), SearchDomain::make(4.0));
    const auto brute = oracle::scan_minimum(as_oracle(set), preset("range", 3).weights(), 0.0, 4.0);
    CHECK(s.loss_value == doctest::Approx(brute.second).epsilon(1e-9));
}

TEST_CASE("grid oracle") {
    const auto set = three_experts();
    const auto grid = grid_oracle(set, preset("max", 3), SearchDomain::make(4.0), 1e-4);
    CHECK(std::abs(grid.premium - 2.5) <= 1e-4);
    const auto hurwicz = grid_oracle(set, preset("hurwicz:0.5", 3), SearchDomain::make(4.0), 1e-4);
    CHECK(std::abs(hurwicz.loss_value - 0.92) <= 1e-2);
    CHECK(std::abs(hurwicz.loss_value - 11.0 / 12.0) <= 1e-3);
    const auto point = grid_oracle(set, preset("max", 3), SearchDomain{1.25, 1.25}, 0.1);
    CHECK(point.premium == 1.25);
    CHECK_THROWS_AS(grid_oracle(set, preset("max", 3), SearchDomain::make(4.0), 0.0), Error);
}

TEST_CASE("zero-width domain yields its single point") {
    const auto set = three_experts();
    const auto s = minimize_owa(set, preset("max", 3), SearchDomain{0.0, 0.0});
    CHECK(s.premium == 0.0);
}

TEST_CASE("property: exact minimizer agrees with an independent scan and golden-section oracle") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 60; ++trial) {
        const auto set = panels::random_set(rng);
        const auto losses = as_oracle(set);
        for (const auto& token : panels::nonnegative_presets(set.size())) {
            CAPTURE(token);
            const auto w = preset(token, set.size());
            const auto exact = minimize_owa(set, w);
            const auto brute = oracle::scan_minimum(losses, w.weights(), 0.0, set.max_mean() + 1.0);
            CHECK(exact.loss_value <= brute.second + 1e-9);
            CHECK(exact.loss_value == doctest::Approx(oracle::aggregated(losses, w.weights(), exact.premium)));
        }
    }
}

TEST_CASE("property: hull containment, SUM consistency and breakpoint cardinality") {
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 300; ++trial) {
        const auto set = panels::random_set(rng);
        const std::size_t n = set.size();
        const auto bp = breaking_points(set, default_domain(set));
        CHECK(bp.points.front() == 0.0);
        CHECK(bp.points.size() - 2 <= n * (n - 1));
        for (std::size_t i = 1; i < bp.points.size(); ++i) {
            CHECK(bp.points[i] - bp.points[i - 1] > 1e-9 * std::max(1.0, bp.points[i]));
        }
        for (const auto& token : panels::nonnegative_presets(n)) {
            const auto s = minimize_owa(set, preset(token, n));
            CHECK(s.premium >= set.min_mean() - 1e-9);
            CHECK(s.premium <= set.max_mean() + 1e-9);
        }
        CHECK(minimize_owa(set, preset("sum", n)).premium == doctest::Approx(sum_closed_form(set)).epsilon(1e-9));
    }
}

TEST_CASE("property: the order of scaled losses is constant inside each interval") {
    std::mt19937_64 rng(35);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto set = panels::random_set(rng);
        const auto bp = breaking_points(set, default_domain(set));
        std::vector<double> values(set.size());
        for (std::size_t j = 0; j + 1 < bp.points.size(); ++j) {
            const double lo = bp.points[j];
            const double hi = bp.points[j + 1];
            set.scaled_losses(0.5 * (lo + hi), values);
            const auto mid = non_increasing_order(values);
            for (int s = 0; s < 5; ++s) {
                const double p = lo + (hi - lo) * (0.02 + 0.96 * unit(rng));
                set.scaled_losses(p, values);
                for (std::size_t r = 0; r + 1 < mid.size(); ++r) {
                    CHECK(values[mid[r]] >= values[mid[r + 1]] - 1e-9 * std::max(1.0, values[mid[r]]));
                }
            }
        }
    }
}

TEST_CASE("two hundred experts finish quickly") {
    std::mt19937_64 rng(36);
    std::uniform_real_distribution<double> mean(0.0, 5.0);
    std::vector<QuadraticLoss> losses;
    for (int i = 0; i < 200; ++i) {
        const double e = mean(rng);
        losses.push_back({e, e * e + 1.0});
    }
    const ScaledLossSet set(losses, std::vector<double>(200, 1.0 / 200));
    const auto start = std::chrono::steady_clock::now();
    const auto s = minimize_owa(set, preset("max", 200));
    CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() < 1.0);
    CHECK(s.premium >= set.min_mean());
}

TEST_CASE("property: a constant risk under unequal confidences returns the constant") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> constant(0.0, 5.0);
    for (int trial = 0; trial < 300; ++trial) {
        const auto shape = panels::random_set(rng);
        const std::vector<double> confidences(shape.confidences().begin(), shape.confidences().end());
        const double c = constant(rng);
        const ScaledLossSet set(std::vector<QuadraticLoss>(shape.size(), {c, c * c}), confidences);
        CHECK(pairwise_crossings(set).size() <= shape.size() * (shape.size() - 1) / 2);
        for (const auto& token : panels::nonnegative_presets(shape.size())) {
            CAPTURE(token);
            CHECK(std::abs(minimize_owa(set, preset(token, shape.size())).premium - c) <= 1e-12 * std::max(1.0, c));
        }
    }
}
