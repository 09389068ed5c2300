#include <cmath>
#include <random>

#include "doctest.h"
#include "owabms/error.hpp"
#include "owabms/models.hpp"
#include "support/oracles.hpp"

using namespace owabms;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an owabms::Error");
    return ErrorKind::InvalidInput;
}

}  // namespace

TEST_CASE("prior parameters must be positive and finite") {
    CHECK(kind_of([] { PriorSpec::make(Family::PoissonGamma, 0.0, 1.0); }) == ErrorKind::InvalidParameters);
    CHECK(kind_of([] { PriorSpec::make(Family::GeometricBeta, 3.0, -1.0); }) == ErrorKind::InvalidParameters);
    CHECK(kind_of([] { PriorSpec::make(Family::PoissonGamma, NAN, 1.0); }) == ErrorKind::InvalidParameters);
    CHECK(kind_of([] { PriorSpec::make(Family::PoissonGamma, INFINITY, 1.0); }) == ErrorKind::InvalidParameters);
}

TEST_CASE("claim history rejects claims without periods") {
    CHECK(kind_of([] { ClaimHistory::make(0, 1); }) == ErrorKind::InvalidParameters);
    CHECK(kind_of([] { ClaimHistory::make(-1, 0); }) == ErrorKind::InvalidParameters);
    CHECK(ClaimHistory::make(0, 0) == ClaimHistory::none());
}

TEST_CASE("family and moment mode tokens round-trip") {
    for (auto f : {Family::PoissonGamma, Family::GeometricBeta}) CHECK(parse_family(to_string(f)) == f);
    for (auto m : {MomentMode::PaperProp1, MomentMode::PriorSecondMoment}) CHECK(parse_moment_mode(to_string(m)) == m);
    CHECK(kind_of([] { parse_family("poisson"); }) == ErrorKind::InvalidInput);
}

TEST_CASE("conjugate updates") {
    CHECK(posterior(PriorSpec::make(Family::PoissonGamma, 0.77, 3.40), ClaimHistory::make(1, 0)) ==
          PriorSpec{Family::PoissonGamma, 0.77, 4.40});
    CHECK(posterior(PriorSpec::make(Family::GeometricBeta, 30.59, 6.66), ClaimHistory::make(2, 3)) ==
          PriorSpec{Family::GeometricBeta, 32.59, 9.66});
    const auto prior = PriorSpec::make(Family::GeometricBeta, 2.1, 3.2);
    CHECK(posterior(prior, ClaimHistory::none()) == prior);
}

TEST_CASE("posterior mean agrees with numerical Bayes updating") {
    for (auto [t, k] : {std::pair{1, 0}, {2, 3}, {4, 4}, {3, 1}}) {
        const auto pg = PriorSpec::make(Family::PoissonGamma, 0.77, 3.40);
        const double numeric = oracle::gamma_posterior_expectation(0.77, 3.40, t, k, [](double th) { return th; });
        CHECK(bayes_loss(pg, ClaimHistory::make(t, k), MomentMode::PaperProp1).mean ==
              doctest::Approx(numeric).epsilon(1e-8));

        const auto gb = PriorSpec::make(Family::GeometricBeta, 30.59, 6.66);
        const double numeric_gb =
            oracle::beta_posterior_expectation(30.59, 6.66, t, k, [](double th) { return (1.0 - th) / th; });
        CHECK(bayes_loss(gb, ClaimHistory::make(t, k), MomentMode::PaperProp1).mean ==
              doctest::Approx(numeric_gb).epsilon(1e-8));
    }
}

TEST_CASE("collective losses") {
    const auto pg = PriorSpec::make(Family::PoissonGamma, 2.0, 10.0);
    const auto prop1 = collective_loss(pg, MomentMode::PaperProp1);
    CHECK(prop1.mean == doctest::Approx(0.2));
    CHECK(prop1.second_moment == doctest::Approx(0.24));
    const auto exact = collective_loss(pg, MomentMode::PriorSecondMoment);
    CHECK(exact.mean == doctest::Approx(0.2));
    CHECK(exact.second_moment == doctest::Approx(0.06));

    SUBCASE("prior second moment matches quadrature of the Gamma density") {
        for (auto [a, b] : {std::pair{0.77, 3.40}, {2.1, 15.0}, {0.4, 3.1}}) {
            const double m2 = oracle::integrate([&](double th) { return th * th * oracle::gamma_pdf(th, a, b); }, 0.0,
                                                INFINITY);
            CHECK(collective_loss(PriorSpec::make(Family::PoissonGamma, a, b), MomentMode::PriorSecondMoment)
                      .second_moment == doctest::Approx(m2).epsilon(1e-8));
        }
    }

    SUBCASE("Geometric-Beta moments match quadrature of (1 - theta) / theta") {
        for (auto [a, b] : {std::pair{30.59, 6.66}, {2.1, 3.2}, {5.0, 0.5}}) {
            const double e = oracle::integrate([&](double th) { return (1 - th) / th * oracle::beta_pdf(th, a, b); },
                                               0.0, 1.0);
            const double m2 = oracle::integrate(
                [&](double th) { return std::pow((1 - th) / th, 2) * oracle::beta_pdf(th, a, b); }, 0.0, 1.0);
            for (auto mode : {MomentMode::PaperProp1, MomentMode::PriorSecondMoment}) {
                const auto loss = collective_loss(PriorSpec::make(Family::GeometricBeta, a, b), mode);
                CHECK(loss.mean == doctest::Approx(e).epsilon(1e-7));
                CHECK(loss.second_moment == doctest::Approx(m2).epsilon(1e-6));
            }
        }
        CHECK(collective_loss(PriorSpec::make(Family::GeometricBeta, 30.59, 6.66), MomentMode::PaperProp1).mean ==
              doctest::Approx(0.225076).epsilon(1e-6));
    }

    CHECK(kind_of([] { collective_loss(PriorSpec::make(Family::GeometricBeta, 2.0, 1.0), MomentMode::PaperProp1); }) ==
          ErrorKind::InsufficientPriorMoments);
}

TEST_CASE("Bayes loss examples") {
    CHECK(bayes_loss(PriorSpec::make(Family::PoissonGamma, 0.77, 3.40), ClaimHistory::make(1, 0),
                     MomentMode::PaperProp1)
              .mean == doctest::Approx(0.175));
    CHECK(bayes_loss(PriorSpec::make(Family::GeometricBeta, 2.1, 3.2), ClaimHistory::make(1, 1),
                     MomentMode::PaperProp1)
              .mean == doctest::Approx(2.0));
    // alpha + t > 2 is enough for the Bayes loss
    CHECK_NOTHROW(bayes_loss(PriorSpec::make(Family::GeometricBeta, 1.5, 1.0), ClaimHistory::make(1, 0),
                             MomentMode::PaperProp1));
    CHECK(kind_of([] {
              bayes_loss(PriorSpec::make(Family::GeometricBeta, 0.5, 1.0), ClaimHistory::make(1, 0),
                         MomentMode::PaperProp1);
          }) == ErrorKind::InsufficientPriorMoments);
}

TEST_CASE("loss evaluation") {
    CHECK(loss_at({1.0, 2.0}, 1.0) == doctest::Approx(1.0));
    CHECK(loss_at({0.7, 3.5}, 0.0) == 3.5);
    CHECK(loss_at({0.2, 0.24}, 0.2) == doctest::Approx(0.2));
}

TEST_CASE("affine moment transform") {
    CHECK(affine_transform({1.3, 4.0}, 1.0, 0.0) == QuadraticLoss{1.3, 4.0});
    const auto moved = affine_transform({1.0, 2.0}, 2.0, 3.0);
    CHECK(moved.mean == doctest::Approx(5.0));
    CHECK(moved.second_moment == doctest::Approx(29.0));
    const auto [m1, m2] = oracle::exponential_affine_moments(2.0, 3.0, 2000000, 17);
    CHECK(moved.mean == doctest::Approx(m1).epsilon(0.01));
    CHECK(moved.second_moment == doctest::Approx(m2).epsilon(0.01));
    const auto zero = affine_transform({0.0, 0.0}, 1.7, 0.4);
    CHECK(zero.mean == doctest::Approx(0.4));
    CHECK(zero.second_moment == doctest::Approx(0.16));
}

TEST_CASE("property: conjugacy, vertex, moment dominance and monotonicity") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> param(0.1, 20.0);
    std::uniform_int_distribution<int> periods(0, 8);
    std::uniform_int_distribution<int> claims(0, 12);
    for (int trial = 0; trial < 500; ++trial) {
        const auto family = trial % 2 == 0 ? Family::PoissonGamma : Family::GeometricBeta;
        const double alpha = family == Family::GeometricBeta ? 2.0 + param(rng) : param(rng);
        const auto prior = PriorSpec::make(family, alpha, param(rng));
        const int t = periods(rng);
        const auto history = ClaimHistory::make(t, t == 0 ? 0 : claims(rng));
        for (auto mode : {MomentMode::PaperProp1, MomentMode::PriorSecondMoment}) {
            const auto loss = bayes_loss(prior, history, mode);
            CHECK(loss == collective_loss(posterior(prior, history), mode));
            CHECK(loss.second_moment >= loss.mean * loss.mean * (1 - 1e-12));
            CHECK(loss_at(loss, loss.mean + 1e-6) > loss_at(loss, loss.mean));
            CHECK(loss_at(loss, loss.mean - 1e-6) > loss_at(loss, loss.mean));
        }
        if (family == Family::PoissonGamma && t > 0) {
            const int k = history.total_claims;
            const auto mean = [&](int tt, int kk) {
                return bayes_loss(prior, ClaimHistory::make(tt, kk), MomentMode::PaperProp1).mean;
            };
            CHECK(mean(t, k + 1) > mean(t, k));
            CHECK(mean(t + 1, k) < mean(t, k));
        }
    }
}
