#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"
#include "utilrisk/errors.hpp"
#include "utilrisk/rng.hpp"
#include "utilrisk/scenarios.hpp"

#include <Eigen/Dense>

#include <cmath>

using namespace utilrisk;

namespace {

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index d = static_cast<Eigen::Index>(rows.begin()->size());
    Eigen::MatrixXd m(n, d);
    Eigen::Index s = 0;
    for (const auto& row : rows) {
        Eigen::Index i = 0;
        for (double v : row) m(s, i++) = v;
        ++s;
    }
    return m;
}

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

} // namespace

TEST_CASE("two-scenario sign-change market is accepted") {
    const ScenarioSet mkt = make_scenario_set(mat({{2.0}, {-1.0}}), vec({0.5, 0.5}), 0.0);
    CHECK(mkt.n_scenarios() == 2);
    CHECK(mkt.n_assets() == 1);
    CHECK(mkt.rate == 0.0);
}

TEST_CASE("nonnegative somewhere-positive column is an arbitrage") {
    CHECK_THROWS_AS(make_scenario_set(mat({{1.0}, {0.0}}), vec({0.5, 0.5}), 0.0), ArbitrageError);
}

TEST_CASE("proportional columns are redundant") {
    CHECK_THROWS_AS(make_scenario_set(mat({{1.0, 2.0}, {-1.0, -2.0}}), vec({0.5, 0.5}), 0.0),
                    RedundancyError);
}

TEST_CASE("probability vector is validated") {
    CHECK_THROWS_AS(make_scenario_set(mat({{2.0}, {-1.0}}), vec({0.5, -0.5}), 0.0), ProbabilityError);
    CHECK_THROWS_AS(make_scenario_set(mat({{2.0}, {-1.0}}), vec({0.5, 0.0}), 0.0), ProbabilityError);
    CHECK_THROWS_AS(make_scenario_set(mat({{2.0}, {-1.0}}), vec({0.6, 0.6}), 0.0), ProbabilityError);
    CHECK_THROWS_AS(make_scenario_set(mat({{2.0}, {-1.0}}), vec({1.0}), 0.0), LengthMismatch);
}

TEST_CASE("validation report carries state prices exactly when arbitrage-free") {
    const auto good = validate_market(mat({{2.0}, {-1.0}}), vec({0.5, 0.5}));
    CHECK(good.no_arbitrage);
    CHECK(good.non_redundant);
    REQUIRE(good.state_prices.has_value());
    const Eigen::VectorXd q = *good.state_prices;
    CHECK(q.minCoeff() >= 1.0 - 1e-12);
    CHECK(std::abs(2.0 * q(0) - 1.0 * q(1)) <= 1e-9 * q.norm());

    const auto bad = validate_market(mat({{1.0}, {0.0}}), vec({0.5, 0.5}));
    CHECK_FALSE(bad.no_arbitrage);
    CHECK_FALSE(bad.state_prices.has_value());
}

TEST_CASE("rank check separates proportional from independent columns") {
    const auto dep = validate_market(mat({{1.0, 2.0}, {-1.0, -2.0}, {0.0, 0.0}}), vec({0.3, 0.3, 0.4}));
    CHECK_FALSE(dep.non_redundant);
    CHECK(dep.rank == 1);
    const auto ind = validate_market(mat({{1.0, 1.0}, {-1.0, -1.0}, {0.0, 3.0}}), vec({0.3, 0.3, 0.4}));
    CHECK(ind.non_redundant);
    CHECK(ind.rank == 2);
}

TEST_CASE("no-arbitrage verdict agrees with a dense direction scan for d <= 2") {
    Rng rng(20240817);
    int arbitrage_seen = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int d = 1 + static_cast<int>(rng.below(2));
        const int n = d + 1 + static_cast<int>(rng.below(4));
        Eigen::MatrixXd x(n, d);
        for (int s = 0; s < n; ++s)
            for (int i = 0; i < d; ++i) x(s, i) = rng.uniform(-1.0, 1.0);
        const auto report = validate_market(x, Eigen::VectorXd::Constant(n, 1.0 / n));
        const bool scan = test_support::grid_scan_finds_arbitrage(x, 1e-6);
        if (!report.no_arbitrage) ++arbitrage_seen;
        // The LP is exact; the scan can only miss razor-thin arbitrage cones,
        // which random continuous entries do not produce.
        CHECK(report.no_arbitrage == !scan);
    }
    CHECK(arbitrage_seen > 0); // the sample exercises both verdicts
}

TEST_CASE("accepted markets admit strictly positive state prices") {
    Rng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 1 + static_cast<int>(rng.below(2));
        const ScenarioSet mkt = test_support::random_market(rng, d, d + 2 + static_cast<int>(rng.below(3)));
        const auto report = validate_market(mkt.returns, mkt.probs);
        REQUIRE(report.state_prices.has_value());
        const Eigen::VectorXd q = *report.state_prices;
        CHECK(q.minCoeff() > 0.0);
        CHECK((mkt.returns.transpose() * q).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, q.norm()));
    }
}

TEST_CASE("gaussian model validation rejects degenerate inputs") {
    GaussianMarket gm;
    gm.mu = vec({0.2});
    gm.sigma = mat({{0.01}});
    gm.rate = 0.0;
    CHECK_NOTHROW(validate_gaussian(gm));

    GaussianMarket flat = gm;
    flat.mu = vec({0.0});
    CHECK_THROWS_AS(validate_gaussian(flat), DomainError);

    GaussianMarket indef;
    indef.mu = vec({0.2, 0.1});
    indef.sigma = mat({{1.0, 0.0}, {0.0, -1.0}});
    CHECK_THROWS_AS(validate_gaussian(indef), DomainError);

    GaussianMarket skew;
    skew.mu = vec({0.2, 0.1});
    skew.sigma = mat({{1.0, 0.5}, {0.1, 1.0}});
    CHECK_THROWS_AS(validate_gaussian(skew), DomainError);
}

TEST_CASE("gaussian discretization matches its mean and is deterministic") {
    GaussianMarket gm;
    gm.mu = vec({0.2});
    gm.sigma = mat({{0.01}});
    gm.rate = 0.0;
    const ScenarioSet a = discretize_gaussian(gm, 1000, 42);
    const ScenarioSet b = discretize_gaussian(gm, 1000, 42);
    CHECK(a.returns == b.returns);
    CHECK(a.probs == b.probs);
    CHECK(a.n_scenarios() == 1000);
    // excess mean 0.2, standard error 0.1/sqrt(1000)
    const double mean = a.returns.col(0).mean();
    CHECK(std::abs(mean - 0.2) <= 3.0 * 0.1 / std::sqrt(1000.0));
    CHECK(a.probs.isApproxToConstant(1.0 / 1000.0, 1e-15));

    const ScenarioSet c = discretize_gaussian(gm, 1000, 43);
    CHECK(a.returns != c.returns);
}

TEST_CASE("one scenario cannot form a valid market") {
    GaussianMarket gm;
    gm.mu = vec({0.2});
    gm.sigma = mat({{0.01}});
    gm.rate = 0.0;
    CHECK_THROWS_AS(discretize_gaussian(gm, 1, 42), GenerationError);
}

TEST_CASE("portfolio payoff is the matrix action on fractions") {
    const ScenarioSet mkt = make_scenario_set(mat({{2.0, 0.5}, {-1.0, 0.25}, {0.0, -1.0}}),
                                              vec({0.25, 0.5, 0.25}), 0.01);
    const Eigen::VectorXd pay = portfolio_payoff(mkt, vec({2.0, 4.0}));
    CHECK(pay(0) == doctest::Approx(6.0));
    CHECK(pay(1) == doctest::Approx(-1.0));
    CHECK(pay(2) == doctest::Approx(-4.0));
    CHECK_THROWS_AS(portfolio_payoff(mkt, vec({1.0})), LengthMismatch);
}
