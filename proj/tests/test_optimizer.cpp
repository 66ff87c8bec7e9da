#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"
#include "utilrisk/errors.hpp"
#include "utilrisk/optimizer.hpp"
#include "utilrisk/rng.hpp"

#include <cmath>
#include <limits>
#include <vector>

using namespace utilrisk;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
    const Eigen::Index nr = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index nc = static_cast<Eigen::Index>(rows.begin()->size());
    Eigen::MatrixXd m(nr, nc);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double x : row) m(i, j++) = x;
        ++i;
    }
    return m;
}

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

/// One risky asset paying +2 or -1 with equal odds.
ScenarioSet coin_market() { return make_scenario_set(mat({{2.0}, {-1.0}}), vec({0.5, 0.5}), 0.0); }

/// Same payoffs with favorable odds: positive mean, quantile risk blind.
ScenarioSet tilted_market() { return make_scenario_set(mat({{2.0}, {-1.0}}), vec({0.6, 0.4}), 0.0); }

} // namespace

TEST_CASE("mean against the 50% tail average finds the binding budget") {
    const ScenarioSet mkt = coin_market();
    const UtilitySpec U = UtilitySpec::mean();
    const RiskSpec R = RiskSpec::es(0.5);
    const ProblemFrame frame = make_frame(U, R, 1.0, 0.0, -0.5); // transformed budget 0.5
    CHECK(frame.r_tilde_max == doctest::Approx(0.5));

    SolveOptions opts;
    const OptimizationResult res = maximize_utility(U, R, mkt, frame, opts);
    REQUIRE(res.status == OptimizationResult::Status::Optimal);
    REQUIRE(res.pi.size() == 1);
    CHECK(res.pi(0) == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(res.value == doctest::Approx(0.25).epsilon(1e-4));
    CHECK(transformed_risk(R, frame, portfolio_payoff(mkt, res.pi), mkt.probs) <= frame.r_tilde_max + 1e-9);
    CHECK(res.evaluations > 0);
    CHECK(res.starts_converged > 0);
}

TEST_CASE("quantile-blind risk lets the mean run away") {
    const ScenarioSet mkt = tilted_market();
    const UtilitySpec U = UtilitySpec::mean();
    const RiskSpec R = RiskSpec::var(0.5);
    const ProblemFrame frame = make_frame(U, R, 1.0, 0.0, 0.5);

    SolveOptions opts;
    const OptimizationResult res = maximize_utility(U, R, mkt, frame, opts);
    REQUIRE(res.status == OptimizationResult::Status::Diverging);
    REQUIRE(res.divergence.has_value());
    CHECK(res.pi.size() == 0);

    const DivergingEvidence& ev = *res.divergence;
    CHECK(ev.direction.size() == 1);
    CHECK(ev.direction(0) > 0.0); // long the favorable asset
    REQUIRE(ev.trace.size() >= 10);
    for (size_t i = 0; i < ev.trace.size(); ++i) {
        CHECK(ev.trace[i].risk <= frame.r_tilde_max + 1e-9);
        if (i + 1 < ev.trace.size()) CHECK(ev.trace[i].lambda < ev.trace[i + 1].lambda);
    }
    for (size_t i = ev.trace.size() - 10; i + 1 < ev.trace.size(); ++i)
        CHECK(ev.trace[i].utility < ev.trace[i + 1].utility);
}

TEST_CASE("zero budget against the worst case pins the riskless point") {
    const ScenarioSet mkt = coin_market();
    const UtilitySpec U = UtilitySpec::expected_utility(UtilityFunction::sshaped(0.5, 0.7));
    const RiskSpec R = RiskSpec::worst_case();
    const ProblemFrame frame = make_frame(U, R, 1.0, 0.0, risk_of_constant(R, 1.0));
    CHECK(frame.r_tilde_max == doctest::Approx(0.0));

    SolveOptions opts;
    const OptimizationResult res = maximize_utility(U, R, mkt, frame, opts);
    REQUIRE(res.status == OptimizationResult::Status::Optimal);
    CHECK(std::abs(res.pi(0)) <= 1e-6);
    CHECK(std::abs(res.value) <= 1e-9);
}

TEST_CASE("reference grid maximizer") {
    const ScenarioSet mkt = coin_market();
    const UtilitySpec U = UtilitySpec::mean();
    const RiskSpec R = RiskSpec::es(0.5);
    const ProblemFrame frame = make_frame(U, R, 1.0, 0.0, -0.5);

    const auto [pi, value] = grid_oracle(U, R, mkt, frame, 4.0, 1601);
    REQUIRE(pi.size() == 1);
    const double spacing = 8.0 / 1600.0;
    CHECK(std::abs(pi(0) - 0.5) <= spacing);
    CHECK(std::abs(value - 0.25) <= spacing); // mean objective is 0.5-Lipschitz in pi

    // a zero budget forces the zero candidate, which the grid always admits
    const ProblemFrame tight = make_frame(U, RiskSpec::worst_case(), 1.0, 0.0, -1.0);
    const auto [pi0, value0] = grid_oracle(U, RiskSpec::worst_case(), mkt, tight, 4.0, 1601);
    CHECK(pi0.isZero());
    CHECK(value0 == 0.0);

    const ScenarioSet wide = make_scenario_set(mat({{1.0, 0.0, 0.0}, {-1.0, 1.0, 0.0}, {0.0, -1.0, 1.0}, {0.0, 0.0, -1.0}}),
                                               vec({0.25, 0.25, 0.25, 0.25}), 0.0);
    const ProblemFrame f3 = make_frame(U, R, 1.0, 0.0, kInf);
    CHECK_THROWS_AS(grid_oracle(U, R, wide, f3, 4.0, 101), DimensionError);
    CHECK_THROWS_AS(grid_oracle(U, R, mkt, frame, 4.0, 4002), DomainError);
}

TEST_CASE("risk minimization under a utility floor") {
    const ScenarioSet mkt = coin_market();
    const UtilitySpec U = UtilitySpec::mean();
    const RiskSpec R = RiskSpec::es(0.5);

    SolveOptions opts;

    // floor at the riskless utility: staying put is optimal and costless
    const ProblemFrame base = make_risk_min_frame(U, R, 1.0, 0.0, 1.0);
    const OptimizationResult at0 = minimize_risk(U, R, mkt, base, opts);
    REQUIRE(at0.status == OptimizationResult::Status::Optimal);
    CHECK(std::abs(at0.pi(0)) <= 1e-5);
    CHECK(std::abs(at0.value) <= 1e-6);

    // floor a quarter above: the binding point of the maximization example
    const ProblemFrame lift = make_risk_min_frame(U, R, 1.0, 0.0, 1.25);
    const OptimizationResult res = minimize_risk(U, R, mkt, lift, opts);
    REQUIRE(res.status == OptimizationResult::Status::Optimal);
    CHECK(res.pi(0) == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(res.value == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(transformed_utility(U, lift, portfolio_payoff(mkt, res.pi), mkt.probs) >= *lift.u_tilde_min - 1e-6);
}

TEST_CASE("uniqueness evidence") {
    const ScenarioSet mkt = coin_market();
    SolveOptions opts;

    const UtilitySpec mean = UtilitySpec::mean();
    const RiskSpec es = RiskSpec::es(0.5);
    const ProblemFrame f1 = make_frame(mean, es, 1.0, 0.0, -0.5);
    const OptimizationResult r1 = maximize_utility(mean, es, mkt, f1, opts);
    const UniquenessReport u1 = uniqueness_probe(r1);
    CHECK(u1.unique_evidence);
    CHECK(u1.starts_converged == r1.starts_converged);

    // strictly concave two-asset instance
    const ScenarioSet two = make_scenario_set(mat({{1.0, 0.2}, {-0.5, 0.4}, {0.2, -0.8}}),
                                              vec({0.4, 0.3, 0.3}), 0.0);
    const UtilitySpec expu = UtilitySpec::expected_utility(UtilityFunction::exponential(1.0));
    const ProblemFrame f2 = make_frame(expu, es, 1.0, 0.0, -0.2);
    const OptimizationResult r2 = maximize_utility(expu, es, two, f2, opts);
    REQUIRE(r2.status == OptimizationResult::Status::Optimal);
    CHECK(uniqueness_probe(r2).unique_evidence);

    // flat objective: every start stops somewhere else
    const ScenarioSet sym = make_scenario_set(mat({{1.0}, {-1.0}}), vec({0.5, 0.5}), 0.0);
    const ProblemFrame f3 = make_frame(mean, RiskSpec::zero(), 1.0, 0.0, 0.0);
    const OptimizationResult r3 = maximize_utility(mean, RiskSpec::zero(), sym, f3, opts);
    if (r3.status == OptimizationResult::Status::Optimal) CHECK_FALSE(uniqueness_probe(r3).unique_evidence);
}

TEST_CASE("solver tracks the grid reference across random markets") {
    Rng rng(51);
    SolveOptions opts;
    const UtilitySpec U = UtilitySpec::expected_utility(UtilityFunction::exponential(1.0));
    const RiskSpec R = RiskSpec::es(0.3);
    int solved = 0;
    for (int t = 0; t < 10; ++t) {
        const int d = 1 + static_cast<int>(rng.below(2));
        const ScenarioSet mkt = test_support::random_market(rng, d, d + 2 + static_cast<int>(rng.below(3)));
        const double budget = rng.uniform(0.1, 0.6);
        const ProblemFrame frame = make_frame(U, R, 1.0, 0.0, risk_of_constant(R, 1.0) + budget);
        const OptimizationResult res = maximize_utility(U, R, mkt, frame, opts);
        if (res.status != OptimizationResult::Status::Optimal) continue;
        ++solved;
        const int steps = d == 1 ? 1601 : 401;
        const auto [gpi, gval] = grid_oracle(U, R, mkt, frame, 4.0, steps);
        const double spacing = 8.0 / (steps - 1);
        CHECK(res.value >= gval - std::max(1e-4, 2.0 * spacing));
        CHECK(transformed_risk(R, frame, portfolio_payoff(mkt, res.pi), mkt.probs) <= frame.r_tilde_max + 1e-9);
    }
    CHECK(solved > 0);
}

TEST_CASE("value grows with the risk budget") {
    const ScenarioSet mkt = coin_market();
    const UtilitySpec U = UtilitySpec::mean();
    const RiskSpec R = RiskSpec::es(0.5);
    SolveOptions opts;
    double last = -kInf;
    for (double budget : {0.1, 0.3, 0.6, 1.0, 1.5}) {
        const ProblemFrame frame = make_frame(U, R, 1.0, 0.0, -1.0 + budget);
        const OptimizationResult res = maximize_utility(U, R, mkt, frame, opts);
        REQUIRE(res.status == OptimizationResult::Status::Optimal);
        CHECK(res.value >= last - 1e-9);
        last = res.value;
    }
}

TEST_CASE("share-space route mirrors the fraction solve") {
    const ScenarioSet mkt = coin_market();
    const UtilitySpec U = UtilitySpec::expected_utility(UtilityFunction::exponential(1.0));
    const RiskSpec R = RiskSpec::es(0.5);
    SolveOptions opts;
    opts.tol = 1e-10;

    const double w = 2.0, r = 0.1;
    const double raw_budget = risk_of_constant(R, w * (1.0 + r)) + 0.8;
    const ProblemFrame frame = make_frame(U, R, w, r, raw_budget);
    const OptimizationResult frac = maximize_utility(U, R, mkt, frame, opts);
    const OptimizationResult shares = maximize_utility_shares(U, R, mkt, w, r, raw_budget, opts);
    REQUIRE(frac.status == OptimizationResult::Status::Optimal);
    REQUIRE(shares.status == OptimizationResult::Status::Optimal);
    CHECK(std::abs(shares.value - frac.value - frame.utility_at_riskless) <= 1e-9);
    CHECK(std::abs(shares.pi(0) - frac.pi(0)) <= 1e-4);
}

TEST_CASE("fixed seeds reproduce bitwise results") {
    const ScenarioSet mkt = tilted_market();
    const UtilitySpec U = UtilitySpec::expected_utility(UtilityFunction::exponential(1.0));
    const RiskSpec R = RiskSpec::es(0.3);
    const ProblemFrame frame = make_frame(U, R, 1.0, 0.0, risk_of_constant(R, 1.0) + 0.4);
    SolveOptions opts;
    opts.seed = 7;
    const OptimizationResult a = maximize_utility(U, R, mkt, frame, opts);
    const OptimizationResult b = maximize_utility(U, R, mkt, frame, opts);
    REQUIRE(a.status == OptimizationResult::Status::Optimal);
    REQUIRE(b.status == OptimizationResult::Status::Optimal);
    CHECK(a.pi(0) == b.pi(0));
    CHECK(a.value == b.value);
    CHECK(a.evaluations == b.evaluations);
    CHECK(a.starts_agreeing == b.starts_agreeing);
}

TEST_CASE("infeasible floor is reported, not fudged") {
    const ScenarioSet mkt = coin_market();
    const UtilitySpec U = UtilitySpec::expected_utility(UtilityFunction::bounded_exponential());
    const RiskSpec R = RiskSpec::worst_case();
    // a floor below the riskless utility is rejected at frame construction
    CHECK_THROWS_AS(make_risk_min_frame(U, R, 1.0, 0.0, 0.5), PreconditionError);

    // the bounded utility tops out near 0.652 in this market, so 0.7 is out
    // of reach for every portfolio
    const ProblemFrame out = make_risk_min_frame(U, R, 1.0, 0.0, 0.7);
    SolveOptions opts;
    const OptimizationResult miss = minimize_risk(U, R, mkt, out, opts);
    CHECK(miss.status == OptimizationResult::Status::Infeasible);

    const UtilitySpec mean = UtilitySpec::mean();
    const ProblemFrame f = make_risk_min_frame(mean, R, 1.0, 0.0, 1.2);
    const OptimizationResult res = minimize_risk(mean, R, mkt, f, opts);
    // reaching mean 1.2 needs pi = 0.4, with worst-case risk 0.4: optimal
    REQUIRE(res.status == OptimizationResult::Status::Optimal);
    CHECK(res.pi(0) == doctest::Approx(0.4).epsilon(1e-3));
    CHECK(res.value == doctest::Approx(0.4).epsilon(1e-3));
}

TEST_CASE("risk minimization can diverge when the quantile ignores the tail") {
    const ScenarioSet mkt = tilted_market();
    const UtilitySpec mean = UtilitySpec::mean();
    const RiskSpec R = RiskSpec::var(0.5);
    const ProblemFrame f = make_risk_min_frame(mean, R, 1.0, 0.0, 1.0);
    SolveOptions opts;
    const OptimizationResult res = minimize_risk(mean, R, mkt, f, opts);
    // along pi -> +infinity the mean stays above the floor while the visible
    // quantile keeps falling
    REQUIRE(res.status == OptimizationResult::Status::Diverging);
    REQUIRE(res.divergence.has_value());
    const DivergingEvidence& ev = *res.divergence;
    REQUIRE(ev.trace.size() >= 10);
    for (size_t i = ev.trace.size() - 10; i + 1 < ev.trace.size(); ++i)
        CHECK(ev.trace[i].risk > ev.trace[i + 1].risk);
}
