#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>

namespace utilrisk {

/// Finite one-period market on n scenarios and d risky assets.
/// `returns(s, i)` is the excess return of asset i in scenario s, so a
/// fraction vector pi earns the payoff-per-unit-wealth `returns * pi` on top
/// of the riskless growth.
struct ScenarioSet {
    Eigen::MatrixXd returns; // n x d, excess returns
    Eigen::VectorXd probs;   // n, strictly positive, sums to one
    double rate = 0.0;       // riskless rate r > -1

    Eigen::Index n_scenarios() const { return returns.rows(); }
    Eigen::Index n_assets() const { return returns.cols(); }
};

/// Structural health of an excess-return matrix.
struct ValidationReport {
    bool no_arbitrage = false;
    bool non_redundant = false;
    int rank = 0;
    /// Strictly positive state weights q with returns^T q = 0, scaled so
    /// min q = 1; present exactly when no_arbitrage holds.
    std::optional<Eigen::VectorXd> state_prices;
};

/// Checks absence of arbitrage (existence of strictly positive state weights
/// annihilating every excess-return column, found by a phase-1 simplex) and
/// full column rank (rank-revealing QR, threshold 1e-10).
ValidationReport validate_market(const Eigen::MatrixXd& returns, const Eigen::VectorXd& probs);

/// Validates and assembles a scenario set. Throws ProbabilityError,
/// LengthMismatch, DomainError, ArbitrageError or RedundancyError.
ScenarioSet make_scenario_set(const Eigen::MatrixXd& returns, const Eigen::VectorXd& probs, double rate);

/// Jointly normal return model: raw returns ~ N(mu, sigma), riskless rate.
struct GaussianMarket {
    Eigen::VectorXd mu;    // raw expected returns, must differ from rate * 1
    Eigen::MatrixXd sigma; // symmetric positive definite
    double rate = 0.0;
};

/// Throws DomainError when the model is degenerate (sigma not symmetric
/// positive definite, or mu equal to rate on every asset).
void validate_gaussian(const GaussianMarket& gm);

/// Draws n equally weighted scenarios of excess returns mu - rate + L z with
/// L the Cholesky factor of sigma and z standard normal (deterministic
/// inverse-transform sampling). Resamples with a fresh substream, at most 32
/// times, until the discretized market passes validate_market; throws
/// GenerationError when retries are exhausted or n < d + 1.
ScenarioSet discretize_gaussian(const GaussianMarket& gm, int n, std::uint64_t seed);

/// Payoff per unit wealth of a fraction vector: returns * pi.
Eigen::VectorXd portfolio_payoff(const ScenarioSet& mkt, const Eigen::VectorXd& pi);

} // namespace utilrisk
