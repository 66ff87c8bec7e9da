#pragma once

#include "utilrisk/risk.hpp"
#include "utilrisk/utility.hpp"

#include <Eigen/Dense>

#include <optional>

namespace utilrisk {

/// Wealth/rate frame tying the raw problem over shares to the normalized
/// problem over wealth fractions. The transformed functionals subtract the
/// riskless baseline, so the zero fraction vector always has transformed
/// utility 0 and transformed risk 0.
struct ProblemFrame {
    double w = 1.0;                  // initial wealth, > 0
    double r = 0.0;                  // riskless rate, > -1
    double r_max = 0.0;              // raw risk budget (+inf when absent)
    double r_tilde_max = 0.0;        // transformed budget r_max - risk at the riskless payoff
    double risk_at_riskless = 0.0;
    double utility_at_riskless = 0.0;
    std::optional<double> u_min;       // raw utility floor (risk minimization)
    std::optional<double> u_tilde_min; // transformed floor
};

/// Frame for utility maximization under a risk budget. Throws DomainError on
/// bad wealth or rate and InfeasibleError when even the riskless payoff
/// breaks the budget (r_max < risk at w(1+r)).
ProblemFrame make_frame(const UtilitySpec& U, const RiskSpec& R, double w, double r, double r_max);

/// Frame for risk minimization under a utility floor. Requires
/// u_min >= utility of the riskless payoff (PreconditionError otherwise).
ProblemFrame make_risk_min_frame(const UtilitySpec& U, const RiskSpec& R, double w, double r, double u_min);

/// Utility of the frame-positioned payoff, net of the riskless baseline:
/// U(w(1+r) + w Y) - U(w(1+r)). Y is payoff per unit wealth.
double transformed_utility(const UtilitySpec& U, const ProblemFrame& frame, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& probs);

/// R(w(1+r) + w Y) - R(w(1+r)); +inf passes through.
double transformed_risk(const RiskSpec& R, const ProblemFrame& frame, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& probs);

/// Share vector (riskless first, then risky) to risky wealth fractions.
/// Enforces the budget: entries must sum to w within 1e-12 (BudgetError).
Eigen::VectorXd shares_to_fractions(const Eigen::VectorXd& theta, double w);

/// Risky fractions to the full share vector (riskless holding first).
Eigen::VectorXd fractions_to_shares(const Eigen::VectorXd& pi, double w);

} // namespace utilrisk
