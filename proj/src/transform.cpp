#include "utilrisk/transform.hpp"

#include "utilrisk/errors.hpp"

#include <cmath>
#include <limits>

namespace utilrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_frame_inputs(double w, double r) {
    if (!(w > 0.0)) throw DomainError("frame: wealth must be positive");
    if (!(r > -1.0)) throw DomainError("frame: rate must exceed -1");
}

} // namespace

ProblemFrame make_frame(const UtilitySpec& U, const RiskSpec& R, double w, double r, double r_max) {
    check_frame_inputs(w, r);
    ProblemFrame f;
    f.w = w;
    f.r = r;
    f.r_max = r_max;
    f.risk_at_riskless = risk_of_constant(R, w * (1.0 + r));
    f.utility_at_riskless = utility_of_constant(U, w * (1.0 + r));
    if (!(r_max >= f.risk_at_riskless))
        throw InfeasibleError("frame: risk budget below the risk of the riskless payoff");
    f.r_tilde_max = (r_max == kInf) ? kInf : r_max - f.risk_at_riskless;
    return f;
}

ProblemFrame make_risk_min_frame(const UtilitySpec& U, const RiskSpec& R, double w, double r, double u_min) {
    check_frame_inputs(w, r);
    ProblemFrame f;
    f.w = w;
    f.r = r;
    f.r_max = kInf;
    f.r_tilde_max = kInf;
    f.risk_at_riskless = risk_of_constant(R, w * (1.0 + r));
    f.utility_at_riskless = utility_of_constant(U, w * (1.0 + r));
    if (!(u_min >= f.utility_at_riskless - 1e-12))
        throw PreconditionError("frame: utility floor below the utility of the riskless payoff");
    f.u_min = u_min;
    f.u_tilde_min = u_min - f.utility_at_riskless;
    return f;
}

double transformed_utility(const UtilitySpec& U, const ProblemFrame& frame, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& probs) {
    const double base = frame.w * (1.0 + frame.r);
    const Eigen::VectorXd positioned = (y.array() * frame.w + base).matrix();
    return utility_value(U, positioned, probs) - frame.utility_at_riskless;
}

double transformed_risk(const RiskSpec& R, const ProblemFrame& frame, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& probs) {
    const double base = frame.w * (1.0 + frame.r);
    const Eigen::VectorXd positioned = (y.array() * frame.w + base).matrix();
    return risk_value(R, positioned, probs) - frame.risk_at_riskless;
}

Eigen::VectorXd shares_to_fractions(const Eigen::VectorXd& theta, double w) {
    if (!(w > 0.0)) throw DomainError("shares_to_fractions: wealth must be positive");
    if (theta.size() < 1) throw LengthMismatch("shares_to_fractions: empty share vector");
    if (std::abs(theta.sum() - w) > 1e-12)
        throw BudgetError("shares_to_fractions: shares must sum to the initial wealth");
    return theta.tail(theta.size() - 1) / w;
}

Eigen::VectorXd fractions_to_shares(const Eigen::VectorXd& pi, double w) {
    if (!(w > 0.0)) throw DomainError("fractions_to_shares: wealth must be positive");
    Eigen::VectorXd theta(pi.size() + 1);
    theta(0) = w * (1.0 - pi.sum());
    theta.tail(pi.size()) = w * pi;
    return theta;
}

} // namespace utilrisk
