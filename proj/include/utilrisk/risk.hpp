#pragma once

#include "utilrisk/utility.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace utilrisk {

/// Convex increasing loss weighting l : R -> R with l(0) = 0.
class LossFunction {
public:
    enum class Kind { Identity, ExpMinusOne, PositivePart, PowerPlus, PiecewiseLinear };

    static LossFunction identity();
    static LossFunction exp_minus_one(double a);  // (e^{ay} - 1) / a, a > 0
    static LossFunction positive_part(double c);  // c * max(y, 0), c > 0
    static LossFunction power_plus(double p, double c); // c * max(y, 0)^p, p > 1, c > 0
    /// Convex piecewise linear: strictly increasing breakpoints, non-decreasing
    /// convex values through the origin, nonnegative non-decreasing slopes,
    /// strictly positive terminal slope.
    static LossFunction piecewise_linear(std::vector<double> xs, std::vector<double> ys);

    Kind kind() const { return kind_; }
    double operator()(double y) const;

    /// Asymptotic loss-gain ratio of the induced utility y -> -l(-y):
    /// diverges whenever the gain side of that utility flattens while the
    /// loss side keeps growing.
    AlgVerdict alg() const;
    bool positive_on_gains() const;              // l > 0 on (0, inf)
    bool dominates_identity() const;             // l(y) >= y everywhere
    bool superlinear_at_infinity() const;        // l(y)/y -> inf
    bool sublinear_at_minus_infinity() const;    // l(y)/y -> 0 as y -> -inf

    double param1() const { return p1_; }
    double param2() const { return p2_; }
    double first_slope() const { return slope_first_; }
    double last_slope() const { return slope_last_; }
    std::string name() const;

private:
    LossFunction() = default;
    Kind kind_ = Kind::Identity;
    double p1_ = 0.0, p2_ = 0.0;
    std::vector<double> xs_, ys_, seg_slopes_;
    double slope_first_ = 0.0, slope_last_ = 0.0;
};

/// Step threshold profile for the offset quantile functional: probability
/// level levels[j] paired with payoff offset breakpoints[j] <= 0, the last
/// offset being 0. Levels are non-decreasing in [0, 1).
struct ThresholdDistribution {
    std::vector<double> breakpoints;
    std::vector<double> levels;

    double inf_level() const { return levels.front(); }
};

ThresholdDistribution make_threshold_distribution(std::vector<double> breakpoints, std::vector<double> levels);

/// Decreasing add-on profile g on (0, 1] for the adjusted tail average:
/// g equals values[j] on [breakpoints[j], breakpoints[j+1]) and
/// limit_at_zero on (0, breakpoints[0]); breakpoints increase to 1 and the
/// value at 1 is 0. Values may be +inf.
struct RiskProfile {
    std::vector<double> breakpoints;
    std::vector<double> values;
    double limit_at_zero = 0.0;

    bool finite_everywhere() const;
};

RiskProfile make_risk_profile(std::vector<double> breakpoints, std::vector<double> values, double limit_at_zero);

/// Analytic properties of a risk functional used by the classifier.
struct RiskMetadata {
    bool lower_fatou = false;
    bool cash_convex = false;
    bool pos_star_shaped = false;
    bool law_invariant = false;
    /// Adding cash c lowers the value by exactly c.
    bool cash_additive = false;
    bool convex = false;
    bool pos_homogeneous = false;
};

/// Risk functional on scenario payoffs (value may be +inf).
class RiskSpec {
public:
    enum class Kind {
        Zero,
        ValueAtRisk,
        ExpectedShortfall,
        LossVaR,
        AdjustedES,
        ExpectedWeightedLoss,
        ShortfallRisk,
        OptimizedCertainty,
        Entropic,
        WorstCase,
        PartitionFixture
    };

    static RiskSpec zero();
    static RiskSpec var(double alpha);               // alpha in [0, 1)
    static RiskSpec es(double alpha);                // alpha in (0, 1]
    static RiskSpec lvar(ThresholdDistribution td);
    static RiskSpec adjusted_es(RiskProfile profile);
    static RiskSpec ew(LossFunction loss);
    static RiskSpec sr(LossFunction loss);
    /// Requires loss(y) >= y (throws DomainError otherwise).
    static RiskSpec oce(LossFunction loss);
    static RiskSpec entropic(double a);              // a > 0
    static RiskSpec worst_case();
    /// Zero when the payoff is nonnegative outside `inside`, +inf otherwise.
    static RiskSpec partition_fixture(std::vector<int> inside, int n_scenarios);

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    const LossFunction& loss() const;
    const ThresholdDistribution& threshold() const { return td_; }
    const RiskProfile& profile() const { return profile_; }
    const std::vector<int>& inside() const { return inside_; }
    int fixture_scenarios() const { return n_scenarios_; }
    const RiskMetadata& metadata() const { return meta_; }
    std::string name() const;

private:
    RiskSpec() = default;
    Kind kind_ = Kind::Zero;
    double alpha_ = 0.0;
    std::vector<LossFunction> loss_; // empty or one element
    ThresholdDistribution td_;
    RiskProfile profile_;
    std::vector<int> inside_;
    int n_scenarios_ = 0;
    RiskMetadata meta_;
};

/// Smallest atom cushion m with P[m + Y < 0] <= alpha, returned as -y over
/// the largest feasible atom; ties at the level resolve toward the larger
/// atom (tolerance 1e-12).
double value_at_risk(const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs, double alpha);

/// Tail average min_eta { eta + E[(-Y - eta)^+] / alpha }, minimized exactly
/// over the atom candidates eta = -y via prefix sums.
double expected_shortfall(const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs, double alpha);

/// max_j { value_at_risk at levels[j] + breakpoints[j] }.
double loss_var(const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs, const ThresholdDistribution& td);

/// sup over levels of the tail average minus the add-on profile: the
/// candidates are the worst case minus g(0+) (skipped when infinite) and the
/// tail averages at each breakpoint minus the segment value (skipped when
/// infinite).
double adjusted_es(const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs, const RiskProfile& profile);

/// E[loss(-Y)], +inf absorbing.
double expected_weighted_loss(const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs, const LossFunction& loss);

/// Smallest m with E[loss(-Y - m)] <= 0, by predicate bisection to absolute
/// tolerance 1e-10. Throws NoRoot when bracketing fails.
double shortfall_risk(const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs, const LossFunction& loss);

/// inf_eta { E[loss(eta - Y)] - eta }, by ternary search on the convex
/// objective to relative tolerance 1e-10. Throws UnboundedBelow when bracket
/// expansion fails.
double oce_risk(const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs, const LossFunction& loss);

/// (1/a) log E[e^{-aY}], evaluated with the max shift so large losses cannot
/// overflow.
double entropic_risk(const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs, double a);

/// -min Y.
double worst_case_risk(const Eigen::VectorXd& payoff);

/// Value of the functional on a payoff.
double risk_value(const RiskSpec& spec, const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs);

/// Value on a constant payoff.
double risk_of_constant(const RiskSpec& spec, double c);

/// Sensitivity of the functional to large losses (analytic, per variant).
SensitivityReport risk_sll(const RiskSpec& spec);

} // namespace utilrisk
