#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace utilrisk {

/// Asymptotic ratio of utility losses to gains, limsup_{y->inf} u(-y)/u(y).
/// Always <= 0; negative infinity is the regime where losses dominate every
/// gain of the same size.
struct AlgVerdict {
    bool negative_infinity = false;
    double value = 0.0; // meaningful only when !negative_infinity

    static AlgVerdict neg_inf() { return {true, 0.0}; }
    static AlgVerdict finite(double v) { return {false, v}; }
};

/// Pointwise utility u : R -> R U {-inf}, increasing, u(0) = 0.
class UtilityFunction {
public:
    enum class Kind { Linear, Exponential, Power, SShaped, BoundedExponential, PiecewiseLinear };

    static UtilityFunction linear(double a);
    static UtilityFunction exponential(double a);
    static UtilityFunction power(double gamma);
    static UtilityFunction sshaped(double alpha, double beta);
    static UtilityFunction bounded_exponential();
    /// Points (x_i, y_i) with strictly increasing x, non-decreasing y,
    /// consistent with u(0) = 0, and a strictly positive terminal right slope
    /// (non-satiation). Extrapolates linearly with the terminal slopes.
    static UtilityFunction piecewise_linear(std::vector<double> xs, std::vector<double> ys);

    Kind kind() const { return kind_; }
    double operator()(double y) const;

    /// Limit of u at +infinity (the bliss level; may be +inf).
    double limit_at_infinity() const;
    bool concave() const;
    bool unbounded() const;
    /// u(y)/y non-increasing on (0, inf), checked exactly per variant.
    bool neg_star_shaped() const;

    double param1() const { return p1_; }
    double param2() const { return p2_; }
    const std::vector<double>& breakpoints() const { return xs_; }
    const std::vector<double>& values() const { return ys_; }
    double left_slope() const { return slope_left_; }
    double right_slope() const { return slope_right_; }

    std::string name() const;

private:
    UtilityFunction() = default;
    Kind kind_ = Kind::Linear;
    double p1_ = 0.0, p2_ = 0.0;
    std::vector<double> xs_, ys_, seg_slopes_;
    double slope_left_ = 0.0, slope_right_ = 0.0;
};

/// Asymptotic loss-gain ratio of u, by variant:
///   linear and bounded exponential give -1 exactly; exponential and power
///   diverge; the s-shaped ratio is -inf, 0 or -1 as the loss exponent
///   compares to the gain exponent; piecewise linear gives the negated ratio
///   of terminal slopes.
AlgVerdict alg_of(const UtilityFunction& u);

/// Finite samples of u(-y)/u(y) over a positive grid, for eyeballing the
/// asymptotic ratio. Throws DomainError when some u(y) vanishes.
std::vector<double> numeric_alg_trace(const UtilityFunction& u, const std::vector<double>& grid);

/// Analytic properties of a utility functional used by the classifier.
struct UtilityMetadata {
    bool upper_fatou = false;
    bool law_invariant = false;
    /// Weak and strong sensitivity to large losses coincide.
    bool sensitivity_equivalent = false;
    bool unbounded = false;
    bool neg_star_shaped = false;
    bool concave = false;
    bool pos_homogeneous = false;
    double bliss = 0.0; // supremum of values over constant payoffs
};

/// Utility functional on scenario payoffs. Either an expectation (plain mean
/// or expected pointwise utility) or one of two essential-infimum fixtures
/// used to exercise the boundary cases of the classifier:
///   EssinfFixture       max(min Y, min(E[Y], 1)): the worst scenario,
///                       rescued by the mean capped at 1; law invariant and
///                       monotone, weakly but not strongly sensitive to
///                       large losses.
///   PartitionFixture    min of Y over a fixed scenario subset; not law
///                       invariant, neither weakly nor strongly sensitive.
class UtilitySpec {
public:
    enum class Kind { Mean, ExpectedUtility, EssinfFixture, PartitionFixture };

    static UtilitySpec mean();
    static UtilitySpec expected_utility(UtilityFunction u);
    static UtilitySpec essinf_fixture();
    /// inside: scenario indices the fixture looks at; n_scenarios fixes the
    /// space the fixture lives on.
    static UtilitySpec partition_fixture(std::vector<int> inside, int n_scenarios);

    Kind kind() const { return kind_; }
    const UtilityFunction& pointwise() const; // ExpectedUtility only
    const std::vector<int>& inside() const { return inside_; }
    int fixture_scenarios() const { return n_scenarios_; }
    const UtilityMetadata& metadata() const { return meta_; }
    std::string name() const;

private:
    Kind kind_ = Kind::Mean;
    std::optional<UtilityFunction> u_;
    std::vector<int> inside_;
    int n_scenarios_ = 0;
    UtilityMetadata meta_;
};

/// Value of the functional on a payoff. Expectations are accumulated in
/// sorted (value, weight) order so that equally weighted rearrangements of a
/// payoff produce bitwise identical results.
double utility_value(const UtilitySpec& spec, const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs);

/// Value on a constant payoff (independent of the scenario space).
double utility_of_constant(const UtilitySpec& spec, double c);

/// Sensitivity of a functional to large losses.
struct SensitivityReport {
    bool applicable = false; // a definitive analytic criterion covers this spec
    bool sll = false;        // scaled losing payoffs eventually get negative value
    bool weak_sll = false;   // scaled values stay capped strictly below bliss
    std::string reason;
};

SensitivityReport utility_sll(const UtilitySpec& spec);

} // namespace utilrisk
