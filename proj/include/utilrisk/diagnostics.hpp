#pragma once

#include "utilrisk/risk.hpp"
#include "utilrisk/scenarios.hpp"
#include "utilrisk/utility.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace utilrisk {

enum class Verdict { WellPosed, IllPosed, Unknown };

std::string verdict_name(Verdict v);

struct ClassificationBasis {
    bool u_sll = false;
    bool u_weak_sll = false;
    bool r_sll = false;
    bool u_upper_fatou = false;
    bool u_sensitivity_equiv = false;
    bool r_lower_fatou = false;
    bool r_cash_convex = false;
    std::string law_invariance_side; // "both" | "utility" | "risk" | "none"
};

struct Classification {
    Verdict verdict = Verdict::Unknown;
    /// Machine-readable code of the first premise that could not be verified
    /// (empty unless the verdict is Unknown): U_unbounded, U_neg_star_shaped,
    /// U_upper_fatou, U_sensitivity_equiv, R_lower_fatou, R_cash_convex,
    /// law_invariance.
    std::string failing_premise;
    ClassificationBasis basis;
    std::vector<std::string> citations;
};

/// Market-independent posedness of the selection problem for the pair (U, R):
/// WellPosed when the premises hold and either side is sensitive to large
/// losses, IllPosed when the premises hold and neither is, Unknown (with the
/// failing premise named) otherwise.
Classification classify_wellposedness(const UtilitySpec& U, const RiskSpec& R);

/// The two canonical classification matrices over the cataloged functionals.
struct PosednessTables {
    std::vector<std::string> t1_rows, t1_cols; // risks x utilities
    std::vector<std::vector<Verdict>> t1;      // row-major
    std::vector<std::string> t2_rows, t2_cols;
    std::vector<std::vector<Verdict>> t2;
};

PosednessTables table_matrix();

/// One step of a diverging Gaussian strategy sequence.
struct WitnessPoint {
    Eigen::VectorXd pi;
    double mean = 0.0; // excess mean of the fraction payoff
    double risk = 0.0; // closed-form risk of the Gaussian payoff
};

struct GaussianWitness {
    GaussianMarket market;
    double alpha = 0.0;
    bool es_kind = false; // quantile threshold when false, tail average when true
    double threshold = 0.0;
    double sr_max = 0.0; // attainable mean-to-deviation slope of the market
    Eigen::VectorXd base_direction;
    std::vector<WitnessPoint> sequence;
};

struct WitnessResult {
    bool applicable = false;
    double threshold = 0.0;
    /// threshold - sr_max when the slope cannot beat the threshold.
    double gap = 0.0;
    std::optional<GaussianWitness> witness;
};

/// Builds a jointly normal market whose best mean-to-deviation slope is
/// target_sr and, when that slope beats the standardized risk threshold, a
/// diverging fraction sequence pi_n = n * u with nonpositive closed-form risk
/// and linearly growing mean. With the slope below the threshold no such
/// sequence exists and the gap is reported instead.
WitnessResult gaussian_witness(bool es_kind, double alpha, double target_sr, int dim, int count,
                               std::uint64_t seed);

struct ProbePoint {
    double lambda = 0.0;
    double value = 0.0;
};

struct ScalingProbe {
    std::vector<ProbePoint> trace;
    bool crossed = false; // the value is past zero from some scale onward
    std::optional<double> lambda_at_cross;
};

/// lambda = 2^0 .. 2^40.
std::vector<double> default_scaling_schedule();

/// Values of the functional on scaled copies of a payoff that has losses
/// (min Y < 0 required, PreconditionError otherwise). Crossing means negative
/// utility (resp. positive risk) from some schedule point onward.
ScalingProbe scaling_probe_utility(const UtilitySpec& U, const Eigen::VectorXd& payoff,
                                   const Eigen::VectorXd& probs, const std::vector<double>& schedule);
ScalingProbe scaling_probe_risk(const RiskSpec& R, const Eigen::VectorXd& payoff,
                                const Eigen::VectorXd& probs, const std::vector<double>& schedule);

struct AxiomCheck {
    bool required = false; // flagged in the metadata, so violations are defects
    bool passed = true;
    long violations = 0;
    std::string counterexample; // first violation found, human-readable
};

struct AxiomReport {
    std::vector<std::pair<std::string, AxiomCheck>> axioms;
    /// Some axiom the metadata flags as holding was violated.
    bool mismatch = false;
};

/// Randomized axiom checks against the metadata flags. Axioms flagged true
/// must survive every trial; axioms flagged false are hunted with adversarial
/// families plus the random trials, and found counterexamples are reported
/// without counting as defects. Keys: monotone, normalized, cash_additive,
/// positively_homogeneous, star_shaped, convex_sample,
/// law_invariant_on_uniform.
AxiomReport axiom_harness_risk(const RiskSpec& R, int trials, std::uint64_t seed);

/// Utility-side analogue; keys swap convex_sample for concave_sample and
/// star_shaped tests the negative star shape U(lambda Y) <= lambda U(Y) on
/// nonnegative payoffs (the flag speaks about gains only).
AxiomReport axiom_harness_utility(const UtilitySpec& U, int trials, std::uint64_t seed);

} // namespace utilrisk
