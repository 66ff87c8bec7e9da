#pragma once

#include "utilrisk/scenarios.hpp"
#include "utilrisk/transform.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace utilrisk {

struct SolveOptions {
    int n_starts = 16;
    int max_iters = 2000;
    double tol = 1e-8;        // simplex diameter stop
    double penalty = 1e6;     // quadratic constraint penalty
    int ray_k_max = 40;       // divergence rays run lambda = 2^0 .. 2^ray_k_max
    std::uint64_t seed = 0;
};

struct TracePoint {
    double lambda = 0.0;
    double utility = 0.0;
    double risk = 0.0;
};

/// A feasible ray along which the objective keeps improving through the
/// whole doubling schedule: evidence that no maximizer exists.
struct DivergingEvidence {
    Eigen::VectorXd direction; // unit fraction vector
    std::vector<TracePoint> trace;
};

struct OptimizationResult {
    enum class Status { Optimal, Diverging, Infeasible };
    Status status = Status::Infeasible;
    Eigen::VectorXd pi;
    double value = 0.0; // transformed objective at pi
    std::optional<DivergingEvidence> divergence;
    long evaluations = 0;
    int starts_converged = 0;
    /// Converged starts whose candidate lies within 1e-4 of the winner.
    int starts_agreeing = 0;
};

struct UniquenessReport {
    int starts_converged = 0;
    int starts_agreeing = 0;
    /// At least one start converged and 90% of converged starts agree.
    bool unique_evidence = false;
};

UniquenessReport uniqueness_probe(const OptimizationResult& result);

/// Scans coordinate directions, the tangency direction (inverse scenario
/// covariance times mean excess return) and seeded random unit directions for
/// divergence evidence: transformed risk within budget along the whole
/// schedule, transformed utility strictly increasing over the last ten
/// points and the final value above every earlier one.
std::optional<DivergingEvidence> divergence_probe(const UtilitySpec& U, const RiskSpec& R,
                                                  const ScenarioSet& mkt, const ProblemFrame& frame,
                                                  const SolveOptions& opts);

/// Maximizes transformed utility over fractions subject to transformed risk
/// <= frame.r_tilde_max: divergence probe first, then penalized Nelder-Mead
/// from n_starts seeded starts with geometric feasibility repair. Ties break
/// toward the best value, then the smallest norm, then lexicographic order.
OptimizationResult maximize_utility(const UtilitySpec& U, const RiskSpec& R, const ScenarioSet& mkt,
                                    const ProblemFrame& frame, const SolveOptions& opts);

/// Minimizes transformed risk subject to transformed utility >=
/// frame.u_tilde_min (frame must come from make_risk_min_frame). The mirrored
/// probe reports Diverging when risk keeps falling along a utility-feasible
/// ray; Infeasible when no start meets the floor.
OptimizationResult minimize_risk(const UtilitySpec& U, const RiskSpec& R, const ScenarioSet& mkt,
                                 const ProblemFrame& frame, const SolveOptions& opts);

/// Exhaustive reference maximizer on a uniform grid over [-box, box]^d,
/// d <= 2 (DimensionError above), steps <= 4001 per axis (DomainError). The
/// zero vector is always admitted as a candidate. Same tie-breaking as the
/// solver.
std::pair<Eigen::VectorXd, double> grid_oracle(const UtilitySpec& U, const RiskSpec& R,
                                               const ScenarioSet& mkt, const ProblemFrame& frame,
                                               double box, int steps);

/// Independent route through raw share space: maximizes U(w(1+r) + X theta)
/// subject to R <= r_max over risky wealth amounts theta, without the
/// transformed functionals. Returns fractions theta / w and the raw value.
OptimizationResult maximize_utility_shares(const UtilitySpec& U, const RiskSpec& R, const ScenarioSet& mkt,
                                           double w, double r, double r_max, const SolveOptions& opts);

} // namespace utilrisk
