#include "utilrisk/optimizer.hpp"

#include "utilrisk/errors.hpp"
#include "utilrisk/normal.hpp"
#include "utilrisk/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace utilrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct NmOutcome {
    Eigen::VectorXd x;
    double f = kInf;
    bool converged = false;
};

/// Nelder-Mead minimization, coefficients (1, 2, 0.5, 0.5); stops when the
/// simplex diameter falls below tol.
NmOutcome nelder_mead(const Objective& g, const Eigen::VectorXd& x0, double scale, int max_iters,
                      double tol) {
    const Eigen::Index d = x0.size();
    std::vector<Eigen::VectorXd> xs(static_cast<size_t>(d) + 1, x0);
    std::vector<double> fs(static_cast<size_t>(d) + 1);
    for (Eigen::Index i = 0; i < d; ++i) xs[static_cast<size_t>(i) + 1](i) += scale;
    for (size_t i = 0; i < xs.size(); ++i) fs[i] = g(xs[i]);

    std::vector<size_t> order(xs.size());
    const auto resort = [&] {
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return fs[a] < fs[b]; });
    };
    const auto diameter = [&] {
        double dia = 0.0;
        for (size_t i = 1; i < xs.size(); ++i) dia = std::max(dia, (xs[i] - xs[0]).norm());
        return dia;
    };

    NmOutcome out;
    for (int it = 0; it < max_iters; ++it) {
        resort();
        if (diameter() < tol) { out.converged = true; break; }

        const size_t worst = order.back();
        const size_t second = order[order.size() - 2];
        const size_t best = order.front();

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
        for (size_t i = 0; i < order.size(); ++i)
            if (order[i] != worst) centroid += xs[order[i]];
        centroid /= static_cast<double>(d);

        const Eigen::VectorXd refl = centroid + (centroid - xs[worst]);
        const double f_refl = g(refl);
        if (f_refl < fs[best]) {
            const Eigen::VectorXd expa = centroid + 2.0 * (centroid - xs[worst]);
            const double f_expa = g(expa);
            if (f_expa < f_refl) { xs[worst] = expa; fs[worst] = f_expa; }
            else { xs[worst] = refl; fs[worst] = f_refl; }
            continue;
        }
        if (f_refl < fs[second]) { xs[worst] = refl; fs[worst] = f_refl; continue; }

        const Eigen::VectorXd contr = f_refl < fs[worst] ? centroid + 0.5 * (refl - centroid)
                                                         : centroid + 0.5 * (xs[worst] - centroid);
        const double f_contr = g(contr);
        if (f_contr < std::min(f_refl, fs[worst])) { xs[worst] = contr; fs[worst] = f_contr; continue; }

        for (size_t i = 0; i < xs.size(); ++i) { // shrink toward the best vertex
            if (i == best) continue;
            xs[i] = xs[best] + 0.5 * (xs[i] - xs[best]);
            fs[i] = g(xs[i]);
        }
    }
    resort();
    out.x = xs[order.front()];
    out.f = fs[order.front()];
    return out;
}

Eigen::VectorXd random_unit(Rng& rng, Eigen::Index d) {
    Eigen::VectorXd v(d);
    for (;;) {
        for (Eigen::Index i = 0; i < d; ++i) v(i) = norm_inv(rng.uniform());
        const double n = v.norm();
        if (n > 1e-12) return v / n;
    }
}

Eigen::VectorXd random_in_ball(Rng& rng, Eigen::Index d, double radius) {
    const Eigen::VectorXd dir = random_unit(rng, d);
    const double u = rng.uniform();
    return dir * (radius * std::pow(u, 1.0 / static_cast<double>(d)));
}

/// Candidate directions in a fixed deterministic order: signed axes, the
/// tangency direction, then seeded random unit vectors.
std::vector<Eigen::VectorXd> probe_directions(const ScenarioSet& mkt, const SolveOptions& opts) {
    const Eigen::Index d = mkt.n_assets();
    std::vector<Eigen::VectorXd> dirs;
    for (Eigen::Index i = 0; i < d; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
        e(i) = 1.0;
        dirs.push_back(e);
        dirs.push_back(-e);
    }
    const Eigen::VectorXd mu = mkt.returns.transpose() * mkt.probs;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index s = 0; s < mkt.n_scenarios(); ++s) {
        const Eigen::VectorXd x = mkt.returns.row(s).transpose() - mu;
        cov += mkt.probs(s) * x * x.transpose();
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(cov);
    if (lu.isInvertible()) {
        const Eigen::VectorXd tang = lu.solve(mu);
        if (tang.norm() > 1e-12) dirs.push_back(tang / tang.norm());
    }
    for (int j = 0; j < opts.n_starts; ++j) {
        Rng rng = Rng::stream(opts.seed, 101 + static_cast<std::uint64_t>(j));
        dirs.push_back(random_unit(rng, d));
    }
    return dirs;
}

/// Last ten values strictly improving and the final value beating every
/// earlier one; the final value must be finite.
bool improving_to_the_end(const std::vector<double>& v, bool maximize) {
    const size_t n = v.size();
    if (n < 11) return false;
    const double sign = maximize ? 1.0 : -1.0;
    for (size_t k = n - 10; k < n; ++k) {
        if (!(sign * v[k] > sign * v[k - 1])) return false;
    }
    for (size_t k = 0; k + 1 < n; ++k) {
        if (!(sign * v[n - 1] > sign * v[k])) return false;
    }
    return std::isfinite(v[n - 1]);
}

/// Utility-maximization probe: transformed risk within budget along the whole
/// doubling schedule and transformed utility improving to the end.
std::optional<DivergingEvidence> probe_impl(const UtilitySpec& U, const RiskSpec& R,
                                            const ScenarioSet& mkt, const ProblemFrame& frame,
                                            const SolveOptions& opts, bool minimize_risk_mode,
                                            long& evals) {
    const double budget = minimize_risk_mode ? frame.u_tilde_min.value() : frame.r_tilde_max;
    for (const Eigen::VectorXd& dir : probe_directions(mkt, opts)) {
        const Eigen::VectorXd base = mkt.returns * dir;
        std::vector<TracePoint> trace;
        std::vector<double> objective;
        bool feasible_all = true;
        double lambda = 1.0;
        for (int k = 0; k <= opts.ray_k_max; ++k) {
            const Eigen::VectorXd y = lambda * base;
            const double u = transformed_utility(U, frame, y, mkt.probs);
            const double rv = transformed_risk(R, frame, y, mkt.probs);
            evals += 2;
            trace.push_back({lambda, u, rv});
            if (minimize_risk_mode) {
                if (!(u >= budget - 1e-9)) { feasible_all = false; break; }
                objective.push_back(rv);
            } else {
                if (rv == kInf || (budget != kInf && !(rv <= budget + 1e-9))) { feasible_all = false; break; }
                objective.push_back(u);
            }
            lambda *= 2.0;
        }
        if (feasible_all && improving_to_the_end(objective, !minimize_risk_mode))
            return DivergingEvidence{dir, trace};
    }
    return std::nullopt;
}

struct Candidate {
    Eigen::VectorXd pi;
    double value = -kInf;
    bool feasible = false;
    bool converged = false;
};

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) < b(i)) return true;
        if (a(i) > b(i)) return false;
    }
    return false;
}

/// Larger (or smaller, when minimizing) value wins; ties within 1e-9 go to
/// the smaller norm, then to lexicographic order.
bool better_candidate(const Candidate& a, const Candidate& b, bool maximize) {
    if (a.feasible != b.feasible) return a.feasible;
    const double sign = maximize ? 1.0 : -1.0;
    const double va = sign * a.value, vb = sign * b.value;
    const double tol = 1e-9 * std::max({1.0, std::abs(va), std::abs(vb)});
    if (va > vb + tol) return true;
    if (vb > va + tol) return false;
    const double na = a.pi.norm(), nb = b.pi.norm();
    if (na < nb - 1e-12) return true;
    if (nb < na - 1e-12) return false;
    return lex_less(a.pi, b.pi);
}

Eigen::VectorXd multistart_point(const SolveOptions& opts, Eigen::Index d, int s, std::uint64_t tag) {
    if (s == 0) return Eigen::VectorXd::Zero(d);
    Rng rng = Rng::stream(opts.seed, tag + static_cast<std::uint64_t>(s));
    return random_in_ball(rng, d, 0.5 * s);
}

} // namespace

UniquenessReport uniqueness_probe(const OptimizationResult& result) {
    UniquenessReport rep;
    rep.starts_converged = result.starts_converged;
    rep.starts_agreeing = result.starts_agreeing;
    rep.unique_evidence =
        result.starts_converged > 0 && 10 * result.starts_agreeing >= 9 * result.starts_converged;
    return rep;
}

std::optional<DivergingEvidence> divergence_probe(const UtilitySpec& U, const RiskSpec& R,
                                                  const ScenarioSet& mkt, const ProblemFrame& frame,
                                                  const SolveOptions& opts) {
    long evals = 0;
    return probe_impl(U, R, mkt, frame, opts, false, evals);
}

OptimizationResult maximize_utility(const UtilitySpec& U, const RiskSpec& R, const ScenarioSet& mkt,
                                    const ProblemFrame& frame, const SolveOptions& opts) {
    const Eigen::Index d = mkt.n_assets();
    OptimizationResult res;
    long evals = 0;

    if (auto ev = probe_impl(U, R, mkt, frame, opts, false, evals)) {
        res.status = OptimizationResult::Status::Diverging;
        res.divergence = std::move(ev);
        res.evaluations = evals;
        return res;
    }

    const double budget = frame.r_tilde_max;
    const auto util_at = [&](const Eigen::VectorXd& pi) {
        ++evals;
        return transformed_utility(U, frame, mkt.returns * pi, mkt.probs);
    };
    const auto risk_at = [&](const Eigen::VectorXd& pi) {
        ++evals;
        return transformed_risk(R, frame, mkt.returns * pi, mkt.probs);
    };
    const auto feasible = [&](const Eigen::VectorXd& pi) {
        const double rv = risk_at(pi);
        return rv != kInf && (budget == kInf || rv <= budget + 1e-9);
    };
    const Objective g = [&](const Eigen::VectorXd& pi) {
        const double u = util_at(pi);
        const double rv = risk_at(pi);
        double viol = 0.0;
        if (budget != kInf) viol = std::max(0.0, rv - budget);
        else if (rv == kInf) viol = 1.0; // infinite risk is never acceptable
        if (u == -kInf || viol == kInf) return kInf;
        return -u + opts.penalty * viol * viol;
    };

    // Shrink an infeasible candidate toward the origin (always feasible),
    // then push the scale back out to the constraint boundary.
    const auto repair = [&](Eigen::VectorXd pi) -> Candidate {
        if (!feasible(pi)) {
            int guard = 0;
            while (!feasible(pi) && guard++ < 80) pi *= 0.5;
            if (!feasible(pi)) pi.setZero();
            Eigen::VectorXd lo = pi;
            Eigen::VectorXd hi = 2.0 * pi;
            for (int it = 0; it < 40; ++it) {
                const Eigen::VectorXd mid = 0.5 * (lo + hi);
                if (feasible(mid)) lo = mid;
                else hi = mid;
            }
            pi = lo;
        }
        Candidate c;
        c.pi = pi;
        c.feasible = true;
        c.value = util_at(pi);
        return c;
    };

    std::vector<Candidate> cands;
    for (int s = 0; s < opts.n_starts; ++s) {
        const Eigen::VectorXd x0 = multistart_point(opts, d, s, 201);
        const double scale = 0.25 * (1.0 + 0.1 * x0.norm());
        const NmOutcome nm = nelder_mead(g, x0, scale, opts.max_iters, opts.tol);
        Candidate c = repair(nm.x);
        c.converged = nm.converged;
        cands.push_back(std::move(c));
    }

    size_t best = 0;
    for (size_t i = 1; i < cands.size(); ++i)
        if (better_candidate(cands[i], cands[best], true)) best = i;

    res.status = OptimizationResult::Status::Optimal;
    res.pi = cands[best].pi;
    res.value = cands[best].value;
    res.evaluations = evals;
    for (const Candidate& c : cands) {
        if (!c.converged) continue;
        ++res.starts_converged;
        if ((c.pi - res.pi).norm() <= 1e-4) ++res.starts_agreeing;
    }
    return res;
}

OptimizationResult minimize_risk(const UtilitySpec& U, const RiskSpec& R, const ScenarioSet& mkt,
                                 const ProblemFrame& frame, const SolveOptions& opts) {
    if (!frame.u_tilde_min) throw PreconditionError("minimize_risk: frame carries no utility floor");
    const double floor = *frame.u_tilde_min;
    const Eigen::Index d = mkt.n_assets();
    OptimizationResult res;
    long evals = 0;

    if (auto ev = probe_impl(U, R, mkt, frame, opts, true, evals)) {
        res.status = OptimizationResult::Status::Diverging;
        res.divergence = std::move(ev);
        res.evaluations = evals;
        return res;
    }

    const auto util_at = [&](const Eigen::VectorXd& pi) {
        ++evals;
        return transformed_utility(U, frame, mkt.returns * pi, mkt.probs);
    };
    const auto risk_at = [&](const Eigen::VectorXd& pi) {
        ++evals;
        return transformed_risk(R, frame, mkt.returns * pi, mkt.probs);
    };
    const Objective g = [&](const Eigen::VectorXd& pi) {
        const double u = util_at(pi);
        const double rv = risk_at(pi);
        const double viol = std::max(0.0, floor - u);
        if (rv == kInf || viol == kInf) return kInf;
        return rv + opts.penalty * viol * viol;
    };

    const auto meets_floor = [&](const Eigen::VectorXd& pi) { return util_at(pi) >= floor - 1e-9; };

    // The penalized optimum sits a hair inside the infeasible side of the
    // floor (violation ~ risk slope / penalty), so push the candidate across
    // along its own ray and bisect back onto the boundary.
    const auto repair = [&](Eigen::VectorXd pi) -> Candidate {
        if (!meets_floor(pi) && pi.norm() > 0.0) {
            double t_hi = 1.0;
            bool found = false;
            for (int k = 0; k < 12 && !found; ++k) {
                t_hi *= 2.0;
                found = meets_floor(t_hi * pi);
            }
            if (found) {
                double lo = 1.0, hi = t_hi;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (meets_floor(mid * pi)) hi = mid;
                    else lo = mid;
                }
                pi *= hi;
            }
        }
        Candidate c;
        c.pi = std::move(pi);
        c.value = risk_at(c.pi);
        c.feasible = meets_floor(c.pi);
        return c;
    };

    std::vector<Candidate> cands;
    { // the riskless point is a candidate whenever it meets the floor
        Candidate c;
        c.pi = Eigen::VectorXd::Zero(d);
        c.value = risk_at(c.pi);
        c.feasible = meets_floor(c.pi);
        c.converged = true;
        if (c.feasible) cands.push_back(std::move(c));
    }
    for (int s = 0; s < opts.n_starts; ++s) {
        const Eigen::VectorXd x0 = multistart_point(opts, d, s, 201);
        const double scale = 0.25 * (1.0 + 0.1 * x0.norm());
        const NmOutcome nm = nelder_mead(g, x0, scale, opts.max_iters, opts.tol);
        Candidate c = repair(nm.x);
        c.converged = nm.converged;
        cands.push_back(std::move(c));
    }

    size_t best = cands.size();
    for (size_t i = 0; i < cands.size(); ++i) {
        if (!cands[i].feasible) continue;
        if (best == cands.size() || better_candidate(cands[i], cands[best], false)) best = i;
    }
    if (best == cands.size()) {
        res.status = OptimizationResult::Status::Infeasible;
        res.evaluations = evals;
        return res;
    }

    res.status = OptimizationResult::Status::Optimal;
    res.pi = cands[best].pi;
    res.value = cands[best].value;
    res.evaluations = evals;
    for (const Candidate& c : cands) {
        if (!c.converged || !c.feasible) continue;
        ++res.starts_converged;
        if ((c.pi - res.pi).norm() <= 1e-4) ++res.starts_agreeing;
    }
    return res;
}

std::pair<Eigen::VectorXd, double> grid_oracle(const UtilitySpec& U, const RiskSpec& R,
                                               const ScenarioSet& mkt, const ProblemFrame& frame,
                                               double box, int steps) {
    const Eigen::Index d = mkt.n_assets();
    if (d > 2) throw DimensionError("grid_oracle: supports at most two assets");
    if (!(box > 0.0)) throw DomainError("grid_oracle: box must be positive");
    if (steps < 2 || steps > 4001) throw DomainError("grid_oracle: steps must lie in [2, 4001]");

    const double budget = frame.r_tilde_max;
    Candidate best;
    const auto consider = [&](const Eigen::VectorXd& pi) {
        const Eigen::VectorXd y = mkt.returns * pi;
        const double rv = transformed_risk(R, frame, y, mkt.probs);
        if (rv == kInf || (budget != kInf && !(rv <= budget + 1e-9))) return;
        Candidate c{pi, transformed_utility(U, frame, y, mkt.probs), true, true};
        if (!best.feasible || better_candidate(c, best, true)) best = std::move(c);
    };

    consider(Eigen::VectorXd::Zero(d)); // the riskless point is always admitted
    const auto coord = [&](int i) { return -box + 2.0 * box * i / (steps - 1); };
    if (d == 1) {
        Eigen::VectorXd pi(1);
        for (int i = 0; i < steps; ++i) {
            pi(0) = coord(i);
            consider(pi);
        }
    } else {
        Eigen::VectorXd pi(2);
        for (int i = 0; i < steps; ++i) {
            pi(0) = coord(i);
            for (int j = 0; j < steps; ++j) {
                pi(1) = coord(j);
                consider(pi);
            }
        }
    }
    return {best.pi, best.value};
}

OptimizationResult maximize_utility_shares(const UtilitySpec& U, const RiskSpec& R, const ScenarioSet& mkt,
                                           double w, double r, double r_max, const SolveOptions& opts) {
    if (!(w > 0.0)) throw DomainError("maximize_utility_shares: wealth must be positive");
    if (!(r > -1.0)) throw DomainError("maximize_utility_shares: rate must exceed -1");
    const Eigen::Index d = mkt.n_assets();
    const double base = w * (1.0 + r);
    if (!(r_max >= risk_of_constant(R, base)))
        throw InfeasibleError("maximize_utility_shares: risk budget below the riskless payoff's risk");

    long evals = 0;
    const auto raw_util = [&](const Eigen::VectorXd& theta) {
        ++evals;
        const Eigen::VectorXd pay = ((mkt.returns * theta).array() + base).matrix();
        return utility_value(U, pay, mkt.probs);
    };
    const auto raw_risk = [&](const Eigen::VectorXd& theta) {
        ++evals;
        const Eigen::VectorXd pay = ((mkt.returns * theta).array() + base).matrix();
        return risk_value(R, pay, mkt.probs);
    };
    const auto feasible = [&](const Eigen::VectorXd& theta) { return raw_risk(theta) <= r_max + 1e-9; };
    const Objective g = [&](const Eigen::VectorXd& theta) {
        const double u = raw_util(theta);
        const double rv = raw_risk(theta);
        const double viol = std::max(0.0, rv - r_max);
        if (u == -kInf || viol == kInf) return kInf;
        return -u + opts.penalty * viol * viol;
    };

    std::vector<Candidate> cands;
    for (int s = 0; s < opts.n_starts; ++s) {
        Eigen::VectorXd x0 = Eigen::VectorXd::Zero(d);
        if (s > 0) {
            Rng rng = Rng::stream(opts.seed, 301 + static_cast<std::uint64_t>(s));
            x0 = random_in_ball(rng, d, 0.5 * s * w);
        }
        const NmOutcome nm = nelder_mead(g, x0, 0.25 * w, opts.max_iters, opts.tol);
        Eigen::VectorXd theta = nm.x;
        if (!feasible(theta)) {
            int guard = 0;
            while (!feasible(theta) && guard++ < 80) theta *= 0.5;
            if (!feasible(theta)) theta.setZero();
            Eigen::VectorXd lo = theta;
            Eigen::VectorXd hi = 2.0 * theta;
            for (int it = 0; it < 40; ++it) {
                const Eigen::VectorXd mid = 0.5 * (lo + hi);
                if (feasible(mid)) lo = mid;
                else hi = mid;
            }
            theta = lo;
        }
        Candidate c;
        c.pi = theta;
        c.value = raw_util(theta);
        c.feasible = true;
        c.converged = nm.converged;
        cands.push_back(std::move(c));
    }

    size_t best = 0;
    for (size_t i = 1; i < cands.size(); ++i)
        if (better_candidate(cands[i], cands[best], true)) best = i;

    OptimizationResult res;
    res.status = OptimizationResult::Status::Optimal;
    res.pi = cands[best].pi / w;
    res.value = cands[best].value;
    res.evaluations = evals;
    for (const Candidate& c : cands) {
        if (!c.converged) continue;
        ++res.starts_converged;
        if ((c.pi / w - res.pi).norm() <= 1e-4) ++res.starts_agreeing;
    }
    return res;
}

} // namespace utilrisk
