#include "utilrisk/diagnostics.hpp"

#include "utilrisk/errors.hpp"
#include "utilrisk/normal.hpp"
#include "utilrisk/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

namespace utilrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_vec(const Eigen::VectorXd& v) {
    std::string out = "[";
    char buf[48];
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.6g", v(i));
        if (i) out += ", ";
        out += buf;
    }
    return out + "]";
}

std::string fmt_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

} // namespace

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::WellPosed: return "well-posed";
    case Verdict::IllPosed: return "ill-posed";
    case Verdict::Unknown: return "unknown";
    }
    return "unknown";
}

Classification classify_wellposedness(const UtilitySpec& U, const RiskSpec& R) {
    Classification c;
    const SensitivityReport us = utility_sll(U);
    const SensitivityReport rs = risk_sll(R);
    const UtilityMetadata& um = U.metadata();
    const RiskMetadata& rm = R.metadata();

    c.basis.u_sll = us.applicable && us.sll;
    c.basis.u_weak_sll = us.applicable && us.weak_sll;
    c.basis.r_sll = rs.applicable && rs.sll;
    c.basis.u_upper_fatou = um.upper_fatou;
    c.basis.u_sensitivity_equiv = um.sensitivity_equivalent;
    c.basis.r_lower_fatou = rm.lower_fatou;
    c.basis.r_cash_convex = rm.cash_convex;
    c.basis.law_invariance_side =
        um.law_invariant ? (rm.law_invariant ? "both" : "utility") : (rm.law_invariant ? "risk" : "none");

    c.citations.push_back("dichotomy: under the regularity premises the pair is well-posed in "
                          "every market iff one side is sensitive to large losses");

    const auto fail = [&c](const char* code) {
        c.verdict = Verdict::Unknown;
        c.failing_premise = code;
        c.citations.push_back(std::string("unverified premise: ") + code);
    };

    if (U.kind() == UtilitySpec::Kind::ExpectedUtility) {
        // Expectation route: an unbounded utility that is negatively
        // star-shaped on gains is classified by its asymptotic loss-gain
        // ratio, and weak and strong sensitivity coincide.
        c.citations.push_back("expectation route: the asymptotic loss-gain ratio decides sensitivity");
        if (!um.unbounded) {
            fail("U_unbounded");
            return c;
        }
        if (!um.neg_star_shaped) {
            fail("U_neg_star_shaped");
            return c;
        }
    } else {
        if (!um.upper_fatou) {
            fail("U_upper_fatou");
            return c;
        }
        if (!um.sensitivity_equivalent) {
            fail("U_sensitivity_equiv");
            return c;
        }
    }
    if (!rm.lower_fatou) {
        fail("R_lower_fatou");
        return c;
    }
    if (!rm.cash_convex) {
        fail("R_cash_convex");
        return c;
    }
    if (c.basis.law_invariance_side == "none") {
        fail("law_invariance");
        return c;
    }

    if (c.basis.u_sll || c.basis.r_sll) {
        c.verdict = Verdict::WellPosed;
        if (c.basis.u_sll) c.citations.push_back("utility side is sensitive to large losses");
        if (c.basis.r_sll) c.citations.push_back("risk side is sensitive to large losses");
    } else {
        c.verdict = Verdict::IllPosed;
        c.citations.push_back("neither side is sensitive to large losses: some market admits a "
                              "diverging strategy sequence");
    }
    return c;
}

PosednessTables table_matrix() {
    PosednessTables T;

    std::vector<RiskSpec> r1;
    r1.push_back(RiskSpec::zero());
    r1.push_back(RiskSpec::var(0.05));
    r1.push_back(RiskSpec::es(0.05));
    r1.push_back(RiskSpec::entropic(1.0));

    std::vector<UtilitySpec> u1;
    u1.push_back(UtilitySpec::mean());
    u1.push_back(UtilitySpec::expected_utility(UtilityFunction::sshaped(0.6, 0.5)));
    u1.push_back(UtilitySpec::expected_utility(UtilityFunction::sshaped(0.5, 0.7)));
    u1.push_back(UtilitySpec::expected_utility(UtilityFunction::power(0.5)));
    u1.push_back(UtilitySpec::expected_utility(UtilityFunction::exponential(1.0)));

    for (const auto& r : r1) T.t1_rows.push_back(r.name());
    for (const auto& u : u1) T.t1_cols.push_back(u.name());
    for (const auto& r : r1) {
        std::vector<Verdict> row;
        for (const auto& u : u1) row.push_back(classify_wellposedness(u, r).verdict);
        T.t1.push_back(std::move(row));
    }

    std::vector<RiskSpec> r2;
    r2.push_back(RiskSpec::zero());
    r2.push_back(RiskSpec::lvar(make_threshold_distribution({-1.0, 0.0}, {0.0, 0.05})));
    r2.push_back(RiskSpec::lvar(make_threshold_distribution({0.0}, {0.05})));
    r2.push_back(RiskSpec::adjusted_es(make_risk_profile({0.05, 1.0}, {1.0, 0.0}, 1.0)));
    r2.push_back(RiskSpec::adjusted_es(make_risk_profile({0.05, 1.0}, {0.0, 0.0}, kInf)));
    r2.push_back(RiskSpec::ew(LossFunction::exp_minus_one(1.0)));
    r2.push_back(RiskSpec::ew(LossFunction::identity()));
    r2.push_back(RiskSpec::sr(LossFunction::exp_minus_one(1.0)));
    r2.push_back(RiskSpec::sr(LossFunction::identity()));
    r2.push_back(RiskSpec::oce(LossFunction::exp_minus_one(1.0)));
    r2.push_back(RiskSpec::oce(LossFunction::positive_part(20.0)));

    std::vector<UtilitySpec> u2;
    u2.push_back(UtilitySpec::expected_utility(UtilityFunction::sshaped(0.5, 0.7)));
    u2.push_back(UtilitySpec::expected_utility(UtilityFunction::sshaped(0.7, 0.5)));

    for (const auto& r : r2) T.t2_rows.push_back(r.name());
    for (const auto& u : u2) T.t2_cols.push_back(u.name());
    for (const auto& r : r2) {
        std::vector<Verdict> row;
        for (const auto& u : u2) row.push_back(classify_wellposedness(u, r).verdict);
        T.t2.push_back(std::move(row));
    }
    return T;
}

WitnessResult gaussian_witness(bool es_kind, double alpha, double target_sr, int dim, int count,
                               std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("witness: level must lie in (0, 1)");
    if (!(target_sr > 0.0)) throw DomainError("witness: target slope must be positive");
    if (dim < 1) throw DomainError("witness: need at least one asset");
    if (count < 1) throw DomainError("witness: need at least one sequence point");

    constexpr double rate = 0.01;
    constexpr double sigma0 = 0.2;

    Rng rng = Rng::stream(seed, 0);
    Eigen::VectorXd dir(dim);
    double nrm = 0.0;
    do {
        for (int i = 0; i < dim; ++i) dir(i) = norm_inv(rng.uniform());
        nrm = dir.norm();
    } while (!(nrm > 1e-8));
    dir /= nrm;

    GaussianMarket gm;
    gm.rate = rate;
    gm.mu = Eigen::VectorXd::Constant(dim, rate) + sigma0 * target_sr * dir;
    gm.sigma = sigma0 * sigma0 * Eigen::MatrixXd::Identity(dim, dim);
    validate_gaussian(gm);

    const Eigen::VectorXd excess = gm.mu.array() - rate;
    const double sr_max = std::sqrt(excess.dot(gm.sigma.llt().solve(excess)));
    const double threshold = es_kind ? std_normal_es(alpha) : std_normal_var(alpha);

    WitnessResult res;
    res.threshold = threshold;
    if (sr_max < threshold) {
        res.applicable = false;
        res.gap = threshold - sr_max;
        return res;
    }

    res.applicable = true;
    GaussianWitness wit;
    wit.market = gm;
    wit.alpha = alpha;
    wit.es_kind = es_kind;
    wit.threshold = threshold;
    wit.sr_max = sr_max;
    wit.base_direction = dir;
    wit.sequence.reserve(static_cast<size_t>(count));
    for (int n = 1; n <= count; ++n) {
        WitnessPoint pt;
        pt.pi = static_cast<double>(n) * dir;
        pt.mean = pt.pi.dot(excess);
        const double dev = std::sqrt(pt.pi.dot(gm.sigma * pt.pi));
        // Gaussian payoff mean + dev * Z: quantile and tail-average risks are
        // dev * threshold - mean in closed form.
        pt.risk = dev * threshold - pt.mean;
        wit.sequence.push_back(std::move(pt));
    }
    res.witness = std::move(wit);
    return res;
}

std::vector<double> default_scaling_schedule() {
    std::vector<double> s;
    s.reserve(41);
    for (int k = 0; k <= 40; ++k) s.push_back(std::ldexp(1.0, k));
    return s;
}

namespace {

template <class F>
ScalingProbe run_scaling_probe(const F& value_of, const Eigen::VectorXd& payoff,
                               const std::vector<double>& schedule, bool past_zero_is_negative) {
    if (schedule.empty()) throw DomainError("scaling probe: schedule must be nonempty");
    for (size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0)) throw DomainError("scaling probe: scales must be positive");
        if (i && !(schedule[i] > schedule[i - 1]))
            throw DomainError("scaling probe: scales must be strictly increasing");
    }
    if (!(payoff.size() > 0) || !(payoff.minCoeff() < 0.0))
        throw PreconditionError("scaling probe: payoff must have a loss scenario");

    ScalingProbe pr;
    pr.trace.reserve(schedule.size());
    for (double lam : schedule) pr.trace.push_back({lam, value_of(Eigen::VectorXd(lam * payoff))});

    // Minimal schedule point from which every later value is past zero.
    int from = -1;
    for (int i = static_cast<int>(pr.trace.size()); i-- > 0;) {
        const double v = pr.trace[static_cast<size_t>(i)].value;
        const bool past = past_zero_is_negative ? (v < 0.0) : (v > 0.0);
        if (!past) break;
        from = i;
    }
    if (from >= 0) {
        pr.crossed = true;
        pr.lambda_at_cross = pr.trace[static_cast<size_t>(from)].lambda;
    }
    return pr;
}

} // namespace

ScalingProbe scaling_probe_utility(const UtilitySpec& U, const Eigen::VectorXd& payoff,
                                   const Eigen::VectorXd& probs, const std::vector<double>& schedule) {
    return run_scaling_probe([&](const Eigen::VectorXd& y) { return utility_value(U, y, probs); }, payoff,
                             schedule, true);
}

ScalingProbe scaling_probe_risk(const RiskSpec& R, const Eigen::VectorXd& payoff,
                                const Eigen::VectorXd& probs, const std::vector<double>& schedule) {
    return run_scaling_probe([&](const Eigen::VectorXd& y) { return risk_value(R, y, probs); }, payoff,
                             schedule, false);
}

namespace {

struct TrialPayoff {
    Eigen::VectorXd y, p;
};

TrialPayoff random_payoff(Rng& rng, int n) {
    TrialPayoff t;
    t.y.resize(n);
    t.p.resize(n);
    double tot = 0.0;
    for (int i = 0; i < n; ++i) {
        t.y(i) = rng.uniform(-3.0, 3.0);
        t.p(i) = rng.uniform(0.1, 1.0);
        tot += t.p(i);
    }
    t.p /= tot;
    return t;
}

void note_violation(AxiomCheck& c, const std::string& desc) {
    ++c.violations;
    c.passed = false;
    if (c.counterexample.empty()) c.counterexample = desc;
}

/// a == b for identical infinities, |a - b| <= tol otherwise.
bool identity_holds(double a, double b, double tol) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= tol;
}

double id_scale(double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return 1.0;
    return std::max({1.0, std::abs(a), std::abs(b)});
}

std::vector<Eigen::Index> shuffled_indices(Rng& rng, int n) {
    std::vector<Eigen::Index> perm(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i)
        std::swap(perm[static_cast<size_t>(i)], perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    return perm;
}

Eigen::VectorXd permuted(const Eigen::VectorXd& y, const std::vector<Eigen::Index>& perm) {
    Eigen::VectorXd out(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) out(i) = y(perm[static_cast<size_t>(i)]);
    return out;
}

} // namespace

AxiomReport axiom_harness_risk(const RiskSpec& R, int trials, std::uint64_t seed) {
    if (trials < 1) throw DomainError("axiom harness: need at least one trial");
    const RiskMetadata& m = R.metadata();

    AxiomCheck monotone, normalized, cash, hom, star, convex, law;
    monotone.required = true;
    normalized.required = true;
    cash.required = m.cash_additive;
    hom.required = m.pos_homogeneous;
    star.required = m.pos_star_shaped;
    convex.required = m.convex;
    law.required = m.law_invariant;

    // Root-finding functionals carry solver error ~1e-8; closed forms do not.
    const bool iterative =
        R.kind() == RiskSpec::Kind::ShortfallRisk || R.kind() == RiskSpec::Kind::OptimizedCertainty;
    const double tol = iterative ? 5e-8 : 1e-9;
    const double mono_tol = iterative ? 5e-8 : 1e-12;

    const auto value = [&R](const Eigen::VectorXd& y, const Eigen::VectorXd& p) {
        return risk_value(R, y, p);
    };

    {
        const double r0 = risk_of_constant(R, 0.0);
        if (!(std::abs(r0) <= tol)) note_violation(normalized, "risk of the zero payoff is " + fmt_num(r0));
    }

    const auto check_mono = [&](const Eigen::VectorXd& y, const Eigen::VectorXd& up,
                                const Eigen::VectorXd& p) {
        const double ry = value(y, p), rup = value(up, p);
        bool bad;
        if (std::isinf(rup) && !std::isinf(ry)) bad = rup > 0.0;
        else if (std::isinf(ry)) bad = false;
        else bad = rup > ry + mono_tol * std::max({1.0, std::abs(ry), std::abs(rup)});
        if (bad)
            note_violation(monotone, "Y=" + fmt_vec(y) + " <= Z=" + fmt_vec(up) + " probs=" + fmt_vec(p) +
                                         " but risk rises from " + fmt_num(ry) + " to " + fmt_num(rup));
    };

    const auto check_cash = [&](const Eigen::VectorXd& y, const Eigen::VectorXd& p, double c) {
        const double ry = value(y, p);
        const double lhs = value((y.array() + c).matrix(), p);
        const double rhs = ry - c;
        if (!identity_holds(lhs, rhs, tol * id_scale(lhs, rhs)))
            note_violation(cash, "Y=" + fmt_vec(y) + " probs=" + fmt_vec(p) + " c=" + fmt_num(c) +
                                     ": risk(Y+c)=" + fmt_num(lhs) + " differs from risk(Y)-c=" + fmt_num(rhs));
    };

    const auto check_hom = [&](const Eigen::VectorXd& y, const Eigen::VectorXd& p, double lam) {
        const double ry = value(y, p);
        const double lhs = value(Eigen::VectorXd(lam * y), p);
        const double rhs = lam * ry;
        if (!identity_holds(lhs, rhs, tol * id_scale(lhs, rhs)))
            note_violation(hom, "Y=" + fmt_vec(y) + " probs=" + fmt_vec(p) + " lambda=" + fmt_num(lam) +
                                    ": risk(lambda Y)=" + fmt_num(lhs) + " differs from lambda risk(Y)=" +
                                    fmt_num(rhs));
    };

    const auto check_star = [&](const Eigen::VectorXd& y, const Eigen::VectorXd& p, double lam) {
        const double target = lam * value(y, p);
        const double lhs = value(Eigen::VectorXd(lam * y), p);
        bool bad;
        if (std::isinf(target) && target > 0.0) bad = !(std::isinf(lhs) && lhs > 0.0);
        else if (std::isinf(lhs)) bad = lhs < 0.0;
        else if (std::isinf(target)) bad = false; // target -inf bounds nothing
        else bad = lhs < target - tol * std::max({1.0, std::abs(lhs), std::abs(target)});
        if (bad)
            note_violation(star, "Y=" + fmt_vec(y) + " probs=" + fmt_vec(p) + " lambda=" + fmt_num(lam) +
                                     ": risk(lambda Y)=" + fmt_num(lhs) + " < lambda risk(Y)=" + fmt_num(target));
    };

    const auto check_convex = [&](const Eigen::VectorXd& y, const Eigen::VectorXd& z,
                                  const Eigen::VectorXd& p) {
        const double ry = value(y, p), rz = value(z, p);
        const double rm = value(Eigen::VectorXd(0.5 * (y + z)), p);
        const double rhs = 0.5 * (ry + rz);
        bool bad;
        if (std::isinf(rhs) && rhs > 0.0) bad = false;
        else if (std::isinf(rm)) bad = rm > 0.0;
        else bad = rm > rhs + tol * std::max({1.0, std::abs(rm), std::abs(rhs)});
        if (bad)
            note_violation(convex, "Y=" + fmt_vec(y) + " Z=" + fmt_vec(z) + " probs=" + fmt_vec(p) +
                                       ": midpoint risk " + fmt_num(rm) + " exceeds average " + fmt_num(rhs));
    };

    const auto check_law = [&](const Eigen::VectorXd& y, const std::vector<Eigen::Index>& perm) {
        const int n = static_cast<int>(y.size());
        const Eigen::VectorXd q = Eigen::VectorXd::Constant(n, 1.0 / n);
        const double a = value(y, q);
        const double b = value(permuted(y, perm), q);
        if (!(a == b))
            note_violation(law, "Y=" + fmt_vec(y) + " equally weighted: a rearrangement moves the risk from " +
                                    fmt_num(a) + " to " + fmt_num(b));
    };

    const int nfix = R.fixture_scenarios();
    Rng rng = Rng::stream(seed, 7);

    // Deterministic adversarial families run ahead of the random trials.
    if (nfix == 0 || nfix == 2) {
        Eigen::VectorXd y(2), p(2);
        y << 1.0, -1.0;
        p << 0.5, 0.5;
        check_cash(y, p, 1.0);
    }
    if (nfix == 0 || nfix == 3) {
        Eigen::VectorXd y(3), p(3);
        y << 2.0, -1.0, 0.5;
        p << 1.0 / 3, 1.0 / 3, 1.0 / 3;
        check_hom(y, p, 10.0);

        // Quantile convexity counterexample: two losing payoffs whose mixture
        // hides the loss atom below the level while each input keeps a
        // feasible gain atom.
        double alpha = R.kind() == RiskSpec::Kind::ValueAtRisk ? R.alpha() : 0.3;
        double pa = alpha < 1.0 / 3 ? 0.75 * alpha : 0.25 * (alpha + 1.0);
        if (!(pa > 0.0)) pa = 0.25;
        Eigen::VectorXd cy(3), cz(3), cp(3);
        cy << -1.0, 1.0, 1.0;
        cz << 1.0, -1.0, 1.0;
        cp << pa, pa, 1.0 - 2.0 * pa;
        check_convex(cy, cz, cp);
    }
    if (R.kind() == RiskSpec::Kind::PartitionFixture &&
        static_cast<int>(R.inside().size()) < nfix) {
        Eigen::VectorXd y = Eigen::VectorXd::Ones(nfix);
        int outside = 0;
        for (int i = 0; i < nfix; ++i) {
            if (!std::binary_search(R.inside().begin(), R.inside().end(), i)) {
                outside = i;
                break;
            }
        }
        y(outside) = -1.0;
        std::vector<Eigen::Index> perm(static_cast<size_t>(nfix));
        for (int i = 0; i < nfix; ++i) perm[static_cast<size_t>(i)] = i;
        std::swap(perm[static_cast<size_t>(outside)], perm[static_cast<size_t>(R.inside().front())]);
        check_law(y, perm);
    }

    for (int t = 0; t < trials; ++t) {
        const int n = nfix > 0 ? nfix : 2 + static_cast<int>(rng.below(7));
        const TrialPayoff a = random_payoff(rng, n);

        Eigen::VectorXd up = a.y;
        for (int i = 0; i < n; ++i) up(i) += rng.uniform(0.0, 2.0);
        check_mono(a.y, up, a.p);

        check_cash(a.y, a.p, rng.uniform(-2.0, 2.0));
        for (double lam : {0.5, 2.0, 10.0}) check_hom(a.y, a.p, lam);
        for (double lam : {2.0, 10.0}) check_star(a.y, a.p, lam);

        const TrialPayoff b = random_payoff(rng, n);
        check_convex(a.y, b.y, a.p);

        check_law(a.y, shuffled_indices(rng, n));
    }

    AxiomReport rep;
    rep.axioms = {{"monotone", monotone},
                  {"normalized", normalized},
                  {"cash_additive", cash},
                  {"positively_homogeneous", hom},
                  {"star_shaped", star},
                  {"convex_sample", convex},
                  {"law_invariant_on_uniform", law}};
    for (const auto& [key, chk] : rep.axioms) {
        (void)key;
        if (chk.required && !chk.passed) rep.mismatch = true;
    }
    return rep;
}

AxiomReport axiom_harness_utility(const UtilitySpec& U, int trials, std::uint64_t seed) {
    if (trials < 1) throw DomainError("axiom harness: need at least one trial");
    const UtilityMetadata& m = U.metadata();

    AxiomCheck monotone, normalized, hom, star, concave, law;
    monotone.required = true;
    normalized.required = true;
    hom.required = m.pos_homogeneous;
    star.required = m.neg_star_shaped;
    concave.required = m.concave;
    law.required = m.law_invariant;

    const double tol = 1e-9;

    const auto value = [&U](const Eigen::VectorXd& y, const Eigen::VectorXd& p) {
        return utility_value(U, y, p);
    };

    const int nfix = U.fixture_scenarios();
    {
        const int n0 = nfix > 0 ? nfix : 3;
        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n0);
        const Eigen::VectorXd q = Eigen::VectorXd::Constant(n0, 1.0 / n0);
        const double u0 = value(zero, q);
        if (!(u0 == 0.0)) note_violation(normalized, "utility of the zero payoff is " + fmt_num(u0));
    }

    const auto check_mono = [&](const Eigen::VectorXd& y, const Eigen::VectorXd& up,
                                const Eigen::VectorXd& p) {
        const double uy = value(y, p), uup = value(up, p);
        bool bad;
        if (uy == -kInf) bad = false;
        else if (uup == -kInf) bad = true;
        else bad = uup < uy - 1e-12 * std::max({1.0, std::abs(uy), std::abs(uup)});
        if (bad)
            note_violation(monotone, "Y=" + fmt_vec(y) + " <= Z=" + fmt_vec(up) + " probs=" + fmt_vec(p) +
                                         " but utility falls from " + fmt_num(uy) + " to " + fmt_num(uup));
    };

    const auto check_hom = [&](const Eigen::VectorXd& y, const Eigen::VectorXd& p, double lam) {
        const double lhs = value(Eigen::VectorXd(lam * y), p);
        const double rhs = lam * value(y, p);
        if (!identity_holds(lhs, rhs, tol * id_scale(lhs, rhs)))
            note_violation(hom, "Y=" + fmt_vec(y) + " probs=" + fmt_vec(p) + " lambda=" + fmt_num(lam) +
                                    ": utility(lambda Y)=" + fmt_num(lhs) +
                                    " differs from lambda utility(Y)=" + fmt_num(rhs));
    };

    const auto check_star = [&](const Eigen::VectorXd& y, const Eigen::VectorXd& p, double lam) {
        // Negative star shape on gains: scaling up a nonnegative payoff
        // cannot raise utility superlinearly.
        const double target = lam * value(y, p);
        const double lhs = value(Eigen::VectorXd(lam * y), p);
        bool bad;
        if (target == kInf) bad = false;
        else if (target == -kInf) bad = lhs != -kInf;
        else if (std::isinf(lhs)) bad = lhs > 0.0;
        else bad = lhs > target + tol * std::max({1.0, std::abs(lhs), std::abs(target)});
        if (bad)
            note_violation(star, "Y=" + fmt_vec(y) + " probs=" + fmt_vec(p) + " lambda=" + fmt_num(lam) +
                                     ": utility(lambda Y)=" + fmt_num(lhs) + " > lambda utility(Y)=" +
                                     fmt_num(target));
    };

    const auto check_concave = [&](const Eigen::VectorXd& y, const Eigen::VectorXd& z,
                                   const Eigen::VectorXd& p) {
        const double uy = value(y, p), uz = value(z, p);
        const double um = value(Eigen::VectorXd(0.5 * (y + z)), p);
        const double rhs = 0.5 * (uy + uz);
        bool bad;
        if (rhs == -kInf) bad = false;
        else if (um == -kInf) bad = true;
        else bad = um < rhs - tol * std::max({1.0, std::abs(um), std::abs(rhs)});
        if (bad)
            note_violation(concave, "Y=" + fmt_vec(y) + " Z=" + fmt_vec(z) + " probs=" + fmt_vec(p) +
                                        ": midpoint utility " + fmt_num(um) + " is below the average " +
                                        fmt_num(rhs));
    };

    const auto check_law = [&](const Eigen::VectorXd& y, const std::vector<Eigen::Index>& perm) {
        const int n = static_cast<int>(y.size());
        const Eigen::VectorXd q = Eigen::VectorXd::Constant(n, 1.0 / n);
        const double a = value(y, q);
        const double b = value(permuted(y, perm), q);
        if (!(a == b))
            note_violation(law, "Y=" + fmt_vec(y) + " equally weighted: a rearrangement moves the utility from " +
                                    fmt_num(a) + " to " + fmt_num(b));
    };

    Rng rng = Rng::stream(seed, 11);

    if (U.kind() == UtilitySpec::Kind::PartitionFixture &&
        static_cast<int>(U.inside().size()) < nfix) {
        Eigen::VectorXd y = Eigen::VectorXd::Ones(nfix);
        int outside = 0;
        for (int i = 0; i < nfix; ++i) {
            if (!std::binary_search(U.inside().begin(), U.inside().end(), i)) {
                outside = i;
                break;
            }
        }
        y(outside) = -1.0;
        std::vector<Eigen::Index> perm(static_cast<size_t>(nfix));
        for (int i = 0; i < nfix; ++i) perm[static_cast<size_t>(i)] = i;
        std::swap(perm[static_cast<size_t>(outside)], perm[static_cast<size_t>(U.inside().front())]);
        check_law(y, perm);
    }

    for (int t = 0; t < trials; ++t) {
        const int n = nfix > 0 ? nfix : 2 + static_cast<int>(rng.below(7));
        const TrialPayoff a = random_payoff(rng, n);

        Eigen::VectorXd up = a.y;
        for (int i = 0; i < n; ++i) up(i) += rng.uniform(0.0, 2.0);
        check_mono(a.y, up, a.p);

        for (double lam : {0.5, 2.0, 10.0}) check_hom(a.y, a.p, lam);

        Eigen::VectorXd gains = a.y.cwiseAbs();
        for (double lam : {2.0, 10.0}) check_star(gains, a.p, lam);

        const TrialPayoff b = random_payoff(rng, n);
        check_concave(a.y, b.y, a.p);

        check_law(a.y, shuffled_indices(rng, n));
    }

    AxiomReport rep;
    rep.axioms = {{"monotone", monotone},
                  {"normalized", normalized},
                  {"positively_homogeneous", hom},
                  {"star_shaped", star},
                  {"concave_sample", concave},
                  {"law_invariant_on_uniform", law}};
    for (const auto& [key, chk] : rep.axioms) {
        (void)key;
        if (chk.required && !chk.passed) rep.mismatch = true;
    }
    return rep;
}

} // namespace utilrisk
