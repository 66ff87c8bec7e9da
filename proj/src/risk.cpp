#include "utilrisk/risk.hpp"

#include "utilrisk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace utilrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_short(double v) {
    if (v == kInf) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<std::pair<double, double>> sorted_scenarios(const Eigen::VectorXd& payoff,
                                                        const Eigen::VectorXd& probs) {
    if (payoff.size() != probs.size()) throw LengthMismatch("payoff and probability lengths differ");
    if (payoff.size() == 0) throw DomainError("empty payoff");
    std::vector<std::pair<double, double>> sc(static_cast<size_t>(payoff.size()));
    for (Eigen::Index s = 0; s < payoff.size(); ++s) sc[static_cast<size_t>(s)] = {payoff(s), probs(s)};
    std::sort(sc.begin(), sc.end());
    return sc;
}

} // namespace

LossFunction LossFunction::identity() {
    LossFunction l;
    l.kind_ = Kind::Identity;
    return l;
}

LossFunction LossFunction::exp_minus_one(double a) {
    if (!(a > 0.0)) throw DomainError("exp loss: rate must be positive");
    LossFunction l;
    l.kind_ = Kind::ExpMinusOne;
    l.p1_ = a;
    return l;
}

LossFunction LossFunction::positive_part(double c) {
    if (!(c > 0.0)) throw DomainError("positive-part loss: weight must be positive");
    LossFunction l;
    l.kind_ = Kind::PositivePart;
    l.p1_ = c;
    return l;
}

LossFunction LossFunction::power_plus(double p, double c) {
    if (!(p > 1.0)) throw DomainError("power loss: exponent must exceed 1");
    if (!(c > 0.0)) throw DomainError("power loss: weight must be positive");
    LossFunction l;
    l.kind_ = Kind::PowerPlus;
    l.p1_ = p;
    l.p2_ = c;
    return l;
}

LossFunction LossFunction::piecewise_linear(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() != ys.size()) throw LengthMismatch("piecewise loss: point lists differ in length");
    if (xs.size() < 2) throw DomainError("piecewise loss: need at least two points");
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
        if (!(xs[i] < xs[i + 1])) throw DomainError("piecewise loss: breakpoints must be strictly increasing");
    }
    LossFunction l;
    l.kind_ = Kind::PiecewiseLinear;
    l.xs_ = std::move(xs);
    l.ys_ = std::move(ys);
    l.seg_slopes_.resize(l.xs_.size() - 1);
    for (size_t i = 0; i + 1 < l.xs_.size(); ++i) {
        l.seg_slopes_[i] = (l.ys_[i + 1] - l.ys_[i]) / (l.xs_[i + 1] - l.xs_[i]);
        if (l.seg_slopes_[i] < 0.0) throw DomainError("piecewise loss: must be non-decreasing");
        if (i > 0 && l.seg_slopes_[i] < l.seg_slopes_[i - 1] - 1e-15)
            throw DomainError("piecewise loss: slopes must be non-decreasing (convexity)");
    }
    l.slope_first_ = l.seg_slopes_.front();
    l.slope_last_ = l.seg_slopes_.back();
    if (!(l.slope_last_ > 0.0)) throw DomainError("piecewise loss: terminal slope must be positive");

    const double at0 = l(0.0);
    if (std::abs(at0) > 1e-9) throw DomainError("piecewise loss: must pass through the origin");
    auto it = std::lower_bound(l.xs_.begin(), l.xs_.end(), 0.0);
    const size_t pos = static_cast<size_t>(it - l.xs_.begin());
    if (it != l.xs_.end() && *it == 0.0) {
        l.ys_[pos] = 0.0;
    } else {
        l.xs_.insert(l.xs_.begin() + static_cast<std::ptrdiff_t>(pos), 0.0);
        l.ys_.insert(l.ys_.begin() + static_cast<std::ptrdiff_t>(pos), 0.0);
    }
    l.seg_slopes_.resize(l.xs_.size() - 1);
    for (size_t i = 0; i + 1 < l.xs_.size(); ++i)
        l.seg_slopes_[i] = (l.ys_[i + 1] - l.ys_[i]) / (l.xs_[i + 1] - l.xs_[i]);
    l.slope_first_ = l.seg_slopes_.front();
    l.slope_last_ = l.seg_slopes_.back();
    return l;
}

double LossFunction::operator()(double y) const {
    switch (kind_) {
    case Kind::Identity: return y;
    case Kind::ExpMinusOne: return std::expm1(p1_ * y) / p1_;
    case Kind::PositivePart: return y > 0.0 ? p1_ * y : 0.0;
    case Kind::PowerPlus: return y > 0.0 ? p2_ * std::pow(y, p1_) : 0.0;
    case Kind::PiecewiseLinear: {
        if (y <= xs_.front()) return ys_.front() + slope_first_ * (y - xs_.front());
        if (y >= xs_.back()) return ys_.back() + slope_last_ * (y - xs_.back());
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), y);
        const size_t i = static_cast<size_t>(it - xs_.begin()) - 1;
        return ys_[i] + seg_slopes_[i] * (y - xs_[i]);
    }
    }
    return 0.0;
}

AlgVerdict LossFunction::alg() const {
    switch (kind_) {
    case Kind::Identity: return AlgVerdict::finite(-1.0);
    case Kind::ExpMinusOne:
    case Kind::PositivePart:
    case Kind::PowerPlus: return AlgVerdict::neg_inf();
    case Kind::PiecewiseLinear:
        if (slope_first_ == 0.0) return AlgVerdict::neg_inf();
        return AlgVerdict::finite(-slope_last_ / slope_first_);
    }
    return AlgVerdict::finite(0.0);
}

bool LossFunction::positive_on_gains() const {
    if (kind_ != Kind::PiecewiseLinear) return true;
    // l > 0 on (0, inf) iff the slope just right of the origin is positive.
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), 0.0);
    if (it == xs_.end()) return slope_last_ > 0.0;
    const size_t i = static_cast<size_t>(it - xs_.begin()) - 1;
    return seg_slopes_[i] > 0.0;
}

bool LossFunction::dominates_identity() const {
    switch (kind_) {
    case Kind::Identity: return true;
    case Kind::ExpMinusOne: return true;
    case Kind::PositivePart: return p1_ >= 1.0;
    case Kind::PowerPlus: return false; // c y^p < y near zero when p > 1
    case Kind::PiecewiseLinear: {
        // l - id is convex, so nonnegativity holds iff the terminal slopes
        // bracket 1 and every breakpoint clears the diagonal.
        if (slope_first_ > 1.0 + 1e-12 || slope_last_ < 1.0 - 1e-12) return false;
        for (size_t i = 0; i < xs_.size(); ++i) {
            if (ys_[i] < xs_[i] - 1e-12) return false;
        }
        return true;
    }
    }
    return false;
}

bool LossFunction::superlinear_at_infinity() const {
    return kind_ == Kind::ExpMinusOne || kind_ == Kind::PowerPlus;
}

bool LossFunction::sublinear_at_minus_infinity() const {
    switch (kind_) {
    case Kind::Identity: return false;
    case Kind::ExpMinusOne:
    case Kind::PositivePart:
    case Kind::PowerPlus: return true;
    case Kind::PiecewiseLinear: return slope_first_ == 0.0;
    }
    return false;
}

std::string LossFunction::name() const {
    switch (kind_) {
    case Kind::Identity: return "id";
    case Kind::ExpMinusOne: return "expm1:" + fmt_short(p1_);
    case Kind::PositivePart: return "pospart:" + fmt_short(p1_);
    case Kind::PowerPlus: return "powplus:" + fmt_short(p1_) + "," + fmt_short(p2_);
    case Kind::PiecewiseLinear: {
        std::string out = "pwl:";
        for (size_t i = 0; i < xs_.size(); ++i) {
            if (i) out += ";";
            out += fmt_short(xs_[i]) + "," + fmt_short(ys_[i]);
        }
        return out;
    }
    }
    return "";
}

ThresholdDistribution make_threshold_distribution(std::vector<double> breakpoints, std::vector<double> levels) {
    if (breakpoints.size() != levels.size()) throw LengthMismatch("threshold profile: lists differ in length");
    if (breakpoints.empty()) throw DomainError("threshold profile: must be nonempty");
    for (size_t j = 0; j < breakpoints.size(); ++j) {
        if (breakpoints[j] > 0.0) throw DomainError("threshold profile: offsets must be nonpositive");
        if (j + 1 < breakpoints.size() && !(breakpoints[j] < breakpoints[j + 1]))
            throw DomainError("threshold profile: offsets must be strictly increasing");
        if (!(levels[j] >= 0.0 && levels[j] < 1.0)) throw DomainError("threshold profile: levels must lie in [0, 1)");
        if (j > 0 && levels[j] < levels[j - 1]) throw DomainError("threshold profile: levels must be non-decreasing");
    }
    if (breakpoints.back() != 0.0) throw DomainError("threshold profile: last offset must be 0");
    ThresholdDistribution td;
    td.breakpoints = std::move(breakpoints);
    td.levels = std::move(levels);
    return td;
}

bool RiskProfile::finite_everywhere() const { return std::isfinite(limit_at_zero); }

RiskProfile make_risk_profile(std::vector<double> breakpoints, std::vector<double> values, double limit_at_zero) {
    if (breakpoints.size() != values.size()) throw LengthMismatch("add-on profile: lists differ in length");
    if (breakpoints.empty()) throw DomainError("add-on profile: must be nonempty");
    for (size_t j = 0; j < breakpoints.size(); ++j) {
        if (!(breakpoints[j] > 0.0 && breakpoints[j] <= 1.0)) throw DomainError("add-on profile: levels must lie in (0, 1]");
        if (j + 1 < breakpoints.size() && !(breakpoints[j] < breakpoints[j + 1]))
            throw DomainError("add-on profile: levels must be strictly increasing");
        if (!(values[j] >= 0.0)) throw DomainError("add-on profile: values must be nonnegative");
        if (j > 0 && values[j] > values[j - 1]) throw DomainError("add-on profile: values must be non-increasing");
    }
    if (breakpoints.back() != 1.0) throw DomainError("add-on profile: last level must be 1");
    if (values.back() != 0.0) throw DomainError("add-on profile: value at level 1 must be 0");
    if (!(limit_at_zero >= values.front())) throw DomainError("add-on profile: limit at zero must dominate the first value");
    RiskProfile rp;
    rp.breakpoints = std::move(breakpoints);
    rp.values = std::move(values);
    rp.limit_at_zero = limit_at_zero;
    return rp;
}

RiskSpec RiskSpec::zero() {
    RiskSpec r;
    r.kind_ = Kind::Zero;
    r.meta_ = {true, true, true, true, false, true, true};
    return r;
}

RiskSpec RiskSpec::var(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("var: level must lie in [0, 1)");
    RiskSpec r;
    r.kind_ = Kind::ValueAtRisk;
    r.alpha_ = alpha;
    r.meta_ = {true, true, true, true, true, alpha == 0.0, true};
    return r;
}

RiskSpec RiskSpec::es(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("es: level must lie in (0, 1]");
    RiskSpec r;
    r.kind_ = Kind::ExpectedShortfall;
    r.alpha_ = alpha;
    r.meta_ = {true, true, true, true, true, true, true};
    return r;
}

RiskSpec RiskSpec::lvar(ThresholdDistribution td) {
    td = make_threshold_distribution(std::move(td.breakpoints), std::move(td.levels));
    RiskSpec r;
    r.kind_ = Kind::LossVaR;
    bool all_zero_levels = true;
    for (double lv : td.levels) all_zero_levels = all_zero_levels && lv == 0.0;
    const bool pure_var = td.breakpoints.size() == 1; // single offset 0: a plain quantile
    r.meta_ = {true, true, true, true, true, all_zero_levels, pure_var};
    r.td_ = std::move(td);
    return r;
}

RiskSpec RiskSpec::adjusted_es(RiskProfile profile) {
    profile = make_risk_profile(std::move(profile.breakpoints), std::move(profile.values), profile.limit_at_zero);
    RiskSpec r;
    r.kind_ = Kind::AdjustedES;
    bool flat_zero = true;
    for (double g : profile.values) flat_zero = flat_zero && (g == 0.0 || g == kInf);
    r.meta_ = {true, true, true, true, true, true, flat_zero};
    r.profile_ = std::move(profile);
    return r;
}

RiskSpec RiskSpec::ew(LossFunction loss) {
    RiskSpec r;
    r.kind_ = Kind::ExpectedWeightedLoss;
    const bool ca = loss.kind() == LossFunction::Kind::Identity;
    const bool ph = loss.kind() == LossFunction::Kind::Identity || loss.kind() == LossFunction::Kind::PositivePart;
    r.meta_ = {true, true, true, true, ca, true, ph};
    r.loss_.push_back(std::move(loss));
    return r;
}

RiskSpec RiskSpec::sr(LossFunction loss) {
    RiskSpec r;
    r.kind_ = Kind::ShortfallRisk;
    const auto k = loss.kind();
    const bool ph = k == LossFunction::Kind::Identity || k == LossFunction::Kind::PositivePart ||
                    k == LossFunction::Kind::PowerPlus;
    r.meta_ = {true, true, true, true, true, true, ph};
    r.loss_.push_back(std::move(loss));
    return r;
}

RiskSpec RiskSpec::oce(LossFunction loss) {
    if (!loss.dominates_identity())
        throw DomainError("oce: loss must dominate the identity (l(y) >= y)");
    RiskSpec r;
    r.kind_ = Kind::OptimizedCertainty;
    const auto k = loss.kind();
    const bool ph = k == LossFunction::Kind::Identity || k == LossFunction::Kind::PositivePart;
    r.meta_ = {true, true, true, true, true, true, ph};
    r.loss_.push_back(std::move(loss));
    return r;
}

RiskSpec RiskSpec::entropic(double a) {
    if (!(a > 0.0)) throw DomainError("entropic: rate must be positive");
    RiskSpec r;
    r.kind_ = Kind::Entropic;
    r.alpha_ = a;
    r.meta_ = {true, true, true, true, true, true, false};
    return r;
}

RiskSpec RiskSpec::worst_case() {
    RiskSpec r;
    r.kind_ = Kind::WorstCase;
    r.meta_ = {true, true, true, true, true, true, true};
    return r;
}

RiskSpec RiskSpec::partition_fixture(std::vector<int> inside, int n_scenarios) {
    if (inside.empty()) throw DomainError("partition fixture: subset must be nonempty");
    std::sort(inside.begin(), inside.end());
    inside.erase(std::unique(inside.begin(), inside.end()), inside.end());
    if (inside.front() < 0 || inside.back() >= n_scenarios)
        throw DomainError("partition fixture: subset indices out of range");
    RiskSpec r;
    r.kind_ = Kind::PartitionFixture;
    r.inside_ = std::move(inside);
    r.n_scenarios_ = n_scenarios;
    r.meta_ = {true, true, true, false, false, true, true};
    return r;
}

const LossFunction& RiskSpec::loss() const {
    if (loss_.empty()) throw PreconditionError("risk spec carries no loss function");
    return loss_.front();
}

std::string RiskSpec::name() const {
    switch (kind_) {
    case Kind::Zero: return "zero";
    case Kind::ValueAtRisk: return "var:" + fmt_short(alpha_);
    case Kind::ExpectedShortfall: return "es:" + fmt_short(alpha_);
    case Kind::LossVaR: {
        std::string out = "lvar:";
        for (size_t j = 0; j < td_.breakpoints.size(); ++j) {
            if (j) out += ";";
            out += fmt_short(td_.breakpoints[j]) + "," + fmt_short(td_.levels[j]);
        }
        return out;
    }
    case Kind::AdjustedES: {
        std::string out = "adjes:";
        for (size_t j = 0; j < profile_.breakpoints.size(); ++j) {
            if (j) out += ";";
            out += fmt_short(profile_.breakpoints[j]) + "," + fmt_short(profile_.values[j]);
        }
        out += ";g0=" + fmt_short(profile_.limit_at_zero);
        return out;
    }
    case Kind::ExpectedWeightedLoss: return "ew:" + loss().name();
    case Kind::ShortfallRisk: return "sr:" + loss().name();
    case Kind::OptimizedCertainty: return "oce:" + loss().name();
    case Kind::Entropic: return "entropic:" + fmt_short(alpha_);
    case Kind::WorstCase: return "worstcase";
    case Kind::PartitionFixture: return "partition-fixture";
    }
    return "";
}

double value_at_risk(const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("value_at_risk: level must lie in [0, 1)");
    const auto sc = sorted_scenarios(payoff, probs);
    double below = 0.0; // P[Y < y] for the atom under inspection
    double best = sc.front().first;
    for (size_t i = 0; i < sc.size();) {
        size_t j = i;
        double atom_mass = 0.0;
        while (j < sc.size() && sc[j].first == sc[i].first) atom_mass += sc[j++].second;
        if (below <= alpha + 1e-12) best = sc[i].first;
        else break;
        below += atom_mass;
        i = j;
    }
    return -best;
}

double expected_shortfall(const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("expected_shortfall: level must lie in (0, 1]");
    const auto sc = sorted_scenarios(payoff, probs);
    // candidates eta = -y_k; E[(-Y - eta)^+] collapses to prefix sums because
    // (y_k - y_s)^+ vanishes for s at or beyond k in the sorted order.
    double best = kInf;
    double prefix_p = 0.0, prefix_py = 0.0;
    for (const auto& [y, p] : sc) {
        const double f = -y + (y * prefix_p - prefix_py) / alpha;
        best = std::min(best, f);
        prefix_p += p;
        prefix_py += p * y;
    }
    return best;
}

double loss_var(const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs, const ThresholdDistribution& td) {
    double best = -kInf;
    for (size_t j = 0; j < td.breakpoints.size(); ++j)
        best = std::max(best, value_at_risk(payoff, probs, td.levels[j]) + td.breakpoints[j]);
    return best;
}

double adjusted_es(const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs, const RiskProfile& profile) {
    double best = -kInf;
    if (std::isfinite(profile.limit_at_zero))
        best = worst_case_risk(payoff) - profile.limit_at_zero;
    for (size_t j = 0; j < profile.breakpoints.size(); ++j) {
        if (!std::isfinite(profile.values[j])) continue;
        best = std::max(best, expected_shortfall(payoff, probs, profile.breakpoints[j]) - profile.values[j]);
    }
    return best;
}

double expected_weighted_loss(const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs,
                              const LossFunction& loss) {
    double acc = 0.0;
    for (const auto& [y, p] : sorted_scenarios(payoff, probs)) acc += p * loss(-y);
    return acc;
}

double shortfall_risk(const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs, const LossFunction& loss) {
    const auto sc = sorted_scenarios(payoff, probs);
    const auto excess = [&](double m) {
        double acc = 0.0;
        for (const auto& [y, p] : sc) acc += p * loss(-y - m);
        return acc;
    };

    // -min Y is always feasible: every argument of the loss is <= 0 there.
    double hi = -sc.front().first;
    const double range = std::max(1.0, sc.back().first - sc.front().first);
    double step = range;
    double lo = hi - step;
    while (excess(lo) <= 0.0) {
        hi = lo;
        step *= 2.0;
        if (step > range * 1099511627776.0) throw NoRoot("shortfall_risk: no sign change within the expansion bound");
        lo = hi - step;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (excess(mid) <= 0.0) hi = mid;
        else lo = mid;
    }
    return hi;
}

double oce_risk(const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs, const LossFunction& loss) {
    const auto sc = sorted_scenarios(payoff, probs);
    const auto objective = [&](double eta) {
        double acc = 0.0;
        for (const auto& [y, p] : sc) acc += p * loss(eta - y);
        return acc - eta;
    };

    double lo = sc.front().first - 1.0;
    double hi = sc.back().first + 1.0;
    for (int round = 0;; ++round) {
        if (round > 60) throw UnboundedBelow("oce_risk: objective keeps decreasing past the expansion bound");
        const double width = hi - lo;
        const double delta = 1e-3 * width;
        if (objective(hi) < objective(hi - delta)) { hi += width; continue; }
        if (objective(lo) < objective(lo + delta)) { lo -= width; continue; }
        break;
    }
    for (int it = 0; it < 500 && hi - lo > 1e-10 * std::max({1.0, std::abs(lo), std::abs(hi)}); ++it) {
        const double third = (hi - lo) / 3.0;
        const double m1 = lo + third, m2 = hi - third;
        if (objective(m1) <= objective(m2)) hi = m2;
        else lo = m1;
    }
    return objective(0.5 * (lo + hi));
}

double entropic_risk(const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs, double a) {
    if (!(a > 0.0)) throw DomainError("entropic_risk: rate must be positive");
    const auto sc = sorted_scenarios(payoff, probs);
    const double shift = -a * sc.front().first; // max of -a y over scenarios
    double acc = 0.0;
    for (const auto& [y, p] : sc) acc += p * std::exp(-a * y - shift);
    return (std::log(acc) + shift) / a;
}

double worst_case_risk(const Eigen::VectorXd& payoff) {
    if (payoff.size() == 0) throw DomainError("empty payoff");
    return -payoff.minCoeff();
}

double risk_value(const RiskSpec& spec, const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs) {
    switch (spec.kind()) {
    case RiskSpec::Kind::Zero:
        if (payoff.size() != probs.size()) throw LengthMismatch("payoff and probability lengths differ");
        return 0.0;
    case RiskSpec::Kind::ValueAtRisk: return value_at_risk(payoff, probs, spec.alpha());
    case RiskSpec::Kind::ExpectedShortfall: return expected_shortfall(payoff, probs, spec.alpha());
    case RiskSpec::Kind::LossVaR: return loss_var(payoff, probs, spec.threshold());
    case RiskSpec::Kind::AdjustedES: return adjusted_es(payoff, probs, spec.profile());
    case RiskSpec::Kind::ExpectedWeightedLoss: return expected_weighted_loss(payoff, probs, spec.loss());
    case RiskSpec::Kind::ShortfallRisk: return shortfall_risk(payoff, probs, spec.loss());
    case RiskSpec::Kind::OptimizedCertainty: return oce_risk(payoff, probs, spec.loss());
    case RiskSpec::Kind::Entropic: return entropic_risk(payoff, probs, spec.alpha());
    case RiskSpec::Kind::WorstCase:
        if (payoff.size() != probs.size()) throw LengthMismatch("payoff and probability lengths differ");
        return worst_case_risk(payoff);
    case RiskSpec::Kind::PartitionFixture: {
        if (payoff.size() != probs.size()) throw LengthMismatch("payoff and probability lengths differ");
        if (payoff.size() != spec.fixture_scenarios())
            throw LengthMismatch("partition fixture: payoff length differs from the fixture's scenario count");
        size_t k = 0;
        for (int s = 0; s < spec.fixture_scenarios(); ++s) {
            if (k < spec.inside().size() && spec.inside()[k] == s) { ++k; continue; }
            if (payoff(s) < 0.0) return kInf;
        }
        return 0.0;
    }
    }
    return 0.0;
}

double risk_of_constant(const RiskSpec& spec, double c) {
    if (spec.kind() == RiskSpec::Kind::PartitionFixture) {
        const bool complement_empty = static_cast<int>(spec.inside().size()) == spec.fixture_scenarios();
        if (complement_empty) return 0.0;
        return c < 0.0 ? kInf : 0.0;
    }
    Eigen::VectorXd one(1), p(1);
    one << c;
    p << 1.0;
    return risk_value(spec, one, p);
}

SensitivityReport risk_sll(const RiskSpec& spec) {
    SensitivityReport rep;
    rep.applicable = true;
    switch (spec.kind()) {
    case RiskSpec::Kind::Zero:
        rep.sll = false;
        rep.reason = "the zero functional never penalizes losses";
        break;
    case RiskSpec::Kind::ValueAtRisk:
        rep.sll = spec.alpha() == 0.0;
        rep.reason = rep.sll ? "at level zero the quantile is the worst case, which scales linearly"
                             : "losses of probability at most the level are invisible, and the value is "
                               "positively homogeneous: a payoff negative only on such scenarios keeps a "
                               "negative value under scaling";
        break;
    case RiskSpec::Kind::ExpectedShortfall:
        rep.sll = false;
        rep.reason = "positively homogeneous: a payoff whose tail average is already negative keeps a "
                     "negative value under scaling";
        break;
    case RiskSpec::Kind::LossVaR:
        rep.sll = spec.threshold().inf_level() == 0.0;
        rep.reason = rep.sll ? "the profile reaches level zero, so a worst-case term grows past its "
                               "offset under scaling"
                             : "every term sits at a positive level; a payoff with small enough loss "
                               "probability keeps all terms negative under scaling";
        break;
    case RiskSpec::Kind::AdjustedES:
        rep.sll = spec.profile().finite_everywhere();
        rep.reason = rep.sll ? "the add-on is finite at every level, so the worst-case term eventually "
                               "dominates it under scaling"
                             : "the add-on is infinite near level zero, muting the worst-case term; "
                               "small-loss-probability payoffs keep a negative value under scaling";
        break;
    case RiskSpec::Kind::ExpectedWeightedLoss:
        rep.sll = spec.loss().alg().negative_infinity;
        rep.reason = rep.sll ? "loss weights outgrow every linear gain offset, so scaling a losing payoff "
                               "drives the expectation positive"
                             : "loss weighting stays comparable to linear gains, so favorable payoffs "
                               "keep the expectation negative under scaling";
        break;
    case RiskSpec::Kind::ShortfallRisk: {
        const bool diverging = spec.loss().alg().negative_infinity;
        const bool gains = spec.loss().positive_on_gains();
        rep.sll = diverging && gains;
        if (rep.sll)
            rep.reason = "weighted shortfalls outgrow gains and every positive shortfall is penalized, "
                         "so the acceptable cushion grows positive under scaling";
        else if (!diverging)
            rep.reason = "loss weighting stays comparable to linear gains, so favorable payoffs stay "
                         "acceptable without a positive cushion";
        else
            rep.reason = "the loss vanishes on an initial stretch of gains, so moderate shortfalls are "
                         "free and no positive cushion is forced";
        break;
    }
    case RiskSpec::Kind::OptimizedCertainty: {
        const bool super = spec.loss().superlinear_at_infinity();
        const bool sub = spec.loss().sublinear_at_minus_infinity();
        rep.sll = super && sub;
        if (rep.sll)
            rep.reason = "losses are weighted superlinearly while gains fade from the certainty "
                         "adjustment, so scaled losing payoffs get positive value";
        else if (!super)
            rep.reason = "loss weighting is asymptotically linear, so gains can offset losses at every "
                         "scale";
        else
            rep.reason = "gains keep full linear weight in the certainty adjustment, offsetting the "
                         "superlinear losses for favorable payoffs";
        break;
    }
    case RiskSpec::Kind::Entropic:
        rep.sll = true;
        rep.reason = "exponential loss weighting dominates every gain under scaling";
        break;
    case RiskSpec::Kind::WorstCase:
        rep.sll = true;
        rep.reason = "the worst loss scales linearly with the payoff";
        break;
    case RiskSpec::Kind::PartitionFixture:
        rep.sll = false;
        rep.reason = "losses confined to the subset are invisible to the functional";
        break;
    }
    rep.weak_sll = rep.sll; // the two notions coincide for every cataloged functional
    return rep;
}

} // namespace utilrisk
