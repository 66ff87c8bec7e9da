#include "utilrisk/utility.hpp"

#include "utilrisk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace utilrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_short(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// (value, weight) pairs in ascending lexicographic order. Expectations
/// accumulated over this order are invariant under rearrangement of equally
/// weighted scenarios, bit for bit.
std::vector<std::pair<double, double>> sorted_scenarios(const Eigen::VectorXd& payoff,
                                                        const Eigen::VectorXd& probs) {
    if (payoff.size() != probs.size()) throw LengthMismatch("payoff and probability lengths differ");
    std::vector<std::pair<double, double>> sc(static_cast<size_t>(payoff.size()));
    for (Eigen::Index s = 0; s < payoff.size(); ++s) sc[static_cast<size_t>(s)] = {payoff(s), probs(s)};
    std::sort(sc.begin(), sc.end());
    return sc;
}

} // namespace

UtilityFunction UtilityFunction::linear(double a) {
    if (!(a > 0.0)) throw DomainError("linear utility: slope must be positive");
    UtilityFunction u;
    u.kind_ = Kind::Linear;
    u.p1_ = a;
    return u;
}

UtilityFunction UtilityFunction::exponential(double a) {
    if (!(a > 0.0)) throw DomainError("exponential utility: rate must be positive");
    UtilityFunction u;
    u.kind_ = Kind::Exponential;
    u.p1_ = a;
    return u;
}

UtilityFunction UtilityFunction::power(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("power utility: exponent must lie in (0, 1)");
    UtilityFunction u;
    u.kind_ = Kind::Power;
    u.p1_ = gamma;
    return u;
}

UtilityFunction UtilityFunction::sshaped(double alpha, double beta) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("s-shaped utility: gain exponent must lie in (0, 1)");
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("s-shaped utility: loss exponent must lie in (0, 1)");
    UtilityFunction u;
    u.kind_ = Kind::SShaped;
    u.p1_ = alpha;
    u.p2_ = beta;
    return u;
}

UtilityFunction UtilityFunction::bounded_exponential() {
    UtilityFunction u;
    u.kind_ = Kind::BoundedExponential;
    return u;
}

UtilityFunction UtilityFunction::piecewise_linear(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() != ys.size()) throw LengthMismatch("piecewise utility: point lists differ in length");
    if (xs.size() < 2) throw DomainError("piecewise utility: need at least two points");
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
        if (!(xs[i] < xs[i + 1])) throw DomainError("piecewise utility: breakpoints must be strictly increasing");
        if (ys[i + 1] < ys[i]) throw DomainError("piecewise utility: values must be non-decreasing");
    }

    UtilityFunction u;
    u.kind_ = Kind::PiecewiseLinear;
    u.xs_ = std::move(xs);
    u.ys_ = std::move(ys);
    u.seg_slopes_.resize(u.xs_.size() - 1);
    for (size_t i = 0; i + 1 < u.xs_.size(); ++i)
        u.seg_slopes_[i] = (u.ys_[i + 1] - u.ys_[i]) / (u.xs_[i + 1] - u.xs_[i]);
    u.slope_left_ = u.seg_slopes_.front();
    u.slope_right_ = u.seg_slopes_.back();
    if (!(u.slope_right_ > 0.0)) throw DomainError("piecewise utility: terminal slope must be positive (non-satiation)");

    // Pin u(0) = 0 exactly: the interpolant must pass within 1e-9 of the
    // origin, then a breakpoint is placed there so evaluation is exact.
    const double at0 = u(0.0);
    if (std::abs(at0) > 1e-9) throw DomainError("piecewise utility: must pass through the origin");
    auto it = std::lower_bound(u.xs_.begin(), u.xs_.end(), 0.0);
    const size_t pos = static_cast<size_t>(it - u.xs_.begin());
    if (it != u.xs_.end() && *it == 0.0) {
        u.ys_[pos] = 0.0;
    } else {
        u.xs_.insert(u.xs_.begin() + static_cast<std::ptrdiff_t>(pos), 0.0);
        u.ys_.insert(u.ys_.begin() + static_cast<std::ptrdiff_t>(pos), 0.0);
    }
    u.seg_slopes_.resize(u.xs_.size() - 1);
    for (size_t i = 0; i + 1 < u.xs_.size(); ++i)
        u.seg_slopes_[i] = (u.ys_[i + 1] - u.ys_[i]) / (u.xs_[i + 1] - u.xs_[i]);
    u.slope_left_ = u.seg_slopes_.front();
    u.slope_right_ = u.seg_slopes_.back();
    return u;
}

double UtilityFunction::operator()(double y) const {
    switch (kind_) {
    case Kind::Linear: return p1_ * y;
    case Kind::Exponential: return -std::expm1(-p1_ * y);
    case Kind::Power:
        if (y > 0.0) return std::pow(y, p1_);
        if (y == 0.0) return 0.0;
        return -kInf;
    case Kind::SShaped: return y >= 0.0 ? std::pow(y, p1_) : -std::pow(-y, p2_);
    case Kind::BoundedExponential: return y >= 0.0 ? -std::expm1(-y) : std::expm1(y);
    case Kind::PiecewiseLinear: {
        if (y <= xs_.front()) return ys_.front() + slope_left_ * (y - xs_.front());
        if (y >= xs_.back()) return ys_.back() + slope_right_ * (y - xs_.back());
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), y);
        const size_t i = static_cast<size_t>(it - xs_.begin()) - 1;
        return ys_[i] + seg_slopes_[i] * (y - xs_[i]);
    }
    }
    return 0.0;
}

double UtilityFunction::limit_at_infinity() const {
    switch (kind_) {
    case Kind::Exponential:
    case Kind::BoundedExponential: return 1.0;
    default: return kInf;
    }
}

bool UtilityFunction::concave() const {
    switch (kind_) {
    case Kind::Linear:
    case Kind::Exponential:
    case Kind::Power: return true;
    case Kind::SShaped:
    case Kind::BoundedExponential: return false;
    case Kind::PiecewiseLinear:
        for (size_t i = 0; i + 1 < seg_slopes_.size(); ++i)
            if (seg_slopes_[i + 1] > seg_slopes_[i] + 1e-15) return false;
        return true;
    }
    return false;
}

bool UtilityFunction::unbounded() const { return kind_ != Kind::BoundedExponential; }

bool UtilityFunction::neg_star_shaped() const {
    if (kind_ != Kind::PiecewiseLinear) return true; // remaining variants are star-shaped by inspection
    // u(y)/y is non-increasing on each affine piece of the graph over (0, inf)
    // exactly when the piece's extension has a nonnegative intercept.
    const auto intercept_ok = [](double x, double y, double s) { return y - s * x >= -1e-12; };
    if (!intercept_ok(xs_.back(), ys_.back(), slope_right_)) return false;
    if (xs_.front() > 0.0 && !intercept_ok(xs_.front(), ys_.front(), slope_left_)) return false;
    for (size_t i = 0; i + 1 < xs_.size(); ++i) {
        if (xs_[i + 1] > 0.0 && !intercept_ok(xs_[i], ys_[i], seg_slopes_[i])) return false;
    }
    return true;
}

std::string UtilityFunction::name() const {
    switch (kind_) {
    case Kind::Linear: return "linear:" + fmt_short(p1_);
    case Kind::Exponential: return "exp:" + fmt_short(p1_);
    case Kind::Power: return "power:" + fmt_short(p1_);
    case Kind::SShaped: return "sshaped:" + fmt_short(p1_) + "," + fmt_short(p2_);
    case Kind::BoundedExponential: return "boundedexp";
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

AlgVerdict alg_of(const UtilityFunction& u) {
    switch (u.kind()) {
    case UtilityFunction::Kind::Linear: return AlgVerdict::finite(-1.0);
    case UtilityFunction::Kind::Exponential: return AlgVerdict::neg_inf();
    case UtilityFunction::Kind::Power: return AlgVerdict::neg_inf();
    case UtilityFunction::Kind::SShaped: {
        const double alpha = u.param1(), beta = u.param2();
        if (beta > alpha) return AlgVerdict::neg_inf();
        if (beta < alpha) return AlgVerdict::finite(0.0);
        return AlgVerdict::finite(-1.0);
    }
    case UtilityFunction::Kind::BoundedExponential: return AlgVerdict::finite(-1.0);
    case UtilityFunction::Kind::PiecewiseLinear: {
        const double sl = u.left_slope(), sr = u.right_slope();
        return AlgVerdict::finite(sl == 0.0 ? 0.0 : -sl / sr);
    }
    }
    return AlgVerdict::finite(0.0);
}

std::vector<double> numeric_alg_trace(const UtilityFunction& u, const std::vector<double>& grid) {
    std::vector<double> out;
    out.reserve(grid.size());
    for (double y : grid) {
        if (!(y > 0.0)) throw DomainError("numeric_alg_trace: grid must be positive");
        const double gain = u(y);
        if (gain == 0.0) throw DomainError("numeric_alg_trace: utility vanishes on the grid");
        out.push_back(u(-y) / gain);
    }
    return out;
}

UtilitySpec UtilitySpec::mean() {
    UtilitySpec s;
    s.kind_ = Kind::Mean;
    s.meta_ = {true, true, true, true, true, true, true, kInf};
    return s;
}

UtilitySpec UtilitySpec::expected_utility(UtilityFunction u) {
    UtilitySpec s;
    s.kind_ = Kind::ExpectedUtility;
    s.meta_.upper_fatou = true;
    s.meta_.law_invariant = true;
    s.meta_.unbounded = u.unbounded();
    s.meta_.neg_star_shaped = u.neg_star_shaped();
    s.meta_.sensitivity_equivalent = s.meta_.unbounded && s.meta_.neg_star_shaped;
    s.meta_.concave = u.concave();
    s.meta_.pos_homogeneous = (u.kind() == UtilityFunction::Kind::Linear);
    s.meta_.bliss = u.limit_at_infinity();
    s.u_ = std::move(u);
    return s;
}

UtilitySpec UtilitySpec::essinf_fixture() {
    UtilitySpec s;
    s.kind_ = Kind::EssinfFixture;
    s.meta_ = {true, true, false, true, true, false, false, kInf};
    return s;
}

UtilitySpec UtilitySpec::partition_fixture(std::vector<int> inside, int n_scenarios) {
    if (inside.empty()) throw DomainError("partition fixture: subset must be nonempty");
    std::sort(inside.begin(), inside.end());
    inside.erase(std::unique(inside.begin(), inside.end()), inside.end());
    if (inside.front() < 0 || inside.back() >= n_scenarios)
        throw DomainError("partition fixture: subset indices out of range");
    UtilitySpec s;
    s.kind_ = Kind::PartitionFixture;
    s.inside_ = std::move(inside);
    s.n_scenarios_ = n_scenarios;
    s.meta_ = {true, false, true, true, true, true, true, kInf};
    return s;
}

const UtilityFunction& UtilitySpec::pointwise() const {
    if (!u_) throw PreconditionError("utility spec carries no pointwise utility");
    return *u_;
}

std::string UtilitySpec::name() const {
    switch (kind_) {
    case Kind::Mean: return "mean";
    case Kind::ExpectedUtility: return u_->name();
    case Kind::EssinfFixture: return "essinf-fixture";
    case Kind::PartitionFixture: return "partition-fixture";
    }
    return "";
}

double utility_value(const UtilitySpec& spec, const Eigen::VectorXd& payoff, const Eigen::VectorXd& probs) {
    switch (spec.kind()) {
    case UtilitySpec::Kind::Mean: {
        double acc = 0.0;
        for (const auto& [y, p] : sorted_scenarios(payoff, probs)) acc += p * y;
        return acc;
    }
    case UtilitySpec::Kind::ExpectedUtility: {
        const UtilityFunction& u = spec.pointwise();
        double acc = 0.0;
        for (const auto& [y, p] : sorted_scenarios(payoff, probs)) acc += p * u(y);
        return acc;
    }
    case UtilitySpec::Kind::EssinfFixture: {
        if (payoff.size() != probs.size()) throw LengthMismatch("payoff and probability lengths differ");
        const double lo = payoff.minCoeff();
        double mean = 0.0;
        for (const auto& [y, p] : sorted_scenarios(payoff, probs)) mean += p * y;
        // max of two monotone law-invariant pieces; the cap at 1 keeps scaled
        // losing payoffs bounded while a positive mean keeps them positive.
        return std::max(lo, std::min(mean, 1.0));
    }
    case UtilitySpec::Kind::PartitionFixture: {
        if (payoff.size() != probs.size()) throw LengthMismatch("payoff and probability lengths differ");
        if (payoff.size() != spec.fixture_scenarios())
            throw LengthMismatch("partition fixture: payoff length differs from the fixture's scenario count");
        double lo = kInf;
        for (int s : spec.inside()) lo = std::min(lo, payoff(s));
        return lo;
    }
    }
    return 0.0;
}

double utility_of_constant(const UtilitySpec& spec, double c) {
    switch (spec.kind()) {
    case UtilitySpec::Kind::Mean: return c;
    case UtilitySpec::Kind::ExpectedUtility: return spec.pointwise()(c);
    case UtilitySpec::Kind::EssinfFixture: return c; // max(c, min(c, 1)) collapses to c
    case UtilitySpec::Kind::PartitionFixture: return c;
    }
    return 0.0;
}

SensitivityReport utility_sll(const UtilitySpec& spec) {
    SensitivityReport rep;
    switch (spec.kind()) {
    case UtilitySpec::Kind::Mean:
        rep.applicable = true;
        rep.sll = false;
        rep.weak_sll = false;
        rep.reason = "expectation scales losses and gains proportionally; payoffs with positive "
                     "mean grow to the unbounded bliss level";
        return rep;
    case UtilitySpec::Kind::ExpectedUtility: {
        const UtilityFunction& u = spec.pointwise();
        if (u.kind() == UtilityFunction::Kind::BoundedExponential) {
            rep.applicable = true;
            rep.sll = false;
            rep.weak_sll = true;
            rep.reason = "bounded utility: values of scaled payoffs converge to P[Y>0] - P[Y<0], "
                         "strictly below the bliss level 1, yet positive for favorable payoffs";
            return rep;
        }
        if (!(u.unbounded() && u.neg_star_shaped())) {
            rep.applicable = false;
            rep.reason = "utility is not negatively star-shaped on the positive axis; the "
                         "loss-gain ratio criterion does not apply";
            return rep;
        }
        rep.applicable = true;
        rep.sll = alg_of(u).negative_infinity;
        rep.weak_sll = rep.sll; // unbounded + star-shaped makes the two notions coincide
        rep.reason = rep.sll ? "loss utilities outgrow gain utilities (asymptotic loss-gain ratio "
                               "diverges), so every payoff with loss scenarios turns negative under scaling"
                             : "asymptotic loss-gain ratio is finite, so gains can outweigh losses "
                               "under scaling for favorable payoffs";
        return rep;
    }
    case UtilitySpec::Kind::EssinfFixture:
        rep.applicable = true;
        rep.sll = false;
        rep.weak_sll = true;
        rep.reason = "scaled losing payoffs cap at 1, strictly below the unbounded bliss level, "
                     "but stay positive whenever the mean is positive";
        return rep;
    case UtilitySpec::Kind::PartitionFixture:
        rep.applicable = true;
        rep.sll = false;
        rep.weak_sll = false;
        rep.reason = "the subset infimum ignores scenarios outside its subset; scaling a payoff "
                     "positive on the subset and negative off it grows without bound";
        return rep;
    }
    return rep;
}

} // namespace utilrisk
