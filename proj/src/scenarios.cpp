#include "utilrisk/scenarios.hpp"

#include "utilrisk/errors.hpp"
#include "utilrisk/normal.hpp"
#include "utilrisk/rng.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace utilrisk {

namespace {

/// Phase-1 simplex for {p >= 0 : A p = b}. Returns p when the system is
/// feasible within tol = 1e-9 * max(1, |b|_inf).
std::optional<Eigen::VectorXd> nonneg_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    const Eigen::Index d = A.rows();
    const Eigen::Index n = A.cols();
    const Eigen::Index m = n + d;

    Eigen::MatrixXd T(d, m);
    T.leftCols(n) = A;
    T.rightCols(d).setZero();
    for (Eigen::Index i = 0; i < d; ++i) T(i, n + i) = (b(i) < 0.0) ? -1.0 : 1.0;

    Eigen::VectorXd cost = Eigen::VectorXd::Zero(m);
    cost.tail(d).setOnes();

    std::vector<Eigen::Index> basis(d);
    for (Eigen::Index i = 0; i < d; ++i) basis[i] = n + i;

    const double tol = 1e-9 * std::max(1.0, b.lpNorm<Eigen::Infinity>());
    const double eps = 1e-10;
    const long max_iter = 50000;

    Eigen::MatrixXd B(d, d);
    Eigen::VectorXd xb(d);
    for (long iter = 0; iter < max_iter; ++iter) {
        for (Eigen::Index i = 0; i < d; ++i) B.col(i) = T.col(basis[i]);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
        xb = lu.solve(b);

        Eigen::VectorXd cb(d);
        for (Eigen::Index i = 0; i < d; ++i) cb(i) = cost(basis[i]);
        const Eigen::VectorXd y = lu.transpose().solve(cb);

        // Entering column: Dantzig at first, Bland once iterations pile up.
        const bool bland = iter > 5000;
        Eigen::Index enter = -1;
        double best = -eps;
        for (Eigen::Index j = 0; j < m; ++j) {
            const double rj = cost(j) - y.dot(T.col(j));
            if (rj < -eps) {
                if (bland) { enter = j; break; }
                if (rj < best) { best = rj; enter = j; }
            }
        }
        if (enter < 0) break; // optimal

        const Eigen::VectorXd dir = lu.solve(T.col(enter));
        Eigen::Index leave = -1;
        double ratio = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < d; ++i) {
            if (dir(i) > 1e-12) {
                const double r = xb(i) / dir(i);
                if (r < ratio - 1e-15 || (r < ratio + 1e-15 && (leave < 0 || basis[i] < basis[leave]))) {
                    ratio = r;
                    leave = i;
                }
            }
        }
        if (leave < 0) break; // numerically unbounded; fall through to the objective test
        basis[leave] = enter;
    }

    double obj = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        if (basis[i] >= n) obj += std::max(0.0, xb(i));
    }
    if (obj > tol) return std::nullopt;

    Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < d; ++i) {
        if (basis[i] < n) p(basis[i]) = std::max(0.0, xb(i));
    }
    return p;
}

} // namespace

ValidationReport validate_market(const Eigen::MatrixXd& returns, const Eigen::VectorXd& probs) {
    if (probs.size() != returns.rows()) throw LengthMismatch("validate_market: probs length must match scenario count");
    if (returns.rows() < 1 || returns.cols() < 1) throw DomainError("validate_market: empty return matrix");

    ValidationReport rep;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(returns);
    qr.setThreshold(1e-10);
    rep.rank = static_cast<int>(qr.rank());
    rep.non_redundant = (rep.rank == returns.cols());

    // No arbitrage iff some strictly positive q has returns^T q = 0; scaling
    // lets us search q = 1 + p with p >= 0.
    const Eigen::MatrixXd At = returns.transpose();
    const Eigen::VectorXd b = -At.rowwise().sum();
    if (auto p = nonneg_solve(At, b)) {
        rep.no_arbitrage = true;
        rep.state_prices = (p->array() + 1.0).matrix();
    } else {
        rep.no_arbitrage = false;
    }
    return rep;
}

ScenarioSet make_scenario_set(const Eigen::MatrixXd& returns, const Eigen::VectorXd& probs, double rate) {
    if (probs.size() != returns.rows()) throw LengthMismatch("make_scenario_set: probs length must match scenario count");
    if (returns.rows() < 1 || returns.cols() < 1) throw DomainError("make_scenario_set: empty return matrix");
    if (!(rate > -1.0)) throw DomainError("make_scenario_set: rate must exceed -1");
    for (Eigen::Index s = 0; s < probs.size(); ++s) {
        if (!(probs(s) > 0.0)) throw ProbabilityError("make_scenario_set: probabilities must be strictly positive");
    }
    if (std::abs(probs.sum() - 1.0) > 1e-9) throw ProbabilityError("make_scenario_set: probabilities must sum to one");

    const ValidationReport rep = validate_market(returns, probs);
    if (!rep.non_redundant) throw RedundancyError("make_scenario_set: return columns are linearly dependent");
    if (!rep.no_arbitrage) throw ArbitrageError("make_scenario_set: market admits arbitrage");

    ScenarioSet set;
    set.returns = returns;
    set.probs = probs;
    set.rate = rate;
    return set;
}

void validate_gaussian(const GaussianMarket& gm) {
    const Eigen::Index d = gm.mu.size();
    if (d < 1) throw DomainError("gaussian market: empty mean vector");
    if (gm.sigma.rows() != d || gm.sigma.cols() != d) throw LengthMismatch("gaussian market: sigma shape must match mu");
    if (!(gm.rate > -1.0)) throw DomainError("gaussian market: rate must exceed -1");
    if ((gm.sigma - gm.sigma.transpose()).lpNorm<Eigen::Infinity>() > 1e-12 * std::max(1.0, gm.sigma.lpNorm<Eigen::Infinity>()))
        throw DomainError("gaussian market: sigma must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gm.sigma);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
        throw DomainError("gaussian market: sigma must be positive definite");
    if ((gm.mu.array() - gm.rate).abs().maxCoeff() == 0.0)
        throw DomainError("gaussian market: mu must differ from the riskless rate");
}

ScenarioSet discretize_gaussian(const GaussianMarket& gm, int n, std::uint64_t seed) {
    validate_gaussian(gm);
    const Eigen::Index d = gm.mu.size();
    if (n < d + 1) throw GenerationError("discretize_gaussian: need at least d + 1 scenarios");

    const Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(gm.sigma).matrixL();
    const Eigen::VectorXd mu_excess = gm.mu.array() - gm.rate;
    const Eigen::VectorXd probs = Eigen::VectorXd::Constant(n, 1.0 / n);

    for (std::uint64_t attempt = 0; attempt < 32; ++attempt) {
        Rng rng = Rng::stream(seed, attempt);
        Eigen::MatrixXd returns(n, d);
        for (int s = 0; s < n; ++s) {
            Eigen::VectorXd z(d);
            for (Eigen::Index i = 0; i < d; ++i) z(i) = norm_inv(rng.uniform());
            returns.row(s) = (mu_excess + L * z).transpose();
        }
        const ValidationReport rep = validate_market(returns, probs);
        if (rep.no_arbitrage && rep.non_redundant) {
            ScenarioSet set;
            set.returns = std::move(returns);
            set.probs = probs;
            set.rate = gm.rate;
            return set;
        }
    }
    throw GenerationError("discretize_gaussian: no valid market after 32 attempts");
}

Eigen::VectorXd portfolio_payoff(const ScenarioSet& mkt, const Eigen::VectorXd& pi) {
    if (pi.size() != mkt.n_assets()) throw LengthMismatch("portfolio_payoff: pi length must match asset count");
    return mkt.returns * pi;
}

} // namespace utilrisk
