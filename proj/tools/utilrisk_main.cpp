#include "utilrisk/diagnostics.hpp"
#include "utilrisk/errors.hpp"
#include "utilrisk/io.hpp"
#include "utilrisk/optimizer.hpp"
#include "utilrisk/scenarios.hpp"
#include "utilrisk/transform.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace {

namespace ur = utilrisk;
using nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------- shared options ----------

struct Shared {
    std::string scenarios, utility, risk, config;
    double w = 1.0, r = 0.0, rmax = 0.0, umin = 0.0;
    std::uint64_t seed = 0;
    bool csv = false;
    CLI::Option* scenarios_opt = nullptr;
    CLI::Option* utility_opt = nullptr;
    CLI::Option* risk_opt = nullptr;
    CLI::Option* w_opt = nullptr;
    CLI::Option* r_opt = nullptr;
    CLI::Option* rmax_opt = nullptr;
    CLI::Option* umin_opt = nullptr;
};

void add_shared(CLI::App* sub, Shared& sh) {
    sh.scenarios_opt = sub->add_option("--scenarios", sh.scenarios, "scenario market JSON file");
    sh.utility_opt = sub->add_option("--utility", sh.utility,
                                     "utility spec: mean | exp:a | power:g | sshaped:a,b | linear:a | "
                                     "boundedexp | pwl:x,y;x,y;...");
    sh.risk_opt = sub->add_option("--risk", sh.risk,
                                  "risk spec: zero | var:a | es:a | worstcase | entropic:a | lvar:file | "
                                  "adjes:file | ew:<loss> | sr:<loss> | oce:<loss> with loss id | expm1:a | "
                                  "pospart:c | powplus:p,c | pwl:x,y;...");
    sh.w_opt = sub->add_option("--w", sh.w, "initial wealth (default 1)");
    sh.r_opt = sub->add_option("--r", sh.r, "riskless rate (default: rate from the scenario file)");
    sh.rmax_opt = sub->add_option("--rmax", sh.rmax, "risk budget on the raw terminal wealth");
    sh.umin_opt = sub->add_option("--umin", sh.umin, "raw utility floor for risk minimization");
    sub->add_option("--seed", sh.seed, "seed for solver starts and samplers");
    sub->add_flag("--csv", sh.csv, "emit CSV instead of JSON");
    sub->add_option("--config", sh.config,
                    "JSON file with defaults for scenarios, utility, risk, w, r, rmax, umin and solver options; "
                    "explicit flags win");
}

// ---------- config resolution ----------

nlohmann::json load_config(const std::string& path) {
    if (path.empty()) return nlohmann::json();
    std::ifstream in(path);
    if (!in) throw ur::DomainError("cannot open config file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const std::exception& e) {
        throw ur::DomainError(path + ": invalid JSON: " + std::string(e.what()));
    }
}

double config_number(const nlohmann::json& v, const std::string& key) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    throw ur::DomainError("config: field \"" + key + "\" must be a number or \"inf\"/\"-inf\"");
}

std::string effective_text(const CLI::Option* opt, const std::string& flag_value,
                           const nlohmann::json& cfg, const char* key) {
    if (opt->count() > 0) return flag_value;
    if (cfg.is_object() && cfg.contains(key) && !cfg.at(key).is_null()) {
        if (!cfg.at(key).is_string())
            throw ur::DomainError(std::string("config: field \"") + key + "\" must be a string");
        return cfg.at(key).get<std::string>();
    }
    return flag_value;
}

std::optional<double> effective_number(const CLI::Option* opt, double flag_value,
                                       const nlohmann::json& cfg, const char* key) {
    if (opt->count() > 0) return flag_value;
    if (cfg.is_object() && cfg.contains(key) && !cfg.at(key).is_null())
        return config_number(cfg.at(key), key);
    return std::nullopt;
}

ur::SolveOptions solve_options(const Shared& sh, const nlohmann::json& cfg) {
    ur::SolveOptions o;
    o.seed = sh.seed;
    if (cfg.is_object() && cfg.contains("options")) {
        const nlohmann::json& j = cfg.at("options");
        if (!j.is_object()) throw ur::DomainError("config: \"options\" must be an object");
        if (j.contains("n_starts")) o.n_starts = static_cast<int>(config_number(j.at("n_starts"), "options.n_starts"));
        if (j.contains("max_iters")) o.max_iters = static_cast<int>(config_number(j.at("max_iters"), "options.max_iters"));
        if (j.contains("tol")) o.tol = config_number(j.at("tol"), "options.tol");
        if (j.contains("penalty")) o.penalty = config_number(j.at("penalty"), "options.penalty");
        if (j.contains("ray_k_max")) o.ray_k_max = static_cast<int>(config_number(j.at("ray_k_max"), "options.ray_k_max"));
    }
    return o;
}

ur::ScenarioSet need_scenarios(const Shared& sh, const nlohmann::json& cfg) {
    const std::string path = effective_text(sh.scenarios_opt, sh.scenarios, cfg, "scenarios");
    if (path.empty()) throw ur::ParseError("--scenarios is required for this command");
    return ur::io::load_scenarios(path);
}

ur::UtilitySpec need_utility(const Shared& sh, const nlohmann::json& cfg) {
    const std::string text = effective_text(sh.utility_opt, sh.utility, cfg, "utility");
    if (text.empty()) throw ur::ParseError("--utility is required for this command");
    return ur::io::parse_utility_spec(text);
}

ur::RiskSpec need_risk(const Shared& sh, const nlohmann::json& cfg) {
    const std::string text = effective_text(sh.risk_opt, sh.risk, cfg, "risk");
    if (text.empty()) throw ur::ParseError("--risk is required for this command");
    return ur::io::parse_risk_spec(text);
}

double effective_w(const Shared& sh, const nlohmann::json& cfg) {
    return effective_number(sh.w_opt, sh.w, cfg, "w").value_or(1.0);
}

double effective_rate(const Shared& sh, const nlohmann::json& cfg, const ur::ScenarioSet& mkt) {
    return effective_number(sh.r_opt, sh.r, cfg, "r").value_or(mkt.rate);
}

double need_rmax(const Shared& sh, const nlohmann::json& cfg, const ur::RiskSpec& R) {
    const std::optional<double> v = effective_number(sh.rmax_opt, sh.rmax, cfg, "rmax");
    if (v) return *v;
    if (R.kind() == ur::RiskSpec::Kind::Zero) return 0.0; // zero risk is always within a zero budget
    throw ur::ParseError("--rmax is required unless the risk is zero");
}

double need_umin(const Shared& sh, const nlohmann::json& cfg) {
    const std::optional<double> v = effective_number(sh.umin_opt, sh.umin, cfg, "umin");
    if (!v) throw ur::ParseError("--umin is required for minrisk");
    return *v;
}

// ---------- output helpers ----------

ordered_json num_json(double v) {
    if (std::isfinite(v)) return v;
    return ur::io::format_number(v);
}

ordered_json vec_json(const Eigen::VectorXd& v) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num_json(v(i)));
    return a;
}

void print_json(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

std::string fnum(double v) { return ur::io::format_number(v); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    return out + "\"";
}

const char* status_name(ur::OptimizationResult::Status s) {
    switch (s) {
    case ur::OptimizationResult::Status::Optimal: return "optimal";
    case ur::OptimizationResult::Status::Diverging: return "diverging";
    case ur::OptimizationResult::Status::Infeasible: return "infeasible";
    }
    return "infeasible";
}

void echo_problem(ordered_json& out, const ur::UtilitySpec& U, const ur::RiskSpec& R,
                  const ur::ProblemFrame& f) {
    out["utility"] = U.name();
    out["risk"] = R.name();
    out["w"] = f.w;
    out["r"] = f.r;
    out["rmax"] = num_json(f.r_max);
    out["risk_at_riskless"] = num_json(f.risk_at_riskless);
    out["utility_at_riskless"] = num_json(f.utility_at_riskless);
    out["risk_budget"] = num_json(f.r_tilde_max);
}

ordered_json divergence_json(const ur::DivergingEvidence& ev) {
    ordered_json d;
    d["direction"] = vec_json(ev.direction);
    ordered_json tr = ordered_json::array();
    for (const ur::TracePoint& pt : ev.trace) {
        ordered_json p;
        p["lambda"] = num_json(pt.lambda);
        p["utility"] = num_json(pt.utility);
        p["risk"] = num_json(pt.risk);
        tr.push_back(std::move(p));
    }
    d["trace"] = std::move(tr);
    return d;
}

ordered_json axiom_json(const std::string& name, const ur::AxiomReport& rep) {
    ordered_json r;
    r["name"] = name;
    r["mismatch"] = rep.mismatch;
    ordered_json arr = ordered_json::array();
    for (const auto& [axiom, chk] : rep.axioms) {
        ordered_json a;
        a["axiom"] = axiom;
        a["required"] = chk.required;
        a["passed"] = chk.passed;
        a["violations"] = chk.violations;
        a["counterexample"] = chk.counterexample;
        arr.push_back(std::move(a));
    }
    r["axioms"] = std::move(arr);
    return r;
}

Eigen::VectorXd parse_pi(const std::string& text) {
    if (text.empty()) throw ur::ParseError("--pi: empty fraction list");
    std::vector<double> vals;
    size_t from = 0;
    while (true) {
        const size_t at = text.find(',', from);
        const std::string part = at == std::string::npos ? text.substr(from) : text.substr(from, at - from);
        try {
            size_t pos = 0;
            vals.push_back(std::stod(part, &pos));
            if (pos != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw ur::ParseError("--pi: '" + part + "' is not a number");
        }
        if (at == std::string::npos) break;
        from = at + 1;
    }
    Eigen::VectorXd pi(static_cast<Eigen::Index>(vals.size()));
    for (size_t i = 0; i < vals.size(); ++i) pi(static_cast<Eigen::Index>(i)) = vals[i];
    return pi;
}

void parse_grid(const std::string& text, double& start, double& stop, int& count) {
    const size_t c1 = text.find(':');
    const size_t c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw ur::ParseError("--grid: expected start:stop:count");
    const auto num = [](const std::string& s, const char* what) {
        try {
            size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ur::ParseError(std::string("--grid: ") + what + " '" + s + "' is not a number");
        }
    };
    start = num(text.substr(0, c1), "start");
    stop = num(text.substr(c1 + 1, c2 - c1 - 1), "stop");
    const double k = num(text.substr(c2 + 1), "count");
    count = static_cast<int>(k);
    if (count < 1 || static_cast<double>(count) != k) throw ur::ParseError("--grid: count must be a positive integer");
    if (!(start >= 0.0)) throw ur::ParseError("--grid: budgets must be nonnegative");
    if (!(stop >= start)) throw ur::ParseError("--grid: stop must not precede start");
    if (count == 1 && stop != start) throw ur::ParseError("--grid: a single-point grid needs stop == start");
}

// ---------- commands ----------

int cmd_eval(const Shared& sh, const std::string& pi_text) {
    const nlohmann::json cfg = load_config(sh.config);
    const ur::ScenarioSet mkt = need_scenarios(sh, cfg);
    const ur::UtilitySpec U = need_utility(sh, cfg);
    const ur::RiskSpec R = need_risk(sh, cfg);
    const double w = effective_w(sh, cfg);
    const double r = effective_rate(sh, cfg, mkt);
    const ur::ProblemFrame frame = ur::make_frame(U, R, w, r, need_rmax(sh, cfg, R));

    const Eigen::VectorXd pi = parse_pi(pi_text);
    if (pi.size() != mkt.n_assets())
        throw ur::DimensionError("portfolio has " + std::to_string(pi.size()) + " entries but the market has " +
                                 std::to_string(mkt.n_assets()) + " assets");
    const Eigen::VectorXd y = ur::portfolio_payoff(mkt, pi);
    const double tu = ur::transformed_utility(U, frame, y, mkt.probs);
    const double tr = ur::transformed_risk(R, frame, y, mkt.probs);
    const bool feasible = tr <= frame.r_tilde_max;

    if (sh.csv) {
        std::cout << "utility_value,risk_value,feasible\n"
                  << fnum(tu) << "," << fnum(tr) << "," << (feasible ? "true" : "false") << "\n";
        return 0;
    }
    ordered_json out;
    out["command"] = "eval";
    echo_problem(out, U, R, frame);
    out["pi"] = vec_json(pi);
    out["utility_value"] = num_json(tu);
    out["risk_value"] = num_json(tr);
    out["utility_value_raw"] = num_json(tu + frame.utility_at_riskless);
    out["risk_value_raw"] = num_json(tr + frame.risk_at_riskless);
    out["feasible"] = feasible;
    print_json(out);
    return 0;
}

int cmd_optimize(const Shared& sh) {
    const nlohmann::json cfg = load_config(sh.config);
    const ur::ScenarioSet mkt = need_scenarios(sh, cfg);
    const ur::UtilitySpec U = need_utility(sh, cfg);
    const ur::RiskSpec R = need_risk(sh, cfg);
    const double w = effective_w(sh, cfg);
    const double r = effective_rate(sh, cfg, mkt);
    const ur::ProblemFrame frame = ur::make_frame(U, R, w, r, need_rmax(sh, cfg, R));
    const ur::SolveOptions opts = solve_options(sh, cfg);

    const ur::OptimizationResult res = ur::maximize_utility(U, R, mkt, frame, opts);
    const ur::UniquenessReport uq = ur::uniqueness_probe(res);
    const bool optimal = res.status == ur::OptimizationResult::Status::Optimal;

    if (sh.csv) {
        std::cout << "status,value";
        for (Eigen::Index i = 0; i < mkt.n_assets(); ++i) std::cout << ",pi_" << (i + 1);
        std::cout << "\n" << status_name(res.status) << "," << (optimal ? fnum(res.value) : "nan");
        for (Eigen::Index i = 0; i < mkt.n_assets(); ++i)
            std::cout << "," << (optimal ? fnum(res.pi(i)) : "nan");
        std::cout << "\n";
        return 0;
    }
    ordered_json out;
    out["command"] = "optimize";
    echo_problem(out, U, R, frame);
    out["status"] = status_name(res.status);
    if (optimal) {
        out["value"] = num_json(res.value);
        out["value_raw"] = num_json(res.value + frame.utility_at_riskless);
        out["pi"] = vec_json(res.pi);
    }
    out["evaluations"] = res.evaluations;
    out["starts_converged"] = res.starts_converged;
    out["starts_agreeing"] = res.starts_agreeing;
    out["unique_evidence"] = uq.unique_evidence;
    if (res.divergence) out["divergence"] = divergence_json(*res.divergence);
    print_json(out);
    return 0;
}

int cmd_minrisk(const Shared& sh) {
    const nlohmann::json cfg = load_config(sh.config);
    const ur::ScenarioSet mkt = need_scenarios(sh, cfg);
    const ur::UtilitySpec U = need_utility(sh, cfg);
    const ur::RiskSpec R = need_risk(sh, cfg);
    const double w = effective_w(sh, cfg);
    const double r = effective_rate(sh, cfg, mkt);
    const double umin = need_umin(sh, cfg);
    const ur::ProblemFrame frame = ur::make_risk_min_frame(U, R, w, r, umin);
    const ur::SolveOptions opts = solve_options(sh, cfg);

    const ur::OptimizationResult res = ur::minimize_risk(U, R, mkt, frame, opts);
    const bool optimal = res.status == ur::OptimizationResult::Status::Optimal;

    if (sh.csv) {
        std::cout << "status,risk_value";
        for (Eigen::Index i = 0; i < mkt.n_assets(); ++i) std::cout << ",pi_" << (i + 1);
        std::cout << "\n" << status_name(res.status) << "," << (optimal ? fnum(res.value) : "nan");
        for (Eigen::Index i = 0; i < mkt.n_assets(); ++i)
            std::cout << "," << (optimal ? fnum(res.pi(i)) : "nan");
        std::cout << "\n";
        return 0;
    }
    ordered_json out;
    out["command"] = "minrisk";
    echo_problem(out, U, R, frame);
    out["utility_floor"] = num_json(frame.u_min.value());
    out["utility_floor_budget"] = num_json(frame.u_tilde_min.value());
    out["status"] = status_name(res.status);
    if (optimal) {
        out["risk_value"] = num_json(res.value);
        out["risk_value_raw"] = num_json(res.value + frame.risk_at_riskless);
        out["pi"] = vec_json(res.pi);
        const Eigen::VectorXd y = ur::portfolio_payoff(mkt, res.pi);
        out["utility_value"] = num_json(ur::transformed_utility(U, frame, y, mkt.probs));
    }
    out["evaluations"] = res.evaluations;
    out["starts_converged"] = res.starts_converged;
    out["starts_agreeing"] = res.starts_agreeing;
    if (res.divergence) out["divergence"] = divergence_json(*res.divergence);
    print_json(out);
    return 0;
}

int cmd_classify(const Shared& sh) {
    const nlohmann::json cfg = load_config(sh.config);
    const ur::UtilitySpec U = need_utility(sh, cfg);
    const ur::RiskSpec R = need_risk(sh, cfg);
    const ur::Classification cls = ur::classify_wellposedness(U, R);
    const ur::SensitivityReport us = ur::utility_sll(U);
    const ur::SensitivityReport rs = ur::risk_sll(R);

    if (sh.csv) {
        std::cout << "verdict,failing_premise,u_sll,r_sll\n"
                  << ur::verdict_name(cls.verdict) << "," << cls.failing_premise << ","
                  << (cls.basis.u_sll ? "true" : "false") << "," << (cls.basis.r_sll ? "true" : "false")
                  << "\n";
        return 0;
    }
    ordered_json out;
    out["command"] = "classify";
    out["utility"] = U.name();
    out["risk"] = R.name();
    out["verdict"] = ur::verdict_name(cls.verdict);
    out["failing_premise"] = cls.failing_premise;
    ordered_json basis;
    basis["u_sll"] = cls.basis.u_sll;
    basis["u_weak_sll"] = cls.basis.u_weak_sll;
    basis["r_sll"] = cls.basis.r_sll;
    basis["u_upper_fatou"] = cls.basis.u_upper_fatou;
    basis["u_sensitivity_equiv"] = cls.basis.u_sensitivity_equiv;
    basis["r_lower_fatou"] = cls.basis.r_lower_fatou;
    basis["r_cash_convex"] = cls.basis.r_cash_convex;
    basis["law_invariance_side"] = cls.basis.law_invariance_side;
    out["basis"] = std::move(basis);
    out["citations"] = cls.citations;
    ordered_json uj;
    uj["applicable"] = us.applicable;
    uj["sll"] = us.sll;
    uj["weak_sll"] = us.weak_sll;
    uj["reason"] = us.reason;
    out["utility_sensitivity"] = std::move(uj);
    ordered_json rj;
    rj["applicable"] = rs.applicable;
    rj["sll"] = rs.sll;
    rj["weak_sll"] = rs.weak_sll;
    rj["reason"] = rs.reason;
    out["risk_sensitivity"] = std::move(rj);
    print_json(out);
    return 0;
}

int cmd_tables(const Shared& sh) {
    const ur::PosednessTables T = ur::table_matrix();
    if (sh.csv) {
        std::cout << "table,row,col,verdict\n";
        for (size_t i = 0; i < T.t1_rows.size(); ++i)
            for (size_t j = 0; j < T.t1_cols.size(); ++j)
                std::cout << "1," << csv_field(T.t1_rows[i]) << "," << csv_field(T.t1_cols[j]) << ","
                          << ur::verdict_name(T.t1[i][j]) << "\n";
        for (size_t i = 0; i < T.t2_rows.size(); ++i)
            for (size_t j = 0; j < T.t2_cols.size(); ++j)
                std::cout << "2," << csv_field(T.t2_rows[i]) << "," << csv_field(T.t2_cols[j]) << ","
                          << ur::verdict_name(T.t2[i][j]) << "\n";
        return 0;
    }
    const auto table_json = [](const std::vector<std::string>& rows, const std::vector<std::string>& cols,
                               const std::vector<std::vector<ur::Verdict>>& v) {
        ordered_json t;
        t["rows"] = rows;
        t["cols"] = cols;
        ordered_json m = ordered_json::array();
        for (const auto& row : v) {
            ordered_json jr = ordered_json::array();
            for (ur::Verdict vv : row) jr.push_back(ur::verdict_name(vv));
            m.push_back(std::move(jr));
        }
        t["verdicts"] = std::move(m);
        return t;
    };
    ordered_json out;
    out["command"] = "tables";
    out["table1"] = table_json(T.t1_rows, T.t1_cols, T.t1);
    out["table2"] = table_json(T.t2_rows, T.t2_cols, T.t2);
    print_json(out);
    return 0;
}

int cmd_witness(const Shared& sh, double target_sr, int dim, int count) {
    const nlohmann::json cfg = load_config(sh.config);
    const ur::RiskSpec R = need_risk(sh, cfg);
    bool es_kind = false;
    if (R.kind() == ur::RiskSpec::Kind::ExpectedShortfall) es_kind = true;
    else if (R.kind() != ur::RiskSpec::Kind::ValueAtRisk)
        throw ur::ParseError("witness: --risk must be var:a or es:a");
    const double alpha = R.alpha();
    const std::string kind = es_kind ? "es" : "var";
    const ur::WitnessResult res = ur::gaussian_witness(es_kind, alpha, target_sr, dim, count, sh.seed);
    if (sh.csv) {
        std::cout << "n";
        for (int i = 0; i < dim; ++i) std::cout << ",pi_" << (i + 1);
        std::cout << ",mean,risk\n";
        if (res.witness) {
            int n = 1;
            for (const ur::WitnessPoint& pt : res.witness->sequence) {
                std::cout << n++;
                for (Eigen::Index i = 0; i < pt.pi.size(); ++i) std::cout << "," << fnum(pt.pi(i));
                std::cout << "," << fnum(pt.mean) << "," << fnum(pt.risk) << "\n";
            }
        }
        return 0;
    }
    ordered_json out;
    out["command"] = "witness";
    out["kind"] = kind;
    out["alpha"] = alpha;
    out["target_sr"] = target_sr;
    out["dim"] = dim;
    out["count"] = count;
    out["seed"] = sh.seed;
    out["applicable"] = res.applicable;
    out["threshold"] = num_json(res.threshold);
    out["gap"] = num_json(res.gap);
    if (res.witness) {
        out["sr_max"] = num_json(res.witness->sr_max);
        out["rate"] = res.witness->market.rate;
        out["direction"] = vec_json(res.witness->base_direction);
        ordered_json seq = ordered_json::array();
        int n = 1;
        for (const ur::WitnessPoint& pt : res.witness->sequence) {
            ordered_json p;
            p["n"] = n++;
            p["pi"] = vec_json(pt.pi);
            p["mean"] = num_json(pt.mean);
            p["risk"] = num_json(pt.risk);
            seq.push_back(std::move(p));
        }
        out["sequence"] = std::move(seq);
    }
    print_json(out);
    return 0;
}

int cmd_frontier(const Shared& sh, const std::string& grid_text) {
    const nlohmann::json cfg = load_config(sh.config);
    const ur::ScenarioSet mkt = need_scenarios(sh, cfg);
    const ur::UtilitySpec U = need_utility(sh, cfg);
    const ur::RiskSpec R = need_risk(sh, cfg);
    const double w = effective_w(sh, cfg);
    const double r = effective_rate(sh, cfg, mkt);
    const ur::SolveOptions opts = solve_options(sh, cfg);

    double start = 0.0, stop = 0.0;
    int count = 0;
    parse_grid(grid_text, start, stop, count);

    const double base = ur::risk_of_constant(R, w * (1.0 + r));
    if (!std::isfinite(base)) throw ur::DomainError("frontier: the riskless payoff has non-finite risk");

    struct Row {
        double budget;
        ur::OptimizationResult res;
    };
    std::vector<Row> rows;
    rows.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double budget = count == 1 ? start : start + (stop - start) * i / (count - 1);
        const ur::ProblemFrame frame = ur::make_frame(U, R, w, r, base + budget);
        rows.push_back({budget, ur::maximize_utility(U, R, mkt, frame, opts)});
    }

    if (sh.csv) {
        std::cout << "rmax,status,value";
        for (Eigen::Index i = 0; i < mkt.n_assets(); ++i) std::cout << ",pi_" << (i + 1);
        std::cout << "\n";
        for (const Row& row : rows) {
            const bool optimal = row.res.status == ur::OptimizationResult::Status::Optimal;
            std::cout << fnum(row.budget) << "," << status_name(row.res.status) << ","
                      << (optimal ? fnum(row.res.value) : "nan");
            for (Eigen::Index i = 0; i < mkt.n_assets(); ++i)
                std::cout << "," << (optimal ? fnum(row.res.pi(i)) : "nan");
            std::cout << "\n";
        }
        return 0;
    }
    ordered_json out;
    out["command"] = "frontier";
    out["utility"] = U.name();
    out["risk"] = R.name();
    out["w"] = w;
    out["r"] = r;
    out["risk_at_riskless"] = num_json(base);
    ordered_json grid;
    grid["start"] = start;
    grid["stop"] = stop;
    grid["count"] = count;
    out["grid"] = std::move(grid);
    ordered_json pts = ordered_json::array();
    for (const Row& row : rows) {
        ordered_json p;
        p["risk_budget"] = num_json(row.budget);
        p["status"] = status_name(row.res.status);
        if (row.res.status == ur::OptimizationResult::Status::Optimal) {
            p["value"] = num_json(row.res.value);
            p["pi"] = vec_json(row.res.pi);
        }
        pts.push_back(std::move(p));
    }
    out["points"] = std::move(pts);
    print_json(out);
    return 0;
}

int cmd_axioms(const Shared& sh, int trials) {
    const nlohmann::json cfg = load_config(sh.config);
    const std::string utext = effective_text(sh.utility_opt, sh.utility, cfg, "utility");
    const std::string rtext = effective_text(sh.risk_opt, sh.risk, cfg, "risk");
    if (utext.empty() && rtext.empty()) throw ur::ParseError("axioms: need --utility and/or --risk");

    std::optional<std::pair<std::string, ur::AxiomReport>> urep, rrep;
    if (!utext.empty()) {
        const ur::UtilitySpec U = ur::io::parse_utility_spec(utext);
        urep = {U.name(), ur::axiom_harness_utility(U, trials, sh.seed)};
    }
    if (!rtext.empty()) {
        const ur::RiskSpec R = ur::io::parse_risk_spec(rtext);
        rrep = {R.name(), ur::axiom_harness_risk(R, trials, sh.seed)};
    }

    if (sh.csv) {
        std::cout << "side,axiom,required,passed,violations\n";
        const auto rows = [](const char* side, const ur::AxiomReport& rep) {
            for (const auto& [axiom, chk] : rep.axioms)
                std::cout << side << "," << axiom << "," << (chk.required ? "true" : "false") << ","
                          << (chk.passed ? "true" : "false") << "," << chk.violations << "\n";
        };
        if (urep) rows("utility", urep->second);
        if (rrep) rows("risk", rrep->second);
        return 0;
    }
    ordered_json out;
    out["command"] = "axioms";
    out["trials"] = trials;
    out["seed"] = sh.seed;
    if (urep) out["utility"] = axiom_json(urep->first, urep->second);
    if (rrep) out["risk"] = axiom_json(rrep->first, rrep->second);
    print_json(out);
    return 0;
}

const char* error_kind(const ur::Error& e) {
    if (dynamic_cast<const ur::ProbabilityError*>(&e)) return "probability";
    if (dynamic_cast<const ur::ArbitrageError*>(&e)) return "arbitrage";
    if (dynamic_cast<const ur::RedundancyError*>(&e)) return "redundancy";
    if (dynamic_cast<const ur::GenerationError*>(&e)) return "generation";
    if (dynamic_cast<const ur::LengthMismatch*>(&e)) return "length_mismatch";
    if (dynamic_cast<const ur::NoRoot*>(&e)) return "no_root";
    if (dynamic_cast<const ur::UnboundedBelow*>(&e)) return "unbounded_below";
    if (dynamic_cast<const ur::DimensionError*>(&e)) return "dimension";
    if (dynamic_cast<const ur::BudgetError*>(&e)) return "budget";
    if (dynamic_cast<const ur::PreconditionError*>(&e)) return "precondition";
    if (dynamic_cast<const ur::InfeasibleError*>(&e)) return "infeasible";
    if (dynamic_cast<const ur::DomainError*>(&e)) return "domain";
    return "error";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"portfolio selection engine pairing a utility functional with a risk functional on "
                 "finite scenario markets"};
    app.require_subcommand(1);

    Shared sh_eval, sh_opt, sh_min, sh_cls, sh_tab, sh_wit, sh_fro, sh_axi;
    std::string pi_text, grid_text;
    double wit_sr = 0.0;
    int wit_dim = 3, wit_count = 20, trials = 1000;

    CLI::App* c_eval = app.add_subcommand("eval", "evaluate a fraction portfolio's transformed utility and risk");
    add_shared(c_eval, sh_eval);
    c_eval->add_option("--pi", pi_text, "comma-separated risky wealth fractions")->required();

    CLI::App* c_opt = app.add_subcommand("optimize", "maximize transformed utility under the risk budget");
    add_shared(c_opt, sh_opt);

    CLI::App* c_min = app.add_subcommand("minrisk", "minimize transformed risk under a raw utility floor");
    add_shared(c_min, sh_min);

    CLI::App* c_cls = app.add_subcommand("classify", "market-free posedness verdict for a utility/risk pair");
    add_shared(c_cls, sh_cls);

    CLI::App* c_tab = app.add_subcommand("tables", "canonical posedness matrices over the cataloged functionals");
    add_shared(c_tab, sh_tab);

    CLI::App* c_wit = app.add_subcommand(
        "witness", "Gaussian market whose best mean-to-deviation slope beats the risk threshold, "
                   "with a diverging strategy sequence");
    add_shared(c_wit, sh_wit);
    c_wit->add_option("--sr", wit_sr, "target mean-to-deviation slope of the market")->required();
    c_wit->add_option("--dim", wit_dim, "number of risky assets, default 3");
    c_wit->add_option("--count", wit_count, "sequence points to emit, default 20");

    CLI::App* c_fro = app.add_subcommand("frontier", "sweep the transformed risk budget and report optima");
    add_shared(c_fro, sh_fro);
    c_fro->add_option("--grid", grid_text, "budget sweep start:stop:count (inclusive)")->required();

    CLI::App* c_axi = app.add_subcommand("axioms", "randomized axiom checks against the declared metadata");
    add_shared(c_axi, sh_axi);
    c_axi->add_option("--trials", trials, "random trials, default 1000");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (c_eval->parsed()) return cmd_eval(sh_eval, pi_text);
        if (c_opt->parsed()) return cmd_optimize(sh_opt);
        if (c_min->parsed()) return cmd_minrisk(sh_min);
        if (c_cls->parsed()) return cmd_classify(sh_cls);
        if (c_tab->parsed()) return cmd_tables(sh_tab);
        if (c_wit->parsed()) return cmd_witness(sh_wit, wit_sr, wit_dim, wit_count);
        if (c_fro->parsed()) return cmd_frontier(sh_fro, grid_text);
        if (c_axi->parsed()) return cmd_axioms(sh_axi, trials);
        return 2;
    } catch (const ur::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ur::Error& e) {
        ordered_json err;
        ordered_json body;
        body["kind"] = error_kind(e);
        body["message"] = e.what();
        err["error"] = std::move(body);
        print_json(err);
        return 3;
    } catch (const std::exception& e) {
        ordered_json err;
        ordered_json body;
        body["kind"] = "internal";
        body["message"] = e.what();
        err["error"] = std::move(body);
        print_json(err);
        return 3;
    }
}
