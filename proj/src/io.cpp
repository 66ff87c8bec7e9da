#include "utilrisk/io.hpp"

#include "utilrisk/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <utility>

namespace utilrisk::io {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_number(const std::string& s, const std::string& what) {
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw ParseError(what + ": trailing characters in '" + s + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(what + ": '" + s + "' is not a number");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    size_t from = 0;
    while (true) {
        const size_t at = s.find(sep, from);
        if (at == std::string::npos) {
            parts.push_back(s.substr(from));
            return parts;
        }
        parts.push_back(s.substr(from, at - from));
        from = at + 1;
    }
}

std::vector<double> parse_numbers(const std::string& s, char sep, const std::string& what) {
    std::vector<double> out;
    for (const std::string& p : split(s, sep)) out.push_back(parse_number(p, what));
    return out;
}

/// "x1,y1;x2,y2;..." into two coordinate lists.
std::pair<std::vector<double>, std::vector<double>> parse_points(const std::string& s,
                                                                 const std::string& what) {
    std::vector<double> xs, ys;
    for (const std::string& pair : split(s, ';')) {
        const std::vector<double> xy = parse_numbers(pair, ',', what);
        if (xy.size() != 2) throw ParseError(what + ": each point needs exactly x,y");
        xs.push_back(xy[0]);
        ys.push_back(xy[1]);
    }
    return {std::move(xs), std::move(ys)};
}

/// head before the first ':' and the remainder (empty when no colon).
std::pair<std::string, std::string> split_head(const std::string& text) {
    const size_t at = text.find(':');
    if (at == std::string::npos) return {text, ""};
    return {text.substr(0, at), text.substr(at + 1)};
}

void require_bare(const std::string& text, const std::string& head) {
    if (text != head) throw ParseError("'" + head + "' takes no parameters");
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const std::exception& e) {
        throw DomainError(path + ": invalid JSON: " + e.what());
    }
}

double json_number(const nlohmann::json& j, const std::string& what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    throw DomainError(what + ": expected a number or \"inf\"/\"-inf\"");
}

std::vector<double> json_vector(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array()) throw DomainError(what + ": expected an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) out.push_back(json_number(v, what));
    return out;
}

const nlohmann::json& json_field(const nlohmann::json& j, const char* key, const std::string& what) {
    const auto it = j.find(key);
    if (it == j.end()) throw DomainError(what + ": missing field \"" + key + "\"");
    return *it;
}

} // namespace

UtilitySpec parse_utility_spec(const std::string& text) {
    const auto [head, rest] = split_head(text);
    if (head == "mean") {
        require_bare(text, head);
        return UtilitySpec::mean();
    }
    if (head == "boundedexp") {
        require_bare(text, head);
        return UtilitySpec::expected_utility(UtilityFunction::bounded_exponential());
    }
    if (head == "exp") return UtilitySpec::expected_utility(UtilityFunction::exponential(parse_number(rest, "exp")));
    if (head == "power") return UtilitySpec::expected_utility(UtilityFunction::power(parse_number(rest, "power")));
    if (head == "linear") return UtilitySpec::expected_utility(UtilityFunction::linear(parse_number(rest, "linear")));
    if (head == "sshaped") {
        const std::vector<double> ab = parse_numbers(rest, ',', "sshaped");
        if (ab.size() != 2) throw ParseError("sshaped: needs gain,loss exponents");
        return UtilitySpec::expected_utility(UtilityFunction::sshaped(ab[0], ab[1]));
    }
    if (head == "pwl") {
        auto [xs, ys] = parse_points(rest, "pwl utility");
        return UtilitySpec::expected_utility(UtilityFunction::piecewise_linear(std::move(xs), std::move(ys)));
    }
    throw ParseError("unknown utility spec '" + text + "'");
}

LossFunction parse_loss_spec(const std::string& text) {
    const auto [head, rest] = split_head(text);
    if (head == "id") {
        require_bare(text, head);
        return LossFunction::identity();
    }
    if (head == "expm1") return LossFunction::exp_minus_one(parse_number(rest, "expm1"));
    if (head == "pospart") return LossFunction::positive_part(parse_number(rest, "pospart"));
    if (head == "powplus") {
        const std::vector<double> pc = parse_numbers(rest, ',', "powplus");
        if (pc.size() != 2) throw ParseError("powplus: needs exponent,weight");
        return LossFunction::power_plus(pc[0], pc[1]);
    }
    if (head == "pwl") {
        auto [xs, ys] = parse_points(rest, "pwl loss");
        return LossFunction::piecewise_linear(std::move(xs), std::move(ys));
    }
    throw ParseError("unknown loss spec '" + text + "'");
}

RiskSpec parse_risk_spec(const std::string& text) {
    const auto [head, rest] = split_head(text);
    if (head == "zero") {
        require_bare(text, head);
        return RiskSpec::zero();
    }
    if (head == "worstcase") {
        require_bare(text, head);
        return RiskSpec::worst_case();
    }
    if (head == "var") return RiskSpec::var(parse_number(rest, "var"));
    if (head == "es") return RiskSpec::es(parse_number(rest, "es"));
    if (head == "entropic") return RiskSpec::entropic(parse_number(rest, "entropic"));
    if (head == "lvar") {
        if (rest.empty()) throw ParseError("lvar: needs a profile file");
        return RiskSpec::lvar(load_threshold_distribution(rest));
    }
    if (head == "adjes") {
        if (rest.empty()) throw ParseError("adjes: needs a profile file");
        return RiskSpec::adjusted_es(load_risk_profile(rest));
    }
    if (head == "ew") return RiskSpec::ew(parse_loss_spec(rest));
    if (head == "sr") return RiskSpec::sr(parse_loss_spec(rest));
    if (head == "oce") return RiskSpec::oce(parse_loss_spec(rest));
    throw ParseError("unknown risk spec '" + text + "'");
}

ScenarioSet load_scenarios(const std::string& path) {
    const nlohmann::json j = read_json_file(path);
    const std::string what = "scenario file " + path;
    if (!j.is_object()) throw DomainError(what + ": expected an object");

    const double rate = json_number(json_field(j, "rate", what), what + ": rate");
    const std::vector<double> probs = json_vector(json_field(j, "probs", what), what + ": probs");

    const nlohmann::json& rows = json_field(j, "returns", what);
    if (!rows.is_array() || rows.empty()) throw DomainError(what + ": returns must be a nonempty array");
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    std::vector<std::vector<double>> r;
    r.reserve(rows.size());
    for (const auto& row : rows) r.push_back(json_vector(row, what + ": returns"));
    const Eigen::Index d = static_cast<Eigen::Index>(r.front().size());
    if (d == 0) throw DomainError(what + ": scenarios need at least one asset");
    Eigen::MatrixXd returns(n, d);
    for (Eigen::Index s = 0; s < n; ++s) {
        if (static_cast<Eigen::Index>(r[static_cast<size_t>(s)].size()) != d)
            throw DomainError(what + ": ragged returns matrix");
        for (Eigen::Index i = 0; i < d; ++i) returns(s, i) = r[static_cast<size_t>(s)][static_cast<size_t>(i)];
    }

    Eigen::VectorXd p(static_cast<Eigen::Index>(probs.size()));
    for (size_t i = 0; i < probs.size(); ++i) p(static_cast<Eigen::Index>(i)) = probs[i];
    return make_scenario_set(returns, p, rate);
}

ThresholdDistribution load_threshold_distribution(const std::string& path) {
    const nlohmann::json j = read_json_file(path);
    const std::string what = "threshold profile " + path;
    if (!j.is_object()) throw DomainError(what + ": expected an object");
    const std::vector<double> bp = json_vector(json_field(j, "breakpoints", what), what + ": breakpoints");
    const nlohmann::json& lv =
        j.contains("levels") ? j.at("levels") : json_field(j, "values", what + " (no \"levels\")");
    return make_threshold_distribution(bp, json_vector(lv, what + ": levels"));
}

RiskProfile load_risk_profile(const std::string& path) {
    const nlohmann::json j = read_json_file(path);
    const std::string what = "add-on profile " + path;
    if (!j.is_object()) throw DomainError(what + ": expected an object");
    const std::vector<double> bp = json_vector(json_field(j, "breakpoints", what), what + ": breakpoints");
    const std::vector<double> vals = json_vector(json_field(j, "values", what), what + ": values");
    const double g0 = json_number(json_field(j, "limit_at_zero", what), what + ": limit_at_zero");
    return make_risk_profile(bp, vals, g0);
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace utilrisk::io
