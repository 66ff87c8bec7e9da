#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using nlohmann::json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

/// Runs the installed binary with the given arguments, capturing the merged
/// stdout/stderr stream and the exit code.
RunResult run_cli(const std::string& args) {
    RunResult res;
    const std::string cmd = std::string(UTILRISK_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
    const int rc = pclose(pipe);
    res.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return res;
}

std::string fixture_dir() {
    static std::string dir = [] {
        char tmpl[] = "/tmp/utilrisk_cli_XXXXXX";
        const char* d = mkdtemp(tmpl);
        REQUIRE(d != nullptr);
        return std::string(d);
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
    const std::string path = fixture_dir() + "/" + name;
    std::ofstream out(path);
    REQUIRE(out.good());
    out << content;
    return path;
}

/// One risky asset paying +2 or -1 with equal odds, zero rate.
std::string coin_path() {
    static std::string path = write_file(
        "coin.json", R"({"rate": 0.0, "probs": [0.5, 0.5], "returns": [[2.0], [-1.0]]})");
    return path;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    size_t from = 0;
    while (from < text.size()) {
        const size_t at = text.find('\n', from);
        if (at == std::string::npos) {
            lines.push_back(text.substr(from));
            break;
        }
        lines.push_back(text.substr(from, at - from));
        from = at + 1;
    }
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace

TEST_CASE("classify emits the verdict with its basis and citations") {
    const RunResult res = run_cli("classify --utility mean --risk var:0.05");
    REQUIRE(res.code == 0);
    const json j = json::parse(res.out);
    CHECK(j.at("command") == "classify");
    CHECK(j.at("utility") == "mean");
    CHECK(j.at("risk") == "var:0.05");
    CHECK(j.at("verdict") == "ill-posed");
    CHECK(j.at("failing_premise") == "");
    CHECK(j.at("basis").at("u_sll") == false);
    CHECK(j.at("basis").at("r_sll") == false);
    CHECK(j.at("basis").at("law_invariance_side") == "both");
    REQUIRE(j.at("citations").is_array());
    CHECK(j.at("citations").size() >= 2);

    const RunResult well = run_cli("classify --utility sshaped:0.5,0.7 --risk var:0.05");
    REQUIRE(well.code == 0);
    CHECK(json::parse(well.out).at("verdict") == "well-posed");

    const RunResult unknown = run_cli("classify --utility boundedexp --risk es:0.05");
    REQUIRE(unknown.code == 0);
    const json ju = json::parse(unknown.out);
    CHECK(ju.at("verdict") == "unknown");
    CHECK(ju.at("failing_premise") == "U_unbounded");

    const RunResult csv = run_cli("classify --utility mean --risk var:0.05 --csv");
    REQUIRE(csv.code == 0);
    const auto lines = lines_of(csv.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "verdict,failing_premise,u_sll,r_sll");
    CHECK(lines[1] == "ill-posed,,false,false");
}

TEST_CASE("eval reports transformed values and feasibility for a portfolio") {
    const std::string base = "eval --scenarios " + coin_path() +
                             " --utility mean --risk es:0.5 --rmax -0.5 --pi 0.5";
    const RunResult res = run_cli(base);
    REQUIRE(res.code == 0);
    const json j = json::parse(res.out);
    CHECK(j.at("risk_budget").get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(j.at("utility_value").get<double>() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(j.at("risk_value").get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(j.at("feasible") == true);
    // Raw values restore the riskless offsets.
    CHECK(j.at("utility_value_raw").get<double>() == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(j.at("risk_value_raw").get<double>() == doctest::Approx(-0.5).epsilon(1e-12));

    const RunResult csv = run_cli(base + " --csv");
    REQUIRE(csv.code == 0);
    const auto lines = lines_of(csv.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "utility_value,risk_value,feasible");
    const auto fields = split_csv(lines[1]);
    REQUIRE(fields.size() == 3);
    CHECK(std::stod(fields[0]) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(fields[2] == "true");
}

TEST_CASE("optimize solves the coin fixture from a config file") {
    const std::string cfg = write_file("cfg.json", R"({
        "scenarios": ")" + coin_path() + R"(",
        "utility": "mean",
        "risk": "es:0.5",
        "rmax": -0.5,
        "options": {"n_starts": 8}
    })");
    const RunResult res = run_cli("optimize --config " + cfg);
    REQUIRE(res.code == 0);
    const json j = json::parse(res.out);
    CHECK(j.at("status") == "optimal");
    CHECK(j.at("value").get<double>() == doctest::Approx(0.25).epsilon(1e-3));
    REQUIRE(j.at("pi").is_array());
    REQUIRE(j.at("pi").size() == 1);
    CHECK(j.at("pi")[0].get<double>() == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(j.at("starts_converged").get<int>() > 0);

    // Explicit flags override the config: an infinite tail average at level 1
    // keeps the same optimum but shifts the budget bookkeeping.
    const RunResult flag = run_cli("optimize --config " + cfg + " --risk worstcase --rmax 0.0");
    REQUIRE(flag.code == 0);
    const json jf = json::parse(flag.out);
    CHECK(jf.at("risk") == "worstcase");
    CHECK(jf.at("status") == "optimal");
    CHECK(jf.at("value").get<double>() == doctest::Approx(0.5).epsilon(1e-3));

    // Identical invocations are byte-identical.
    const RunResult again = run_cli("optimize --config " + cfg);
    CHECK(again.code == 0);
    CHECK(again.out == res.out);
}

TEST_CASE("optimize surfaces divergence evidence on a quantile-blind pair") {
    const std::string tilted = write_file(
        "tilted.json", R"({"rate": 0.0, "probs": [0.6, 0.4], "returns": [[2.0], [-1.0]]})");
    const RunResult res =
        run_cli("optimize --scenarios " + tilted + " --utility mean --risk var:0.5 --rmax 0.5");
    REQUIRE(res.code == 0);
    const json j = json::parse(res.out);
    CHECK(j.at("status") == "diverging");
    CHECK_FALSE(j.contains("value"));
    REQUIRE(j.contains("divergence"));
    const json& tr = j.at("divergence").at("trace");
    REQUIRE(tr.is_array());
    CHECK(tr.size() >= 11);
    const double u_last = tr[tr.size() - 1].at("utility").get<double>();
    const double u_prev = tr[tr.size() - 2].at("utility").get<double>();
    CHECK(u_last > u_prev);
}

TEST_CASE("minrisk honours the utility floor") {
    const RunResult res = run_cli("minrisk --scenarios " + coin_path() +
                                  " --utility mean --risk es:0.5 --umin 1.25");
    REQUIRE(res.code == 0);
    const json j = json::parse(res.out);
    CHECK(j.at("command") == "minrisk");
    CHECK(j.at("status") == "optimal");
    CHECK(j.at("utility_floor").get<double>() == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(j.at("risk_value").get<double>() == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(j.at("pi")[0].get<double>() == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(j.at("utility_value").get<double>() >= 0.25 - 1e-6);
}

TEST_CASE("tables prints all 42 verdict cells") {
    const RunResult res = run_cli("tables --csv");
    REQUIRE(res.code == 0);
    const auto lines = lines_of(res.out);
    REQUIRE(lines.size() == 43);
    CHECK(lines[0] == "table,row,col,verdict");
    int t1 = 0, t2 = 0;
    for (size_t k = 1; k < lines.size(); ++k) {
        const auto fields = split_csv(lines[k]);
        REQUIRE(fields.size() == 4);
        if (fields[0] == "1") ++t1;
        else if (fields[0] == "2") ++t2;
        CHECK((fields[3] == "well-posed" || fields[3] == "ill-posed"));
    }
    CHECK(t1 == 20);
    CHECK(t2 == 22);

    const RunResult j = run_cli("tables");
    REQUIRE(j.code == 0);
    const json out = json::parse(j.out);
    CHECK(out.at("table1").at("verdicts")[0][0] == "ill-posed");
    CHECK(out.at("table1").at("verdicts")[3][0] == "well-posed");
    CHECK(out.at("table1").at("rows")[1] == "var:0.05");
    CHECK(out.at("table2").at("verdicts").size() == 11);
}

TEST_CASE("witness emits a nonpositive-risk sequence as CSV") {
    const RunResult res = run_cli("witness --risk es:0.05 --sr 2.5 --dim 2 --seed 7 --csv");
    REQUIRE(res.code == 0);
    const auto lines = lines_of(res.out);
    REQUIRE(lines.size() == 21); // header + default count of 20
    CHECK(lines[0] == "n,pi_1,pi_2,mean,risk");
    for (size_t k = 1; k < lines.size(); ++k) {
        const auto fields = split_csv(lines[k]);
        REQUIRE(fields.size() == 5);
        CHECK(std::stoi(fields[0]) == static_cast<int>(k));
        CHECK(std::stod(fields[4]) <= 0.0);
    }

    // Same seed, same bytes; the JSON form reports the threshold context.
    const RunResult again = run_cli("witness --risk es:0.05 --sr 2.5 --dim 2 --seed 7 --csv");
    CHECK(again.out == res.out);

    const RunResult j = run_cli("witness --risk es:0.05 --sr 2.5 --dim 2 --seed 7 --count 4");
    REQUIRE(j.code == 0);
    const json out = json::parse(j.out);
    CHECK(out.at("kind") == "es");
    CHECK(out.at("applicable") == true);
    CHECK(out.at("threshold").get<double>() == doctest::Approx(2.062713).epsilon(1e-4));
    CHECK(out.at("sequence").size() == 4);

    // A slope below the threshold is refused but still reports the gap.
    const RunResult refused = run_cli("witness --risk es:0.05 --sr 2.0 --dim 2 --seed 7");
    REQUIRE(refused.code == 0);
    const json jr = json::parse(refused.out);
    CHECK(jr.at("applicable") == false);
    CHECK(jr.at("gap").get<double>() > 0.0);
    CHECK_FALSE(jr.contains("sequence"));
}

TEST_CASE("frontier sweeps the budget with nondecreasing optimal values") {
    const RunResult res = run_cli("frontier --scenarios " + coin_path() +
                                  " --utility mean --risk es:0.5 --grid 0:0.5:6 --csv");
    REQUIRE(res.code == 0);
    const auto lines = lines_of(res.out);
    REQUIRE(lines.size() == 7);
    CHECK(lines[0] == "rmax,status,value,pi_1");
    double prev = -1.0;
    for (size_t k = 1; k < lines.size(); ++k) {
        const auto fields = split_csv(lines[k]);
        REQUIRE(fields.size() == 4);
        CHECK(fields[1] == "optimal");
        const double value = std::stod(fields[2]);
        CHECK(value >= prev - 1e-9);
        prev = value;
    }
    // Budget 0 pins the riskless point; the widest budget recovers the
    // coin-fixture optimum.
    CHECK(std::stod(split_csv(lines[1])[2]) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(std::stod(split_csv(lines[6])[2]) == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("axioms reports both sides in CSV form") {
    const RunResult res =
        run_cli("axioms --utility mean --risk var:0.3 --trials 200 --seed 3 --csv");
    REQUIRE(res.code == 0);
    const auto lines = lines_of(res.out);
    REQUIRE(lines.size() == 14); // header + 6 utility + 7 risk rows
    CHECK(lines[0] == "side,axiom,required,passed,violations");
    int convex_rows = 0;
    for (size_t k = 1; k < lines.size(); ++k) {
        const auto fields = split_csv(lines[k]);
        REQUIRE(fields.size() == 5);
        if (fields[0] == "risk" && fields[1] == "convex_sample") {
            ++convex_rows;
            CHECK(fields[2] == "false");
            CHECK(fields[3] == "false");
            CHECK(std::stoi(fields[4]) > 0);
        }
        if (fields[0] == "utility") {
            CHECK(fields[2] == "true");
            CHECK(fields[3] == "true");
        }
    }
    CHECK(convex_rows == 1);

    const RunResult j = run_cli("axioms --risk es:0.3 --trials 100 --seed 3");
    REQUIRE(j.code == 0);
    const json out = json::parse(j.out);
    CHECK(out.at("risk").at("mismatch") == false);
    CHECK(out.at("risk").at("axioms").size() == 7);
    CHECK_FALSE(out.contains("utility"));
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("bogus").code == 2);
    CHECK(run_cli("classify --utility mean --risk var:0.05 --no-such-flag").code == 2);
    CHECK(run_cli("eval --scenarios " + coin_path() + " --utility mean --risk zero").code == 2);
    CHECK(run_cli("witness --risk es:0.05 --dim 2").code == 2);
    CHECK(run_cli("witness --risk entropic:1 --sr 2.0").code == 2);
    CHECK(run_cli("optimize --scenarios " + coin_path() + " --utility mean --risk es:0.5").code == 2);
    CHECK(run_cli("minrisk --scenarios " + coin_path() + " --utility mean --risk es:0.5").code == 2);
    CHECK(run_cli("classify --utility nope:1 --risk var:0.05").code == 2);
    CHECK(run_cli("classify --utility mean --risk var:nope").code == 2);
    CHECK(run_cli("frontier --scenarios " + coin_path() +
                  " --utility mean --risk es:0.5 --grid 1:0:5")
              .code == 2);
    CHECK(run_cli("classify --utility mean").code == 2);
}

TEST_CASE("domain errors exit with code 3 and a structured error object") {
    const auto expect_kind = [](const std::string& args, const std::string& kind) {
        const RunResult res = run_cli(args);
        INFO(args, " -> ", res.out);
        REQUIRE(res.code == 3);
        const json j = json::parse(res.out);
        CHECK(j.at("error").at("kind") == kind);
        CHECK_FALSE(j.at("error").at("message").get<std::string>().empty());
    };

    expect_kind("eval --scenarios /no/such/file.json --utility mean --risk zero --pi 0.5", "domain");
    expect_kind("eval --scenarios " + coin_path() +
                    " --utility mean --risk es:0.5 --rmax -2.0 --pi 0.5",
                "infeasible");
    expect_kind("eval --scenarios " + coin_path() + " --utility mean --risk zero --pi 0.5,0.5",
                "dimension");

    const std::string badprobs = write_file(
        "badprobs.json", R"({"rate": 0.0, "probs": [0.7, 0.7], "returns": [[2.0], [-1.0]]})");
    expect_kind("eval --scenarios " + badprobs + " --utility mean --risk zero --pi 0.5",
                "probability");

    const std::string freelunch = write_file(
        "freelunch.json", R"({"rate": 0.0, "probs": [0.5, 0.5], "returns": [[0.5], [1.0]]})");
    expect_kind("eval --scenarios " + freelunch + " --utility mean --risk zero --pi 0.5",
                "arbitrage");
}

TEST_CASE("help is a successful exit everywhere") {
    const RunResult top = run_cli("--help");
    CHECK(top.code == 0);
    CHECK(top.out.find("classify") != std::string::npos);
    CHECK(top.out.find("witness") != std::string::npos);

    const RunResult sub = run_cli("optimize --help");
    CHECK(sub.code == 0);
    CHECK(sub.out.find("--rmax") != std::string::npos);
}
