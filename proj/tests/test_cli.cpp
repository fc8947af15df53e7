#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct cmd_result {
    int code;
    std::string out;
};

cmd_result run_cmd(const std::string& args) {
    std::string out_path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                           "/hybrid_cli_test_out.txt";
    std::string cmd = std::string(HYBRID_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
    int rc = std::system(cmd.c_str());
    std::ifstream f(out_path);
    std::stringstream ss;
    ss << f.rdbuf();
    return {WEXITSTATUS(rc), ss.str()};
}

std::string demo_file(const std::string& name) {
    return std::string(HYBRID_DEMO_DIR) + "/" + name;
}

std::string write_temp(const std::string& text) {
    std::string path = "/tmp/hybrid_cli_test_prog.hyb";
    std::ofstream f(path);
    f << text;
    return path;
}

} // namespace

TEST_CASE("check accepts the shipped programs") {
    for (const char* name : {"bouncing-ball.hyb", "cruise-controller.hyb", "oscillator.hyb",
                             "while-count.hyb", "while-decay.hyb", "while-increment.hyb",
                             "dichotomy-while.hyb"}) {
        auto r = run_cmd("check " + demo_file(name));
        INFO(name << ": " << r.out);
        CHECK(r.code == 0);
    }
}

TEST_CASE("check rejects scope and syntax errors with locations") {
    auto undecl = run_cmd("check " + write_temp("vars x;\ny := 1\n"));
    CHECK(undecl.code == 1);
    CHECK(undecl.out.find("2:1") != std::string::npos);
    CHECK(undecl.out.find("undeclared") != std::string::npos);

    auto braces = run_cmd("check " + write_temp("vars x; while true { x := x + 1\n"));
    CHECK(braces.code == 1);
    CHECK(braces.out.find("error") != std::string::npos);
}

TEST_CASE("run emits the CSV schema with a summary block") {
    auto r = run_cmd("run " + demo_file("while-count.hyb") + " --grid 0:12:1");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# classification=\"Terminates\"") != std::string::npos);
    CHECK(r.out.find("# duration={\"kind\":\"Exact\",\"value\":11.0}") != std::string::npos);
    CHECK(r.out.find("t,x,status") != std::string::npos);
    CHECK(r.out.find("\n12,11,def\n") != std::string::npos);
}

TEST_CASE("undefined rows leave value cells empty") {
    auto r = run_cmd("run " + demo_file("while-increment.hyb") + " --grid 0:1:1");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# classification=\"DivergesAt\"") != std::string::npos);
    CHECK(r.out.find("\n0,,div\n") != std::string::npos);
}

TEST_CASE("identical configuration yields byte-identical output") {
    std::string args = "demo bouncing-ball --grid 0:1.4:0.05";
    auto a = run_cmd(args);
    auto b = run_cmd(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);

    auto la = run_cmd("laws --suite monad-h --cases 50 --seed 9 --format json");
    auto lb = run_cmd("laws --suite monad-h --cases 50 --seed 9 --format json");
    CHECK(la.code == 0);
    CHECK(la.out == lb.out);
}

TEST_CASE("CSV and JSON encode the same data") {
    std::string common = demo_file("oscillator.hyb") + " --grid 0:2:0.5";
    auto csv = run_cmd("run " + common);
    auto js = run_cmd("run " + common + " --format json");
    REQUIRE(csv.code == 0);
    REQUIRE(js.code == 0);

    auto j = nlohmann::json::parse(js.out);
    REQUIRE(j["vars"].size() == 1);
    CHECK(j["vars"][0] == "x");
    REQUIRE(j["rows"].size() == 5);
    CHECK(j["summary"]["classification"] == "Terminates");

    // cross-check every row against the CSV body
    std::istringstream lines(csv.out);
    std::string line;
    std::vector<std::string> data;
    while (std::getline(lines, line))
        if (!line.empty() && line[0] != '#' && line[0] != 't') data.push_back(line);
    REQUIRE(data.size() == j["rows"].size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        double t = j["rows"][i]["t"].get<double>();
        double x = j["rows"][i]["x"][0].get<double>();
        char expect[64];
        std::snprintf(expect, sizeof(expect), "%.12g,%.12g,def", t, x);
        CHECK(data[i] == expect);
    }
}

TEST_CASE("laws subcommand reports suites and exits cleanly") {
    auto r = run_cmd("laws --suite fixpoint --cases 60 --seed 42");
    CHECK(r.code == 0);
    CHECK(r.out.find("suite fixpoint: 60 cases, seed 42, 0 failure(s) [ok]") !=
          std::string::npos);

    auto retraction = run_cmd("laws --suite retraction --cases 40 --format json");
    CHECK(retraction.code == 0);
    auto j = nlohmann::json::parse(retraction.out);
    REQUIRE(j.size() == 1);
    CHECK(j[0]["ok"] == true);

    auto bad = run_cmd("laws --suite nonsense --cases 5");
    CHECK(bad.code == 1);
}

TEST_CASE("unknown demo names fail") {
    auto r = run_cmd("demo not-a-demo");
    CHECK(r.code == 1);
}

TEST_CASE("budget exhaustion surfaces as rows, not failure") {
    auto r = run_cmd("demo zeno-cosine --grid 0:0.9:0.3 --budget 3");
    REQUIRE(r.code == 0);
    CHECK(r.out.find(",budget\n") != std::string::npos);
}
