// Command-line front end: parse/check programs, run and sample trajectories,
// execute the law suites, and ship the built-in demo systems.

#include <CLI11.hpp>
#include <json.hpp>

#include "hybrid/interp.hpp"
#include "hybrid/laws.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::json;
using namespace hybrid;
using lang::den_program;
using lazy::segment_stream;
using ode::vec;

namespace {

struct demo_entry {
    const char* name;
    const char* source; // empty for engine-backed demos
    const char* init;
    const char* grid;
    const char* blurb;
};

const demo_entry kDemos[] = {
    {"bouncing-ball",
     "vars p, v;\n(p := 1, v := 0) ;\nwhile true { (p' = v, v' = -9.8 & p <= 0 /\\ v <= 0) ; v "
     ":= -0.5 * v }\n",
     "0,0", "0:1.5:0.01", "ball dropped from height 1, restitution 0.5; Zeno"},
    {"cruise-controller",
     "vars v;\nwhile true { if v <= 120 then { (v' = 1 & 1) } else { (v' = -1 & 1) } }\n", "110",
     "0:50:0.5", "saturating speed controller; runs forever"},
    {"oscillator", "vars x;\n(x' = 1 & 1) ; (x' = -1 & 1)\n", "0", "0:3:0.05",
     "one unit up, one unit down"},
    {"dichotomy", "", "0", "0:1.2:0.02",
     "half the remaining distance each round (engine-backed); Zeno"},
    {"dichotomy-while",
     "vars x, m;\nwhile x < 1 { m := 0.5 * x + 0.5 ; (x' = 1 & x >= m) }\n", "0,0",
     "0:1.2:0.02", "the same system as a while-program; terminates at float resolution"},
    {"zeno-cosine", "", "0", "0:0.995:0.005",
     "essentially discontinuous Zeno limit (engine-backed)"},
    {"while-increment", "vars x;\nwhile true { x := x + 1 }\n", "0", "0:2:0.25",
     "no time progress; diverges at 0"},
    {"while-count", "vars x;\nwhile x <= 10 { x := x + 1 ; wait(1) }\n", "0", "0:12:0.5",
     "counts to eleven, one second each"},
    {"while-decay", "vars x;\nwhile x >= 1 { (x' = -1 & 1) }\n", "3", "0:4:0.1",
     "three unit-length decays"},
};

const demo_entry* find_demo(const std::string& name) {
    for (const auto& d : kDemos)
        if (name == d.name) return &d;
    return nullptr;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<double> parse_times(const std::string& grid, const std::string& times) {
    std::vector<double> out;
    if (!times.empty()) {
        std::stringstream ss(times);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
        return out;
    }
    double a = 0, b = 10, h = 0.1;
    if (!grid.empty()) {
        if (std::sscanf(grid.c_str(), "%lf:%lf:%lf", &a, &b, &h) != 3 || h <= 0)
            throw CLI::ValidationError("--grid expects a:b:h with h > 0");
    }
    for (double t = a; t <= b + 1e-12; t += h) out.push_back(t);
    return out;
}

vec parse_init(const std::string& s, std::size_t n) {
    vec out;
    if (!s.empty()) {
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    }
    if (out.empty()) out.assign(n, 0.0);
    if (out.size() != n)
        throw CLI::ValidationError("--init must list one value per declared variable");
    return out;
}

struct run_config {
    std::string grid;
    std::string times;
    std::string init;
    int budget = 100000;
    double horizon = 1e6;
    double scan_step = 1e-3;
    double event_tol = 1e-9;
    double zeno_eps = 1e-12;
    double probe_horizon = 1e4;
    std::string format = "csv";
    std::string out;
};

void add_run_flags(CLI::App* cmd, run_config& cfg) {
    cmd->add_option("--grid", cfg.grid, "sample grid a:b:h");
    cmd->add_option("--times", cfg.times, "explicit sample times t1,t2,...");
    cmd->add_option("--init", cfg.init, "initial valuation v1,v2,...");
    cmd->add_option("--budget", cfg.budget, "max unfoldings")->check(CLI::PositiveNumber);
    cmd->add_option("--horizon", cfg.horizon, "event search horizon");
    cmd->add_option("--scan-step", cfg.scan_step, "event scan step");
    cmd->add_option("--event-tol", cfg.event_tol, "event bisection tolerance");
    cmd->add_option("--zeno-eps", cfg.zeno_eps, "Zeno window threshold");
    cmd->add_option("--probe-horizon", cfg.probe_horizon, "infinite-run probe horizon");
    cmd->add_option("--format", cfg.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", cfg.out, "output path (default stdout)");
}

lang::run_options to_options(const run_config& cfg) {
    lang::run_options opt;
    opt.ode.horizon = cfg.horizon;
    opt.ode.scan_step = cfg.scan_step;
    opt.ode.event_tol = cfg.event_tol;
    opt.stream.zeno_eps = cfg.zeno_eps;
    opt.stream.probe_horizon = cfg.probe_horizon;
    return opt;
}

const char* status_of(const segment_stream::query_result& q) {
    switch (q.k) {
        case segment_stream::query_result::kind::defined: return "def";
        case segment_stream::query_result::kind::undefined_zeno: return "zeno";
        case segment_stream::query_result::kind::undefined_diverged: return "div";
        case segment_stream::query_result::kind::budget_exhausted: return "budget";
    }
    return "?";
}

json summary_json(const segment_stream::classification& c,
                  const segment_stream::duration_result& d, int unfoldings) {
    json s;
    switch (c.k) {
        case segment_stream::classification::kind::terminates:
            s["classification"] = "Terminates";
            s["final"] = c.final_state;
            s["at"] = c.time;
            break;
        case segment_stream::classification::kind::diverges_at:
            s["classification"] = "DivergesAt";
            s["at"] = c.time;
            s["evidence"] = c.ev == segment_stream::classification::evidence::state_cycle
                                ? "state-cycle"
                                : "zero-progress-window";
            break;
        case segment_stream::classification::kind::zeno:
            s["classification"] = "Zeno";
            s["at"] = c.time;
            break;
        case segment_stream::classification::kind::infinite_run:
            s["classification"] = "InfiniteRun";
            s["probe"] = c.time;
            break;
        case segment_stream::classification::kind::unknown:
            s["classification"] = "Unknown";
            s["lower_bound"] = c.time;
            break;
    }
    switch (d.k) {
        case segment_stream::duration_result::kind::exact:
            s["duration"] = {{"kind", "Exact"},
                             {"value", std::isinf(d.value) ? json("inf") : json(d.value)}};
            break;
        case segment_stream::duration_result::kind::zeno_estimate:
            s["duration"] = {{"kind", "ZenoEstimate"},
                             {"value", d.value},
                             {"last_increment", d.last_increment}};
            break;
        case segment_stream::duration_result::kind::lower_bound:
            s["duration"] = {{"kind", "LowerBound"}, {"value", d.value}};
            break;
    }
    s["unfoldings"] = unfoldings;
    return s;
}

int emit_run(segment_stream& st, const std::vector<std::string>& names,
             const std::vector<double>& grid, const run_config& cfg) {
    auto rows = st.sample(grid, cfg.budget);
    auto cls = st.classify(cfg.budget);
    auto dur = st.duration(cfg.budget);
    json summary = summary_json(cls, dur, st.pulled());
    if (st.horizon_limited()) summary["horizon_limited"] = true;

    std::ostringstream body;
    if (cfg.format == "csv") {
        for (auto it = summary.begin(); it != summary.end(); ++it)
            body << "# " << it.key() << "=" << it.value().dump() << "\n";
        body << "t";
        for (const auto& n : names) body << "," << n;
        body << ",status\n";
        for (const auto& [t, q] : rows) {
            body << fmt(t);
            for (std::size_t i = 0; i < names.size(); ++i) {
                body << ",";
                if (q.k == segment_stream::query_result::kind::defined) body << fmt(q.value[i]);
            }
            body << "," << status_of(q) << "\n";
        }
    } else {
        json j;
        j["vars"] = names;
        j["rows"] = json::array();
        for (const auto& [t, q] : rows) {
            json row;
            row["t"] = t;
            row["status"] = status_of(q);
            if (q.k == segment_stream::query_result::kind::defined)
                row["x"] = q.value;
            else
                row["x"] = nullptr;
            j["rows"].push_back(std::move(row));
        }
        j["summary"] = summary;
        body << j.dump(2) << "\n";
    }

    if (cfg.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream f(cfg.out);
        if (!f) {
            std::cerr << "cannot write " << cfg.out << "\n";
            return 1;
        }
        f << body.str();
    }
    return 0;
}

std::optional<std::string> slurp(const std::string& path) {
    std::ifstream f(path);
    if (!f) return std::nullopt;
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int report_diagnostics(const lang::parse_result& res, const std::string& origin) {
    for (const auto& d : res.diagnostics)
        std::cerr << origin << ":" << d.line << ":" << d.col << ": error: " << d.message << "\n";
    return res.ok() ? 0 : 1;
}

int run_program_text(const std::string& text, const std::string& origin, const run_config& cfg) {
    auto res = lang::parse(text);
    if (!res.ok()) return report_diagnostics(res, origin);
    auto den = lang::interp(*res.prog, to_options(cfg));
    vec init = parse_init(cfg.init, res.vars.size());
    auto st = den.stream(init);
    return emit_run(st, res.vars.names, parse_times(cfg.grid, cfg.times), cfg);
}

// engine-backed demos drive basic iteration directly: the cosine system has
// no linear dynamics, and the dichotomy tracks the remaining distance as a
// second component so halving stays exact
segment_stream engine_demo_stream(const std::string& name, const run_config& cfg) {
    lazy::stream_options opt;
    opt.zeno_eps = cfg.zeno_eps;
    opt.probe_horizon = cfg.probe_horizon;
    lazy::numeric_body f;
    if (name == "dichotomy") {
        f.duration = [](const vec& s) { return s[1] / 2.0; };
        f.eval = [](const vec& s, double t) { return vec{s[0] + t, s[1] - t}; };
        return segment_stream(lazy::basic_loop(std::move(f), {0.0, 1.0}), opt);
    }
    f.duration = [](const vec& s) {
        double x = s[0];
        return 2.0 * (1.0 - x) * (1.0 - x) / (3.0 - 2.0 * x);
    };
    f.eval = [](const vec& s, double t) {
        double x = s[0];
        double d = 2.0 * (1.0 - x) * (1.0 - x) / (3.0 - 2.0 * x);
        if (t >= d) return vec{d + x};
        return vec{(t + x) * std::cos(M_PI * t / ((1.0 - x) * (1.0 - x - t)))};
    };
    return segment_stream(lazy::basic_loop(std::move(f), {0.0}), opt);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid trajectory semantics: check, run, laws, demo"};
    app.require_subcommand(1);

    std::string check_path;
    auto* check = app.add_subcommand("check", "parse and scope-check a program");
    check->add_option("path", check_path, "program file")->required();

    run_config run_cfg;
    std::string run_path;
    auto* run = app.add_subcommand("run", "run a program and sample its trajectory");
    run->add_option("path", run_path, "program file")->required();
    add_run_flags(run, run_cfg);

    std::string suite = "all";
    int cases = 1000;
    std::uint64_t seed = 42;
    std::string laws_format = "text";
    std::string laws_out;
    auto* laws_cmd = app.add_subcommand("laws", "run the algebraic law suites");
    laws_cmd->add_option("--suite", suite, "suite name, 'monads', or 'all'");
    laws_cmd->add_option("--cases", cases, "generated cases per suite")
        ->check(CLI::PositiveNumber);
    laws_cmd->add_option("--seed", seed, "generator seed");
    laws_cmd->add_option("--format", laws_format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
    laws_cmd->add_option("--out", laws_out, "output path (default stdout)");

    run_config demo_cfg;
    demo_cfg.grid.clear();
    std::string demo_name;
    bool demo_list = false;
    auto* demo = app.add_subcommand("demo", "run a built-in demo system");
    demo->add_option("name", demo_name, "demo name");
    demo->add_flag("--list", demo_list, "list demos");
    add_run_flags(demo, demo_cfg);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check) {
            auto text = slurp(check_path);
            if (!text) {
                std::cerr << "cannot read " << check_path << "\n";
                return 1;
            }
            auto res = lang::parse(*text);
            int rc = report_diagnostics(res, check_path);
            if (rc == 0) std::cout << "ok: " << res.vars.size() << " variable(s)\n";
            return rc;
        }

        if (*run) {
            auto text = slurp(run_path);
            if (!text) {
                std::cerr << "cannot read " << run_path << "\n";
                return 1;
            }
            return run_program_text(*text, run_path, run_cfg);
        }

        if (*laws_cmd) {
            std::vector<std::string> names;
            if (suite == "all")
                names = laws::suite_names();
            else if (suite == "monads")
                names = {"monad-h0", "monad-h0m", "monad-hplus", "monad-h"};
            else
                names = {suite};
            laws::config cfg;
            cfg.cases = cases;
            cfg.seed = seed;
            bool ok = true;
            std::ostringstream body;
            json all = json::array();
            for (const auto& n : names) {
                auto rep = laws::run_suite(n, cfg);
                ok &= rep.ok();
                if (laws_format == "text")
                    body << rep.text();
                else
                    all.push_back(json::parse(rep.json()));
            }
            if (laws_format == "json") body << all.dump(2) << "\n";
            if (laws_out.empty()) {
                std::cout << body.str();
            } else {
                std::ofstream f(laws_out);
                f << body.str();
            }
            return ok ? 0 : 1;
        }

        if (*demo) {
            if (demo_list || demo_name.empty()) {
                for (const auto& d : kDemos) std::cout << d.name << "\t" << d.blurb << "\n";
                return 0;
            }
            const demo_entry* d = find_demo(demo_name);
            if (!d) {
                std::cerr << "unknown demo '" << demo_name << "' (try --list)\n";
                return 1;
            }
            if (demo_cfg.init.empty()) demo_cfg.init = d->init;
            if (demo_cfg.grid.empty() && demo_cfg.times.empty()) demo_cfg.grid = d->grid;
            if (std::string(d->source).empty()) {
                auto st = engine_demo_stream(demo_name, demo_cfg);
                std::vector<std::string> names =
                    demo_name == "dichotomy" ? std::vector<std::string>{"x", "rem"}
                                             : std::vector<std::string>{"x"};
                return emit_run(st, names, parse_times(demo_cfg.grid, demo_cfg.times), demo_cfg);
            }
            return run_program_text(d->source, demo_name, demo_cfg);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
