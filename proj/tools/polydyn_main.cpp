// polydyn: simulate, classify, invert, and generate damped-averaging
// state-space systems. Thin dispatch over the library; all numerics live
// there.

#include <CLI11.hpp>

#include "polydyn/centrality.hpp"
#include "polydyn/dynamics.hpp"
#include "polydyn/inverse_design.hpp"
#include "polydyn/io.hpp"
#include "polydyn/scenarios.hpp"
#include "polydyn/structure.hpp"
#include "polydyn/types.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace polydyn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOutcome = 1;  // infeasible / non-convergent / singular
constexpr int kExitInput = 2;

struct Options {
    std::string command;
    std::string w_path, a_path, x0_path, xinf_path, v_path;
    std::string out;  // empty: current directory, no optional artifacts
    std::string format = "csv";
    std::string kind;
    double tol = 1e-10;
    long k_max = 1000000;
    long record_every = 0;
    double alpha = 0.85;
    bool perron = false;
    bool unbiased = false;
    int bins = 20;
    long replicas = 1;
    bool gnuplot = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> spec_path;

    // scenario knobs (defaults mirror ScenarioSpec / CleavageParams)
    ScenarioSpec scenario;
};

InfluenceMatrix load_w(const Options& opt) {
    return InfluenceMatrix::from_matrix(read_matrix(opt.w_path));
}

DampingMatrix load_a(const std::string& path) {
    return DampingMatrix::from_diagonal(read_vector(path));
}

StateMatrix load_state(const std::string& path, const char* name) {
    Matrix x = read_matrix(path);
    const auto violations = state_violations(x);
    if (!violations.empty())
        throw std::invalid_argument(std::string(name) + ": " +
                                    violations.front());
    return x;
}

void require_system_files(const InfluenceMatrix& w, const DampingMatrix& a,
                          const StateMatrix& x0) {
    const auto report = validate_system(w.matrix(), a.diagonal(), x0);
    if (!report.valid()) {
        std::string msg = "invalid system:";
        for (const auto& v : report.violations) msg += " " + v + ";";
        throw std::invalid_argument(msg);
    }
}

fs::path out_dir(const Options& opt) {
    fs::path dir(opt.out.empty() ? "." : opt.out);
    fs::create_directories(dir);
    return dir;
}

void write_matrix_by_format(const Options& opt, const fs::path& base,
                            const Matrix& m) {
    if (opt.format == "json")
        write_matrix_json(base.string() + ".json", m);
    else
        write_matrix_csv(base.string() + ".csv", m);
}

void emit_gnuplot_trajectory(const fs::path& dir) {
    std::ofstream gp(dir / "plot.gp");
    gp << "# gnuplot companion: node trajectories over time\n"
          "set datafile separator ','\n"
          "set key off\n"
          "set xlabel 'k'\n"
          "set ylabel 'value'\n"
          "plot 'trajectory.csv' every ::1 using 1:4 with points pt 7 ps 0.3\n";
}

void emit_gnuplot_histograms(const fs::path& dir) {
    std::ofstream gp(dir / "plot_histograms.gp");
    gp << "# gnuplot companion: initial vs converged opinion distribution\n"
          "set datafile separator ','\n"
          "set style fill solid 0.6\n"
          "set xlabel 'position'\n"
          "set ylabel 'count'\n"
          "plot 'histogram_initial.csv' every ::1 using "
          "(($1+$2)/2):3 with boxes title 'initial', \\\n"
          "     'histogram_final.csv' every ::1 using "
          "(($1+$2)/2):3 with boxes title 'converged'\n";
}

int run_simulate(const Options& opt) {
    const auto w = load_w(opt);
    const auto a = load_a(opt.a_path);
    const auto x0 = load_state(opt.x0_path, "X0");
    require_system_files(w, a, x0);
    const auto dir = out_dir(opt);

    auto [traj, limit] = iterate(
        w, a, x0,
        {.tol = opt.tol, .k_max = opt.k_max, .record_every = opt.record_every});
    write_trajectory_csv((dir / "trajectory.csv").string(), traj);
    write_limit_json((dir / "limit.json").string(), limit, &traj);
    if (opt.gnuplot) emit_gnuplot_trajectory(dir);

    if (traj.converged) {
        std::cout << "converged k=" << traj.total_steps
                  << " final_delta=" << format_double(traj.final_delta)
                  << "\n";
        return kExitOk;
    }
    std::cout << "did not converge within k_max=" << opt.k_max
              << (traj.periodic_suspect ? " (periodic suspect)" : "") << "\n";
    return kExitOutcome;
}

int run_limit(const Options& opt) {
    const auto w = load_w(opt);
    const auto a = load_a(opt.a_path);
    const auto x0 = load_state(opt.x0_path, "X0");
    require_system_files(w, a, x0);
    const auto dir = out_dir(opt);
    try {
        const auto limit = closed_form_limit(w, a, x0);
        write_limit_json((dir / "limit.json").string(), limit);
        std::cout << "method=closed-form n=" << w.size() << "\n";
        return kExitOk;
    } catch (const std::domain_error& e) {
        const auto c = classify(w, a);
        std::cout << "no closed-form limit: " << e.what()
                  << " (case=" << to_string(c.kind)
                  << " converges=" << (c.converges ? "true" : "false") << ")\n";
        return kExitOutcome;
    }
}

int run_classify(const Options& opt) {
    const auto w = load_w(opt);
    const auto a = load_a(opt.a_path);
    const auto c = classify(w, a);
    if (!opt.out.empty()) {
        const auto dir = out_dir(opt);
        write_classification_json((dir / "classification.json").string(), c);
    }
    std::cout << "case=" << to_string(c.kind)
              << " converges=" << (c.converges ? "true" : "false");
    if (c.spectral_radius_estimate)
        std::cout << " rho~" << format_double(*c.spectral_radius_estimate);
    std::cout << "\n  " << c.reason << "\n";
    return c.converges ? kExitOk : kExitOutcome;
}

int run_design_initial(const Options& opt) {
    const auto w = load_w(opt);
    const auto a = load_a(opt.a_path);
    const auto x_inf = load_state(opt.xinf_path, "X(inf)");
    const auto dir = out_dir(opt);

    const StateMatrix x0 = solve_initial(w, a, x_inf);
    const auto forward = closed_form_limit(w, a, x0);
    DesignSolution sol{a, x0,
                       (forward.x_inf - x_inf).cwiseAbs().maxCoeff()};
    write_design_json((dir / "design.json").string(), sol);
    write_matrix_by_format(opt, dir / "x0", x0);
    std::cout << "designed X0, forward residual="
              << format_double(sol.residual) << "\n";
    return kExitOk;
}

int run_design_damping(const Options& opt) {
    const auto w = load_w(opt);
    const auto x0 = load_state(opt.x0_path, "X0");
    const auto x_inf = load_state(opt.xinf_path, "X(inf)");
    const auto dir = out_dir(opt);

    const auto report = solve_damping(w, x0, x_inf);
    write_feasibility_json((dir / "feasibility.json").string(), report);
    if (report.feasible) {
        std::cout << "feasible\n";
        return kExitOk;
    }
    std::cout << "infeasible (";
    bool first = true;
    for (std::size_t i = 0; i < report.per_node.size(); ++i) {
        if (report.per_node[i].code == NodeFeasibility::Ok) continue;
        if (!first) std::cout << ", ";
        std::cout << "node " << i + 1 << ": "
                  << to_string(report.per_node[i].code);
        first = false;
    }
    std::cout << ")\n";
    return kExitOutcome;
}

int run_design_family(const Options& opt) {
    if (!opt.unbiased && opt.a_path.empty())
        throw std::invalid_argument("design-family needs --a or --unbiased");
    const auto w = load_w(opt);
    const auto x_inf = load_state(opt.xinf_path, "X(inf)");
    const auto dir = out_dir(opt);

    const DesignSolution sol =
        opt.unbiased ? unbiased_design(w, x_inf)
                     : design_family(w, x_inf, read_vector(opt.a_path));
    write_design_json((dir / "design.json").string(), sol);
    write_matrix_by_format(opt, dir / "x0", sol.x0);
    std::cout << "designed {A, X0}, forward residual="
              << format_double(sol.residual) << "\n";
    return kExitOk;
}

int run_centrality(const Options& opt) {
    if (opt.v_path.empty() && opt.w_path.empty())
        throw std::invalid_argument("centrality needs --w or --v");
    Vector r;
    std::string what;
    if (!opt.v_path.empty()) {
        r = net_influence(read_matrix(opt.v_path));
        what = "net-influence";
    } else if (opt.perron) {
        r = perron_centrality(load_w(opt));
        what = "perron";
    } else {
        r = alpha_centrality(load_w(opt), opt.alpha);
        what = "alpha=" + format_double(opt.alpha);
    }

    std::vector<int> order(static_cast<std::size_t>(r.size()));
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&r](int a, int b) { return r(a) > r(b); });
    std::cout << "centrality (" << what << "), ranked:\n";
    for (int i : order)
        std::cout << "  node " << i + 1 << "  " << format_double(r(i)) << "\n";

    if (!opt.out.empty()) {
        if (opt.format == "json")
            write_vector_json(opt.out, r);
        else
            write_vector_csv_column(opt.out, r);
    }
    return kExitOk;
}

int run_one_scenario(const Options& opt, const ScenarioSpec& spec,
                     const fs::path& dir) {
    fs::create_directories(dir);
    const auto sys = build_scenario(spec);
    write_scenario_spec_json((dir / "spec.json").string(), spec);
    write_matrix_csv((dir / "w.csv").string(), sys.w.matrix());
    write_vector_csv((dir / "a.csv").string(), sys.a.diagonal());
    write_matrix_csv((dir / "x0.csv").string(), sys.x0);

    long stride = opt.record_every;
    if (stride <= 0)
        stride = std::max<long>(1, sys.x0.size() > 2000 ? 50 : 1);
    auto [traj, limit] =
        iterate(sys.w, sys.a, sys.x0,
                {.tol = opt.tol, .k_max = opt.k_max, .record_every = stride});
    write_trajectory_csv((dir / "trajectory.csv").string(), traj);
    write_limit_json((dir / "limit.json").string(), limit, &traj);

    if (sys.x0.cols() == 1) {
        write_histogram_csv((dir / "histogram_initial.csv").string(),
                            histogram(sys.x0, opt.bins));
        write_histogram_csv((dir / "histogram_final.csv").string(),
                            histogram(limit.x_inf, opt.bins));
        if (opt.gnuplot) emit_gnuplot_histograms(dir);
    } else if (opt.gnuplot) {
        emit_gnuplot_trajectory(dir);
    }

    std::string line = dir.string() + ": " +
                       (traj.converged ? "converged k=" : "not converged, k=") +
                       std::to_string(traj.total_steps) + "\n";
    std::cout << line;
    return traj.converged ? kExitOk : kExitOutcome;
}

int run_scenario(const Options& opt) {
    ScenarioSpec spec = opt.scenario;
    spec.kind = scenario_kind_from_string(opt.kind);
    if (opt.seed) spec.seed = *opt.seed;
    spec.cleavage.extra_edge_prob = spec.extra_edge_prob;

    const auto dir = out_dir(opt);
    if (opt.replicas <= 1) return run_one_scenario(opt, spec, dir);

    std::vector<std::future<int>> runs;
    runs.reserve(static_cast<std::size_t>(opt.replicas));
    for (long rep = 0; rep < opt.replicas; ++rep) {
        ScenarioSpec rep_spec = spec;
        rep_spec.seed = spec.seed + static_cast<std::uint64_t>(rep);
        char name[32];
        std::snprintf(name, sizeof(name), "replica_%03ld", rep);
        const fs::path rep_dir = dir / name;
        runs.push_back(std::async(std::launch::async, [opt, rep_spec,
                                                       rep_dir]() {
            return run_one_scenario(opt, rep_spec, rep_dir);
        }));
    }
    int status = kExitOk;
    for (auto& f : runs) status = std::max(status, f.get());
    return status;
}

// A config file names the command and any option the flags could set;
// unknown keys are rejected. Flags beat the environment, which beats the
// config file.
void apply_config(Options& opt, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError(path + ": expected a JSON object");

    auto take_str = [&](const char* key, std::string& into) {
        if (auto it = j.find(key); it != j.end()) {
            into = it->get<std::string>();
            j.erase(it);
        }
    };
    auto take_num = [&](const char* key, auto& into) {
        if (auto it = j.find(key); it != j.end()) {
            into = it->get<std::decay_t<decltype(into)>>();
            j.erase(it);
        }
    };
    take_str("command", opt.command);
    take_str("w", opt.w_path);
    take_str("a", opt.a_path);
    take_str("x0", opt.x0_path);
    take_str("xinf", opt.xinf_path);
    take_str("v", opt.v_path);
    take_str("out", opt.out);
    take_str("format", opt.format);
    take_str("kind", opt.kind);
    take_num("tol", opt.tol);
    take_num("k_max", opt.k_max);
    take_num("record_every", opt.record_every);
    take_num("alpha", opt.alpha);
    take_num("bins", opt.bins);
    take_num("replicas", opt.replicas);
    if (auto it = j.find("unbiased"); it != j.end()) {
        opt.unbiased = it->get<bool>();
        j.erase(it);
    }
    if (auto it = j.find("perron"); it != j.end()) {
        opt.perron = it->get<bool>();
        j.erase(it);
    }
    if (auto it = j.find("seed"); it != j.end()) {
        opt.seed = it->get<std::uint64_t>();
        j.erase(it);
    }
    if (auto it = j.find("parameters"); it != j.end()) {
        json p = *it;
        j.erase(it);
        auto grab = [&p](const char* key, auto& into) {
            if (auto pit = p.find(key); pit != p.end()) {
                into = pit->get<std::decay_t<decltype(into)>>();
                p.erase(pit);
            }
        };
        grab("n", opt.scenario.n);
        grab("m", opt.scenario.m);
        grab("extra_edge_prob", opt.scenario.extra_edge_prob);
        grab("x_low", opt.scenario.x_low);
        grab("x_high", opt.scenario.x_high);
        grab("a_value", opt.scenario.a_value);
        grab("a_low", opt.scenario.a_low);
        grab("a_high", opt.scenario.a_high);
        grab("high_fraction", opt.scenario.high_fraction);
        grab("polygon_vertices", opt.scenario.polygon_vertices);
        grab("extremist_fraction", opt.scenario.cleavage.extremist_fraction);
        grab("moderate_center", opt.scenario.cleavage.moderate_center);
        grab("moderate_spread", opt.scenario.cleavage.moderate_spread);
        grab("pole_low", opt.scenario.cleavage.pole_low);
        grab("pole_high", opt.scenario.cleavage.pole_high);
        grab("a_moderate_low", opt.scenario.cleavage.a_moderate_low);
        grab("a_moderate_high", opt.scenario.cleavage.a_moderate_high);
        grab("a_extremist", opt.scenario.cleavage.a_extremist);
        if (!p.empty())
            throw ParseError(path + ": unknown parameter key '" +
                             p.begin().key() + "'");
    }
    if (!j.empty())
        throw ParseError(path + ": unknown key '" + j.begin().key() + "'");
}

int dispatch(const Options& opt) {
    if (opt.command == "simulate") return run_simulate(opt);
    if (opt.command == "limit") return run_limit(opt);
    if (opt.command == "classify") return run_classify(opt);
    if (opt.command == "design-initial") return run_design_initial(opt);
    if (opt.command == "design-damping") return run_design_damping(opt);
    if (opt.command == "design-family") return run_design_family(opt);
    if (opt.command == "centrality") return run_centrality(opt);
    if (opt.command == "scenario") return run_scenario(opt);
    throw std::invalid_argument("unknown command '" + opt.command + "'");
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    std::string config_path;

    CLI::App app{"damped-averaging state-space processes: simulation, "
                 "inverse design, centrality, scenario generation"};
    app.require_subcommand(0, 1);
    app.add_option("--config", config_path,
                   "JSON run configuration (alternative to a subcommand)");

    auto add_io = [&](CLI::App* cmd) {
        cmd->add_option("--out", opt.out, "output directory");
        cmd->add_option("--format", opt.format, "matrix output format")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    auto* simulate = app.add_subcommand("simulate", "iterate the process");
    simulate->add_option("--w", opt.w_path, "influence matrix")->required();
    simulate->add_option("--a", opt.a_path, "damping vector")->required();
    simulate->add_option("--x0", opt.x0_path, "initial state")->required();
    simulate->add_option("--tol", opt.tol, "stopping tolerance");
    simulate->add_option("--k-max", opt.k_max, "step limit");
    simulate->add_option("--record-every", opt.record_every,
                         "snapshot stride (0 = auto)");
    simulate->add_flag("--gnuplot-script", opt.gnuplot,
                       "emit a companion plotting script");
    add_io(simulate);

    auto* limit = app.add_subcommand("limit", "closed-form limit");
    limit->add_option("--w", opt.w_path)->required();
    limit->add_option("--a", opt.a_path)->required();
    limit->add_option("--x0", opt.x0_path)->required();
    add_io(limit);

    auto* classify_cmd =
        app.add_subcommand("classify", "convergence case analysis");
    classify_cmd->add_option("--w", opt.w_path)->required();
    classify_cmd->add_option("--a", opt.a_path)->required();
    add_io(classify_cmd);

    auto* design_initial = app.add_subcommand(
        "design-initial", "unique X0 reaching a target limit");
    design_initial->add_option("--w", opt.w_path)->required();
    design_initial->add_option("--a", opt.a_path)->required();
    design_initial->add_option("--xinf", opt.xinf_path)->required();
    add_io(design_initial);

    auto* design_damping = app.add_subcommand(
        "design-damping", "feasible damping for a target limit");
    design_damping->add_option("--w", opt.w_path)->required();
    design_damping->add_option("--x0", opt.x0_path)->required();
    design_damping->add_option("--xinf", opt.xinf_path)->required();
    add_io(design_damping);

    auto* design_family = app.add_subcommand(
        "design-family", "{A, X0} pair from chosen damping values");
    design_family->add_option("--w", opt.w_path)->required();
    design_family->add_option("--xinf", opt.xinf_path)->required();
    design_family->add_option("--a", opt.a_path, "damping vector file");
    design_family->add_flag("--unbiased", opt.unbiased,
                            "use the neutral a = 1/2 member");
    add_io(design_family);

    auto* centrality_cmd =
        app.add_subcommand("centrality", "net-influence centrality");
    centrality_cmd->add_option("--w", opt.w_path, "influence matrix");
    centrality_cmd->add_option("--v", opt.v_path,
                               "limit matrix for net influence");
    centrality_cmd->add_option("--alpha", opt.alpha, "uniform damping value");
    centrality_cmd->add_flag("--perron", opt.perron,
                             "left eigenvector of the averaging limit");
    centrality_cmd->add_option("--out", opt.out,
                               "output file for the centrality vector");
    centrality_cmd->add_option("--format", opt.format)
        ->check(CLI::IsMember({"csv", "json"}));

    auto* scenario = app.add_subcommand("scenario", "generate and run a system");
    scenario
        ->add_option("kind", opt.kind,
                     "random-array | one-value-A | two-value-A | polytope | "
                     "cleavage")
        ->required();
    scenario->add_option("--n", opt.scenario.n, "node count");
    scenario->add_option("--m", opt.scenario.m, "dimensions");
    std::uint64_t seed_flag = 0;
    auto* seed_opt = scenario->add_option("--seed", seed_flag, "random seed");
    scenario->add_option("--replicas", opt.replicas,
                         "independent seeded runs (seed, seed+1, ...)");
    scenario->add_option("--tol", opt.tol);
    scenario->add_option("--k-max", opt.k_max);
    scenario->add_option("--record-every", opt.record_every);
    scenario->add_option("--bins", opt.bins, "histogram bins");
    scenario->add_option("--extra-edge-prob", opt.scenario.extra_edge_prob);
    scenario->add_option("--a-value", opt.scenario.a_value);
    scenario->add_option("--a-low", opt.scenario.a_low);
    scenario->add_option("--a-high", opt.scenario.a_high);
    scenario->add_option("--high-fraction", opt.scenario.high_fraction);
    scenario->add_option("--polygon-vertices", opt.scenario.polygon_vertices);
    scenario->add_option("--x-low", opt.scenario.x_low);
    scenario->add_option("--x-high", opt.scenario.x_high);
    scenario->add_option("--extremist-fraction",
                         opt.scenario.cleavage.extremist_fraction);
    scenario->add_option("--moderate-center",
                         opt.scenario.cleavage.moderate_center);
    scenario->add_option("--moderate-spread",
                         opt.scenario.cleavage.moderate_spread);
    scenario->add_option("--pole-low", opt.scenario.cleavage.pole_low);
    scenario->add_option("--pole-high", opt.scenario.cleavage.pole_high);
    scenario->add_option("--a-moderate-low",
                         opt.scenario.cleavage.a_moderate_low);
    scenario->add_option("--a-moderate-high",
                         opt.scenario.cleavage.a_moderate_high);
    scenario->add_option("--a-extremist", opt.scenario.cleavage.a_extremist);
    std::string spec_flag;
    scenario->add_option("--spec", spec_flag,
                         "scenario spec JSON (overrides the flags above)");
    scenario->add_flag("--gnuplot-script", opt.gnuplot);
    scenario->add_option("--out", opt.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (!config_path.empty()) {
            if (app.get_subcommands().size() > 0)
                throw std::invalid_argument(
                    "--config replaces the subcommand interface; use one or "
                    "the other");
            apply_config(opt, config_path);
        } else {
            for (const auto* sub : app.get_subcommands())
                opt.command = sub->get_name();
            if (opt.command.empty()) {
                std::cerr << app.help();
                return kExitInput;
            }
        }

        // seed precedence: explicit flag > POLYDYN_SEED > config/default
        if (const char* env = std::getenv("POLYDYN_SEED");
            env != nullptr && *env != '\0') {
            opt.seed = std::strtoull(env, nullptr, 10);
        }
        if (seed_opt->count() > 0) opt.seed = seed_flag;
        if (opt.seed) opt.scenario.seed = *opt.seed;

        if (!spec_flag.empty()) opt.spec_path = spec_flag;
        if (opt.spec_path) {
            opt.scenario = read_scenario_spec(*opt.spec_path);
            opt.kind = to_string(opt.scenario.kind);
            if (opt.seed) opt.scenario.seed = *opt.seed;
        }

        return dispatch(opt);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOutcome;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
