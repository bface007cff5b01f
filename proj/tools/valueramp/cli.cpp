#include "cli.hpp"

#include "valueramp/analysis.hpp"
#include "valueramp/checks.hpp"
#include "valueramp/gridworld.hpp"
#include "valueramp/io.hpp"
#include "valueramp/runner.hpp"
#include "valueramp/task_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace valueramp::cli {

namespace {

struct Config {
    std::string map_path;
    std::string task_path;
    std::uint64_t k = 1;
    std::string epsilon = "1";
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> steps;
    std::string init = "zero";
    std::string stop = "steps";
    std::string suite;
    std::uint64_t seeds = 1;
    std::string out;
    std::string method = "iterate";
    std::string values_path;
};

struct Input {
    std::optional<GridMap> map;
    TaskModel task;
    std::string stem;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw Error("cannot write '" + path + "'");
    }
    file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!file) {
        throw Error("error while writing '" + path + "'");
    }
}

Input load_input(const Config& cfg) {
    const std::string& path = cfg.map_path.empty() ? cfg.task_path : cfg.map_path;
    const std::string text = read_file(path);
    try {
        std::optional<GridMap> map;
        if (!cfg.map_path.empty()) {
            map = parse_map(text);
        }
        auto task = [&] {
            if (!map) {
                return load_graph_task(text);
            }
            GridSemantics semantics;
            semantics.variant = map->declared_variant().value_or(GridVariant::dc);
            return compile(*map, semantics);
        }();
        return {std::move(map), std::move(task), std::filesystem::path(path).stem().string()};
    } catch (const ParseError& e) {
        throw ParseError(0, path + ": " + e.what());
    }
}

std::string out_prefix(const Config& cfg, const Input& input) {
    return cfg.out.empty() ? input.stem : cfg.out;
}

int cmd_simulate(const Config& cfg, std::ostream& out) {
    const Input input = load_input(cfg);
    const StepSize k(cfg.k);
    RunnerParams params;
    params.epsilon = Probability::from_decimal(cfg.epsilon);
    params.seed = cfg.seed;
    params.init = parse_init_spec(cfg.init);
    if (cfg.stop == "steps") {
        params.max_steps = cfg.steps.value_or(1'000'000);
        params.stop.push_back(StepsStop{params.max_steps});
    } else {
        params.max_steps = cfg.steps.value_or(100'000'000);
        if (cfg.stop == "fixpoint") {
            params.stop.push_back(FixpointStop{});
        } else {
            params.stop.push_back(GoodConfigStop{});
        }
    }
    const RunTrace trace = run(input.task, params, k);
    const std::string prefix = out_prefix(cfg, input);
    write_file(prefix + ".trace", format_trace(trace, input.task));
    const ValueFunction values = trace.final_values();
    write_file(prefix + ".values.csv", format_values_csv(values, input.task));
    out << "stop " << to_string(trace.stop_reason) << "\n";
    out << "steps " << trace.records.size() << "\n";
    out << "trace " << prefix << ".trace\n";
    out << "values " << prefix << ".values.csv\n";
    return kOk;
}

int cmd_oracle(const Config& cfg, std::ostream& out) {
    const Input input = load_input(cfg);
    const StepSize k(cfg.k);
    std::vector<Value> v;
    if (cfg.method == "iterate") {
        v = optimal_values(input.task, k);
    } else if (cfg.method == "enumerate") {
        v = optimal_values_by_enumeration(input.task, k);
    } else {
        v = optimal_values_by_distance(input.task, k);
    }
    const std::string table = format_state_table(v, input.task);
    out << table;
    if (!cfg.out.empty()) {
        write_file(cfg.out + ".txt", table);
    }
    if (input.map) {
        const std::string prefix = out_prefix(cfg, input) + ".vstar";
        const ValueGrid grid = render_state_values(v, *input.map);
        write_file(prefix + ".csv", format_grid_csv(grid));
        write_file(prefix + ".pgm", format_pgm(grid));
    }
    return kOk;
}

int cmd_check(const Config& cfg, std::ostream& out) {
    const StepSize k(cfg.k);
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < cfg.seeds; ++i) {
        seeds.push_back(cfg.seed + i);
    }
    CheckReport report;
    if (cfg.suite == "invariants") {
        InvariantCheck options;
        options.seed = cfg.seed;
        options.transitions = cfg.steps.value_or(options.transitions);
        report = check_invariants(options);
    } else if (cfg.suite == "oracles") {
        OracleCheck options;
        options.seed = cfg.seed;
        report = check_oracles(options);
    } else {
        const Input input = load_input(cfg);
        if (cfg.suite == "explore") {
            ExploreCheck options;
            options.k = k;
            options.init = parse_init_spec(cfg.init);
            options.epsilon = Probability::from_decimal(cfg.epsilon);
            options.seeds = seeds;
            options.max_steps = cfg.steps.value_or(options.max_steps);
            report = check_explore(input.task, options);
        } else if (cfg.suite == "sprint") {
            SprintCheck options;
            options.k = k;
            options.seed = cfg.seed;
            options.max_steps = cfg.steps.value_or(options.max_steps);
            report = check_sprint(input.task, options);
        } else if (cfg.suite == "greedy") {
            GreedyCheck options;
            options.k = k;
            options.init = parse_init_spec(cfg.init);
            options.seeds = seeds;
            options.budget = cfg.steps.value_or(options.budget);
            report = check_greedy(input.task, options);
        } else {
            FluctuateCheck options;
            options.k = k;
            options.seed = cfg.seed;
            options.steps = cfg.steps.value_or(options.steps);
            report = check_fluctuate(input.task, options);
        }
    }
    out << report.text();
    return report.passed() ? kOk : kFailure;
}

int cmd_render(const Config& cfg, std::ostream& out) {
    const Input input = load_input(cfg);
    const ValueFunction values = parse_values_csv(read_file(cfg.values_path), input.task);
    const ValueGrid grid = render_values(values, *input.map);
    const std::string prefix = out_prefix(cfg, input);
    write_file(prefix + ".csv", format_grid_csv(grid));
    write_file(prefix + ".pgm", format_pgm(grid));
    out << "csv " << prefix << ".csv\n";
    out << "pgm " << prefix << ".pgm\n";
    return kOk;
}

std::string check_epsilon(const std::string& text) {
    try {
        (void)Probability::from_decimal(text);
        return {};
    } catch (const std::exception& e) {
        return e.what();
    }
}

std::string check_init(const std::string& text) {
    try {
        (void)parse_init_spec(text);
        return {};
    } catch (const std::exception& e) {
        return e.what();
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Integer value-ramp learning on finite tasks and grid maps", "valueramp"};
    app.require_subcommand(1);
    Config cfg;

    auto input_options = [&](CLI::App* sub, bool map_only = false) {
        auto* map = sub->add_option("--map", cfg.map_path, "map v1 file")->check(CLI::ExistingFile);
        if (map_only) {
            map->required();
            return;
        }
        auto* task = sub->add_option("--task", cfg.task_path, "task v1 file")->check(CLI::ExistingFile);
        map->excludes(task);
        task->excludes(map);
    };
    auto k_option = [&](CLI::App* sub) {
        sub->add_option("--k", cfg.k, "step size K")->check(CLI::Range(std::uint64_t{1}, kMaxReward));
    };
    auto epsilon_option = [&](CLI::App* sub) {
        sub->add_option("--epsilon", cfg.epsilon, "exploration probability, decimal in [0,1]")
            ->check(CLI::Validator(check_epsilon, "DEC"));
    };
    auto init_option = [&](CLI::App* sub) {
        sub->add_option("--init", cfg.init, "zero | uniform:LO..HI")
            ->check(CLI::Validator(check_init, "INIT"));
    };

    auto* simulate = app.add_subcommand("simulate", "run the learning rule and write a trace");
    input_options(simulate);
    k_option(simulate);
    epsilon_option(simulate);
    init_option(simulate);
    simulate->add_option("--seed", cfg.seed);
    simulate->add_option("--steps", cfg.steps, "step budget");
    simulate->add_option("--stop", cfg.stop)
        ->check(CLI::IsMember({"steps", "fixpoint", "good-config"}));
    simulate->add_option("--out", cfg.out, "output prefix (default: input file stem)");

    auto* oracle = app.add_subcommand("oracle", "print optimal state values");
    input_options(oracle);
    k_option(oracle);
    oracle->add_option("--method", cfg.method)
        ->check(CLI::IsMember({"iterate", "enumerate", "distance"}));
    oracle->add_option("--out", cfg.out, "output prefix");

    auto* check = app.add_subcommand("check", "run a convergence or invariant suite");
    input_options(check);
    k_option(check);
    epsilon_option(check);
    init_option(check);
    check->add_option("--suite", cfg.suite)
        ->required()
        ->check(CLI::IsMember({"explore", "sprint", "greedy", "fluctuate", "invariants", "oracles"}));
    check->add_option("--seed", cfg.seed);
    check->add_option("--seeds", cfg.seeds, "number of independent runs")
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1000}));
    check->add_option("--steps", cfg.steps, "step budget");

    auto* render = app.add_subcommand("render", "export a value heat-map as CSV and PGM");
    input_options(render, true);
    render->add_option("--values", cfg.values_path, "values CSV from simulate")
        ->required()
        ->check(CLI::ExistingFile);
    render->add_option("--out", cfg.out, "output prefix");

    std::vector<const char*> argv{"valueramp"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    const bool needs_input = !(check->parsed() && (cfg.suite == "invariants" || cfg.suite == "oracles"));
    if (needs_input && cfg.map_path.empty() && cfg.task_path.empty()) {
        err << "error: one of --map or --task is required\n";
        return kUsage;
    }

    try {
        if (simulate->parsed()) {
            return cmd_simulate(cfg, out);
        }
        if (oracle->parsed()) {
            return cmd_oracle(cfg, out);
        }
        if (check->parsed()) {
            return cmd_check(cfg, out);
        }
        return cmd_render(cfg, out);
    } catch (const UnsupportedError& e) {
        err << "unsupported: " << e.what() << "\n";
        return kUnsupported;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
}

}  // namespace valueramp::cli
