// Acceptance driver. `valueramp_acceptance [N]` runs criterion N (all when
// omitted) and prints one PASS/FAIL line per criterion, followed by the
// failing sub-checks. Exit status is 0 iff every selected criterion passed.

#include "valueramp/analysis.hpp"
#include "valueramp/checks.hpp"
#include "valueramp/gridworld.hpp"
#include "valueramp/task_io.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace valueramp;

namespace {

// Pinned limits.
constexpr double kExploreSecondsPerMap = 60.0;
constexpr double kSprintSeconds = 10.0;
constexpr double kGreedySeconds = 120.0;
constexpr std::size_t kMinSprints = 50;
constexpr std::uint64_t kGreedyBudget = 2'000'000;
constexpr std::uint64_t kGreedyAudit = 100'000;
constexpr std::uint64_t kFluctuateSteps = 10'000;
constexpr std::size_t kMinAlternations = 10;
constexpr std::uint64_t kInvariantTransitions = 10'000;
constexpr std::size_t kOracleTasks = 200;
constexpr std::size_t kMaxRandomStates = 8;

const char* const kDcMaps[] = {"room.map", "spiral.map", "multigoal.map"};

std::string slurp(const std::string& relative) {
    const std::string path = std::string(VALUERAMP_DATA_DIR) + "/" + relative;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

GridMap load_map(const std::string& name) { return parse_map(slurp("maps/" + name)); }

TaskModel compile_declared(const GridMap& map) {
    GridSemantics semantics;
    semantics.variant = map.declared_variant().value_or(GridVariant::dc);
    return compile(map, semantics);
}

class Timer {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Outcome {
    bool passed = true;
    std::string summary;
    std::vector<std::string> failures;

    void absorb(const CheckReport& report, const std::string& prefix = {}) {
        for (const auto& r : report.results()) {
            if (!r.passed) {
                passed = false;
                failures.push_back(prefix + r.name + " " + r.details);
            }
        }
    }
    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            failures.push_back(what);
        }
    }
};

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

// Criteria 1 and 2 share the same runs; `fixed_only` selects which sub-checks
// count.
Outcome explore_grid(bool fixed_only) {
    Outcome out;
    std::size_t runs = 0;
    double slowest = 0.0;
    for (const char* name : kDcMaps) {
        const GridMap map = load_map(name);
        const TaskModel task = compile_declared(map);
        out.require(is_deterministic(task) && is_connected(task),
                    std::string(name) + " is not deterministic and connected");
        out.require(map.width() <= 12 && map.height() <= 12, std::string(name) + " exceeds 12x12");
        Timer timer;
        for (std::uint64_t k : {1, 2, 3}) {
            for (const InitSpec init : {InitSpec{ZeroInit{}}, InitSpec{UniformInit{0, 200}}}) {
                ExploreCheck options;
                options.k = StepSize(k);
                options.init = init;
                options.epsilon = Probability(1, 1);
                options.seeds = {1, 2, 3};
                const CheckReport report = check_explore(task, options);
                CheckReport selected;
                for (const auto& r : report.results()) {
                    const bool is_fixed = starts_with(r.name, "explore.fixed");
                    if (is_fixed == fixed_only) {
                        selected.add(r.name, r.passed, r.details);
                    }
                }
                out.absorb(selected, std::string(name) + " K=" + std::to_string(k) + " init=" +
                                         to_string(init) + " ");
                runs += options.seeds.size();
            }
        }
        const double t = timer.seconds();
        slowest = std::max(slowest, t);
        out.require(t < kExploreSecondsPerMap,
                    std::string(name) + " took " + std::to_string(t) + " s");
    }
    out.summary = std::to_string(runs) + " runs, slowest map " + std::to_string(slowest) + " s";
    return out;
}

Outcome criterion1() { return explore_grid(false); }
Outcome criterion2() { return explore_grid(true); }

Outcome criterion3() {
    Outcome out;
    Timer timer;
    const TaskModel task = compile_declared(load_map("room.map"));
    SprintCheck options;
    options.k = StepSize(2);
    options.seed = 1;
    options.min_sprints = kMinSprints;
    const CheckReport report = check_sprint(task, options);
    out.absorb(report);
    const double t = timer.seconds();
    out.require(t < kSprintSeconds, "took " + std::to_string(t) + " s");
    for (const auto& r : report.results()) {
        if (r.name == "sprint.count") {
            out.summary = r.details;
        }
    }
    return out;
}

Outcome criterion4() {
    Outcome out;
    Timer timer;
    const GridMap map = load_map("swamp.map");
    const TaskModel task = compile_declared(map);
    out.require(map.declared_variant() == GridVariant::rr, "swamp map is not declared rr");
    out.require(is_reducible(task), "swamp map is not reducible");
    out.require(is_restartable(task), "swamp map is not restartable");
    GreedyCheck options;
    options.k = StepSize(1);
    options.init = ZeroInit{};
    options.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    options.budget = kGreedyBudget;
    options.audit_steps = kGreedyAudit;
    out.absorb(check_greedy(task, options));
    const double t = timer.seconds();
    out.require(t < kGreedySeconds, "took " + std::to_string(t) + " s");
    out.summary = "10 seeds, " + std::to_string(t) + " s";
    return out;
}

Outcome criterion5() {
    Outcome out;
    FluctuateCheck options;
    options.k = StepSize(1);
    options.seed = 1;
    options.steps = kFluctuateSteps;
    options.min_alternations = kMinAlternations;
    const CheckReport report = check_fluctuate(load_graph_task(slurp("tasks/fluct.task")), options);
    out.absorb(report);
    for (const auto& r : report.results()) {
        out.summary += (out.summary.empty() ? "" : "; ") + r.name.substr(r.name.find('.') + 1) +
                       " " + r.details;
    }
    return out;
}

Outcome criterion6() {
    Outcome out;
    InvariantCheck options;
    options.seed = 1;
    options.transitions = kInvariantTransitions;
    options.max_states = kMaxRandomStates;
    const CheckReport report = check_invariants(options);
    out.absorb(report);
    out.summary = std::to_string(report.results().size()) + " invariants over " +
                  std::to_string(kInvariantTransitions) + " transitions";
    return out;
}

Outcome criterion7() {
    Outcome out;
    OracleCheck options;
    options.seed = 1;
    options.tasks = kOracleTasks;
    options.max_states = kMaxRandomStates;
    out.absorb(check_oracles(options));
    out.summary = std::to_string(kOracleTasks) + " random tasks";
    return out;
}

const std::function<Outcome()> kCriteria[] = {criterion1, criterion2, criterion3, criterion4,
                                              criterion5, criterion6, criterion7};

const char* const kNames[] = {
    "explore-optimal-values", "fixpoint-is-stable",      "sprints-optimal-shortest",
    "greedy-rewardless-cycles", "fluctuation-golden",    "randomized-invariants",
    "oracle-cross-validation",
};

}  // namespace

int main(int argc, char** argv) {
    std::size_t first = 1;
    std::size_t last = std::size(kCriteria);
    if (argc > 1) {
        char* end = nullptr;
        const auto n = std::strtoul(argv[1], &end, 10);
        if (*end != '\0' || n < 1 || n > std::size(kCriteria)) {
            std::cerr << "usage: valueramp_acceptance [1-" << std::size(kCriteria) << "]\n";
            return 2;
        }
        first = last = n;
    }
    bool all = true;
    for (std::size_t i = first; i <= last; ++i) {
        Outcome o;
        try {
            o = kCriteria[i - 1]();
        } catch (const std::exception& e) {
            o.passed = false;
            o.failures.push_back(std::string("exception: ") + e.what());
        }
        all = all && o.passed;
        std::cout << (o.passed ? "PASS" : "FAIL") << " criterion-" << i << " " << kNames[i - 1]
                  << (o.summary.empty() ? "" : " (" + o.summary + ")") << "\n";
        for (const auto& f : o.failures) {
            std::cout << "  " << f << "\n";
        }
    }
    return all ? 0 : 1;
}
