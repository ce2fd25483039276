#include "causal_strips/cli.h"

#include "causal_strips/causal_graph.h"
#include "causal_strips/combinatorics.h"
#include "causal_strips/generators.h"
#include "causal_strips/instance_io.h"
#include "causal_strips/oracle.h"
#include "causal_strips/polytree_planner.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

using namespace std;
using ordered_json = nlohmann::ordered_json;

namespace causal_strips::cli {

namespace {
enum class Format { text, json };

class UsageError : public runtime_error {
public:
    using runtime_error::runtime_error;
};

const map<string, Format> format_names{{"text", Format::text},
                                       {"json", Format::json}};

size_t oracle_budget(optional<size_t> flag) {
    if (flag)
        return *flag;
    if (const char *env = getenv(max_states_env)) {
        char *end = nullptr;
        unsigned long long value = strtoull(env, &end, 10);
        if (*env == '\0' || *end != '\0' || value == 0)
            throw UsageError(string(max_states_env) +
                             " must be a positive integer");
        return value;
    }
    return default_max_states;
}

Instance load_instance(const string &path) {
    Instance inst = read_instance_file(path);
    vector<Violation> violations = validate_instance(inst);
    if (!violations.empty())
        throw ParseError(violations.front().where,
                         violations.front().message);
    return inst;
}

string yes_no(bool flag) {
    return flag ? "yes" : "no";
}

// Shared by `plan`, `solve` and `bench`.
enum class Outcome { solved, unsolvable, unsupported, budget_exceeded };

struct PlanOutcome {
    Outcome outcome = Outcome::unsolvable;
    string algorithm;
    Plan plan;
    string message;
};

int exit_code_for(Outcome outcome) {
    switch (outcome) {
    case Outcome::solved:
        return exit_ok;
    case Outcome::unsolvable:
        return exit_unsolvable;
    case Outcome::unsupported:
        return exit_unsupported;
    case Outcome::budget_exceeded:
        return exit_budget_exceeded;
    }
    return exit_internal;
}

string outcome_name(Outcome outcome) {
    switch (outcome) {
    case Outcome::solved:
        return "solved";
    case Outcome::unsolvable:
        return "unsolvable";
    case Outcome::unsupported:
        return "unsupported_structure";
    case Outcome::budget_exceeded:
        return "budget_exceeded";
    }
    return "error";
}

string resolve_algorithm(const Instance &inst, const string &algorithm,
                         optional<size_t> indegree_cap) {
    if (algorithm != "auto")
        return algorithm;
    StructureReport report = classify(build_causal_graph(inst));
    bool fits = report.is_polytree &&
                (!indegree_cap || report.max_indegree <= *indegree_cap);
    return fits ? "polytree" : "bfs";
}

PlanOutcome solve_instance(const Instance &inst, const string &algorithm,
                           size_t max_states,
                           optional<size_t> indegree_cap) {
    PlanOutcome result;
    result.algorithm = resolve_algorithm(inst, algorithm, indegree_cap);
    if (result.algorithm == "bfs") {
        SearchResult search = bfs_shortest_plan(inst, max_states);
        if (search.status == SearchStatus::budget_exceeded) {
            result.outcome = Outcome::budget_exceeded;
            result.message = "state budget of " + to_string(max_states) +
                             " exceeded";
        } else if (search.solvable()) {
            result.outcome = Outcome::solved;
            result.plan = move(search.plan);
        } else {
            result.outcome = Outcome::unsolvable;
            result.message = "state space exhausted without reaching the goal";
        }
        return result;
    }

    PlannerOptions options;
    options.indegree_cap = indegree_cap;
    try {
        PolytreePlanResult planned = plan_polytree(inst, options);
        result.message = planned.message;
        switch (planned.status) {
        case PlanStatus::solved:
            result.outcome = Outcome::solved;
            result.plan = move(planned.plan);
            break;
        case PlanStatus::unsolvable:
            result.outcome = Outcome::unsolvable;
            break;
        case PlanStatus::unsupported_structure:
            result.outcome = Outcome::unsupported;
            break;
        }
    } catch (const SearchTooLarge &e) {
        result.outcome = Outcome::budget_exceeded;
        result.message = e.what();
    }
    return result;
}

ordered_json plan_json(const Instance &inst, const Plan &plan) {
    ordered_json names = ordered_json::array();
    for (OpIndex i : plan)
        names.push_back(inst.operators[i].name);
    return names;
}

void print_diagnostics(const Instance &inst, optional<size_t> indegree_cap,
                       Format format, ordered_json &doc, ostream &err) {
    PlannerOptions options;
    options.indegree_cap = indegree_cap;
    ForwardCheckResult fc = forward_check(inst, options);
    ordered_json vars = ordered_json::array();
    for (VarId v : fc.topo_order) {
        if (fc.failed_var && v == *fc.failed_var)
            break;
        const VariableSolution &sol = fc[v];
        if (format == Format::json) {
            vars.push_back({{"variable", inst.variables[v.index]},
                            {"bound", sol.bound.to_string()},
                            {"sequence", sol.sigma.to_string()}});
        } else {
            err << inst.variables[v.index] << ": bound " << sol.bound.to_string()
                << ", sequence " << sol.sigma.to_string() << "\n";
        }
    }
    if (fc.ext.indegree_warning) {
        if (format == Format::json)
            doc["indegree_warning"] = true;
        else
            err << "warning: indegree " << fc.ext.max_indegree
                << " makes extended operator tables large\n";
    }
    if (format == Format::json)
        doc["diagnostics"] = vars;
}

struct PlanArgs {
    string instance;
    string algorithm = "auto";
    string out_path;
    optional<size_t> max_states;
    optional<size_t> indegree_cap;
    Format format = Format::text;
    bool diagnostics = false;
};

int cmd_plan(const PlanArgs &args, ostream &out, ostream &err) {
    Instance inst = load_instance(args.instance);
    PlanOutcome result = solve_instance(inst, args.algorithm,
                                        oracle_budget(args.max_states),
                                        args.indegree_cap);
    if (result.outcome == Outcome::solved &&
        !execute_plan(inst, result.plan).solves())
        throw logic_error("planner returned a plan that does not validate");

    ordered_json doc;
    doc["status"] = outcome_name(result.outcome);
    doc["algorithm"] = result.algorithm;
    if (result.outcome == Outcome::solved) {
        doc["length"] = result.plan.size();
        doc["plan"] = plan_json(inst, result.plan);
    } else {
        doc["message"] = result.message;
    }
    if (args.diagnostics && result.algorithm == "polytree" &&
        result.outcome != Outcome::unsupported)
        print_diagnostics(inst, args.indegree_cap, args.format, doc, err);

    if (result.outcome == Outcome::solved && !args.out_path.empty())
        write_text_file(args.out_path, serialize_plan(inst, result.plan));

    if (args.format == Format::json) {
        out << doc.dump(2) << "\n";
    } else if (result.outcome == Outcome::solved) {
        if (args.out_path.empty())
            out << serialize_plan(inst, result.plan);
        else
            out << "solved: " << result.plan.size() << " steps ("
                << result.algorithm << ")\n";
    } else {
        err << outcome_name(result.outcome) << ": " << result.message << "\n";
    }
    return exit_code_for(result.outcome);
}

int cmd_analyze(const string &path, Format format, ostream &out) {
    Instance inst = load_instance(path);
    CausalGraph g = build_causal_graph(inst);
    StructureReport report = classify(g);

    ordered_json doc;
    doc["variables"] = inst.num_variables();
    doc["operators"] = inst.operators.size();
    doc["edges"] = g.num_edges();
    doc["is_dag"] = report.is_dag;
    doc["is_chain"] = report.is_chain;
    doc["is_directed_tree"] = report.is_directed_tree;
    doc["is_polytree"] = report.is_polytree;
    doc["is_dpsc"] = report.is_dpsc;
    doc["kappa"] = report.max_indegree;
    doc["delta"] = report.delta ? ordered_json(to_string(*report.delta))
                                : ordered_json(nullptr);
    doc["post_unique"] = is_post_unique(inst);
    doc["single_valued"] = is_single_valued(inst);
    if (report.is_dag) {
        BoundsReport bounds = structural_bounds(g);
        ordered_json per_var = ordered_json::array();
        for (size_t v = 0; v < inst.num_variables(); ++v)
            per_var.push_back(
                {{"variable", inst.variables[v]},
                 {"recurrence", to_string(bounds.maxreq_recurrence[v])},
                 {"path_count", to_string(bounds.maxreq_path_count[v])}});
        doc["bounds"] = {
            {"per_variable", per_var},
            {"min_plan_size", to_string(bounds.min_plan_size)},
            {"min_plan_size_delta", to_string(bounds.min_plan_size_delta)},
            {"dpsc_bound", bounds.dpsc_bound
                               ? ordered_json(*bounds.dpsc_bound)
                               : ordered_json(nullptr)}};
    } else {
        doc["bounds"] = nullptr;
    }

    if (format == Format::json) {
        out << doc.dump(2) << "\n";
        return exit_ok;
    }
    out << "variables: " << inst.num_variables() << "\n"
        << "operators: " << inst.operators.size() << "\n"
        << "edges: " << g.num_edges() << "\n"
        << "dag: " << yes_no(report.is_dag) << "\n"
        << "chain: " << yes_no(report.is_chain) << "\n"
        << "directed_tree: " << yes_no(report.is_directed_tree) << "\n"
        << "polytree: " << yes_no(report.is_polytree) << "\n"
        << "dpsc: " << yes_no(report.is_dpsc) << "\n"
        << "kappa: " << report.max_indegree << "\n"
        << "delta: " << (report.delta ? to_string(*report.delta) : "-") << "\n"
        << "post_unique: " << yes_no(is_post_unique(inst)) << "\n"
        << "single_valued: " << yes_no(is_single_valued(inst)) << "\n";
    if (report.is_dag) {
        const auto &b = doc["bounds"];
        out << "min_plan_size: " << b["min_plan_size"].get<string>() << "\n"
            << "min_plan_size_delta: "
            << b["min_plan_size_delta"].get<string>() << "\n";
        if (!b["dpsc_bound"].is_null())
            out << "dpsc_bound: " << b["dpsc_bound"].get<size_t>() << "\n";
        out << "variable recurrence path_count\n";
        for (const auto &row : b["per_variable"])
            out << row["variable"].get<string>() << " "
                << row["recurrence"].get<string>() << " "
                << row["path_count"].get<string>() << "\n";
    }
    return exit_ok;
}

int cmd_validate(const string &instance_path, const string &plan_path,
                 bool irreducible, Format format, ostream &out) {
    Instance inst = load_instance(instance_path);
    Plan plan = read_plan_file(plan_path, inst);
    ExecutionResult exec = execute_plan(inst, plan);

    ordered_json doc;
    doc["length"] = plan.size();
    string verdict;
    int code = exit_ok;
    if (exec.failure) {
        const StepFailure &f = *exec.failure;
        verdict = "step " + to_string(f.step + 1) + " (" +
                  inst.operators[plan[f.step]].name +
                  "): " + describe(f.error, inst);
        doc["valid"] = false;
        doc["failed_step"] = f.step + 1;
        code = exit_invalid_plan;
    } else if (!exec.goal_satisfied) {
        verdict = "goal unsatisfied";
        doc["valid"] = false;
        code = exit_invalid_plan;
    } else {
        doc["valid"] = true;
    }

    if (code == exit_ok && irreducible) {
        IrreducibilityMode mode = plan.size() <= default_irreducibility_cap
                                      ? IrreducibilityMode::full_subset
                                      : IrreducibilityMode::single_removal;
        bool ok = check_irreducible(inst, plan, mode);
        doc["irreducible"] = ok;
        doc["irreducibility_check"] =
            mode == IrreducibilityMode::full_subset ? "full_subset"
                                                    : "single_removal";
        if (!ok) {
            verdict = "plan is reducible";
            code = exit_invalid_plan;
        }
    }
    if (code != exit_ok)
        doc["reason"] = verdict;

    if (format == Format::json)
        out << doc.dump(2) << "\n";
    else if (code == exit_ok)
        out << "valid: " << plan.size() << " steps reach the goal"
            << (irreducible ? ", irreducible" : "") << "\n";
    else
        out << "invalid: " << verdict << "\n";
    return code;
}

void emit_instance(const Instance &inst, const string &out_path, ostream &out) {
    string text = serialize_instance(inst);
    if (out_path.empty())
        out << text;
    else
        write_text_file(out_path, text);
}

// Bench suites: {"max_states": N?, "runs": [entry...]}, where an entry is
// {"family": "expchain"|"random-polytree"|"sat"|"valve"|"prop3"|"file",
//  "n": int or [ints], "kappa": int, "density": real, "seeds": [ints],
//  "clauses": int, "paths": [files], "algorithms": [names]}.
struct BenchInstance {
    string family;
    size_t n;
    Instance inst;
};

vector<size_t> size_list(const ordered_json &entry, const string &key,
                         size_t fallback) {
    if (!entry.contains(key))
        return {fallback};
    const auto &value = entry[key];
    if (value.is_array())
        return value.get<vector<size_t>>();
    return {value.get<size_t>()};
}

vector<BenchInstance> expand_entry(const ordered_json &entry) {
    const string family = entry.at("family").get<string>();
    vector<BenchInstance> result;
    vector<uint64_t> seeds = entry.contains("seeds")
                                 ? entry["seeds"].get<vector<uint64_t>>()
                                 : vector<uint64_t>{0};
    if (family == "expchain") {
        for (size_t n : size_list(entry, "n", 3))
            result.push_back({family, n, gen_exponential_chain(n)});
    } else if (family == "random-polytree") {
        for (size_t n : size_list(entry, "n", 6)) {
            for (uint64_t seed : seeds) {
                RandomPolytreeParams params;
                params.n = n;
                params.kappa = entry.value("kappa", size_t(2));
                params.density = entry.value("density", 0.7);
                params.seed = seed;
                result.push_back({family, n, gen_random_polytree(params)});
            }
        }
    } else if (family == "sat") {
        for (size_t vars : size_list(entry, "n", 3)) {
            for (uint64_t seed : seeds) {
                mt19937_64 rng(seed);
                SatFormula f = random_formula(
                    vars, entry.value("clauses", size_t(4)), rng);
                Instance inst = gen_sat_reduction(f);
                result.push_back({family, inst.num_variables(), inst});
            }
        }
    } else if (family == "valve") {
        result.push_back({family, 5, fixture_valve()});
    } else if (family == "prop3") {
        result.push_back({family, 3, fixture_prop3()});
    } else if (family == "file") {
        for (const string &path : entry.at("paths").get<vector<string>>()) {
            Instance inst = load_instance(path);
            result.push_back({path, inst.num_variables(), inst});
        }
    } else {
        throw UsageError("unknown bench family '" + family + "'");
    }
    return result;
}

string csv_field(const string &text) {
    if (text.find_first_of(",\"\n") == string::npos)
        return text;
    string quoted = "\"";
    for (char c : text) {
        if (c == '"')
            quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

int cmd_bench(const string &suite_path, const string &out_path, ostream &out) {
    ordered_json suite;
    try {
        suite = ordered_json::parse(read_text_file(suite_path));
    } catch (const nlohmann::json::parse_error &) {
        throw ParseError(suite_path, "malformed JSON suite");
    }
    size_t budget = suite.contains("max_states")
                        ? suite["max_states"].get<size_t>()
                        : oracle_budget(nullopt);

    // Expand everything first so a bad suite fails before any work.
    vector<pair<BenchInstance, string>> jobs;
    try {
        for (const auto &entry : suite.at("runs")) {
            vector<string> algorithms =
                entry.contains("algorithms")
                    ? entry["algorithms"].get<vector<string>>()
                    : vector<string>{"auto"};
            for (const string &a : algorithms)
                if (a != "auto" && a != "bfs" && a != "polytree")
                    throw UsageError("unknown algorithm '" + a + "'");
            for (BenchInstance &bi : expand_entry(entry))
                for (const string &a : algorithms)
                    jobs.emplace_back(bi, a);
        }
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(suite_path, e.what());
    }

    ostringstream csv;
    csv << bench_csv_header << "\n";
    for (const auto &[bi, algorithm] : jobs) {
        StructureReport report = classify(build_causal_graph(bi.inst));
        string kappa_delta = to_string(report.max_indegree) + "/" +
                             (report.delta ? to_string(*report.delta) : "-");
        string solvable, length, status, used = algorithm;
        auto start = chrono::steady_clock::now();
        try {
            PlanOutcome r = solve_instance(bi.inst, algorithm, budget, nullopt);
            used = r.algorithm;
            switch (r.outcome) {
            case Outcome::solved:
                solvable = "true";
                length = to_string(r.plan.size());
                status = execute_plan(bi.inst, r.plan).solves()
                             ? "ok"
                             : "invalid_plan";
                break;
            case Outcome::unsolvable:
                solvable = "false";
                status = "ok";
                break;
            case Outcome::unsupported:
                status = "unsupported_structure";
                break;
            case Outcome::budget_exceeded:
                status = "budget_exceeded";
                break;
            }
        } catch (const exception &e) {
            status = string("error: ") + e.what();
        }
        double ms = chrono::duration<double, milli>(
                        chrono::steady_clock::now() - start)
                        .count();
        ostringstream time;
        time << fixed << setprecision(3) << ms;
        csv << csv_field(bi.family) << ',' << bi.n << ',' << kappa_delta << ','
            << solvable << ',' << length << ',' << time.str() << ',' << used
            << ',' << csv_field(status) << "\n";
    }
    if (out_path.empty())
        out << csv.str();
    else
        write_text_file(out_path, csv.str());
    return exit_ok;
}
} // namespace

int run(const vector<string> &args, ostream &out, ostream &err) {
    CLI::App app{"Causal-graph analysis and planning for unary STRIPS"};
    app.name("causal-strips");
    app.require_subcommand(1);

    auto add_format = [](CLI::App *cmd, Format &format) {
        cmd->add_option("--format", format, "Report format")
            ->transform(CLI::CheckedTransformer(format_names, CLI::ignore_case));
    };

    string instance_path, plan_path, out_path;
    Format format = Format::text;

    auto *analyze = app.add_subcommand("analyze", "Classify the causal graph");
    analyze->add_option("instance", instance_path)->required();
    add_format(analyze, format);

    PlanArgs plan_args;
    auto add_plan_options = [&](CLI::App *cmd, bool with_algorithm) {
        cmd->add_option("instance", plan_args.instance)->required();
        if (with_algorithm)
            cmd->add_option("--algorithm", plan_args.algorithm)
                ->check(CLI::IsMember({"polytree", "bfs", "auto"}));
        cmd->add_option("--out", plan_args.out_path, "Plan file to write");
        cmd->add_option("--max-states", plan_args.max_states)
            ->check(CLI::PositiveNumber);
        cmd->add_option("--indegree-cap", plan_args.indegree_cap);
        cmd->add_flag("--diagnostics", plan_args.diagnostics,
                      "Report per-variable value sequences");
        add_format(cmd, plan_args.format);
    };
    auto *plan = app.add_subcommand("plan", "Find a plan");
    add_plan_options(plan, true);
    auto *solve = app.add_subcommand("solve", "Find a shortest plan by search");
    add_plan_options(solve, false);

    bool irreducible = false;
    auto *validate = app.add_subcommand("validate", "Check a plan file");
    validate->add_option("instance", instance_path)->required();
    validate->add_option("plan", plan_path)->required();
    validate->add_flag("--irreducible", irreducible);
    add_format(validate, format);

    auto *generate = app.add_subcommand("generate", "Write a generated instance");
    generate->require_subcommand(1);
    generate->add_option("--out", out_path);
    string cnf_path;
    auto *gen_sat = generate->add_subcommand("sat", "3-SAT reduction");
    gen_sat->add_option("--cnf", cnf_path, "DIMACS CNF file")->required();
    size_t chain_n = 0;
    auto *gen_chain = generate->add_subcommand("expchain", "Exponential chain");
    gen_chain->add_option("--n", chain_n)->required()->check(
        CLI::Range(size_t(1), size_t(64)));
    RandomPolytreeParams random_params;
    auto *gen_random =
        generate->add_subcommand("random-polytree", "Random polytree");
    gen_random->add_option("--n", random_params.n)->required()->check(
        CLI::PositiveNumber);
    gen_random->add_option("--kappa", random_params.kappa)->check(
        CLI::PositiveNumber);
    gen_random->add_option("--density", random_params.density)
        ->check(CLI::Range(0.0, 1.0));
    gen_random->add_option("--seed", random_params.seed);
    auto *gen_valve = generate->add_subcommand("valve", "Valve controller");
    auto *gen_prop3 = generate->add_subcommand("prop3", "Non-SAS polytree");
    for (CLI::App *sub : {gen_sat, gen_chain, gen_random, gen_valve, gen_prop3})
        sub->add_option("--out", out_path);

    string suite_path;
    auto *bench = app.add_subcommand("bench", "Run a benchmark suite to CSV");
    bench->add_option("suite", suite_path)->required();
    bench->add_option("--out", out_path, "CSV file to write");

    size_t merge_n = 0, merge_k = 0;
    auto *merges = app.add_subcommand("count-merges", "Count sequence merges");
    merges->add_option("--n", merge_n)->required()->check(CLI::PositiveNumber);
    merges->add_option("--k", merge_k)->required()->check(CLI::PositiveNumber);
    add_format(merges, format);

    try {
        vector<string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        app.exit(e, out, err);
        return exit_ok;
    } catch (const CLI::CallForAllHelp &e) {
        app.exit(e, out, err);
        return exit_ok;
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return exit_usage;
    }

    try {
        if (*analyze)
            return cmd_analyze(instance_path, format, out);
        if (*plan)
            return cmd_plan(plan_args, out, err);
        if (*solve) {
            plan_args.algorithm = "bfs";
            return cmd_plan(plan_args, out, err);
        }
        if (*validate)
            return cmd_validate(instance_path, plan_path, irreducible, format,
                                out);
        if (*generate) {
            if (*gen_sat) {
                ifstream in(cnf_path);
                if (!in)
                    throw ParseError(cnf_path, "cannot open file");
                emit_instance(gen_sat_reduction(parse_dimacs(in)), out_path, out);
            } else if (*gen_chain) {
                emit_instance(gen_exponential_chain(chain_n), out_path, out);
            } else if (*gen_random) {
                emit_instance(gen_random_polytree(random_params), out_path, out);
            } else if (*gen_valve) {
                emit_instance(fixture_valve(), out_path, out);
            } else {
                emit_instance(fixture_prop3(), out_path, out);
            }
            return exit_ok;
        }
        if (*bench)
            return cmd_bench(suite_path, out_path, out);
        if (*merges) {
            BigCount count = merge_count_T(merge_n, merge_k);
            if (format == Format::json)
                out << ordered_json{{"n", merge_n},
                                    {"k", merge_k},
                                    {"merges", to_string(count)}}
                           .dump()
                    << "\n";
            else
                out << to_string(count) << "\n";
            return exit_ok;
        }
    } catch (const ParseError &e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const exception &e) {
        err << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
    return exit_usage;
}

} // namespace causal_strips::cli
