#include "causal_strips/polytree_planner.h"

#include <algorithm>
#include <set>

using namespace std;

namespace causal_strips {

Color other(Color color) {
    return color == Color::black ? Color::white : Color::black;
}

Color color_of(Value value, Value initial) {
    if (!is_specified(value) || !is_specified(initial))
        throw invalid_argument("color_of: unspecified value");
    return value == initial ? Color::black : Color::white;
}

Value value_of(Color color, Value initial) {
    return color == Color::black ? initial : complement(initial);
}

Color color_at_position(size_t position) {
    return position % 2 == 1 ? Color::black : Color::white;
}

IndexedValue IndexedValue::at_position(VarId var, size_t position) {
    if (position == 0)
        throw invalid_argument("sequence positions start at 1");
    return {var, color_at_position(position), (position + 1) / 2};
}

size_t IndexedValue::position() const {
    return color == Color::black ? 2 * occurrence - 1 : 2 * occurrence;
}

string IndexedValue::to_string() const {
    return string(color == Color::black ? "b" : "w") +
           std::to_string(occurrence) + "(" + std::to_string(var.index) + ")";
}

string ChangeBound::to_string() const {
    return unbounded ? "inf" : std::to_string(value);
}

string MaximalSequence::to_string() const {
    string text;
    for (const IndexedValue &entry : entries) {
        if (!text.empty())
            text += ' ';
        text += entry.color == Color::black ? 'b' : 'w';
        text += std::to_string(entry.occurrence);
    }
    return text;
}

MaximalSequence alternating_sequence(VarId var, size_t length) {
    MaximalSequence seq{var, {}};
    for (size_t p = 1; p <= length; ++p)
        seq.entries.push_back(IndexedValue::at_position(var, p));
    return seq;
}

ExtendedOperatorTable compile_extended_ops(
    const Instance &inst, const CausalGraph &g, const PlannerOptions &options) {
    ExtendedOperatorTable table;
    table.per_var.resize(inst.num_variables());
    for (size_t v = 0; v < inst.num_variables(); ++v) {
        const vector<VarId> &parents = g.pred(VarId{v});
        table.max_indegree = max(table.max_indegree, parents.size());
        if (options.indegree_cap && parents.size() > *options.indegree_cap)
            throw IndegreeCapExceeded(
                "variable " + inst.variables[v] + " has " +
                std::to_string(parents.size()) +
                " causal-graph parents, cap is " +
                std::to_string(*options.indegree_cap));
        if (parents.size() > 63)
            throw IndegreeCapExceeded("indegree above 63 is not supported");
        if (parents.size() > options.indegree_warn)
            table.indegree_warning = true;

        set<pair<Value, vector<Condition>>> seen;
        for (OpIndex i : inst.operators_on(VarId{v})) {
            const Operator &op = inst.operators[i];
            vector<size_t> free_parents;
            for (size_t k = 0; k < parents.size(); ++k)
                if (!is_specified(op.prevail_on(parents[k])))
                    free_parents.push_back(k);
            for (uint64_t mask = 0; mask < (uint64_t(1) << free_parents.size());
                 ++mask) {
                vector<Condition> prv_full;
                for (VarId parent : parents)
                    prv_full.push_back({parent, op.prevail_on(parent)});
                for (size_t b = 0; b < free_parents.size(); ++b)
                    prv_full[free_parents[b]].value =
                        value_from_bool((mask >> b) & 1);
                if (!seen.emplace(op.pre, prv_full).second)
                    continue;
                table.per_var[v].push_back(
                    {i, VarId{v}, op.pre, op.post, move(prv_full)});
            }
        }
    }
    return table;
}

optional<VariableSolution> root_max_sequence(
    const Instance &inst, VarId v, span<const ExtendedOperator> ops) {
    const Value init = inst.init[v.index];
    const Value goal = inst.goal[v.index];
    const size_t n = inst.num_variables();
    optional<size_t> forward, backward;
    for (size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].pre == init && !forward)
            forward = i;
        else if (ops[i].pre != init && !backward)
            backward = i;
    }

    size_t changes = 0;
    ChangeBound bound;
    if (forward && backward) {
        changes = n;
        if (is_specified(goal) && (changes % 2 == 1) != (goal != init))
            --changes;
        bound = ChangeBound::infinite();
    } else {
        if (!is_specified(goal))
            changes = forward ? 1 : 0;
        else if (goal != init) {
            if (!forward)
                return nullopt;
            changes = 1;
        }
        bound = ChangeBound::finite(changes);
    }

    VariableSolution sol{bound, alternating_sequence(v, changes + 1), {}};
    for (size_t p = 2; p <= changes + 1; ++p) {
        size_t op = color_at_position(p - 1) == Color::black ? *forward
                                                             : *backward;
        sol.gamma.push_back(
            {IndexedValue::at_position(v, p), op, ops[op].base, {}});
    }
    return sol;
}

ForwardCheckResult forward_check(const Instance &inst,
                                 const PlannerOptions &options) {
    return forward_check(inst, build_causal_graph(inst), options);
}

ForwardCheckResult forward_check(const Instance &inst, const CausalGraph &g,
                                 const PlannerOptions &options) {
    StructureReport report = classify(g);
    if (!report.is_polytree)
        throw UnsupportedStructure("causal graph is not a polytree");

    ForwardCheckResult fc;
    fc.graph = g;
    fc.ext = compile_extended_ops(inst, g, options);
    fc.topo_order = *report.topo_order;
    fc.solutions.resize(inst.num_variables());

    for (VarId v : fc.topo_order) {
        const vector<VarId> &parents = g.pred(v);
        optional<VariableSolution> sol;
        if (parents.empty()) {
            sol = root_max_sequence(inst, v, fc.ext[v]);
        } else {
            MaxSequenceInput input;
            input.var = v;
            input.n = inst.num_variables();
            input.initial = inst.init[v.index];
            if (is_specified(inst.goal[v.index]))
                input.goal_color = color_of(inst.goal[v.index], input.initial);
            input.parents = parents;
            for (VarId w : parents) {
                input.parent_sequences.push_back(&fc.solutions[w.index].sigma);
                input.parent_initial.push_back(inst.init[w.index]);
            }
            sol = determine_max_sequence(inst, input, fc.ext[v]);
        }
        if (!sol) {
            fc.failed_var = v;
            return fc;
        }
        fc.solutions[v.index] = move(*sol);
    }
    return fc;
}

PolytreePlanResult plan_polytree(const Instance &inst,
                                 const PlannerOptions &options) {
    vector<Violation> violations = validate_instance(inst);
    if (!violations.empty())
        throw invalid_argument(format_violations(violations));

    PolytreePlanResult result;
    CausalGraph g = build_causal_graph(inst);
    StructureReport report = classify(g);
    if (!report.is_polytree) {
        result.status = PlanStatus::unsupported_structure;
        result.message = report.is_dag ? "causal graph is not a polytree"
                                       : "causal graph is cyclic";
        return result;
    }

    ForwardCheckResult fc;
    try {
        fc = forward_check(inst, g, options);
    } catch (const IndegreeCapExceeded &e) {
        result.status = PlanStatus::unsupported_structure;
        result.message = e.what();
        return result;
    }
    if (!fc.success()) {
        result.status = PlanStatus::unsolvable;
        result.failed_var = fc.failed_var;
        result.message = "no feasible value sequence for variable " +
                         inst.variables[fc.failed_var->index];
        return result;
    }

    PopResult pop = pop_pcg(inst, fc);
    result.plan = linearize(pop.plan);
    if (!execute_plan(inst, result.plan).solves())
        throw logic_error("polytree planner produced an invalid plan");
    result.status = PlanStatus::solved;
    return result;
}

Instance normalize_tree_postunique(const Instance &inst) {
    if (!classify(build_causal_graph(inst)).is_directed_tree)
        throw NotATree("causal graph is not a directed tree");

    Instance current = inst;
    bool changed = true;
    while (changed) {
        changed = false;
        vector<Operator> result;
        vector<bool> emitted(current.operators.size(), false);

        for (size_t i = 0; i < current.operators.size(); ++i) {
            const Operator &op = current.operators[i];
            if (emitted[i])
                continue;
            vector<size_t> same;
            for (size_t j = i; j < current.operators.size(); ++j) {
                const Operator &other_op = current.operators[j];
                if (other_op.var == op.var && other_op.pre == op.pre)
                    same.push_back(j);
            }
            for (size_t j : same)
                emitted[j] = true;

            auto unconditioned = find_if(same.begin(), same.end(), [&](size_t j) {
                return current.operators[j].prv.empty();
            });
            if (unconditioned != same.end()) {
                result.push_back(current.operators[*unconditioned]);
                if (same.size() > 1)
                    changed = true;
                continue;
            }
            // All operators in the group condition on the single parent.
            optional<size_t> on_zero, on_one;
            for (size_t j : same) {
                Value value = current.operators[j].prv.front().value;
                auto &slot = value == Value::zero ? on_zero : on_one;
                if (!slot)
                    slot = j;
            }
            if (on_zero && on_one) {
                Operator merged = current.operators[min(*on_zero, *on_one)];
                merged.name = current.operators[*on_zero].name + "|" +
                              current.operators[*on_one].name;
                merged.prv.clear();
                result.push_back(move(merged));
                changed = true;
            } else {
                result.push_back(current.operators[same.front()]);
                if (same.size() > 1)
                    changed = true;
            }
        }
        current.operators = move(result);
    }
    return current;
}

} // namespace causal_strips
