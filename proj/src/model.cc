#include "causal_strips/model.h"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_set>

using namespace std;

namespace causal_strips {

Value complement(Value value) {
    switch (value) {
    case Value::zero:
        return Value::one;
    case Value::one:
        return Value::zero;
    default:
        return Value::unspecified;
    }
}

bool is_specified(Value value) {
    return value != Value::unspecified;
}

char to_char(Value value) {
    switch (value) {
    case Value::zero:
        return '0';
    case Value::one:
        return '1';
    default:
        return 'u';
    }
}

Value value_from_bool(bool bit) {
    return bit ? Value::one : Value::zero;
}

Value Operator::prevail_on(VarId v) const {
    for (const Condition &cond : prv)
        if (cond.var == v)
            return cond.value;
    return Value::unspecified;
}

optional<VarId> Instance::find_variable(const string &name) const {
    for (size_t i = 0; i < variables.size(); ++i)
        if (variables[i] == name)
            return VarId{i};
    return nullopt;
}

optional<OpIndex> Instance::find_operator(const string &name) const {
    for (size_t i = 0; i < operators.size(); ++i)
        if (operators[i].name == name)
            return i;
    return nullopt;
}

vector<OpIndex> Instance::operators_on(VarId var) const {
    vector<OpIndex> result;
    for (size_t i = 0; i < operators.size(); ++i)
        if (operators[i].var == var)
            result.push_back(i);
    return result;
}

State::State(vector<Value> values_)
    : values(move(values_)) {
    for (Value v : values)
        if (!is_specified(v))
            throw invalid_argument("a full state cannot contain unspecified values");
}

State State::initial(const Instance &inst) {
    return State(inst.init);
}

void State::set(VarId var, Value value) {
    if (!is_specified(value))
        throw invalid_argument("a full state cannot contain unspecified values");
    values.at(var.index) = value;
}

bool State::satisfies(const vector<Value> &partial) const {
    for (size_t i = 0; i < partial.size() && i < values.size(); ++i)
        if (is_specified(partial[i]) && partial[i] != values[i])
            return false;
    return true;
}

bool State::satisfies(const vector<Condition> &conditions) const {
    for (const Condition &cond : conditions)
        if (values.at(cond.var.index) != cond.value)
            return false;
    return true;
}

vector<Violation> validate_instance(const Instance &inst) {
    vector<Violation> out;
    const size_t n = inst.num_variables();
    auto add = [&out](string where, string message) {
        out.push_back({move(where), move(message)});
    };

    set<string> names;
    for (size_t i = 0; i < n; ++i) {
        const string where = "variables[" + to_string(i) + "]";
        if (inst.variables[i].empty())
            add(where, "variable name must be non-empty");
        else if (!names.insert(inst.variables[i]).second)
            add(where, "duplicate variable name '" + inst.variables[i] + "'");
    }

    if (inst.init.size() != n) {
        add("init", "initial state must assign every variable");
    } else {
        for (size_t i = 0; i < n; ++i)
            if (!is_specified(inst.init[i]))
                add("init." + inst.variables[i], "initial value must be specified");
    }
    if (inst.goal.size() != n)
        add("goal", "goal must have one entry per variable");

    set<string> op_names;
    for (size_t i = 0; i < inst.operators.size(); ++i) {
        const Operator &op = inst.operators[i];
        const string where = "operators[" + to_string(i) + "] '" + op.name + "'";
        if (op.name.empty())
            add(where, "operator name must be non-empty");
        else if (!op_names.insert(op.name).second)
            add(where, "duplicate operator name");
        if (op.var.index >= n) {
            add(where + ".var", "unknown variable index " + to_string(op.var.index));
            continue;
        }
        if (!is_specified(op.pre) || !is_specified(op.post))
            add(where + ".pre", "pre and post must be specified");
        else if (op.pre == op.post)
            add(where + ".post", "pre/post must differ");
        set<size_t> seen;
        for (const Condition &cond : op.prv) {
            if (cond.var.index >= n) {
                add(where + ".prv", "unknown variable index " + to_string(cond.var.index));
                continue;
            }
            const string &vname = inst.variables[cond.var.index];
            if (cond.var == op.var)
                add(where + ".prv." + vname,
                    "prevail condition mentions the affected variable");
            if (!is_specified(cond.value))
                add(where + ".prv." + vname, "prevail value must be specified");
            if (!seen.insert(cond.var.index).second)
                add(where + ".prv." + vname, "duplicate prevail variable");
        }
        if (!is_sorted(op.prv.begin(), op.prv.end(),
                       [](const Condition &a, const Condition &b) {
                           return a.var < b.var;
                       }))
            add(where + ".prv", "prevail conditions must be sorted by variable");
    }
    return out;
}

string format_violations(const vector<Violation> &violations) {
    ostringstream out;
    for (const Violation &v : violations)
        out << v.where << ": " << v.message << "\n";
    return out.str();
}

string describe(const ApplyError &error, const Instance &inst) {
    const string var = error.var.index < inst.num_variables()
        ? inst.variables[error.var.index] : to_string(error.var.index);
    if (error.kind == ApplyFailure::precondition_unsatisfied)
        return "precondition unsatisfied on " + var;
    return "prevail condition unsatisfied on " + var;
}

optional<ApplyError> applicability_error(const State &state, const Operator &op) {
    if (state[op.var] != op.pre)
        return ApplyError{ApplyFailure::precondition_unsatisfied, op.var};
    for (const Condition &cond : op.prv)
        if (state[cond.var] != cond.value)
            return ApplyError{ApplyFailure::prevail_unsatisfied, cond.var};
    return nullopt;
}

State apply_operator(const State &state, const Operator &op) {
    if (auto error = applicability_error(state, op)) {
        const char *what = error->kind == ApplyFailure::precondition_unsatisfied
            ? "precondition unsatisfied" : "prevail condition unsatisfied";
        throw OperatorNotApplicable(*error, string(what) + " for " + op.name);
    }
    State next = state;
    next.set(op.var, op.post);
    return next;
}

ExecutionResult execute_plan(const Instance &inst, const Plan &plan) {
    ExecutionResult result{State::initial(inst), nullopt, false};
    for (size_t step = 0; step < plan.size(); ++step) {
        const Operator &op = inst.operators.at(plan[step]);
        if (auto error = applicability_error(result.final_state, op)) {
            result.failure = StepFailure{step, *error};
            return result;
        }
        result.final_state.set(op.var, op.post);
    }
    result.goal_satisfied = result.final_state.satisfies(inst.goal);
    return result;
}

size_t count_value_changes(const Instance &inst, const Plan &plan, VarId var) {
    return count_if(plan.begin(), plan.end(), [&](OpIndex op) {
        return inst.operators.at(op).var == var;
    });
}

namespace {
bool subplan_solves(const Instance &inst, const Plan &plan, uint64_t keep_mask) {
    State state = State::initial(inst);
    for (size_t i = 0; i < plan.size(); ++i) {
        if (!(keep_mask >> i & 1))
            continue;
        const Operator &op = inst.operators[plan[i]];
        if (applicability_error(state, op))
            return false;
        state.set(op.var, op.post);
    }
    return state.satisfies(inst.goal);
}
} // namespace

bool check_irreducible(const Instance &inst, const Plan &plan,
                       IrreducibilityMode mode, size_t cap) {
    if (!execute_plan(inst, plan).solves())
        throw invalid_argument("irreducibility is only defined for valid plans");
    const size_t len = plan.size();
    if (mode == IrreducibilityMode::full_subset) {
        if (len > cap || len >= 63)
            throw PlanTooLarge("plan has " + to_string(len) +
                               " actions, full-subset check is capped at " +
                               to_string(cap));
        const uint64_t full = (uint64_t(1) << len) - 1;
        for (uint64_t mask = 0; mask < full; ++mask)
            if (subplan_solves(inst, plan, mask))
                return false;
        return true;
    }
    if (len >= 64) {
        // Masks do not fit; fall back to explicit copies.
        for (size_t skip = 0; skip < len; ++skip) {
            Plan reduced;
            for (size_t i = 0; i < len; ++i)
                if (i != skip)
                    reduced.push_back(plan[i]);
            if (execute_plan(inst, reduced).solves())
                return false;
        }
        return true;
    }
    const uint64_t full = (uint64_t(1) << len) - 1;
    for (size_t skip = 0; skip < len; ++skip)
        if (subplan_solves(inst, plan, full & ~(uint64_t(1) << skip)))
            return false;
    return true;
}

bool is_post_unique(const Instance &inst) {
    set<pair<size_t, Value>> effects;
    for (const Operator &op : inst.operators)
        if (!effects.insert({op.var.index, op.post}).second)
            return false;
    return true;
}

bool is_single_valued(const Instance &inst) {
    vector<Value> seen(inst.num_variables(), Value::unspecified);
    for (const Operator &op : inst.operators) {
        for (const Condition &cond : op.prv) {
            Value &slot = seen.at(cond.var.index);
            if (is_specified(slot) && slot != cond.value)
                return false;
            slot = cond.value;
        }
    }
    return true;
}

size_t PartialPlan::add_action(PlanAction action) {
    actions.push_back(move(action));
    return actions.size() - 1;
}

void PartialPlan::add_ordering(size_t before, size_t after) {
    ordering.emplace_back(before, after);
}

namespace {
vector<vector<size_t>> successor_lists(const PartialPlan &pp) {
    vector<vector<size_t>> succ(pp.actions.size());
    for (auto [before, after] : pp.ordering)
        succ.at(before).push_back(after);
    for (auto &list : succ) {
        sort(list.begin(), list.end());
        list.erase(unique(list.begin(), list.end()), list.end());
    }
    return succ;
}

// reach[a][b] iff a precedes b in the transitive closure. Requires acyclic.
vector<vector<bool>> transitive_closure(const PartialPlan &pp) {
    const size_t n = pp.actions.size();
    const auto succ = successor_lists(pp);
    vector<vector<bool>> reach(n, vector<bool>(n, false));
    for (size_t src = 0; src < n; ++src) {
        vector<size_t> stack(succ[src].begin(), succ[src].end());
        while (!stack.empty()) {
            size_t cur = stack.back();
            stack.pop_back();
            if (reach[src][cur])
                continue;
            reach[src][cur] = true;
            for (size_t next : succ[cur])
                if (!reach[src][next])
                    stack.push_back(next);
        }
    }
    return reach;
}
} // namespace

Plan linearize(const PartialPlan &pp) {
    const size_t n = pp.actions.size();
    const auto succ = successor_lists(pp);
    vector<size_t> indegree(n, 0);
    for (const auto &list : succ)
        for (size_t after : list)
            ++indegree[after];

    using Key = tuple<size_t, size_t, string, size_t>;
    auto key_of = [&pp](size_t a) {
        const PlanAction &act = pp.actions[a];
        return Key{act.var.index, act.occurrence, act.name, a};
    };
    priority_queue<Key, vector<Key>, greater<>> ready;
    for (size_t a = 0; a < n; ++a)
        if (indegree[a] == 0)
            ready.push(key_of(a));

    Plan plan;
    size_t emitted = 0;
    while (!ready.empty()) {
        const size_t a = get<3>(ready.top());
        ready.pop();
        ++emitted;
        const PlanAction &act = pp.actions[a];
        if (act.kind == ActionKind::step)
            plan.push_back(act.op.value());
        for (size_t next : succ[a])
            if (--indegree[next] == 0)
                ready.push(key_of(next));
    }
    if (emitted != n)
        throw OrderingCycle("ordering constraints are inconsistent (cycle among " +
                            to_string(n - emitted) + " actions)");
    return plan;
}

bool ordering_is_consistent(const PartialPlan &pp) {
    try {
        linearize(pp);
        return true;
    } catch (const OrderingCycle &) {
        return false;
    }
}

vector<Threat> find_threats(const PartialPlan &pp) {
    if (!ordering_is_consistent(pp))
        throw OrderingCycle("threat analysis requires a consistent ordering");
    const auto reach = transitive_closure(pp);
    vector<Threat> threats;
    for (size_t l = 0; l < pp.links.size(); ++l) {
        const CausalLink &link = pp.links[l];
        const Value negated = complement(link.value.value);
        for (size_t t = 0; t < pp.actions.size(); ++t) {
            if (t == link.producer || t == link.consumer)
                continue;
            const PlanAction &act = pp.actions[t];
            if (act.var != link.value.var || act.effect != negated)
                continue;
            // O + {p < t < c} is consistent unless it closes a cycle.
            const bool cyclic = reach[t][link.producer] ||
                reach[link.consumer][t] ||
                reach[link.consumer][link.producer];
            if (!cyclic)
                threats.push_back({t, l});
        }
    }
    return threats;
}

} // namespace causal_strips
