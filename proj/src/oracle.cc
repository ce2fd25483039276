#include "causal_strips/oracle.h"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

using namespace std;

namespace causal_strips {

namespace {
struct PackedOperator {
    uint64_t pre_mask = 0;
    uint64_t pre_bits = 0;
    uint64_t flip = 0;
};

struct PackedTask {
    uint64_t init = 0;
    uint64_t goal_mask = 0;
    uint64_t goal_bits = 0;
    vector<PackedOperator> ops;

    bool is_goal(uint64_t s) const {
        return (s & goal_mask) == goal_bits;
    }
    bool applicable(uint64_t s, const PackedOperator &op) const {
        return (s & op.pre_mask) == op.pre_bits;
    }
};

uint64_t bit(size_t v) {
    return uint64_t(1) << v;
}

PackedTask pack(const Instance &inst) {
    if (inst.num_variables() > 64)
        throw invalid_argument("search supports at most 64 variables");
    PackedTask task;
    for (size_t v = 0; v < inst.num_variables(); ++v) {
        if (inst.init[v] == Value::one)
            task.init |= bit(v);
        if (is_specified(inst.goal[v])) {
            task.goal_mask |= bit(v);
            if (inst.goal[v] == Value::one)
                task.goal_bits |= bit(v);
        }
    }
    for (const Operator &op : inst.operators) {
        PackedOperator p;
        auto require = [&](VarId var, Value value) {
            p.pre_mask |= bit(var.index);
            if (value == Value::one)
                p.pre_bits |= bit(var.index);
        };
        require(op.var, op.pre);
        for (const Condition &cond : op.prv)
            if (is_specified(cond.value))
                require(cond.var, cond.value);
        p.flip = bit(op.var.index);
        task.ops.push_back(p);
    }
    return task;
}

struct Parent {
    uint64_t state;
    size_t op;
    size_t depth;
};
} // namespace

SearchResult bfs_shortest_plan(const Instance &inst, size_t max_states) {
    const PackedTask task = pack(inst);
    SearchResult result;
    unordered_map<uint64_t, Parent> parent;
    parent.emplace(task.init, Parent{task.init, SIZE_MAX, 0});
    vector<uint64_t> frontier{task.init};
    optional<uint64_t> found;
    if (task.is_goal(task.init))
        found = task.init;

    while (!found && !frontier.empty()) {
        vector<uint64_t> next;
        for (uint64_t s : frontier) {
            const size_t depth = parent.at(s).depth;
            for (size_t o = 0; o < task.ops.size() && !found; ++o) {
                if (!task.applicable(s, task.ops[o]))
                    continue;
                uint64_t t = s ^ task.ops[o].flip;
                if (!parent.emplace(t, Parent{s, o, depth + 1}).second)
                    continue;
                if (parent.size() > max_states) {
                    result.status = SearchStatus::budget_exceeded;
                    result.states_visited = parent.size();
                    return result;
                }
                if (task.is_goal(t))
                    found = t;
                next.push_back(t);
            }
            if (found)
                break;
        }
        frontier = move(next);
    }

    result.states_visited = parent.size();
    if (!found) {
        result.status = SearchStatus::unsolvable;
        return result;
    }
    result.status = SearchStatus::solvable;
    for (uint64_t s = *found; s != task.init;) {
        const Parent &p = parent.at(s);
        result.plan.push_back(p.op);
        s = p.state;
    }
    reverse(result.plan.begin(), result.plan.end());
    return result;
}

optional<BigCount> count_shortest_plans(const Instance &inst,
                                        size_t max_states) {
    const PackedTask task = pack(inst);
    // Paths per state at the current layer; states seen in earlier layers
    // are excluded since they cannot lie on a shortest path again.
    unordered_map<uint64_t, BigCount> layer{{task.init, 1}};
    unordered_map<uint64_t, size_t> seen{{task.init, 0}};
    for (size_t depth = 0;; ++depth) {
        BigCount goal_paths = 0;
        for (const auto &[s, count] : layer)
            if (task.is_goal(s))
                goal_paths += count;
        if (goal_paths > 0)
            return goal_paths;
        if (layer.empty())
            return nullopt;

        unordered_map<uint64_t, BigCount> next;
        for (const auto &[s, count] : layer) {
            for (const PackedOperator &op : task.ops) {
                if (!task.applicable(s, op))
                    continue;
                uint64_t t = s ^ op.flip;
                auto [it, inserted] = seen.emplace(t, depth + 1);
                if (!inserted && it->second != depth + 1)
                    continue;
                next[t] += count;
                if (seen.size() > max_states)
                    return nullopt;
            }
        }
        layer = move(next);
    }
}

CrossCheckReport cross_check(const Instance &inst, const SearchResult &oracle,
                             const optional<Plan> &other_plan) {
    CrossCheckReport report;
    report.other_solvable = other_plan.has_value();
    if (other_plan) {
        report.other_length = other_plan->size();
        report.other_plan_valid = execute_plan(inst, *other_plan).solves();
    }
    if (oracle.status == SearchStatus::budget_exceeded) {
        report.agreement = Agreement::inconclusive;
        report.detail = "oracle exceeded its state budget";
        return report;
    }
    report.oracle_solvable = oracle.solvable();
    if (oracle.solvable())
        report.oracle_length = oracle.plan.size();

    if (report.oracle_solvable != report.other_solvable) {
        report.agreement = Agreement::disagree;
        report.detail = report.oracle_solvable
                            ? "oracle found a plan, other planner reported unsolvable"
                            : "oracle proved unsolvable, other planner returned a plan";
    } else if (report.other_plan_valid == false) {
        report.agreement = Agreement::disagree;
        report.detail = "other planner's plan does not solve the instance";
    } else {
        report.agreement = Agreement::agree;
    }
    return report;
}

} // namespace causal_strips
