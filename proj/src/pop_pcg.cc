#include "causal_strips/polytree_planner.h"

#include <algorithm>
#include <deque>
#include <tuple>

using namespace std;

namespace causal_strips {

namespace {
struct AgendaItem {
    size_t position;  // required element of the variable's sequence
    size_t consumer;
};

class PopBuilder {
    const Instance &inst;
    const ForwardCheckResult &fc;
    PopResult result;
    // producers[v][p]: action producing the p-th sequence element of v.
    vector<vector<optional<size_t>>> producers;
    vector<vector<AgendaItem>> demands;
    vector<optional<size_t>> end_actions;
    // (v, p, c): c must precede the producer of v's p-th element, if any.
    vector<tuple<size_t, size_t, size_t>> deferred;

    size_t establish(VarId v, size_t position, deque<AgendaItem> &own) {
        auto &slot = producers[v.index].at(position);
        if (slot)
            return *slot;
        const VariableSolution &sol = fc[v];
        const OperatorInstance &step = sol.gamma.at(position - 2);
        const ExtendedOperator &ext = fc.ext[v].at(step.op);

        PlanAction action;
        action.kind = ActionKind::step;
        action.var = v;
        action.occurrence = position;
        action.op = step.base;
        action.name = inst.operators[step.base].name;
        action.effect = ext.post;
        action.consumes.push_back({v, ext.pre});
        for (const Condition &cond : ext.prv_full)
            action.consumes.push_back(cond);
        size_t id = result.plan.add_action(move(action));
        slot = id;
        ++result.stats.establishing_items;

        own.push_back({position - 1, id});
        for (const IndexedValue &iv : step.prv_indexed)
            demands[iv.var.index].push_back({iv.position(), id});
        return id;
    }

    void resolve(VarId v, const AgendaItem &item, deque<AgendaItem> &own,
                 bool prevail) {
        ++result.stats.agenda_items;
        size_t producer = establish(v, item.position, own);
        Value value = value_of(color_at_position(item.position),
                               inst.init[v.index]);
        result.plan.links.push_back({producer, item.consumer, {v, value}});
        result.plan.add_ordering(producer, item.consumer);
        if (prevail)
            deferred.emplace_back(v.index, item.position + 1, item.consumer);
    }

public:
    PopBuilder(const Instance &inst, const ForwardCheckResult &fc)
        : inst(inst), fc(fc) {
    }

    PopResult run() {
        const size_t n = inst.num_variables();
        producers.resize(n);
        demands.resize(n);
        end_actions.resize(n);
        for (size_t v = 0; v < n; ++v) {
            producers[v].resize(fc.solutions[v].sigma.entries.size() + 1);
            PlanAction start;
            start.kind = ActionKind::start;
            start.var = VarId{v};
            start.occurrence = 1;
            start.name = "start(" + inst.variables[v] + ")";
            start.effect = inst.init[v];
            producers[v][1] = result.plan.add_action(move(start));
        }
        for (size_t v = 0; v < n; ++v) {
            if (!is_specified(inst.goal[v]))
                continue;
            PlanAction end;
            end.kind = ActionKind::end;
            end.var = VarId{v};
            end.name = "end(" + inst.variables[v] + ")";
            end.consumes.push_back({VarId{v}, inst.goal[v]});
            end_actions[v] = result.plan.add_action(move(end));
            result.plan.add_ordering(*producers[v][1], *end_actions[v]);
        }

        for (auto it = fc.topo_order.rbegin(); it != fc.topo_order.rend();
             ++it)
            process(*it);

        for (auto [v, position, consumer] : deferred)
            if (position < producers[v].size() && producers[v][position])
                result.plan.add_ordering(consumer, *producers[v][position]);
        return move(result);
    }

    void process(VarId v) {
        const size_t len = fc[v].sigma.entries.size();
        deque<AgendaItem> own;
        size_t demanded = 1;
        for (const AgendaItem &item : demands[v.index])
            demanded = max(demanded, item.position);
        if (demanded > len)
            throw logic_error("prevail demand beyond the maximal sequence of " +
                              inst.variables[v.index]);

        for (const AgendaItem &item : demands[v.index])
            resolve(v, item, own, true);

        if (end_actions[v.index]) {
            Color goal = color_of(inst.goal[v.index], inst.init[v.index]);
            size_t position = demanded;
            if (color_at_position(position) != goal)
                ++position;
            if (position > len)
                throw logic_error("goal value of " + inst.variables[v.index] +
                                  " is not on its maximal sequence");
            resolve(v, {position, *end_actions[v.index]}, own, false);
        }

        while (!own.empty()) {
            AgendaItem item = own.front();
            own.pop_front();
            resolve(v, item, own, false);
        }
    }
};
} // namespace

PopResult pop_pcg(const Instance &inst, const ForwardCheckResult &fc) {
    if (!fc.success())
        throw logic_error("pop_pcg requires a successful forward check");
    return PopBuilder(inst, fc).run();
}

} // namespace causal_strips
