#include "causal_strips/causal_graph.h"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

using namespace std;

namespace causal_strips {

CausalGraph::CausalGraph(size_t num_variables)
    : predecessors(num_variables), successors(num_variables) {
}

CausalGraph CausalGraph::from_edges(size_t num_variables,
                                    const vector<pair<size_t, size_t>> &edges) {
    CausalGraph g(num_variables);
    for (auto [from, to] : edges)
        g.add_edge(VarId{from}, VarId{to});
    return g;
}

void CausalGraph::add_edge(VarId from, VarId to) {
    auto insert_sorted = [](vector<VarId> &list, VarId v) {
        auto it = lower_bound(list.begin(), list.end(), v);
        if (it == list.end() || *it != v)
            list.insert(it, v);
    };
    insert_sorted(successors.at(from.index), to);
    insert_sorted(predecessors.at(to.index), from);
}

size_t CausalGraph::num_edges() const {
    size_t total = 0;
    for (const auto &list : successors)
        total += list.size();
    return total;
}

vector<pair<VarId, VarId>> CausalGraph::edges() const {
    vector<pair<VarId, VarId>> result;
    for (size_t u = 0; u < successors.size(); ++u)
        for (VarId w : successors[u])
            result.emplace_back(VarId{u}, w);
    return result;
}

CausalGraph build_causal_graph(const Instance &inst) {
    CausalGraph g(inst.num_variables());
    for (const Operator &op : inst.operators)
        for (const Condition &cond : op.prv)
            if (is_specified(cond.value) && cond.var != op.var)
                g.add_edge(cond.var, op.var);
    return g;
}

namespace {
struct TopoAttempt {
    vector<VarId> order;
    vector<bool> placed;
};

TopoAttempt kahn(const CausalGraph &g) {
    const size_t n = g.size();
    vector<size_t> indegree(n);
    priority_queue<size_t, vector<size_t>, greater<>> ready;
    for (size_t v = 0; v < n; ++v) {
        indegree[v] = g.pred(VarId{v}).size();
        if (indegree[v] == 0)
            ready.push(v);
    }
    TopoAttempt result{{}, vector<bool>(n, false)};
    while (!ready.empty()) {
        size_t v = ready.top();
        ready.pop();
        result.order.push_back(VarId{v});
        result.placed[v] = true;
        for (VarId w : g.succ(VarId{v}))
            if (--indegree[w.index] == 0)
                ready.push(w.index);
    }
    return result;
}

vector<VarId> extract_cycle(const CausalGraph &g, const vector<bool> &placed) {
    // Every unplaced node has an unplaced predecessor; walk back until a
    // node repeats.
    size_t start = 0;
    while (placed[start])
        ++start;
    vector<size_t> position(g.size(), SIZE_MAX);
    vector<VarId> walk;
    size_t cur = start;
    while (position[cur] == SIZE_MAX) {
        position[cur] = walk.size();
        walk.push_back(VarId{cur});
        for (VarId p : g.pred(VarId{cur})) {
            if (!placed[p.index]) {
                cur = p.index;
                break;
            }
        }
    }
    vector<VarId> cycle(walk.begin() + position[cur], walk.end());
    reverse(cycle.begin(), cycle.end());
    return cycle;
}

size_t find_root(vector<size_t> &parent, size_t x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

bool underlying_forest(const CausalGraph &g) {
    vector<size_t> parent(g.size());
    iota(parent.begin(), parent.end(), 0);
    set<pair<size_t, size_t>> undirected;
    for (auto [from, to] : g.edges())
        undirected.insert(minmax(from.index, to.index));
    for (auto [a, b] : undirected) {
        size_t ra = find_root(parent, a);
        size_t rb = find_root(parent, b);
        if (ra == rb)
            return false;
        parent[ra] = rb;
    }
    return true;
}
} // namespace

vector<VarId> topological_order(const CausalGraph &g) {
    TopoAttempt attempt = kahn(g);
    if (attempt.order.size() != g.size()) {
        vector<VarId> cycle = extract_cycle(g, attempt.placed);
        string text = "causal graph is cyclic:";
        for (VarId v : cycle)
            text += " " + std::to_string(v.index);
        throw CyclicGraphError(move(cycle), text);
    }
    return attempt.order;
}

PathCountMatrix count_paths(const CausalGraph &g) {
    const vector<VarId> order = topological_order(g);
    const size_t n = g.size();
    PathCountMatrix m;
    m.rho.assign(n, vector<BigCount>(n, 0));
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const size_t u = it->index;
        m.rho[u][u] = 1;
        for (VarId x : g.succ(*it))
            for (size_t w = 0; w < n; ++w)
                if (w != u)
                    m.rho[u][w] += m.rho[x.index][w];
    }
    return m;
}

StructureReport classify(const CausalGraph &g) {
    StructureReport report;
    for (size_t v = 0; v < g.size(); ++v)
        report.max_indegree = max(report.max_indegree, g.pred(VarId{v}).size());

    TopoAttempt attempt = kahn(g);
    report.is_dag = attempt.order.size() == g.size();
    if (!report.is_dag)
        return report;
    report.topo_order = attempt.order;

    const PathCountMatrix paths = count_paths(g);
    BigCount delta = 1;
    for (const auto &row : paths.rho)
        for (const BigCount &count : row)
            delta = max(delta, count);
    report.delta = delta;
    report.is_dpsc = delta == 1;
    report.is_polytree = underlying_forest(g);
    report.is_directed_tree = report.is_polytree && report.max_indegree <= 1;
    size_t max_outdegree = 0;
    for (size_t v = 0; v < g.size(); ++v)
        max_outdegree = max(max_outdegree, g.succ(VarId{v}).size());
    report.is_chain = report.is_directed_tree && max_outdegree <= 1;
    return report;
}

BoundsReport structural_bounds(const CausalGraph &g) {
    const vector<VarId> order = topological_order(g);
    const size_t n = g.size();
    BoundsReport report;

    report.maxreq_recurrence.assign(n, 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        BigCount bound = 1;
        for (VarId x : g.succ(*it))
            bound += report.maxreq_recurrence[x.index];
        report.maxreq_recurrence[it->index] = bound;
    }

    const PathCountMatrix paths = count_paths(g);
    report.maxreq_path_count.assign(n, 0);
    BigCount delta = 1;
    for (size_t i = 0; i < n; ++i) {
        BigCount bound = 1;
        for (size_t j = 0; j < n; ++j) {
            if (j != i)
                bound += paths.rho[i][j];
            delta = max(delta, paths.rho[i][j]);
        }
        report.maxreq_path_count[i] = bound;
    }

    report.min_plan_size = 0;
    for (size_t i = 0; i < n; ++i)
        report.min_plan_size += min(report.maxreq_recurrence[i],
                                    report.maxreq_path_count[i]);
    report.min_plan_size_delta = delta * n * n;
    if (delta == 1)
        report.dpsc_bound = n * n;
    return report;
}

} // namespace causal_strips
