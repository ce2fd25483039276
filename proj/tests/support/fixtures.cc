#include "support/fixtures.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <unistd.h>

using namespace std;

namespace test_support {

Operator op(const string &name, size_t var, int pre,
            vector<pair<size_t, int>> prv) {
    Operator result{name, VarId{var}, value_from_bool(pre),
                    value_from_bool(!pre), {}};
    for (auto [v, value] : prv)
        result.prv.push_back({VarId{v}, value_from_bool(value)});
    sort(result.prv.begin(), result.prv.end());
    return result;
}

Instance make_instance(size_t n, vector<Operator> ops, vector<int> init,
                       vector<int> goal) {
    Instance inst;
    for (size_t v = 0; v < n; ++v)
        inst.variables.push_back("v" + to_string(v));
    inst.operators = move(ops);
    for (int x : init)
        inst.init.push_back(value_from_bool(x));
    for (int x : goal)
        inst.goal.push_back(x < 0 ? Value::unspecified : value_from_bool(x));
    return inst;
}

Instance chain_instance() {
    Instance inst = make_instance(
        2, {op("set_x", 0, 0), op("set_y", 1, 0, {{0, 1}})}, {0, 0}, {-1, 1});
    inst.variables = {"x", "y"};
    return inst;
}

Instance random_instance_on_graph(const CausalGraph &g, double density,
                                  mt19937_64 &rng) {
    const size_t n = g.size();
    bernoulli_distribution coin(0.5), first(density), second(density / 2),
        mention(0.75);
    vector<Operator> ops;
    for (size_t v = 0; v < n; ++v) {
        const auto &parents = g.pred(VarId{v});
        const size_t begin = ops.size();
        for (int pre : {0, 1}) {
            int count = int(first(rng)) + int(second(rng));
            for (int k = 0; k < count; ++k) {
                vector<pair<size_t, int>> prv;
                for (VarId p : parents)
                    if (mention(rng))
                        prv.emplace_back(p.index, int(coin(rng)));
                ops.push_back(op("o" + to_string(v) + "_" + to_string(pre) +
                                     "_" + to_string(k),
                                 v, pre, prv));
            }
        }
        for (VarId p : parents) {
            bool used = false;
            for (size_t i = begin; i < ops.size(); ++i)
                used |= is_specified(ops[i].prevail_on(p));
            if (used)
                continue;
            int pre = coin(rng);
            ops.push_back(op("e" + to_string(v) + "_" + to_string(p.index),
                             v, pre, {{p.index, int(coin(rng))}}));
        }
    }
    vector<int> init(n), goal(n);
    for (size_t v = 0; v < n; ++v) {
        init[v] = coin(rng);
        goal[v] = coin(rng) ? int(coin(rng)) : -1;
    }
    return make_instance(n, move(ops), init, goal);
}

size_t brute_directed_paths(const CausalGraph &g, VarId from, VarId to) {
    if (from == to)
        return 1;
    size_t total = 0;
    for (VarId next : g.succ(from))
        total += brute_directed_paths(g, next, to);
    return total;
}

namespace {
size_t undirected_walks(const vector<vector<size_t>> &adj, size_t cur,
                        size_t to, vector<bool> &on_path) {
    if (cur == to)
        return 1;
    on_path[cur] = true;
    size_t total = 0;
    for (size_t next : adj[cur])
        if (!on_path[next])
            total += undirected_walks(adj, next, to, on_path);
    on_path[cur] = false;
    return total;
}

bool cycle_from(const CausalGraph &g, size_t v, vector<int> &state) {
    state[v] = 1;
    for (VarId w : g.succ(VarId{v})) {
        if (state[w.index] == 1)
            return true;
        if (state[w.index] == 0 && cycle_from(g, w.index, state))
            return true;
    }
    state[v] = 2;
    return false;
}
} // namespace

size_t brute_undirected_paths(const CausalGraph &g, VarId from, VarId to) {
    vector<vector<size_t>> adj(g.size());
    for (auto [a, b] : g.edges()) {
        adj[a.index].push_back(b.index);
        adj[b.index].push_back(a.index);
    }
    vector<bool> on_path(g.size(), false);
    return undirected_walks(adj, from.index, to.index, on_path);
}

bool brute_has_cycle(const CausalGraph &g) {
    vector<int> state(g.size(), 0);
    for (size_t v = 0; v < g.size(); ++v)
        if (state[v] == 0 && cycle_from(g, v, state))
            return true;
    return false;
}

CausalGraph random_dpsc_graph(size_t n, double p, mt19937_64 &rng) {
    vector<size_t> perm(n);
    iota(perm.begin(), perm.end(), 0);
    shuffle(perm.begin(), perm.end(), rng);
    vector<pair<size_t, size_t>> candidates;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            candidates.emplace_back(perm[i], perm[j]);
    shuffle(candidates.begin(), candidates.end(), rng);
    bernoulli_distribution take(p);
    CausalGraph g(n);
    for (auto [a, b] : candidates) {
        if (!take(rng))
            continue;
        CausalGraph trial = g;
        trial.add_edge(VarId{a}, VarId{b});
        bool single = true;
        for (size_t x = 0; x < n && single; ++x)
            for (size_t y = 0; y < n && single; ++y)
                single = brute_directed_paths(trial, VarId{x}, VarId{y}) <= 1;
        if (single)
            g = trial;
    }
    return g;
}

TempDir::TempDir() {
    string pattern =
        (filesystem::temp_directory_path() / "causal-strips-XXXXXX").string();
    if (!mkdtemp(pattern.data()))
        throw runtime_error("mkdtemp failed");
    root = pattern;
}

TempDir::~TempDir() {
    error_code ec;
    filesystem::remove_all(root, ec);
}

filesystem::path TempDir::write(const string &name, const string &text) const {
    filesystem::path path = root / name;
    ofstream(path) << text;
    return path;
}

} // namespace test_support
