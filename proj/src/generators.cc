#include "causal_strips/generators.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

using namespace std;

namespace causal_strips {

namespace {
Operator make_op(string name, size_t var, Value pre,
                 vector<Condition> prv = {}) {
    sort(prv.begin(), prv.end());
    return {move(name), VarId{var}, pre, complement(pre), move(prv)};
}

Instance empty_instance(vector<string> names) {
    Instance inst;
    const size_t n = names.size();
    inst.variables = move(names);
    inst.init.assign(n, Value::zero);
    inst.goal.assign(n, Value::unspecified);
    return inst;
}
} // namespace

void validate_formula(const SatFormula &f) {
    for (size_t c = 0; c < f.clauses.size(); ++c) {
        const auto &clause = f.clauses[c];
        if (clause.empty() || clause.size() > 3)
            throw InvalidFormula("clause " + to_string(c + 1) +
                                 " must have 1 to 3 literals");
        for (int lit : clause)
            if (lit == 0 || size_t(abs(lit)) > f.num_vars)
                throw InvalidFormula("clause " + to_string(c + 1) +
                                     " has literal " + to_string(lit) +
                                     " out of range");
    }
}

SatFormula parse_dimacs(istream &in) {
    SatFormula f;
    bool header = false;
    size_t declared_clauses = 0;
    vector<int> current;
    string line;
    size_t line_no = 0;
    while (getline(in, line)) {
        ++line_no;
        istringstream ls(line);
        string first;
        if (!(ls >> first) || first[0] == 'c' || first[0] == '%')
            continue;
        if (first == "p") {
            string format;
            if (header || !(ls >> format >> f.num_vars >> declared_clauses) ||
                format != "cnf")
                throw InvalidFormula("line " + to_string(line_no) +
                                     ": malformed problem line");
            header = true;
            continue;
        }
        if (!header)
            throw InvalidFormula("line " + to_string(line_no) +
                                 ": clause before problem line");
        ls.clear();
        ls.str(line);
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                f.clauses.push_back(current);
                current.clear();
            } else {
                current.push_back(lit);
            }
        }
        if (!ls.eof())
            throw InvalidFormula("line " + to_string(line_no) +
                                 ": expected integer literals");
    }
    if (!header)
        throw InvalidFormula("missing problem line");
    if (!current.empty())
        f.clauses.push_back(current);
    if (f.clauses.size() != declared_clauses)
        throw InvalidFormula("problem line declares " +
                             to_string(declared_clauses) + " clauses, found " +
                             to_string(f.clauses.size()));
    validate_formula(f);
    return f;
}

string to_dimacs(const SatFormula &f) {
    ostringstream out;
    out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
    for (const auto &clause : f.clauses) {
        for (int lit : clause)
            out << lit << ' ';
        out << "0\n";
    }
    return out.str();
}

bool truth_table_satisfiable(const SatFormula &f) {
    if (f.num_vars > 24)
        throw invalid_argument("truth table limited to 24 variables");
    for (uint64_t a = 0; a < (uint64_t(1) << f.num_vars); ++a) {
        bool all = all_of(f.clauses.begin(), f.clauses.end(),
                          [&](const vector<int> &clause) {
                              return any_of(clause.begin(), clause.end(),
                                            [&](int lit) {
                                                bool x = (a >> (abs(lit) - 1)) & 1;
                                                return lit > 0 ? x : !x;
                                            });
                          });
        if (all)
            return true;
    }
    return false;
}

SatFormula random_formula(size_t num_vars, size_t num_clauses,
                          mt19937_64 &rng) {
    SatFormula f{num_vars, {}};
    uniform_int_distribution<size_t> width(1, 3);
    uniform_int_distribution<int> var(1, int(num_vars));
    bernoulli_distribution negate(0.5);
    for (size_t c = 0; c < num_clauses; ++c) {
        vector<int> clause;
        size_t k = width(rng);
        for (size_t i = 0; i < k; ++i) {
            int lit = var(rng);
            clause.push_back(negate(rng) ? -lit : lit);
        }
        f.clauses.push_back(move(clause));
    }
    return f;
}

Instance gen_sat_reduction(const SatFormula &f) {
    validate_formula(f);
    vector<string> names;
    for (size_t i = 1; i <= f.num_vars; ++i) {
        names.push_back("X" + to_string(i));
        names.push_back("nX" + to_string(i));
    }
    for (size_t j = 1; j <= f.clauses.size(); ++j)
        names.push_back("C" + to_string(j));
    Instance inst = empty_instance(move(names));
    inst.goal.assign(inst.num_variables(), Value::one);

    for (size_t i = 0; i < 2 * f.num_vars; ++i)
        inst.operators.push_back(
            make_op("set_" + inst.variables[i], i, Value::zero));
    for (size_t j = 0; j < f.clauses.size(); ++j) {
        const size_t c = 2 * f.num_vars + j;
        set<int> done;
        for (int lit : f.clauses[j]) {
            if (!done.insert(lit).second)
                continue;
            const size_t x = 2 * (abs(lit) - 1);
            Value pos = lit > 0 ? Value::one : Value::zero;
            string lit_name = lit > 0 ? inst.variables[x] : inst.variables[x + 1];
            inst.operators.push_back(make_op(
                "sat_" + inst.variables[c] + "_" + lit_name, c, Value::zero,
                {{VarId{x}, pos}, {VarId{x + 1}, complement(pos)}}));
        }
    }
    return inst;
}

Instance gen_exponential_chain(size_t n) {
    if (n == 0)
        throw invalid_argument("exponential chain needs n >= 1");
    vector<string> names;
    for (size_t i = 1; i <= n; ++i)
        names.push_back("v" + to_string(i));
    Instance inst = empty_instance(move(names));
    inst.goal.assign(n, Value::zero);
    inst.goal[n - 1] = Value::one;
    for (size_t i = 0; i < n; ++i) {
        vector<Condition> prv;
        for (size_t j = 0; j < i; ++j)
            prv.push_back({VarId{j}, j + 1 == i ? Value::one : Value::zero});
        const string name = "A" + to_string(i + 1);
        inst.operators.push_back(make_op(name, i, Value::zero, prv));
        inst.operators.push_back(make_op(name + "'", i, Value::one, prv));
    }
    return inst;
}

namespace {
vector<pair<size_t, size_t>> prufer_tree(size_t n, mt19937_64 &rng) {
    vector<pair<size_t, size_t>> edges;
    if (n < 2)
        return edges;
    uniform_int_distribution<size_t> node(0, n - 1);
    vector<size_t> seq(n - 2);
    for (size_t &x : seq)
        x = node(rng);
    vector<size_t> degree(n, 1);
    for (size_t x : seq)
        ++degree[x];
    set<size_t> leaves;
    for (size_t v = 0; v < n; ++v)
        if (degree[v] == 1)
            leaves.insert(v);
    for (size_t x : seq) {
        size_t leaf = *leaves.begin();
        leaves.erase(leaves.begin());
        edges.emplace_back(leaf, x);
        if (--degree[x] == 1)
            leaves.insert(x);
    }
    size_t a = *leaves.begin();
    size_t b = *next(leaves.begin());
    edges.emplace_back(a, b);
    return edges;
}

bool within_kappa(const vector<pair<size_t, size_t>> &arcs, size_t n,
                  size_t kappa) {
    vector<size_t> indegree(n, 0);
    for (auto [from, to] : arcs)
        if (++indegree[to] > kappa)
            return false;
    return true;
}

constexpr int orientation_attempts = 64;

vector<pair<size_t, size_t>> orient(const vector<pair<size_t, size_t>> &tree,
                                    size_t n, size_t kappa,
                                    mt19937_64 &rng) {
    bernoulli_distribution coin(0.5);
    for (int attempt = 0; attempt < orientation_attempts; ++attempt) {
        vector<pair<size_t, size_t>> arcs;
        for (auto [a, b] : tree)
            arcs.push_back(coin(rng) ? pair(a, b) : pair(b, a));
        if (within_kappa(arcs, n, kappa))
            return arcs;
    }

    // Orient away from a random root (indegree 1 everywhere), then reverse
    // edges at random where the bound allows.
    vector<vector<size_t>> adj(n);
    for (auto [a, b] : tree) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    uniform_int_distribution<size_t> node(0, n - 1);
    vector<pair<size_t, size_t>> arcs;
    vector<bool> seen(n, false);
    vector<size_t> stack{node(rng)};
    seen[stack.back()] = true;
    while (!stack.empty()) {
        size_t u = stack.back();
        stack.pop_back();
        for (size_t w : adj[u]) {
            if (!seen[w]) {
                seen[w] = true;
                arcs.emplace_back(u, w);
                stack.push_back(w);
            }
        }
    }
    vector<size_t> indegree(n, 0);
    for (auto [from, to] : arcs)
        ++indegree[to];
    for (auto &[from, to] : arcs) {
        if (coin(rng) && indegree[from] < kappa) {
            --indegree[to];
            ++indegree[from];
            swap(from, to);
        }
    }
    return arcs;
}
} // namespace

Instance gen_random_polytree(const RandomPolytreeParams &params) {
    const size_t n = params.n;
    if (n == 0)
        throw invalid_argument("random polytree needs n >= 1");
    if (params.kappa == 0 && n > 1)
        throw InfeasibleKappa("kappa must be at least 1");
    mt19937_64 rng(params.seed);

    vector<pair<size_t, size_t>> arcs =
        orient(prufer_tree(n, rng), n, params.kappa, rng);
    vector<vector<size_t>> parents(n);
    for (auto [from, to] : arcs)
        parents[to].push_back(from);
    for (auto &list : parents)
        sort(list.begin(), list.end());

    vector<string> names;
    for (size_t v = 0; v < n; ++v)
        names.push_back("v" + to_string(v));
    Instance inst = empty_instance(move(names));

    bernoulli_distribution coin(0.5);
    bernoulli_distribution first(min(1.0, max(0.0, params.density)));
    bernoulli_distribution second(min(1.0, max(0.0, params.density / 2)));
    bernoulli_distribution mention(0.75);
    for (size_t v = 0; v < n; ++v) {
        const size_t begin = inst.operators.size();
        size_t counter[2] = {0, 0};
        auto add = [&](Value pre, vector<Condition> prv) {
            size_t &k = counter[pre == Value::one];
            string name = "a" + to_string(v) + "_" + to_char(pre) +
                          to_char(complement(pre)) + "_" + to_string(k++);
            inst.operators.push_back(make_op(move(name), v, pre, move(prv)));
        };
        auto random_prv = [&]() {
            vector<Condition> prv;
            for (size_t p : parents[v])
                if (mention(rng))
                    prv.push_back({VarId{p}, value_from_bool(coin(rng))});
            return prv;
        };
        for (Value pre : {Value::zero, Value::one}) {
            int count = int(first(rng)) + int(second(rng));
            for (int i = 0; i < count; ++i)
                add(pre, random_prv());
        }
        // Keep every sampled parent edge in the causal graph.
        for (size_t p : parents[v]) {
            bool used = false;
            for (size_t o = begin; o < inst.operators.size(); ++o)
                if (is_specified(inst.operators[o].prevail_on(VarId{p})))
                    used = true;
            if (used)
                continue;
            Condition cond{VarId{p}, value_from_bool(coin(rng))};
            if (inst.operators.size() > begin) {
                uniform_int_distribution<size_t> pick(
                    begin, inst.operators.size() - 1);
                auto &prv = inst.operators[pick(rng)].prv;
                prv.push_back(cond);
                sort(prv.begin(), prv.end());
            } else {
                add(value_from_bool(coin(rng)), {cond});
            }
        }
    }

    for (size_t v = 0; v < n; ++v) {
        inst.init[v] = value_from_bool(coin(rng));
        if (coin(rng))
            inst.goal[v] = value_from_bool(coin(rng));
    }
    return inst;
}

CausalGraph random_dag(size_t n, double p, mt19937_64 &rng) {
    vector<size_t> perm(n);
    iota(perm.begin(), perm.end(), 0);
    shuffle(perm.begin(), perm.end(), rng);
    bernoulli_distribution edge(p);
    CausalGraph g(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (edge(rng))
                g.add_edge(VarId{perm[i]}, VarId{perm[j]});
    return g;
}

Instance fixture_valve() {
    // open = 1, on = 1, safe = 1
    enum { Sl, Sr, SCU, VLD, VL };
    Instance inst = empty_instance({"Sl", "Sr", "SCU", "VLD", "VL"});
    inst.init[SCU] = Value::one;
    inst.goal[VL] = Value::one;
    auto c = [](size_t var, int value) {
        return Condition{VarId{var}, value_from_bool(value)};
    };
    inst.operators = {
        make_op("VLD_open", VLD, Value::zero, {c(Sl, 1), c(Sr, 0)}),
        make_op("VLD_close", VLD, Value::one, {c(Sl, 0), c(Sr, 1)}),
        make_op("VL_off", VL, Value::one, {c(VLD, 0), c(SCU, 1)}),
        make_op("VL_on", VL, Value::zero, {c(VLD, 1), c(SCU, 1)}),
        make_op("VL_off_unsafe", VL, Value::one, {c(SCU, 0)}),
        make_op("Sl_on", Sl, Value::zero),
        make_op("Sl_off", Sl, Value::one),
        make_op("Sr_on", Sr, Value::zero),
        make_op("Sr_off", Sr, Value::one),
        make_op("SCU_safe", SCU, Value::zero),
        make_op("SCU_unsafe", SCU, Value::one),
    };
    return inst;
}

MaxSequenceInput WorkedExample::input() const {
    return {v, n, initial_v, goal_color, {u, w}, {&sigma_u, &sigma_w},
            {initial_u, initial_w}};
}

WorkedExample fixture_worked_example() {
    // All initial values are 0, so black = 0 and white = 1 everywhere.
    enum { U, W, V, X, Y };
    WorkedExample ex;
    ex.u = VarId{U};
    ex.w = VarId{W};
    ex.v = VarId{V};
    ex.initial_u = ex.initial_w = ex.initial_v = Value::zero;
    ex.sigma_u = alternating_sequence(ex.u, 2);
    ex.sigma_w = alternating_sequence(ex.w, 4);

    Instance inst = empty_instance({"u", "w", "v", "x", "y"});
    auto c = [](size_t var, int value) {
        return Condition{VarId{var}, value_from_bool(value)};
    };
    inst.operators = {
        make_op("A1", V, Value::zero, {c(U, 0), c(W, 1)}),
        make_op("A2", V, Value::one, {c(U, 0), c(W, 0)}),
        make_op("A3", V, Value::one, {c(U, 1), c(W, 1)}),
        make_op("U1", U, Value::zero),
        make_op("W1", W, Value::zero, {c(X, 0)}),
        make_op("W2", W, Value::one, {c(X, 0)}),
        make_op("W3", W, Value::zero, {c(X, 1)}),
        make_op("X1", X, Value::zero),
    };
    inst.goal[U] = inst.goal[W] = inst.goal[V] = inst.goal[X] = Value::one;
    for (OpIndex i = 0; i < 3; ++i) {
        const Operator &op = inst.operators[i];
        ex.ops.push_back({i, op.var, op.pre, op.post, op.prv});
    }
    ex.instance = move(inst);
    return ex;
}

Instance fixture_prop3() {
    enum { U, W, V };
    Instance inst = empty_instance({"u", "w", "v"});
    auto c = [](size_t var, int value) {
        return Condition{VarId{var}, value_from_bool(value)};
    };
    inst.operators = {
        make_op("u_up", U, Value::zero),
        make_op("u_down", U, Value::one),
        make_op("w_up", W, Value::zero),
        make_op("w_down", W, Value::one),
        make_op("v_up_1", V, Value::zero, {c(U, 0), c(W, 1)}),
        make_op("v_up_2", V, Value::zero, {c(U, 1), c(W, 0)}),
        make_op("v_down_1", V, Value::one, {c(U, 0), c(W, 0)}),
        make_op("v_down_2", V, Value::one, {c(U, 1), c(W, 1)}),
    };
    inst.goal[V] = Value::one;
    return inst;
}

} // namespace causal_strips
