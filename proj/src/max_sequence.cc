#include "causal_strips/polytree_planner.h"

#include <algorithm>
#include <array>

using namespace std;

namespace causal_strips {

namespace {
// Grid cells and feasibility-table bytes above which the search gives up.
constexpr size_t max_grid_cells = size_t(1) << 26;
constexpr size_t max_table_bytes = size_t(1) << 28;

using TieKey = pair<const string *, vector<size_t>>;

bool key_less(const TieKey &a, const TieKey &b) {
    if (*a.first != *b.first)
        return *a.first < *b.first;
    return a.second < b.second;
}

vector<size_t> positions_of(const vector<IndexedValue> &label) {
    vector<size_t> result;
    result.reserve(label.size());
    for (const IndexedValue &iv : label)
        result.push_back(iv.position());
    return result;
}
} // namespace

size_t chain_length(size_t n, optional<Color> goal_color) {
    if (!goal_color || n == 0)
        return n;
    return color_at_position(n) == *goal_color ? n : n - 1;
}

TransitionChain build_transition_chain(
    VarId v, size_t n, optional<Color> goal_color, Value initial,
    span<const ExtendedOperator> ops) {
    TransitionChain chain;
    chain.var = v;
    const size_t eta = chain_length(n, goal_color);
    for (size_t p = 1; p <= eta; ++p)
        chain.nodes.push_back(IndexedValue::at_position(v, p));
    for (size_t from = 1; from < eta; ++from)
        for (size_t i = 0; i < ops.size(); ++i)
            if (color_of(ops[i].pre, initial) == color_at_position(from))
                chain.edges.push_back({from, i, ops[i].prv_full});
    return chain;
}

ProjectedChain project_parent_sequences(
    const TransitionChain &chain, const vector<VarId> &parents,
    const vector<ParentSequence> &parent_sequences) {
    if (parents.size() != parent_sequences.size())
        throw invalid_argument("parent list and sequences differ in size");
    ProjectedChain pc{chain, parents, {}};
    const size_t k = parents.size();

    ProjectedEdge source{ProjectedEdgeKind::source, 0, 1, SIZE_MAX, {}};
    for (const ParentSequence &ps : parent_sequences)
        source.label.push_back(ps.sigma->entries.front());
    pc.edges.push_back(move(source));

    for (const ChainEdge &edge : chain.edges) {
        // Candidate positions on each parent's sequence.
        vector<vector<IndexedValue>> choices(k);
        for (size_t i = 0; i < k; ++i) {
            const ParentSequence &ps = parent_sequences[i];
            Color wanted = color_of(edge.label[i].value, ps.initial);
            for (const IndexedValue &iv : ps.sigma->entries)
                if (iv.color == wanted)
                    choices[i].push_back(iv);
        }
        if (any_of(choices.begin(), choices.end(),
                   [](const auto &c) { return c.empty(); }))
            continue;
        vector<size_t> pick(k, 0);
        while (true) {
            ProjectedEdge pe{ProjectedEdgeKind::transition, edge.from,
                             edge.from + 1, edge.op, {}};
            for (size_t i = 0; i < k; ++i)
                pe.label.push_back(choices[i][pick[i]]);
            pc.edges.push_back(move(pe));
            size_t i = 0;
            while (i < k && ++pick[i] == choices[i].size())
                pick[i++] = 0;
            if (i == k)
                break;
        }
    }

    bool all_goals = all_of(parent_sequences.begin(), parent_sequences.end(),
                            [](const ParentSequence &ps) {
                                return ps.goal_specified;
                            });
    if (all_goals) {
        const size_t last = chain.nodes.size();
        ProjectedEdge target{ProjectedEdgeKind::target, last, last + 1,
                             SIZE_MAX, {}};
        for (const ParentSequence &ps : parent_sequences)
            target.label.push_back(ps.sigma->entries.back());
        pc.edges.push_back(move(target));
    }
    return pc;
}

size_t EdgeGraph::num_arcs() const {
    size_t total = 0;
    for (const auto &out : arcs)
        total += out.size();
    return total;
}

EdgeGraph build_edge_graph(const ProjectedChain &pc) {
    EdgeGraph graph{pc.edges, vector<vector<size_t>>(pc.edges.size())};
    const auto &nodes = graph.nodes;
    for (size_t a = 0; a < nodes.size(); ++a) {
        for (size_t b = 0; b < nodes.size(); ++b) {
            if (nodes[b].kind == ProjectedEdgeKind::source ||
                nodes[b].from != nodes[a].to)
                continue;
            bool monotone = true;
            for (size_t i = 0; i < nodes[a].label.size(); ++i)
                if (nodes[b].label[i].position() <
                    nodes[a].label[i].position())
                    monotone = false;
            if (monotone)
                graph.arcs[a].push_back(b);
        }
    }
    return graph;
}

optional<VariableSolution> longest_edge_graph_path(
    const Instance &inst, VarId v, const EdgeGraph &graph,
    span<const ExtendedOperator> ops, optional<Color> goal_color) {
    const auto &nodes = graph.nodes;
    auto source = find_if(nodes.begin(), nodes.end(), [](const auto &e) {
        return e.kind == ProjectedEdgeKind::source;
    });
    if (source == nodes.end())
        throw invalid_argument("edge graph has no source node");

    auto admissible = [&](const ProjectedEdge &e) {
        if (e.kind == ProjectedEdgeKind::target)
            return false;
        return !goal_color || color_at_position(e.to) == *goal_color;
    };

    // Arcs only go from chain position p to p + 1, so decreasing `from`
    // is a reverse topological order.
    vector<size_t> order(nodes.size());
    for (size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return nodes[a].from > nodes[b].from;
    });
    vector<long> best(nodes.size(), -1);
    for (size_t x : order) {
        if (admissible(nodes[x]))
            best[x] = 0;
        for (size_t y : graph.arcs[x])
            if (nodes[y].kind == ProjectedEdgeKind::transition && best[y] >= 0)
                best[x] = max(best[x], best[y] + 1);
    }

    size_t cur = source - nodes.begin();
    if (best[cur] < 0)
        return nullopt;
    const size_t length = best[cur];
    VariableSolution sol{ChangeBound::finite(length),
                         alternating_sequence(v, length + 1), {}};
    for (long remaining = best[cur]; remaining > 0; --remaining) {
        optional<size_t> pick;
        TieKey pick_key;
        for (size_t y : graph.arcs[cur]) {
            if (nodes[y].kind != ProjectedEdgeKind::transition ||
                best[y] != remaining - 1)
                continue;
            TieKey key{&inst.operators[ops[nodes[y].op].base].name,
                       positions_of(nodes[y].label)};
            if (!pick || key_less(key, pick_key)) {
                pick = y;
                pick_key = move(key);
            }
        }
        cur = *pick;
        const ProjectedEdge &e = nodes[cur];
        sol.gamma.push_back({IndexedValue::at_position(v, e.to), e.op,
                             ops[e.op].base, e.label});
    }
    return sol;
}

optional<VariableSolution> determine_max_sequence(
    const Instance &inst, const MaxSequenceInput &input,
    span<const ExtendedOperator> ops) {
    const size_t k = input.parents.size();
    vector<size_t> dims(k), strides(k);
    size_t cells = 1;
    for (size_t i = 0; i < k; ++i) {
        dims[i] = input.parent_sequences[i]->entries.size();
        strides[i] = cells;
        if (dims[i] == 0)
            throw invalid_argument("empty parent sequence");
        if (cells > max_grid_cells / dims[i])
            throw SearchTooLarge("parent position grid too large for variable " +
                                 inst.variables[input.var.index]);
        cells *= dims[i];
    }

    // Required parent colors and precondition color per operator.
    vector<vector<Color>> needs(ops.size(), vector<Color>(k));
    vector<Color> pre_color(ops.size());
    vector<vector<size_t>> by_color(2);
    for (size_t o = 0; o < ops.size(); ++o) {
        for (size_t i = 0; i < k; ++i)
            needs[o][i] = color_of(ops[o].prv_full[i].value,
                                   input.parent_initial[i]);
        pre_color[o] = color_of(ops[o].pre, input.initial);
        by_color[static_cast<size_t>(pre_color[o])].push_back(o);
    }

    // Earliest parent positions at or after `t` that satisfy op o's
    // prevail, as a grid index; SIZE_MAX when a parent runs out.
    auto next = [&](const vector<size_t> &pos, size_t t, size_t o) {
        size_t result = t;
        for (size_t i = 0; i < k; ++i) {
            if (color_at_position(pos[i]) == needs[o][i])
                continue;
            if (pos[i] + 1 > dims[i])
                return SIZE_MAX;
            result += strides[i];
        }
        return result;
    };
    auto decode = [&](size_t t) {
        vector<size_t> pos(k);
        for (size_t i = 0; i < k; ++i) {
            pos[i] = t / strides[i] % dims[i] + 1;
        }
        return pos;
    };

    const size_t eta = chain_length(input.n, input.goal_color);
    const size_t max_steps = eta == 0 ? 0 : eta - 1;

    // feasible[m][c][t]: m more changes are possible from parent positions
    // t when the next change has precondition color c.
    vector<array<vector<uint8_t>, 2>> feasible;
    feasible.push_back({vector<uint8_t>(cells, 1), vector<uint8_t>(cells, 1)});
    size_t bytes = 2 * cells;
    size_t reachable = 0;
    for (size_t m = 1; m <= max_steps; ++m) {
        bytes += 2 * cells;
        if (bytes > max_table_bytes)
            throw SearchTooLarge("feasibility table too large for variable " +
                                 inst.variables[input.var.index]);
        array<vector<uint8_t>, 2> layer{vector<uint8_t>(cells, 0),
                                        vector<uint8_t>(cells, 0)};
        vector<size_t> pos(k, 1);
        for (size_t t = 0; t < cells; ++t) {
            for (size_t c = 0; c < 2; ++c) {
                const auto &prev = feasible[m - 1][1 - c];
                for (size_t o : by_color[c]) {
                    size_t l = next(pos, t, o);
                    if (l != SIZE_MAX && prev[l]) {
                        layer[c][t] = 1;
                        break;
                    }
                }
            }
            for (size_t i = 0; i < k && ++pos[i] > dims[i]; ++i)
                pos[i] = 1;
        }
        bool start_ok = layer[0][0];
        feasible.push_back(move(layer));
        if (!start_ok)
            break;
        reachable = m;
    }

    size_t length = reachable;
    if (input.goal_color) {
        size_t parity = *input.goal_color == Color::white ? 1 : 0;
        if (length % 2 != parity) {
            if (length == 0)
                return nullopt;
            --length;
        }
    }

    VariableSolution sol{ChangeBound::finite(length),
                         alternating_sequence(input.var, length + 1), {}};
    size_t t = 0;
    for (size_t j = 0; j < length; ++j) {
        const size_t c = j % 2;
        const auto &rest = feasible[length - j - 1][1 - c];
        const vector<size_t> pos = decode(t);
        optional<size_t> pick;
        size_t pick_next = 0;
        TieKey pick_key;
        for (size_t o : by_color[c]) {
            size_t l = next(pos, t, o);
            if (l == SIZE_MAX || !rest[l])
                continue;
            TieKey key{&inst.operators[ops[o].base].name, decode(l)};
            if (!pick || key_less(key, pick_key)) {
                pick = o;
                pick_next = l;
                pick_key = move(key);
            }
        }
        if (!pick)
            throw logic_error("feasibility table inconsistent");
        t = pick_next;
        OperatorInstance inst_op{IndexedValue::at_position(input.var, j + 2),
                                 *pick, ops[*pick].base, {}};
        for (size_t i = 0; i < k; ++i)
            inst_op.prv_indexed.push_back(
                IndexedValue::at_position(input.parents[i], pick_key.second[i]));
        sol.gamma.push_back(move(inst_op));
    }
    return sol;
}

} // namespace causal_strips
