#ifndef CAUSAL_STRIPS_CAUSAL_GRAPH_H
#define CAUSAL_STRIPS_CAUSAL_GRAPH_H

#include "big_count.h"
#include "model.h"

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace causal_strips {

/*
  Edge p -> q iff some operator affecting q has a specified prevail value on
  p. Adjacency lists are sorted and duplicate-free.
*/
class CausalGraph {
    std::vector<std::vector<VarId>> predecessors;
    std::vector<std::vector<VarId>> successors;
public:
    CausalGraph() = default;
    explicit CausalGraph(std::size_t num_variables);

    static CausalGraph from_edges(
        std::size_t num_variables,
        const std::vector<std::pair<std::size_t, std::size_t>> &edges);

    void add_edge(VarId from, VarId to);

    std::size_t size() const {
        return predecessors.size();
    }
    const std::vector<VarId> &pred(VarId v) const {
        return predecessors[v.index];
    }
    const std::vector<VarId> &succ(VarId v) const {
        return successors[v.index];
    }
    std::size_t num_edges() const;
    std::vector<std::pair<VarId, VarId>> edges() const;

    bool operator==(const CausalGraph &) const = default;
};

CausalGraph build_causal_graph(const Instance &inst);

class CyclicGraphError : public std::runtime_error {
public:
    std::vector<VarId> cycle;
    CyclicGraphError(std::vector<VarId> cycle, const std::string &what)
        : std::runtime_error(what), cycle(std::move(cycle)) {
    }
};

// Kahn's algorithm, lowest variable index first among ready nodes.
// Throws CyclicGraphError naming one cycle.
std::vector<VarId> topological_order(const CausalGraph &g);

struct StructureReport {
    bool is_dag = false;
    // Every weak component is a directed path.
    bool is_chain = false;
    // Polytree with indegree <= 1.
    bool is_directed_tree = false;
    // Acyclic with an acyclic (forest) underlying undirected graph.
    bool is_polytree = false;
    // Directed-path singly connected: at most one directed path per pair.
    bool is_dpsc = false;
    // Maximum number of directed paths between an ordered pair of nodes,
    // counting the empty path from a node to itself. Present iff is_dag.
    std::optional<BigCount> delta;
    std::size_t max_indegree = 0;
    std::optional<std::vector<VarId>> topo_order;
};

StructureReport classify(const CausalGraph &g);

// rho[u][w] = number of distinct directed paths u -> w; rho[v][v] = 1.
struct PathCountMatrix {
    std::vector<std::vector<BigCount>> rho;

    const BigCount &operator()(VarId from, VarId to) const {
        return rho[from.index][to.index];
    }
};

// Throws CyclicGraphError.
PathCountMatrix count_paths(const CausalGraph &g);

struct BoundsReport {
    // Bound on required value changes via the successor recurrence,
    // evaluated leaves first.
    std::vector<BigCount> maxreq_recurrence;
    // Closed form 1 + sum of path counts to every other variable.
    std::vector<BigCount> maxreq_path_count;
    // Sum over variables of the per-variable bound.
    BigCount min_plan_size;
    // delta * n^2; equals n^2 for directed-path singly connected graphs.
    BigCount min_plan_size_delta;
    std::optional<std::size_t> dpsc_bound;
};

// Throws CyclicGraphError.
BoundsReport structural_bounds(const CausalGraph &g);

} // namespace causal_strips

#endif
