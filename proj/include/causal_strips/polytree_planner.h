#ifndef CAUSAL_STRIPS_POLYTREE_PLANNER_H
#define CAUSAL_STRIPS_POLYTREE_PLANNER_H

#include "causal_graph.h"
#include "model.h"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace causal_strips {

// Black is the variable's initial value, white its complement.
enum class Color : std::uint8_t { black, white };

Color other(Color color);
Color color_of(Value value, Value initial);
Value value_of(Color color, Value initial);
// Color of the p-th element (1-based) of an alternating sequence.
Color color_at_position(std::size_t position);

/*
  The i-th appearance (occurrence) of a color on a variable's maximal
  sequence. Positions on the sequence map as b^j <-> 2j-1, w^j <-> 2j.
*/
struct IndexedValue {
    VarId var;
    Color color = Color::black;
    std::size_t occurrence = 1;

    static IndexedValue at_position(VarId var, std::size_t position);
    std::size_t position() const;
    std::string to_string() const;

    auto operator<=>(const IndexedValue &) const = default;
};

// An operator whose prevail condition assigns every causal-graph parent of
// its variable. `prv_full` is sorted by variable and lists exactly the
// parents.
struct ExtendedOperator {
    OpIndex base;
    VarId var;
    Value pre = Value::zero;
    Value post = Value::one;
    std::vector<Condition> prv_full;

    bool operator==(const ExtendedOperator &) const = default;
};

struct PlannerOptions {
    // Indegrees above this are accepted but reported through
    // ExtendedOperatorTable::indegree_warning.
    std::size_t indegree_warn = 8;
    // Hard limit; compile_extended_ops throws IndegreeCapExceeded above it.
    std::optional<std::size_t> indegree_cap;
};

class IndegreeCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExtendedOperatorTable {
    std::vector<std::vector<ExtendedOperator>> per_var;
    std::size_t max_indegree = 0;
    bool indegree_warning = false;

    const std::vector<ExtendedOperator> &operator[](VarId v) const {
        return per_var[v.index];
    }
};

ExtendedOperatorTable compile_extended_ops(
    const Instance &inst, const CausalGraph &g,
    const PlannerOptions &options = {});

// Feasible number of value changes a plan may ask of a variable.
struct ChangeBound {
    bool unbounded = false;
    std::size_t value = 0;

    static ChangeBound finite(std::size_t k) {
        return {false, k};
    }
    static ChangeBound infinite() {
        return {true, 0};
    }
    std::string to_string() const;
    bool operator==(const ChangeBound &) const = default;
};

struct MaximalSequence {
    VarId var;
    std::vector<IndexedValue> entries;

    std::size_t changes() const {
        return entries.empty() ? 0 : entries.size() - 1;
    }
    std::string to_string() const;
};

MaximalSequence alternating_sequence(VarId var, std::size_t length);

// One scheduled value change: `target` is the produced sequence element,
// `op` indexes the variable's extended-operator list, `prv_indexed` holds
// the parents' sequence elements the change is synchronised with (aligned
// with the sorted parent list).
struct OperatorInstance {
    IndexedValue target;
    std::size_t op;
    OpIndex base;
    std::vector<IndexedValue> prv_indexed;

    bool operator==(const OperatorInstance &) const = default;
};

struct VariableSolution {
    ChangeBound bound;
    MaximalSequence sigma;
    std::vector<OperatorInstance> gamma;
};

// Root variables (no parents): case analysis on initial/goal value and the
// available directions. Unbounded alternation is materialised as n changes,
// one fewer when needed to end on the goal color. nullopt = unsolvable.
std::optional<VariableSolution> root_max_sequence(
    const Instance &inst, VarId v, std::span<const ExtendedOperator> ops);

// Chain of value nodes for a variable with parents; edges connect
// consecutive nodes, one per extended operator with the matching
// precondition color, labelled by the operator's parent assignment.
struct ChainEdge {
    std::size_t from = 0;  // 1-based node position; edge goes to from + 1
    std::size_t op = 0;    // index into the variable's extended operators
    std::vector<Condition> label;
};

struct TransitionChain {
    VarId var;
    std::vector<IndexedValue> nodes;
    std::vector<ChainEdge> edges;
};

// Number of chain nodes: n when the goal is unspecified, otherwise the
// largest m <= n whose last node has the goal color.
std::size_t chain_length(std::size_t n, std::optional<Color> goal_color);

TransitionChain build_transition_chain(
    VarId v, std::size_t n, std::optional<Color> goal_color, Value initial,
    std::span<const ExtendedOperator> ops);

enum class ProjectedEdgeKind { source, transition, target };

struct ProjectedEdge {
    ProjectedEdgeKind kind = ProjectedEdgeKind::transition;
    // 0 denotes the dummy source node, nodes.size() + 1 the dummy target.
    std::size_t from = 0;
    std::size_t to = 0;
    std::size_t op = SIZE_MAX;
    std::vector<IndexedValue> label;
};

struct ProjectedChain {
    TransitionChain chain;
    std::vector<VarId> parents;
    std::vector<ProjectedEdge> edges;
};

struct ParentSequence {
    const MaximalSequence *sigma;
    Value initial;
    bool goal_specified;
};

ProjectedChain project_parent_sequences(
    const TransitionChain &chain, const std::vector<VarId> &parents,
    const std::vector<ParentSequence> &parent_sequences);

// Nodes are the projected chain's edges; arc (e, e') iff e' leaves the node
// e enters and no parent label moves backwards on its sequence.
struct EdgeGraph {
    std::vector<ProjectedEdge> nodes;
    std::vector<std::vector<std::size_t>> arcs;

    std::size_t num_arcs() const;
};

EdgeGraph build_edge_graph(const ProjectedChain &pc);

// Longest path from the source-edge node of an explicitly built edge graph
// to a node entering a value of the goal color (any value when the goal is
// unspecified). Ties go to the lexicographically smallest sequence of
// (operator name, parent occurrences). nullopt = no admissible endpoint.
std::optional<VariableSolution> longest_edge_graph_path(
    const Instance &inst, VarId v, const EdgeGraph &graph,
    std::span<const ExtendedOperator> ops, std::optional<Color> goal_color);

struct MaxSequenceInput {
    VarId var;
    std::size_t n;
    Value initial;
    std::optional<Color> goal_color;
    std::vector<VarId> parents;
    std::vector<const MaximalSequence *> parent_sequences;
    std::vector<Value> parent_initial;
};

class SearchTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Longest admissible path through the edge graph, evaluated without
// materialising its arcs: feasibility of the remaining steps is tabulated
// over the grid of parent positions. Same tie-break as
// longest_edge_graph_path. nullopt = unsolvable.
std::optional<VariableSolution> determine_max_sequence(
    const Instance &inst, const MaxSequenceInput &input,
    std::span<const ExtendedOperator> ops);

struct ForwardCheckResult {
    CausalGraph graph;
    ExtendedOperatorTable ext;
    std::vector<VarId> topo_order;
    std::vector<VariableSolution> solutions;
    std::optional<VarId> failed_var;

    bool success() const {
        return !failed_var.has_value();
    }
    const VariableSolution &operator[](VarId v) const {
        return solutions[v.index];
    }
};

class UnsupportedStructure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requires a polytree causal graph (throws UnsupportedStructure).
ForwardCheckResult forward_check(
    const Instance &inst, const PlannerOptions &options = {});
ForwardCheckResult forward_check(
    const Instance &inst, const CausalGraph &g,
    const PlannerOptions &options = {});

struct PopStats {
    std::size_t agenda_items = 0;
    // Items whose resolution inserted a new action into the plan.
    std::size_t establishing_items = 0;
};

struct PopResult {
    PartialPlan plan;
    PopStats stats;
};

// Backtrack-free partial-order construction over a successful forward
// check. Throws std::logic_error on internal inconsistency.
PopResult pop_pcg(const Instance &inst, const ForwardCheckResult &fc);

enum class PlanStatus { solved, unsolvable, unsupported_structure };

struct PolytreePlanResult {
    PlanStatus status = PlanStatus::unsolvable;
    Plan plan;
    std::optional<VarId> failed_var;
    std::string message;
};

PolytreePlanResult plan_polytree(
    const Instance &inst, const PlannerOptions &options = {});

class NotATree : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Merges operator pairs that differ only in complementary values of the
// single parent into one prevail-free operator and drops operators made
// redundant by an unconditioned twin, until post-unique. Throws NotATree.
Instance normalize_tree_postunique(const Instance &inst);

} // namespace causal_strips

#endif
