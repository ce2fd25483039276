#ifndef CAUSAL_STRIPS_MODEL_H
#define CAUSAL_STRIPS_MODEL_H

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace causal_strips {

// Propositional value with the extra "unspecified" marker used by partial
// assignments (goals, prevail conditions).
enum class Value : std::uint8_t { zero, one, unspecified };

Value complement(Value value);
bool is_specified(Value value);
char to_char(Value value);
Value value_from_bool(bool bit);

struct VarId {
    std::size_t index = 0;

    auto operator<=>(const VarId &) const = default;
};

using OpIndex = std::size_t;

struct Condition {
    VarId var;
    Value value = Value::unspecified;

    auto operator<=>(const Condition &) const = default;
};

/*
  Unary operator: changes `var` from `pre` to `post` and requires the
  prevail conditions `prv` on other variables. `prv` is kept sorted by
  variable.
*/
struct Operator {
    std::string name;
    VarId var;
    Value pre = Value::zero;
    Value post = Value::one;
    std::vector<Condition> prv;

    Value prevail_on(VarId v) const;
    bool operator==(const Operator &) const = default;
};

struct Instance {
    std::vector<std::string> variables;
    std::vector<Operator> operators;
    std::vector<Value> init;
    // Same length as `variables`; unspecified entries are unconstrained.
    std::vector<Value> goal;

    std::size_t num_variables() const {
        return variables.size();
    }
    std::optional<VarId> find_variable(const std::string &name) const;
    std::optional<OpIndex> find_operator(const std::string &name) const;
    std::vector<OpIndex> operators_on(VarId var) const;

    bool operator==(const Instance &) const = default;
};

// Full assignment. Never holds Value::unspecified.
class State {
    std::vector<Value> values;
public:
    State() = default;
    explicit State(std::vector<Value> values);

    static State initial(const Instance &inst);

    Value operator[](VarId var) const {
        return values[var.index];
    }
    void set(VarId var, Value value);
    std::size_t size() const {
        return values.size();
    }
    const std::vector<Value> &data() const {
        return values;
    }
    bool satisfies(const std::vector<Value> &partial) const;
    bool satisfies(const std::vector<Condition> &conditions) const;

    bool operator==(const State &) const = default;
};

using Plan = std::vector<OpIndex>;

struct Violation {
    std::string where;
    std::string message;
};

std::vector<Violation> validate_instance(const Instance &inst);
std::string format_violations(const std::vector<Violation> &violations);

enum class ApplyFailure { precondition_unsatisfied, prevail_unsatisfied };

struct ApplyError {
    ApplyFailure kind;
    VarId var;
};

std::string describe(const ApplyError &error, const Instance &inst);

class OperatorNotApplicable : public std::runtime_error {
public:
    ApplyError error;
    OperatorNotApplicable(const ApplyError &error, const std::string &what)
        : std::runtime_error(what), error(error) {
    }
};

std::optional<ApplyError> applicability_error(
    const State &state, const Operator &op);

// Throws OperatorNotApplicable.
State apply_operator(const State &state, const Operator &op);

struct StepFailure {
    std::size_t step;
    ApplyError error;
};

struct ExecutionResult {
    State final_state;
    std::optional<StepFailure> failure;
    bool goal_satisfied = false;

    bool executes() const {
        return !failure.has_value();
    }
    bool solves() const {
        return executes() && goal_satisfied;
    }
};

ExecutionResult execute_plan(const Instance &inst, const Plan &plan);

std::size_t count_value_changes(
    const Instance &inst, const Plan &plan, VarId var);

enum class IrreducibilityMode { single_removal, full_subset };

inline constexpr std::size_t default_irreducibility_cap = 15;

class PlanTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requires `plan` to solve `inst` (throws std::invalid_argument otherwise).
// Full-subset mode throws PlanTooLarge above `cap` actions.
bool check_irreducible(
    const Instance &inst, const Plan &plan, IrreducibilityMode mode,
    std::size_t cap = default_irreducibility_cap);

// SAS-style global restrictions.
bool is_post_unique(const Instance &inst);
bool is_single_valued(const Instance &inst);

// Partial-order plans.

enum class ActionKind { start, end, step };

struct PlanAction {
    ActionKind kind = ActionKind::step;
    VarId var;
    // Position of the produced value on the variable's maximal sequence
    // (1 for start actions, 0 for end actions).
    std::size_t occurrence = 0;
    std::optional<OpIndex> op;
    std::string name;
    // Value written to `var`; unspecified for end actions.
    Value effect = Value::unspecified;
    // Every value the action consumes: the precondition on `var` (for end
    // actions: the goal value) and the prevail conditions.
    std::vector<Condition> consumes;
};

struct CausalLink {
    std::size_t producer;
    std::size_t consumer;
    Condition value;

    bool operator==(const CausalLink &) const = default;
};

struct PartialPlan {
    std::vector<PlanAction> actions;
    std::vector<std::pair<std::size_t, std::size_t>> ordering;
    std::vector<CausalLink> links;

    std::size_t add_action(PlanAction action);
    void add_ordering(std::size_t before, std::size_t after);
};

class OrderingCycle : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Total order extending the ordering constraints; ready actions are taken
// by lowest (variable, occurrence, name, insertion index). Dummy start/end
// actions are dropped. Throws OrderingCycle.
Plan linearize(const PartialPlan &pp);

bool ordering_is_consistent(const PartialPlan &pp);

struct Threat {
    std::size_t action;
    std::size_t link;

    bool operator==(const Threat &) const = default;
};

std::vector<Threat> find_threats(const PartialPlan &pp);

} // namespace causal_strips

#endif
