#ifndef CAUSAL_STRIPS_ORACLE_H
#define CAUSAL_STRIPS_ORACLE_H

#include "big_count.h"
#include "model.h"

#include <cstddef>
#include <optional>
#include <string>

namespace causal_strips {

inline constexpr std::size_t default_max_states = std::size_t(1) << 20;

enum class SearchStatus { solvable, unsolvable, budget_exceeded };

struct SearchResult {
    SearchStatus status = SearchStatus::unsolvable;
    // Shortest plan when solvable.
    Plan plan;
    std::size_t states_visited = 0;

    bool solvable() const {
        return status == SearchStatus::solvable;
    }
};

/*
  Breadth-first search over full states from the initial state. Successors
  are generated in operator-list order, so the returned plan is the first
  shortest plan in that order. Supports at most 64 variables.
*/
SearchResult bfs_shortest_plan(const Instance &inst,
                               std::size_t max_states = default_max_states);

// Number of distinct shortest plans (as operator sequences); nullopt when
// the instance is unsolvable or the budget is exceeded.
std::optional<BigCount> count_shortest_plans(
    const Instance &inst, std::size_t max_states = default_max_states);

enum class Agreement { agree, disagree, inconclusive };

struct CrossCheckReport {
    Agreement agreement = Agreement::inconclusive;
    bool oracle_solvable = false;
    bool other_solvable = false;
    // Set when the other planner supplied a plan.
    std::optional<bool> other_plan_valid;
    std::optional<std::size_t> oracle_length;
    std::optional<std::size_t> other_length;
    std::string detail;
};

// `other_plan` is the other planner's plan when it claims solvability,
// nullopt when it claims the instance unsolvable.
CrossCheckReport cross_check(const Instance &inst, const SearchResult &oracle,
                             const std::optional<Plan> &other_plan);

} // namespace causal_strips

#endif
