#include "causal_strips/generators.h"
#include "causal_strips/oracle.h"
#include "support/fixtures.h"

#include <doctest.h>

#include <functional>

using namespace causal_strips;

namespace {
std::vector<std::string> names(const Instance &inst, const Plan &plan) {
    std::vector<std::string> result;
    for (OpIndex i : plan)
        result.push_back(inst.operators[i].name);
    return result;
}

// Iterative deepening over operator sequences; independent of the BFS.
std::optional<std::size_t> shortest_by_deepening(const Instance &inst,
                                                 std::size_t limit) {
    std::function<bool(const State &, std::size_t)> search =
        [&](const State &s, std::size_t depth) {
            if (s.satisfies(inst.goal))
                return true;
            if (depth == 0)
                return false;
            for (const Operator &op : inst.operators)
                if (!applicability_error(s, op) &&
                    search(apply_operator(s, op), depth - 1))
                    return true;
            return false;
        };
    for (std::size_t d = 0; d <= limit; ++d)
        if (search(State::initial(inst), d))
            return d;
    return std::nullopt;
}
} // namespace

TEST_CASE("exponential chain has the expected unique shortest plan") {
    Instance inst = gen_exponential_chain(3);
    SearchResult r = bfs_shortest_plan(inst);
    REQUIRE(r.solvable());
    CHECK(names(inst, r.plan) ==
          std::vector<std::string>{"A1", "A2", "A1'", "A3", "A1", "A2'", "A1'"});
    CHECK(count_value_changes(inst, r.plan, VarId{0}) == 4);
    CHECK(count_shortest_plans(inst) == BigCount(1));
    CHECK(bfs_shortest_plan(gen_exponential_chain(2)).plan.size() == 3);
}

TEST_CASE("trivial and unsolvable instances") {
    Instance inst = test_support::chain_instance();
    inst.goal = {Value::unspecified, Value::zero};
    SearchResult trivial = bfs_shortest_plan(inst);
    CHECK(trivial.solvable());
    CHECK(trivial.plan.empty());

    SearchResult none = bfs_shortest_plan(gen_sat_reduction({1, {{1}, {-1}}}));
    CHECK(none.status == SearchStatus::unsolvable);
    CHECK(count_shortest_plans(gen_sat_reduction({1, {{1}, {-1}}})) ==
          std::nullopt);
}

TEST_CASE("budget") {
    SearchResult r = bfs_shortest_plan(gen_exponential_chain(6), 10);
    CHECK(r.status == SearchStatus::budget_exceeded);
    CHECK(r.states_visited > 10);
    CHECK_THROWS_AS(bfs_shortest_plan(gen_exponential_chain(65)),
                    std::invalid_argument);
}

TEST_CASE("shortest lengths match iterative deepening") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Instance inst = gen_random_polytree({5, 2, 0.8, seed});
        SearchResult r = bfs_shortest_plan(inst);
        auto depth = shortest_by_deepening(inst, 8);
        if (r.solvable() && r.plan.size() <= 8) {
            CHECK(depth == r.plan.size());
            CHECK(execute_plan(inst, r.plan).solves());
            CHECK(check_irreducible(inst, r.plan, IrreducibilityMode::full_subset));
        }
        if (!r.solvable())
            CHECK_FALSE(depth);
    }
}

TEST_CASE("shortest plan counts") {
    // Two independent switches: two orders.
    Instance inst = test_support::make_instance(
        2, {test_support::op("a", 0, 0), test_support::op("b", 1, 0)}, {0, 0},
        {1, 1});
    CHECK(count_shortest_plans(inst) == BigCount(2));
}

TEST_CASE("cross_check") {
    Instance inst = test_support::chain_instance();
    SearchResult oracle = bfs_shortest_plan(inst);
    CHECK(cross_check(inst, oracle, Plan{0, 1}).agreement == Agreement::agree);
    CrossCheckReport bad = cross_check(inst, oracle, std::nullopt);
    CHECK(bad.agreement == Agreement::disagree);
    CHECK(cross_check(inst, oracle, Plan{1}).agreement == Agreement::disagree);

    SearchResult exceeded;
    exceeded.status = SearchStatus::budget_exceeded;
    CHECK(cross_check(inst, exceeded, Plan{0, 1}).agreement ==
          Agreement::inconclusive);
}
