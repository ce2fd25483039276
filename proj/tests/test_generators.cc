#include "causal_strips/causal_graph.h"
#include "causal_strips/generators.h"
#include "causal_strips/oracle.h"

#include <doctest.h>

#include <sstream>

using namespace causal_strips;

namespace {
const SatFormula f1{4, {{1, -2, 3}, {1, -2, 4}, {2, -3, -4}}};
}

TEST_CASE("DIMACS parsing") {
    std::istringstream in("c example\np cnf 4 3\n1 -2 3 0\n1 -2 4 0\n2 -3\n-4 0\n");
    SatFormula f = parse_dimacs(in);
    CHECK(f.num_vars == 4);
    CHECK(f.clauses == f1.clauses);

    std::istringstream round(to_dimacs(f1));
    CHECK(parse_dimacs(round).clauses == f1.clauses);

    std::istringstream wide("p cnf 4 1\n1 2 3 4 0\n");
    CHECK_THROWS_AS(parse_dimacs(wide), InvalidFormula);
    std::istringstream range("p cnf 2 1\n3 0\n");
    CHECK_THROWS_AS(parse_dimacs(range), InvalidFormula);
    std::istringstream count("p cnf 2 2\n1 0\n");
    CHECK_THROWS_AS(parse_dimacs(count), InvalidFormula);
    std::istringstream junk("p cnf 2 1\n1 x 0\n");
    CHECK_THROWS_AS(parse_dimacs(junk), InvalidFormula);
}

TEST_CASE("SAT reduction structure") {
    Instance inst = gen_sat_reduction(f1);
    CHECK(inst.num_variables() == 11);
    CHECK(validate_instance(inst).empty());
    StructureReport r = classify(build_causal_graph(inst));
    CHECK(r.is_dpsc);
    CHECK_FALSE(r.is_polytree);
    CHECK(r.max_indegree == 6);
    auto c1 = *inst.find_operator("sat_C1_nX2");
    CHECK(inst.operators[c1].prv ==
          std::vector<Condition>{{VarId{2}, Value::zero}, {VarId{3}, Value::one}});
}

TEST_CASE("SAT reduction solvability") {
    SearchResult single = bfs_shortest_plan(gen_sat_reduction({1, {{1}}}));
    REQUIRE(single.solvable());
    CHECK(single.plan.size() == 3);
    CHECK_FALSE(bfs_shortest_plan(gen_sat_reduction({1, {{1}, {-1}}})).solvable());
    CHECK(bfs_shortest_plan(gen_sat_reduction(f1)).solvable());

    std::mt19937_64 rng(3);
    for (int i = 0; i < 10; ++i) {
        SatFormula f = random_formula(3, 5, rng);
        CHECK(bfs_shortest_plan(gen_sat_reduction(f)).solvable() ==
              truth_table_satisfiable(f));
    }
}

TEST_CASE("exponential chain") {
    Instance inst = gen_exponential_chain(3);
    CHECK(inst.operators.size() == 6);
    CHECK(inst.operators[4].name == "A3");
    CHECK(inst.operators[4].prv ==
          std::vector<Condition>{{VarId{0}, Value::zero}, {VarId{1}, Value::one}});
    CHECK(inst.operators[5].name == "A3'");
    CHECK(inst.goal == std::vector<Value>{Value::zero, Value::zero, Value::one});
    StructureReport r = classify(build_causal_graph(inst));
    CHECK(build_causal_graph(inst).num_edges() == 3);
    CHECK(r.is_dag);
    CHECK(*classify(build_causal_graph(gen_exponential_chain(4))).delta == 4);
    CHECK(bfs_shortest_plan(gen_exponential_chain(4)).plan.size() == 15);
    CHECK_THROWS(gen_exponential_chain(0));
}

TEST_CASE("random polytrees") {
    Instance a = gen_random_polytree({6, 2, 0.7, 42});
    CHECK(a == gen_random_polytree({6, 2, 0.7, 42}));
    CHECK_FALSE(a == gen_random_polytree({6, 2, 0.7, 43}));
    CHECK(classify(build_causal_graph(a)).is_polytree);

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        for (std::size_t kappa : {1, 2, 3}) {
            Instance inst = gen_random_polytree({2 + seed % 12, kappa, 0.6, seed});
            CHECK(validate_instance(inst).empty());
            StructureReport r = classify(build_causal_graph(inst));
            CHECK(r.is_polytree);
            CHECK(r.max_indegree <= kappa);
            if (kappa == 1)
                CHECK(r.is_directed_tree);
            // Every tree edge survives into the causal graph.
            CHECK(build_causal_graph(inst).num_edges() == inst.num_variables() - 1);
        }
    }
    CHECK_THROWS_AS(gen_random_polytree({4, 0, 0.5, 1}), InfeasibleKappa);
    CHECK(gen_random_polytree({1, 0, 0.5, 1}).num_variables() == 1);
}

TEST_CASE("valve fixture") {
    Instance inst = fixture_valve();
    CHECK(validate_instance(inst).empty());
    StructureReport r = classify(build_causal_graph(inst));
    CHECK(r.is_polytree);
    CHECK(r.max_indegree == 2);
    SearchResult s = bfs_shortest_plan(inst);
    REQUIRE(s.solvable());
    CHECK(s.plan.size() == 3);
}

TEST_CASE("prop3 fixture") {
    Instance inst = fixture_prop3();
    CHECK_FALSE(is_post_unique(inst));
    CHECK_FALSE(is_single_valued(inst));
    StructureReport r = classify(build_causal_graph(inst));
    CHECK(r.is_polytree);
    CHECK_FALSE(r.is_directed_tree);
    CHECK(r.max_indegree == 2);
}

TEST_CASE("worked example fixture") {
    WorkedExample ex = fixture_worked_example();
    CHECK(ex.instance.num_variables() == ex.n);
    CHECK(ex.sigma_u.to_string() == "b1 w1");
    CHECK(ex.sigma_w.to_string() == "b1 w1 b2 w2");
    CHECK(ex.ops.size() == 3);
    CHECK(validate_instance(ex.instance).empty());
    CHECK(build_causal_graph(ex.instance).pred(ex.v) ==
          std::vector<VarId>{ex.u, ex.w});
}

TEST_CASE("random DAGs are acyclic") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i)
        CHECK(classify(random_dag(8, 0.5, rng)).is_dag);
}
