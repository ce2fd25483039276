#ifndef CAUSAL_STRIPS_GENERATORS_H
#define CAUSAL_STRIPS_GENERATORS_H

#include "model.h"
#include "polytree_planner.h"

#include <cstddef>
#include <cstdint>
#include <istream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace causal_strips {

// Literal +i / -i refers to propositional variable i (1-based), negated
// when negative.
struct SatFormula {
    std::size_t num_vars = 0;
    std::vector<std::vector<int>> clauses;
};

class InvalidFormula : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

void validate_formula(const SatFormula &f);

// DIMACS CNF; clauses of 1-3 literals. Throws InvalidFormula.
SatFormula parse_dimacs(std::istream &in);
std::string to_dimacs(const SatFormula &f);

bool truth_table_satisfiable(const SatFormula &f);

SatFormula random_formula(std::size_t num_vars, std::size_t num_clauses,
                          std::mt19937_64 &rng);

/*
  Variables X1, nX1, ..., Xm, nXm, C1, ..., Cn. All false initially, all
  true in the goal. Literal variables flip freely; clause Cj can be set
  under any of its literals' value pairs.
*/
Instance gen_sat_reduction(const SatFormula &f);

// 2n operators whose unique shortest plan has length 2^n - 1.
Instance gen_exponential_chain(std::size_t n);

class InfeasibleKappa : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RandomPolytreeParams {
    std::size_t n = 6;
    std::size_t kappa = 2;
    double density = 0.7;
    std::uint64_t seed = 0;
};

Instance gen_random_polytree(const RandomPolytreeParams &params);

// Random DAG with n nodes (not necessarily a polytree), each forward pair
// joined with probability p. Used by the classification checks.
CausalGraph random_dag(std::size_t n, double p, std::mt19937_64 &rng);

Instance fixture_valve();

struct WorkedExample {
    MaximalSequence sigma_u;
    MaximalSequence sigma_w;
    Value initial_u;
    Value initial_w;
    // Extended operators of v over parents (u, w); base indexes into
    // `instance`.
    std::vector<ExtendedOperator> ops;
    std::size_t n = 5;
    Value initial_v;
    Color goal_color = Color::white;
    // Five-variable instance in which u, w and v play these roles.
    Instance instance;
    VarId u, w, v;

    MaxSequenceInput input() const;
};

WorkedExample fixture_worked_example();

Instance fixture_prop3();

} // namespace causal_strips

#endif
