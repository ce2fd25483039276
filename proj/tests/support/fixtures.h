#ifndef TESTS_SUPPORT_FIXTURES_H
#define TESTS_SUPPORT_FIXTURES_H

#include "causal_strips/causal_graph.h"
#include "causal_strips/model.h"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace test_support {

using namespace causal_strips;

// x -> y; both start at 0, goal y = 1. Shortest plan: set x, set y.
Instance chain_instance();

Operator op(const std::string &name, std::size_t var, int pre,
            std::vector<std::pair<std::size_t, int>> prv = {});

Instance make_instance(std::size_t n, std::vector<Operator> ops,
                       std::vector<int> init, std::vector<int> goal);

// Random operators over a fixed causal graph: every edge is mentioned by
// some operator, so build_causal_graph returns `g` again.
Instance random_instance_on_graph(const CausalGraph &g, double density,
                                  std::mt19937_64 &rng);

// Random DAG with at most one directed path between any pair.
CausalGraph random_dpsc_graph(std::size_t n, double p, std::mt19937_64 &rng);

// Explicit enumeration, independent of the library's dynamic programs.
std::size_t brute_directed_paths(const CausalGraph &g, VarId from, VarId to);
std::size_t brute_undirected_paths(const CausalGraph &g, VarId from, VarId to);
bool brute_has_cycle(const CausalGraph &g);

class TempDir {
    std::filesystem::path root;
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;

    std::filesystem::path file(const std::string &name) const {
        return root / name;
    }
    std::filesystem::path write(const std::string &name,
                                const std::string &text) const;
};

} // namespace test_support

#endif
