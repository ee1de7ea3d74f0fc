#pragma once

#include <random>

#include "npsim/machines.hpp"

namespace npsim::testing {

// Random 3-CNF-like formula over 1..max_vars with 1..max_clauses clauses.
inline ProblemInstance random_sat(std::mt19937& rng, int max_vars, int max_clauses) {
    std::uniform_int_distribution<int> nv(1, max_vars), nc(1, max_clauses), width(1, 3), coin(0, 1);
    ProblemInstance inst;
    inst.kind = Problem::sat;
    int k = nv(rng);
    std::uniform_int_distribution<int> var(1, k);
    int m = nc(rng);
    for (int c = 0; c < m; ++c) {
        std::vector<int> clause;
        int w = width(rng);
        for (int i = 0; i < w; ++i) clause.push_back(coin(rng) ? var(rng) : -var(rng));
        inst.clauses.push_back(clause);
    }
    for (auto& c : inst.clauses)
        for (int l : c) inst.var_count = std::max(inst.var_count, std::abs(l));
    inst.trailing_delim = coin(rng) == 1;
    return inst;
}

// Random instance with up to `max_elems` elements in [0, max_value]; the
// target is a random subset sum half of the time.
inline ProblemInstance random_subset_sum(std::mt19937& rng, int max_elems, int max_value) {
    std::uniform_int_distribution<int> ne(0, max_elems), val(0, max_value), coin(0, 1);
    ProblemInstance inst;
    inst.kind = Problem::subset_sum;
    int k = ne(rng);
    for (int i = 0; i < k; ++i) inst.elements.push_back(static_cast<std::uint64_t>(val(rng)));
    if (coin(rng)) {
        std::uint64_t s = 0;
        for (auto e : inst.elements)
            if (coin(rng)) s += e;
        inst.target = s;
    } else {
        std::uniform_int_distribution<int> t(0, max_value * 2);
        inst.target = static_cast<std::uint64_t>(t(rng));
    }
    inst.trailing_delim = coin(rng) == 1;
    return inst;
}

}  // namespace npsim::testing
